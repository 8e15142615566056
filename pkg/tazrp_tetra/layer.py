"""Layer-to-layer transfer matrices of the m x n lattice.

Geometry: vertex (r, c) sits on the r-th horizontal line from the bottom and
the c-th vertical line from the right. Horizontal lines carry labels from
left to right, vertical lines from bottom to top. Boundary arrays follow the
usual reading order: ``a``/``i`` are listed from the top row down, ``b``/``j``
from the leftmost column to the right. The Fock space of vertex (r, c) is
tensor factor number ``vertex_order(m, n).index((r, c))``.
"""
from functools import lru_cache
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple
import logging
import time

from .errors import UnboundedSum
from .fock import FockOp, State, Vector, add_into, box_states, states_up_to
from .models import Failure, FockSpace, LayerBoundary, QMode, Report, Suite
from .qscalar import (
    LaurentScalar, Monomial, ONE, QPoly, QRat, chi, chi_prime,
    formal_pochhammer, mono_pow, monomial, q_factorial, q_power,
)
from .threed_r import CoeffFn, r_coeff, vertex_coefficient

logger = logging.getLogger(__name__)

Vertex = Tuple[int, int]
# (a, b, i, j) labels of a vertex: right out, top out, left in, bottom in
Labels = Tuple[int, int, int, int]


@lru_cache(maxsize=None)
def vertex_order(m: int, n: int) -> Tuple[Vertex, ...]:
    """Tensor factor order (1,1), (2,1), (1,2), (3,1), (2,2), (1,3), ..."""
    vertices = [(r, c) for r in range(1, m + 1) for c in range(1, n + 1)]
    return tuple(sorted(vertices, key=lambda v: (v[0] + v[1], v[1])))


@lru_cache(maxsize=None)
def _positions(m: int, n: int) -> Dict[Vertex, int]:
    return {v: p for p, v in enumerate(vertex_order(m, n))}


def _row_label(array: Sequence[int], m: int, r: int) -> int:
    return array[m - r]


def _column_label(array: Sequence[int], n: int, c: int) -> int:
    return array[n - c]


def _label_configurations(
    boundary: LayerBoundary,
    deltas: Optional[Dict[Vertex, int]] = None,
) -> List[Dict[Vertex, Labels]]:
    """All internal edge labellings of a fully fixed boundary. With
    `deltas` (out mode minus in mode per vertex) the top label of every
    vertex is pinned to bottom - delta."""
    m, n = boundary.m, boundary.n
    walk = [(r, c) for r in range(1, m + 1) for c in range(n, 0, -1)]
    found: List[Dict[Vertex, Labels]] = []

    def visit(step: int, labels: Dict[Vertex, Labels]) -> None:
        if step == len(walk):
            found.append(dict(labels))
            return
        r, c = walk[step]
        left = (
            _row_label(boundary.i, m, r) if c == n else labels[(r, c + 1)][0]
        )
        bottom = (
            _column_label(boundary.j, n, c) if r == 1
            else labels[(r - 1, c)][1]
        )
        if deltas is not None:
            tops = [bottom - deltas[(r, c)]]
            if r == m and tops[0] != _column_label(boundary.b, n, c):
                return
        elif r == m:
            tops = [_column_label(boundary.b, n, c)]
        else:
            tops = range(left + bottom + 1)
        for top in tops:
            right = left + bottom - top
            if right < 0 or top < 0:
                continue
            if c == 1 and right != _row_label(boundary.a, m, r):
                continue
            labels[(r, c)] = (right, top, left, bottom)
            visit(step + 1, labels)
            del labels[(r, c)]

    if boundary.conserves:
        visit(0, {})
    return found


def _require_fixed(boundary: LayerBoundary) -> None:
    if not boundary.is_fixed:
        raise ValueError('T needs all four sides of the boundary fixed')


def t_apply(
    boundary: LayerBoundary,
    state: State,
    spectral: Monomial,
    space: FockSpace,
    coeff: CoeffFn = r_coeff,
) -> Vector:
    """Exact action of T(z)^{a,b}_{i,j} on a basis state of F^{mn}."""
    _require_fixed(boundary)
    order = vertex_order(boundary.m, boundary.n)
    if len(state) != len(order):
        raise ValueError(f'State {state} is not on {len(order)} factors')
    result: Vector = {}
    for labels in _label_configurations(boundary):
        value = LaurentScalar.constant(1)
        out = []
        power = 0
        for vertex, k in zip(order, state):
            a, b, i, j = labels[vertex]
            hit = vertex_coefficient(a, b, i, j, k, space.q_mode, coeff)
            if hit is None:
                break
            out.append(hit[0])
            value = value * hit[1]
            power += j - b
        else:
            add_into(
                result, tuple(out),
                value.times_monomial(mono_pow(spectral, power)),
            )
    return result


def t_element(
    boundary: LayerBoundary,
    out_state: State,
    in_state: State,
    spectral: Monomial,
    space: FockSpace,
    coeff: CoeffFn = r_coeff,
) -> LaurentScalar:
    return t_apply(boundary, in_state, spectral, space, coeff).get(
        tuple(out_state), LaurentScalar()
    )


def t_fixed(
    boundary: LayerBoundary,
    spectral: Monomial,
    space: FockSpace,
    coeff: CoeffFn = r_coeff,
) -> FockOp:
    """T(z)^{a,b}_{i,j} on the truncated F^{mn}; every stored element is
    exact."""
    _require_fixed(boundary)
    order = vertex_order(boundary.m, boundary.n)
    shape = (space.cutoff,) * len(order)
    configs = _label_configurations(boundary)
    raise_bound = tuple(
        max([0] + [cfg[v][3] - cfg[v][1] for cfg in configs]) for v in order
    )
    columns = {}
    for state in box_states(shape):
        column = {
            out: value
            for out, value in t_apply(
                boundary, state, spectral, space, coeff
            ).items()
            if max(out, default=0) <= space.cutoff
        }
        if column:
            columns[state] = column
    drop = max(0, sum(boundary.b) - sum(boundary.j))
    return FockOp(shape, columns, space.q_mode, raise_bound, drop, 0)


def _chi_weight(labels: Sequence[int], prime: bool, space: FockSpace) -> QRat:
    if space.is_zero_mode:
        return ONE
    value = ONE
    for m in labels:
        value = value * (chi_prime(m) if prime else chi(m))
    return value


def bbT_element(
    m: int,
    n: int,
    b: Sequence[int],
    i: Sequence[int],
    in_state: State,
    out_state: State,
    spectral: Monomial,
    space: FockSpace,
    exploration_bound: int = 64,
    coeff: CoeffFn = r_coeff,
) -> LaurentScalar:
    """<out| TT(z)^b_i |in>.

    Every vertex changes its Fock mode by bottom-in minus top-out, so fixing
    the in and out states pins all labels of the grid, including the summed
    boundaries a and j. The sum over (a, j) therefore has at most one term.
    """
    if len(b) != n or len(i) != m:
        raise ValueError(f'b={b} needs {n} entries and i={i} needs {m}')
    order = vertex_order(m, n)
    pos = _positions(m, n)
    if len(in_state) != len(order) or len(out_state) != len(order):
        raise ValueError(f'States must live on {len(order)} factors')
    delta = {v: out_state[pos[v]] - in_state[pos[v]] for v in order}
    j = tuple(
        _column_label(b, n, c) + sum(delta[(r, c)] for r in range(1, m + 1))
        for c in range(n, 0, -1)
    )
    a = tuple(
        _row_label(i, m, r) + sum(delta[(r, c)] for c in range(1, n + 1))
        for r in range(m, 0, -1)
    )
    if min(a + j, default=0) < 0:
        return LaurentScalar()
    if max(a + j, default=0) > exploration_bound:
        raise UnboundedSum(
            f'Boundary labels a={a} j={j} exceed the exploration bound '
            f'{exploration_bound}'
        )
    boundary = LayerBoundary(m=m, n=n, a=a, b=tuple(b), i=tuple(i), j=j)
    value = LaurentScalar()
    for labels in _label_configurations(boundary, delta):
        term = LaurentScalar.constant(1)
        power = 0
        for vertex in order:
            la, lb, li, lj = labels[vertex]
            p = pos[vertex]
            hit = vertex_coefficient(la, lb, li, lj, in_state[p],
                                     space.q_mode, coeff)
            if hit is None or hit[0] != out_state[p]:
                break
            term = term * hit[1]
            power += lj - lb
        else:
            value = value + term.times_monomial(mono_pow(spectral, power))
    if not value:
        return value
    weight = (
        _chi_weight(b, True, space) * _chi_weight(i, False, space)
        * _chi_weight(a, True, space) * _chi_weight(j, False, space)
    )
    return value * weight


def bbT_apply(
    m: int,
    n: int,
    b: Sequence[int],
    i: Sequence[int],
    state: State,
    spectral: Monomial,
    space: FockSpace,
    max_total: int,
    exploration_bound: int = 64,
    coeff: CoeffFn = r_coeff,
) -> Vector:
    """TT(z)^b_i |state>, restricted to out-states of total mode <=
    max_total."""
    result: Vector = {}
    for out in states_up_to(m * n, max_total):
        value = bbT_element(m, n, b, i, state, out, spectral, space,
                            exploration_bound, coeff)
        if value:
            result[out] = value
    return result


def _splits(total: Sequence[int]) -> Iterator[Tuple[Tuple[int, ...],
                                                    Tuple[int, ...]]]:
    for first in product(*(range(t + 1) for t in total)):
        yield first, tuple(t - f for t, f in zip(total, first))


def check_bilinear(
    m: int,
    n: int,
    s: Sequence[int],
    r: Sequence[int],
    window: int,
    space: FockSpace,
    exploration_bound: int = 64,
    coeff: CoeffFn = r_coeff,
) -> Report:
    """sum_{b+b'=s, i+i'=r} x^{|b|+|i|} y^{|b'|+|i'|} TT(x)^b_i TT(y)^b'_i'
    = (x <-> y), element-wise on states of total mode <= window."""
    started = time.perf_counter()
    if len(s) != n or len(r) != m:
        raise ValueError(f's={s} needs {n} entries and r={r} needs {m}')
    x, y = monomial(x=1), monomial(y=1)
    mid_total = window + sum(s)
    cache: Dict[tuple, Vector] = {}

    def graded(b, i, state, z, total) -> Vector:
        key = (b, i, state, z, total)
        if key not in cache:
            cache[key] = bbT_apply(m, n, b, i, state, z, space, total,
                                   exploration_bound, coeff)
        return cache[key]

    failures: List[Failure] = []
    checked = 0
    states = states_up_to(m * n, window)
    for in_state in states:
        lhs: Vector = {}
        for (b, b2), (i, i2) in product(_splits(s), _splits(r)):
            weight = monomial(x=sum(b) + sum(i), y=sum(b2) + sum(i2))
            for mid, inner in graded(b2, i2, in_state, y, mid_total).items():
                for out, outer in graded(b, i, mid, x, window).items():
                    add_into(lhs, out, (outer * inner).times_monomial(weight))
        for out in states:
            checked += 1
            left = lhs.get(out, LaurentScalar())
            right = left.swap('x', 'y')
            if left != right:
                failures.append(Failure.of(in_state + out, right, left))
    return Report.build(
        Suite.bilinear.value,
        {'m': m, 'n': n, 's': s, 'r': r, 'window': window,
         'q_mode': QMode(space.q_mode).value},
        failures, checked, started,
    )


def _green_apply(
    vector: Dict[int, LaurentScalar],
    uppers: Sequence[Tuple[int, int]],
    lowers: Sequence[Tuple[int, int]],
    spectral: Monomial,
    coeff: CoeffFn,
) -> Dict[int, LaurentScalar]:
    """Apply S_hat^{u}_{l}(z) for each (u, l) pair in turn, first pair
    first."""
    for (a, b), (i, j) in zip(uppers, lowers):
        result: Dict[int, LaurentScalar] = {}
        if a + b != i + j:
            return {}
        for k, value in vector.items():
            # S_hat^{ab}_{ij}(z)|k> = z^(j-b) R^{bac}_{jik} |c>, c = i+k-a
            c = i + k - a
            if c < 0:
                continue
            poly = coeff(b, a, c, j, i, k)
            if poly:
                add_into(
                    result, (c,),
                    value * LaurentScalar.from_monomial(
                        mono_pow(spectral, j - b), poly
                    ),
                )
        vector = {state[0]: v for state, v in result.items()}
    return vector


def intertwining_sides(
    boundaries: Dict[str, Tuple[int, ...]],
    green: int,
    blue: State,
    m: int,
    n: int,
    space: FockSpace,
    coeff: CoeffFn = r_coeff,
) -> Tuple[Vector, Vector]:
    """Both sides of the intertwining relation between the products of
    S_hat along a green line and two layer transfer matrices, applied to
    |green> (x) |blue>. Keys of the result are (green_out,) + blue_out."""
    a, a1 = boundaries['a'], boundaries["a'"]
    b, b1 = boundaries['b'], boundaries["b'"]
    i, i1 = boundaries['i'], boundaries["i'"]
    j, j1 = boundaries['j'], boundaries["j'"]
    x_y = monomial(x=1, y=-1)
    xp_yp = monomial(xp=1, yp=-1)
    x_xp = monomial(x=1, xp=-1)
    y_yp = monomial(y=1, yp=-1)

    def combine(green_vec, blue_vec, target: Vector) -> None:
        for g, gv in green_vec.items():
            for state, bv in blue_vec.items():
                add_into(target, (g,) + state, gv * bv)

    def through(bd: LayerBoundary, z: Monomial, vector: Vector) -> Vector:
        result: Vector = {}
        for state, value in vector.items():
            for out, v in t_apply(bd, state, z, space, coeff).items():
                add_into(result, out, v * value)
        return result

    start_green = {green: LaurentScalar.constant(1)}
    start_blue: Vector = {tuple(blue): LaurentScalar.constant(1)}

    lhs: Vector = {}
    a_total = tuple(p + q for p, q in zip(a, a1))
    b_total = tuple(p + q for p, q in zip(b, b1))
    for a2, a3 in _splits(a_total):
        for b2, b3 in _splits(b_total):
            g = _green_apply(
                start_green, list(zip(b, b1)), list(zip(b2, b3)), y_yp, coeff
            )
            g = _green_apply(g, list(zip(a, a1)), list(zip(a2, a3)), x_xp,
                             coeff)
            if not g:
                continue
            inner = LayerBoundary(m=m, n=n, a=a3, b=b3, i=i1, j=j1)
            outer = LayerBoundary(m=m, n=n, a=a2, b=b2, i=i, j=j)
            if not (inner.conserves and outer.conserves):
                continue
            w = through(outer, x_y, through(inner, xp_yp, start_blue))
            combine(g, w, lhs)

    rhs: Vector = {}
    i_total = tuple(p + q for p, q in zip(i, i1))
    j_total = tuple(p + q for p, q in zip(j, j1))
    for i2, i3 in _splits(i_total):
        for j2, j3 in _splits(j_total):
            g = _green_apply(
                start_green, list(zip(i2, i3)), list(zip(i, i1)), x_xp, coeff
            )
            g = _green_apply(g, list(zip(j2, j3)), list(zip(j, j1)), y_yp,
                             coeff)
            if not g:
                continue
            inner = LayerBoundary(m=m, n=n, a=a, b=b, i=i2, j=j2)
            outer = LayerBoundary(m=m, n=n, a=a1, b=b1, i=i3, j=j3)
            if not (inner.conserves and outer.conserves):
                continue
            w = through(outer, xp_yp, through(inner, x_y, start_blue))
            combine(g, w, rhs)
    return lhs, rhs


def _arrays(length: int, max_label: int) -> List[Tuple[int, ...]]:
    return list(product(range(max_label + 1), repeat=length))


def check_intertwining(
    m: int,
    n: int,
    max_label: int,
    green_max: int = 1,
    blue_window: int = 1,
    space: Optional[FockSpace] = None,
    boundaries: Optional[Sequence[Dict[str, Tuple[int, ...]]]] = None,
    coeff: CoeffFn = r_coeff,
) -> Report:
    """Verify the intertwining relation for every boundary with entries <=
    max_label (or the given `boundaries`), green in-modes <= green_max and
    blue in-states of total mode <= blue_window."""
    started = time.perf_counter()
    space = space or FockSpace(cutoff=max_label, q_mode=QMode.generic)
    if boundaries is None:
        rows, cols = _arrays(m, max_label), _arrays(n, max_label)
        boundaries = []
        for a, a1, i, i1 in product(rows, repeat=4):
            for b, b1, j, j1 in product(cols, repeat=4):
                if (sum(a) + sum(a1) + sum(b) + sum(b1)
                        != sum(i) + sum(i1) + sum(j) + sum(j1)):
                    continue
                boundaries.append({'a': a, "a'": a1, 'b': b, "b'": b1,
                                   'i': i, "i'": i1, 'j': j, "j'": j1})
    logger.info(f'Checking intertwining on {len(boundaries)} boundaries')
    failures: List[Failure] = []
    checked = 0
    for bd in boundaries:
        for green in range(green_max + 1):
            for blue in states_up_to(m * n, blue_window):
                lhs, rhs = intertwining_sides(bd, green, blue, m, n, space,
                                              coeff)
                for out in sorted(set(lhs) | set(rhs)):
                    checked += 1
                    left = lhs.get(out, LaurentScalar())
                    right = rhs.get(out, LaurentScalar())
                    if left != right:
                        location = [
                            f'{key}={",".join(map(str, bd[key]))}'
                            for key in sorted(bd)
                        ] + [green] + list(blue) + list(out)
                        failures.append(Failure.of(location, right, left))
    return Report.build(
        Suite.intertwining.value,
        {'m': m, 'n': n, 'max_label': max_label, 'green_max': green_max,
         'blue_window': blue_window},
        failures, checked, started,
    )


@lru_cache(maxsize=None)
def f_rst(r: int, s: int, t: int) -> QRat:
    """sum q^(j1 j2') / ((q)_j1 (q)_j2 (q)_j1' (q)_j2') over j1+j2=r,
    j1'+j2'=s, j1+j1'=t."""
    total = QRat(0)
    for j1 in range(max(0, t - s), min(r, t) + 1):
        j2, j1p = r - j1, t - j1
        j2p = s - j1p
        den = q_factorial(j1) * q_factorial(j2) * q_factorial(j1p) \
            * q_factorial(j2p)
        total = total + QRat(QPoly.monomial(j1 * j2p), den)
    return total


def commuting_pair_coefficient(
    r: int, s: int, t: int, space: Optional[FockSpace] = None
) -> QRat:
    """Coefficient of x^r y^s in <r+s-t, t| TT(x)^{0,0}_0 TT(y)^{0,0}_0
    |0, 0> on the 1 x 2 layer."""
    space = space or FockSpace(cutoff=r + s, q_mode=QMode.generic)
    x, y = monomial(x=1), monomial(y=1)
    out = (r + s - t, t)
    if min(out) < 0:
        return QRat(0)
    total = LaurentScalar()
    for mid, inner in bbT_apply(1, 2, (0, 0), (0,), (0, 0), y, space,
                                s).items():
        if sum(mid) != s:
            continue
        total = total + inner * bbT_element(1, 2, (0, 0), (0,), mid, out,
                                            x, space)
    return total.coefficient(monomial(x=r, y=s))


def check_f_symmetry(max_index: int, pair_index: int = 2) -> Report:
    """Symmetries of f_rst, its generating identity, and f_rst as the
    coefficient of the commuting 1 x 2 layer pair for r, s <= pair_index."""
    started = time.perf_counter()
    failures: List[Failure] = []
    checked = 0
    idx = range(max_index + 1)
    pairs = range(min(max_index, pair_index) + 1)
    for r, s, t in product(pairs, repeat=3):
        if t > r + s:
            continue
        expected = chi_prime(r) * chi_prime(s) * f_rst(r, s, t)
        actual = commuting_pair_coefficient(r, s, t)
        checked += 1
        if actual != expected:
            failures.append(Failure.of(('pair', r, s, t), expected, actual))
    for r, s, t in product(idx, repeat=3):
        checked += 1
        if f_rst(r, s, t) != f_rst(s, r, t):
            failures.append(
                Failure.of(('f', r, s, t), f_rst(r, s, t), f_rst(s, r, t))
            )
        if r >= 1 and s >= 1:
            lhs = (1 - q_power(s)) * f_rst(r - 1, s, t)
            rhs = (1 - q_power(r)) * f_rst(s - 1, r, t)
            checked += 1
            if lhs != rhs:
                failures.append(Failure.of(('(1-q^s)f', r, s, t), rhs, lhs))
            lhs = q_power(s) * f_rst(r - 1, s, t) + f_rst(r, s - 1, t)
            rhs = q_power(r) * f_rst(s - 1, r, t) + f_rst(s, r - 1, t)
            checked += 1
            if lhs != rhs:
                failures.append(Failure.of(('q^s f + f', r, s, t), rhs, lhs))
    for r, s in product(idx, repeat=2):
        lhs = formal_pochhammer('z', -1, 0, r) * formal_pochhammer(
            'z', -1, r, s)
        rhs = formal_pochhammer('z', -1, 0, s) * formal_pochhammer(
            'z', -1, s, r)
        checked += 1
        if lhs != rhs:
            failures.append(Failure.of(('generating', r, s), rhs, lhs))
    return Report.build(
        Suite.f_symmetry.value, {'max': max_index}, failures, checked,
        started,
    )


def check_q0_layer(
    m: int, n: int, max_label: int, window: int, max_r: int = 2
) -> Report:
    """q=0 statements: the generic T at q=0 equals the T built from q=0
    vertices, TT^{0..0,s}_{0..0,r} vanishes for r < s, and the bilinear
    relation of the TT^{0..0,r}_{0..0,r} family."""
    started = time.perf_counter()
    generic = FockSpace(cutoff=window, q_mode=QMode.generic)
    zero = FockSpace(cutoff=window, q_mode=QMode.zero)
    failures: List[Failure] = []
    checked = 0
    z = monomial(z=1)
    rows, cols = _arrays(m, max_label), _arrays(n, max_label)
    for a, i in product(rows, repeat=2):
        for b, j in product(cols, repeat=2):
            bd = LayerBoundary(m=m, n=n, a=a, b=b, i=i, j=j)
            if not bd.conserves:
                continue
            for state in states_up_to(m * n, window):
                full = t_apply(bd, state, z, generic)
                limit = {
                    out: v.at_q_zero() for out, v in full.items()
                }
                limit = {out: v for out, v in limit.items() if v}
                expected = t_apply(bd, state, z, zero)
                for out in sorted(set(limit) | set(expected)):
                    checked += 1
                    left = limit.get(out, LaurentScalar())
                    right = expected.get(out, LaurentScalar())
                    if left != right:
                        failures.append(Failure.of(
                            ('T', ','.join(map(str, a + b + i + j)))
                            + state + out, right, left))
    if m == n:
        failures += _square_zero_failures(n, window, max_r)
        checked += _square_zero_checked(n, window, max_r)
    return Report.build(
        Suite.q0_limit.value,
        {'m': m, 'n': n, 'max_label': max_label, 'window': window,
         'max_r': max_r},
        failures, checked, started,
    )


def _corner(n: int, value: int) -> Tuple[int, ...]:
    return (0,) * (n - 1) + (value,)


def _square_zero_checked(n: int, window: int, max_r: int) -> int:
    states = len(states_up_to(n * n, window))
    pairs = sum(1 for r in range(max_r + 1) for s in range(max_r + 1)
                if r < s)
    return states * (pairs + max_r + 1)


def _square_zero_failures(n: int, window: int, max_r: int) -> List[Failure]:
    """On the n x n layer at q=0: TT^{0..0,s}_{0..0,r} vanishes for r < s,
    and sum_{r1+r2=r} x^(2 r1) y^(2 r2) TT(x)^{0..0,r1}_{0..0,r1}
    TT(y)^{0..0,r2}_{0..0,r2} is symmetric in x and y."""
    zero = FockSpace(cutoff=window, q_mode=QMode.zero)
    z, x, y = monomial(z=1), monomial(x=1), monomial(y=1)
    states = states_up_to(n * n, window)
    failures: List[Failure] = []
    for r, s in product(range(max_r + 1), repeat=2):
        if r >= s:
            continue
        for state in states:
            vec = bbT_apply(n, n, _corner(n, s), _corner(n, r), state, z,
                            zero, window)
            if vec:
                out = min(vec)
                failures.append(Failure.of(('vanish', r, s) + state + out,
                                           0, vec[out]))
    for r in range(max_r + 1):
        for state in states:
            lhs: Vector = {}
            for r1 in range(r + 1):
                r2 = r - r1
                inner = bbT_apply(n, n, _corner(n, r2), _corner(n, r2),
                                  state, y, zero, window + r1)
                for mid, v in inner.items():
                    outer = bbT_apply(n, n, _corner(n, r1), _corner(n, r1),
                                      mid, x, zero, window)
                    for out, w in outer.items():
                        add_into(lhs, out, (w * v).times_monomial(
                            monomial(x=2 * r1, y=2 * r2)))
            for out, left in sorted(lhs.items()):
                right = left.swap('x', 'y')
                if left != right:
                    failures.append(
                        Failure.of(('bilinear', r) + state + out, right, left)
                    )
    return failures
