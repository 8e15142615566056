"""The n-species totally asymmetric zero range process and its matrix
product steady state.

Local states are tuples ``alpha = (alpha_1, ..., alpha_n)`` of particle
counts per species. ``X_alpha(z)`` is the corner transfer matrix of q=0
vertices on the staircase of vertices (r, c) with r + c <= n, stored as a
`FockOp` on F^{n(n-1)/2} in the usual vertex order.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union
import logging
import time

from sympy import Matrix, QQ
from sympy.polys.matrices import DomainMatrix

from .errors import KernelNotOneDimensional, TazrpError, Unstable
from .fock import FockOp, State, Vector, add_into, box_states, states_up_to
from .layer import Vertex, bbT_apply, vertex_order
from .models import (
    Configuration, Failure, FockSpace, LocalState, QMode, Report, Sector,
    Settings, Suite, render_configuration,
)
from .qscalar import LaurentScalar, Monomial, mono_pow, monomial

logger = logging.getLogger(__name__)

Local = Tuple[int, ...]
Pair = Tuple[Local, Local]


def _counts(state: Union[LocalState, Sequence[int]]) -> Local:
    if isinstance(state, LocalState):
        return state.counts
    return tuple(state)


def _tails(alpha: Local) -> Local:
    """(alpha_{>=1}, ..., alpha_{>=n})."""
    return tuple(sum(alpha[k:]) for k in range(len(alpha)))


def transitions(
    gamma: Union[LocalState, Sequence[int]],
    delta: Union[LocalState, Sequence[int]],
) -> List[Pair]:
    """All (alpha, beta) with (gamma, delta) > (alpha, beta): move every
    particle of species < l and d >= 1 particles of species l from delta
    to gamma."""
    gamma, delta = _counts(gamma), _counts(delta)
    if len(gamma) != len(delta):
        raise ValueError(f'Local states {gamma} and {delta} differ in n')
    found: Set[Pair] = set()
    for l, count in enumerate(delta):
        for d in range(1, count + 1):
            alpha = tuple(
                gamma[k] + delta[k] if k < l else
                gamma[k] + d if k == l else gamma[k]
                for k in range(len(gamma))
            )
            beta = tuple(
                0 if k < l else delta[k] - d if k == l else delta[k]
                for k in range(len(gamma))
            )
            found.add((alpha, beta))
    return sorted(found)


def predecessors(
    alpha: Union[LocalState, Sequence[int]],
    beta: Union[LocalState, Sequence[int]],
) -> List[Pair]:
    """All (gamma, delta) with (gamma, delta) > (alpha, beta)."""
    alpha, beta = _counts(alpha), _counts(beta)
    if len(alpha) != len(beta):
        raise ValueError(f'Local states {alpha} and {beta} differ in n')
    found: Set[Pair] = set()
    for l in range(len(alpha)):
        if any(beta[:l]):
            break
        splits = product(*(range(alpha[k] + 1) for k in range(l)))
        for head in splits:
            for d in range(1, alpha[l] + 1):
                gamma = head + (alpha[l] - d,) + alpha[l + 1:]
                delta = (
                    tuple(alpha[k] - head[k] for k in range(l))
                    + (beta[l] + d,) + beta[l + 1:]
                )
                found.add((gamma, delta))
    return sorted(found)


def is_greater(p: Pair, q: Pair) -> bool:
    """(gamma, delta) > (alpha, beta)."""
    return tuple(map(tuple, q)) in transitions(*p)


def local_h(gamma, delta, alpha, beta) -> int:
    """h^{alpha,beta}_{gamma,delta} of the local Markov matrix."""
    gamma, delta = _counts(gamma), _counts(delta)
    alpha, beta = _counts(alpha), _counts(beta)
    if (gamma, delta) == (alpha, beta):
        return -sum(beta)
    return 1 if (alpha, beta) in transitions(gamma, delta) else 0


def _pairs_up_to(n: int, size: int) -> Iterable[Pair]:
    for total in range(size + 1):
        for flat in states_up_to(2 * n, total):
            if sum(flat) == total:
                yield flat[:n], flat[n:]


def check_total_order(max_size: int, n: int) -> Report:
    """For every (gamma, delta) the pairs below it are totally ordered."""
    started = time.perf_counter()
    failures: List[Failure] = []
    checked = 0
    for top in _pairs_up_to(n, max_size):
        below = [top] + transitions(*top)
        for p, q in combinations(below, 2):
            checked += 1
            if not (is_greater(p, q) or is_greater(q, p)):
                failures.append(Failure.of(
                    [_pair_str(top), _pair_str(p), _pair_str(q)],
                    'comparable', 'incomparable',
                ))
    return Report.build(
        Suite.markov.value, {'max_size': max_size, 'n': n}, failures,
        checked, started,
    )


def _pair_str(pair: Pair) -> str:
    return render_configuration(pair)


def markov_matrix(sector: Sector) -> Tuple[List[Configuration], Matrix]:
    """H_TAZRP on the sector basis; column sigma holds the rates out of
    sigma."""
    configs = sector.configurations()
    index = {config: k for k, config in enumerate(configs)}
    size = len(configs)
    rows = [[0] * size for _ in range(size)]
    L = sector.L
    for col, config in enumerate(configs):
        for site in range(L):
            nxt = (site + 1) % L
            if nxt == site:
                continue
            gamma, delta = config[site], config[nxt]
            rows[col][col] -= sum(delta)
            for alpha, beta in transitions(gamma, delta):
                target = list(config)
                target[site], target[nxt] = alpha, beta
                rows[index[tuple(target)]][col] += 1
    return configs, Matrix(rows)


def check_markov_property(sector: Sector) -> Report:
    """Every column of H_TAZRP sums to zero."""
    started = time.perf_counter()
    configs, matrix = markov_matrix(sector)
    failures = []
    for col, config in enumerate(configs):
        total = sum(matrix[:, col])
        if total != 0:
            failures.append(
                Failure.of([render_configuration(config)], 0, int(total))
            )
    return Report.build(
        Suite.markov.value,
        {'n': sector.n, 'L': sector.L, 'm': sector.multiplicity},
        failures, len(configs), started,
    )


def steady_state_oracle(sector: Sector) -> Dict[Configuration, int]:
    """Kernel of H_TAZRP by exact elimination, normalized to the product of
    binomials."""
    if not sector.is_basic:
        raise ValueError(f'Sector {sector.multiplicity} is not basic')
    configs, matrix = markov_matrix(sector)
    if len(configs) == 1:
        return {configs[0]: sector.normalization}
    reduced, pivots = (
        DomainMatrix.from_Matrix(matrix).convert_to(QQ).rref()
    )
    reduced = reduced.to_Matrix()
    free = [k for k in range(len(configs)) if k not in pivots]
    if len(free) != 1:
        raise KernelNotOneDimensional(
            f'Kernel of H for sector {sector.multiplicity} on L={sector.L} '
            f'has dimension {len(free)}'
        )
    vector = [Fraction(0)] * len(configs)
    vector[free[0]] = Fraction(1)
    for row, pivot in enumerate(pivots):
        entry = reduced[row, free[0]]
        vector[pivot] = -Fraction(int(entry.p), int(entry.q))
    scale = Fraction(sector.normalization) / sum(vector)
    probabilities = {}
    for config, value in zip(configs, vector):
        value = value * scale
        if value.denominator != 1 or value <= 0:
            raise TazrpError(
                f'Steady state of {render_configuration(config)} is {value}'
            )
        probabilities[config] = int(value)
    return probabilities


@lru_cache(maxsize=None)
def staircase_order(n: int) -> Tuple[Vertex, ...]:
    vertices = [(r, c) for r in range(1, n) for c in range(1, n - r + 1)]
    return tuple(sorted(vertices, key=lambda v: (v[0] + v[1], v[1])))


@lru_cache(maxsize=None)
def _staircase_walk(n: int) -> Tuple[Tuple[Vertex, int], ...]:
    positions = {v: p for p, v in enumerate(staircase_order(n))}
    return tuple(
        ((r, c), positions[(r, c)])
        for r in range(1, n) for c in range(n - r, 0, -1)
    )


def _x_column(
    alpha: Local,
    in_state: State,
    caps: Sequence[int],
    spectral: Monomial,
    hatted: bool,
) -> Vector:
    """X_alpha(z)|in>, restricted to out-states bounded by `caps` per
    factor. Every element returned is exact."""
    n = len(alpha)
    tails = _tails(alpha)
    walk = _staircase_walk(n)
    result: Vector = {}
    out = list(in_state)
    tops: Dict[Vertex, int] = {}

    def visit(step: int, left: int, weight: int) -> None:
        if step == len(walk):
            exponent = weight + alpha[-1]
            coefficient = exponent if hatted else 1
            if coefficient:
                add_into(result, tuple(out), LaurentScalar.from_monomial(
                    mono_pow(spectral, exponent), coefficient))
            return
        (r, c), p = walk[step]
        mode = in_state[p]
        if c == n - r:
            left = tails[r - 1]
        if r + c == n:
            candidates: Iterable[int] = (tails[n - c],)
        else:
            candidates = range(min(left, mode) + 1)
        for top in candidates:
            if top > left or top > mode:
                continue
            if r == 1:
                bottoms: Iterable[int] = range(caps[p] - mode + top + 1)
            else:
                bottoms = (tops[(r - 1, c)],)
            for bottom in bottoms:
                right = left + bottom - top
                # k annihilates unless the mode left after (a-)^top is zero
                if right > bottom and mode != top:
                    continue
                new = mode - top + bottom
                if new > caps[p]:
                    continue
                out[p] = new
                tops[(r, c)] = top
                visit(step + 1, right, weight + (right if c == 1 else 0))
        out[p] = mode

    visit(0, 0, 0)
    return result


@dataclass(frozen=True)
class XOperator:
    alpha: Local
    spectral: Monomial
    body: FockOp
    hatted: bool = False

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def drop_bound(self) -> int:
        """Largest decrease of the total mode: sum_{k>=2} alpha_{>=k}."""
        return sum(_tails(self.alpha)[1:])


@lru_cache(maxsize=None)
def _x_operator(
    alpha: Local, cutoff: int, spectral: Monomial, hatted: bool
) -> XOperator:
    n = len(alpha)
    factors = n * (n - 1) // 2
    shape = (cutoff,) * factors
    columns = {}
    for state in box_states(shape):
        column = _x_column(alpha, state, shape, spectral, hatted)
        if column:
            columns[state] = column
    drop = sum(_tails(alpha)[1:])
    body = FockOp(shape, columns, QMode.zero, (None,) * factors, drop, 0)
    return XOperator(alpha, spectral, body, hatted)


def x_operator(
    alpha: Union[LocalState, Sequence[int]],
    cutoff: int,
    spectral: Monomial = (('z', 1),),
    hatted: bool = False,
) -> XOperator:
    """X_alpha(z) (or its hatted version, each summand weighted by
    a_1 + ... + a_n) on the truncated F^{n(n-1)/2}."""
    alpha = _counts(alpha)
    if not alpha or min(alpha) < 0:
        raise ValueError(f'Invalid local state {alpha}')
    return _x_operator(alpha, cutoff, tuple(spectral), hatted)


def x_element(
    alpha: Union[LocalState, Sequence[int]],
    out_state: State,
    in_state: State,
    spectral: Monomial = (('z', 1),),
    hatted: bool = False,
) -> LaurentScalar:
    """Exact <out| X_alpha(z) |in>."""
    alpha = _counts(alpha)
    return _x_column(
        alpha, tuple(in_state), tuple(out_state), tuple(spectral), hatted
    ).get(tuple(out_state), LaurentScalar())


def _x(alpha: Local, cutoff: int, spectral: Monomial,
       hatted: bool = False) -> FockOp:
    return x_operator(alpha, cutoff, spectral, hatted).body


def _trace(sigma: Configuration, cutoff: int) -> int:
    ops = [_x(tuple(site), cutoff, ()) for site in sigma]
    total = ops[0]
    for op in ops[1:]:
        total = total @ op
    value = total.full_trace().as_constant()
    return int(value.to_poly().constant_term)


def _check_sector(sector: Sector, sigma: Configuration) -> None:
    if not sector.is_basic:
        raise ValueError(f'Sector {sector.multiplicity} is not basic')
    if len(sigma) != sector.L or any(len(s) != sector.n for s in sigma):
        raise ValueError(
            f'{render_configuration(sigma)} is not a configuration on '
            f'L={sector.L} sites with n={sector.n}'
        )
    counts = tuple(sum(site[a] for site in sigma) for a in range(sector.n))
    if counts != tuple(sector.multiplicity):
        raise ValueError(
            f'{render_configuration(sigma)} is not in sector '
            f'{sector.multiplicity}'
        )


def mp_probability(
    sector: Sector, sigma: Configuration, cutoff: int
) -> int:
    """Tr(X_sigma_1 ... X_sigma_L) at z=1, accepted only when the cutoffs N
    and N+1 agree."""
    sigma = tuple(tuple(site) for site in sigma)
    _check_sector(sector, sigma)
    value = _trace(sigma, cutoff)
    check = _trace(sigma, cutoff + 1)
    if value != check:
        raise Unstable(
            f'Trace for {render_configuration(sigma)} changed from {value} '
            f'to {check} between cutoffs {cutoff} and {cutoff + 1}',
            cutoff,
        )
    return value


def steady_state_table(
    sector: Sector, cutoff: int
) -> Dict[Configuration, int]:
    """Matrix product traces of every configuration at a fixed cutoff."""
    if not sector.is_basic:
        raise ValueError(f'Sector {sector.multiplicity} is not basic')
    return {
        config: _trace(config, cutoff) for config in sector.configurations()
    }


def stable_cutoff(
    sector: Sector,
    start: Optional[int] = None,
    limit: Optional[int] = None,
) -> Tuple[int, Dict[Configuration, int]]:
    """Smallest cutoff N >= start whose table agrees with the table at N+1.

    The default start 2|m| bounds every mode a closed two-species path can
    reach, since the modes are pinned to at most m_2 wherever species 1
    sits and rise by at most m_2 in total."""
    settings = Settings()
    if start is None:
        start = settings.stability_start
    if start is None:
        start = 2 * sum(sector.multiplicity)
    limit = settings.stability_limit if limit is None else limit
    table = steady_state_table(sector, start)
    for cutoff in range(start, limit + 1):
        following = steady_state_table(sector, cutoff + 1)
        if following == table:
            logger.info(
                f'Sector {sector.multiplicity} on L={sector.L} is stable at '
                f'cutoff {cutoff}'
            )
            return cutoff, table
        table = following
    raise Unstable(
        f'Sector {sector.multiplicity} on L={sector.L} did not stabilize up '
        f'to cutoff {limit}',
        limit,
    )


def _compare_ops(
    lhs: FockOp, rhs: FockOp, prefix: Sequence, failures: List[Failure]
) -> int:
    checked = 0
    for in_state in sorted(set(lhs.columns) | set(rhs.columns)):
        outs = set(lhs.columns.get(in_state, {})) | set(
            rhs.columns.get(in_state, {}))
        for out in sorted(outs):
            if lhs.is_safe(out, in_state) and rhs.is_safe(out, in_state):
                checked += 1
    for out, in_state, left, right in lhs.differences(rhs):
        failures.append(
            Failure.of(list(prefix) + list(in_state) + list(out), right, left)
        )
    return checked


def _product(left: FockOp, right: FockOp) -> FockOp:
    return left @ right


def _sum(ops: Sequence[FockOp], shape: Tuple[int, ...]) -> FockOp:
    total = FockOp.zero(shape, QMode.zero)
    for op in ops:
        total = total + op
    return total


def check_hat_relation(
    alpha: Union[LocalState, Sequence[int]],
    beta: Union[LocalState, Sequence[int]],
    cutoff: int,
) -> Report:
    """X^_a(z) X_b(z) - X_a(z) X^_b(z) = sum_{g,d} h^{a,b}_{g,d} X_g(z) X_d(z)
    on the safe window, with formal z and at z=1."""
    started = time.perf_counter()
    alpha, beta = _counts(alpha), _counts(beta)
    n = len(alpha)
    shape = (cutoff,) * (n * (n - 1) // 2)
    z = monomial(z=1)
    lhs = _product(_x(alpha, cutoff, z, True), _x(beta, cutoff, z)) - \
        _product(_x(alpha, cutoff, z), _x(beta, cutoff, z, True))
    terms = [
        _product(_x(gamma, cutoff, z), _x(delta, cutoff, z))
        for gamma, delta in predecessors(alpha, beta)
    ]
    terms.append(
        _product(_x(alpha, cutoff, z), _x(beta, cutoff, z)).scale(
            LaurentScalar.constant(-sum(beta)))
    )
    rhs = _sum(terms, shape)
    failures: List[Failure] = []
    checked = _compare_ops(lhs, rhs, ['z'], failures)

    def at_one(op: FockOp) -> FockOp:
        return op.map_coefficients(lambda v: v.substitute('z', ()))

    checked += _compare_ops(at_one(lhs), at_one(rhs), ['z=1'], failures)
    return Report.build(
        Suite.hat_relation.value,
        {'alpha': alpha, 'beta': beta, 'cutoff': cutoff},
        failures, checked, started,
    )


def check_hat_derivative(
    alpha: Union[LocalState, Sequence[int]], cutoff: int
) -> Report:
    """X^_alpha(z) = z d/dz X_alpha(z) entrywise."""
    started = time.perf_counter()
    alpha = _counts(alpha)
    z = monomial(z=1)
    hatted = _x(alpha, cutoff, z, True)
    derived = _x(alpha, cutoff, z).map_coefficients(
        lambda v: v.euler_derivative('z'))
    failures: List[Failure] = []
    checked = _compare_ops(hatted, derived, [], failures)
    return Report.build(
        Suite.hat_relation.value, {'alpha': alpha, 'cutoff': cutoff},
        failures, checked, started,
    )


def check_bilinear_X(
    alpha: Union[LocalState, Sequence[int]],
    beta: Union[LocalState, Sequence[int]],
    cutoff: int,
) -> Report:
    """x^|beta| sum_{(g,d) >= (a,b)} X_g(x) X_d(y) = (x <-> y) on the safe
    window."""
    started = time.perf_counter()
    alpha, beta = _counts(alpha), _counts(beta)
    n = len(alpha)
    shape = (cutoff,) * (n * (n - 1) // 2)
    x, y = monomial(x=1), monomial(y=1)
    pairs = [(alpha, beta)] + predecessors(alpha, beta)
    lhs = _sum(
        [_product(_x(g, cutoff, x), _x(d, cutoff, y)) for g, d in pairs],
        shape,
    ).scale(LaurentScalar.from_monomial(monomial(x=sum(beta))))
    rhs = lhs.map_coefficients(lambda v: v.swap('x', 'y'))
    failures: List[Failure] = []
    checked = _compare_ops(lhs, rhs, [], failures)
    return Report.build(
        Suite.bilinear_x.value,
        {'alpha': alpha, 'beta': beta, 'cutoff': cutoff},
        failures, checked, started,
    )


def _embedding_element(
    n: int, r: int, in_state: State, out_state: State, spectral: Monomial
) -> LaurentScalar:
    """<out| z^-r sum_alpha X_alpha(z) (x) diagonal (x) (a+)^r ... (x) 1
    |in> on the n x n layer."""
    order = vertex_order(n, n)
    inner_in, inner_out = [], []
    tails = [0] * n
    for p, (row, col) in enumerate(order):
        before, after = in_state[p], out_state[p]
        level = row + col
        if level <= n:
            inner_in.append(before)
            inner_out.append(after)
        elif level == n + 1:
            # (a+)^{alpha_{>=row}} (a-)^r
            if before < r or after - before + r < 0:
                return LaurentScalar()
            tails[row - 1] = after - before + r
        elif level == n + 2:
            if after != before + r:
                return LaurentScalar()
        elif after != before:
            return LaurentScalar()
    alpha = tuple(
        tails[k] - (tails[k + 1] if k + 1 < n else 0) for k in range(n)
    )
    if min(alpha) < 0:
        return LaurentScalar()
    value = x_element(alpha, tuple(inner_out), tuple(inner_in), spectral)
    return value.times_monomial(mono_pow(spectral, -r))


def check_embedding(n: int, r: int, window: int) -> Report:
    """TT(z)^{0..0,r}_{0..0,r} at q=0 on the n x n layer against its
    expansion in X_alpha(z), on states of total mode <= window."""
    started = time.perf_counter()
    z = monomial(z=1)
    space = FockSpace(cutoff=window, q_mode=QMode.zero)
    corner_n = (0,) * (n - 1) + (r,)
    states = states_up_to(n * n, window)
    failures: List[Failure] = []
    checked = 0
    for in_state in states:
        layer = bbT_apply(n, n, corner_n, corner_n, in_state, z, space,
                          window)
        for out in states:
            checked += 1
            left = layer.get(out, LaurentScalar())
            right = _embedding_element(n, r, in_state, out, z)
            if left != right:
                failures.append(
                    Failure.of(list(in_state) + list(out), right, left)
                )
    return Report.build(
        Suite.embedding.value, {'n': n, 'r': r, 'window': window},
        failures, checked, started,
    )


def basic_sectors(
    max_n: int, max_L: int, max_particles: int
) -> List[Sector]:
    sectors = []
    for n in range(1, max_n + 1):
        for L in range(1, max_L + 1):
            for total in range(n, max_particles + 1):
                for flat in states_up_to(n, total - n):
                    if sum(flat) != total - n:
                        continue
                    multiplicity = tuple(m + 1 for m in flat)
                    sectors.append(
                        Sector(n=n, L=L, multiplicity=multiplicity)
                    )
    return sectors


def check_sector_oracle(sector: Sector) -> Report:
    """Matrix product probabilities against the Markov matrix kernel."""
    started = time.perf_counter()
    expected = steady_state_oracle(sector)
    cutoff, table = stable_cutoff(sector)
    failures = [
        Failure.of([render_configuration(config)], expected[config],
                   table.get(config, 0))
        for config in sorted(expected)
        if expected[config] != table.get(config, 0)
    ]
    total = sum(table.values())
    if total != sector.normalization:
        failures.append(Failure.of(['sum'], sector.normalization, total))
    return Report.build(
        Suite.oracle.value,
        {'n': sector.n, 'L': sector.L, 'm': sector.multiplicity,
         'cutoff': cutoff},
        failures, len(expected) + 1, started,
    )


def check_oracle(
    max_n: int = 2,
    max_L: int = 4,
    max_particles: int = 4,
    extra: Sequence[Sector] = (),
) -> Report:
    started = time.perf_counter()
    sectors = basic_sectors(max_n, max_L, max_particles) + list(extra)
    logger.info(f'Comparing steady states on {len(sectors)} sectors')
    reports = [check_sector_oracle(sector) for sector in sectors]
    merged = Report.merge(
        Suite.oracle.value,
        {'max_n': max_n, 'max_L': max_L, 'max_particles': max_particles,
         'extra': len(extra)},
        reports,
    )
    merged.timing_ms = (time.perf_counter() - started) * 1000.0
    return merged
