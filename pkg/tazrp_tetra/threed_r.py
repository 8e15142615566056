"""The 3D R-operator: coefficients, oscillator-valued vertices and the
identities they satisfy.
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple
import logging
import time

from .errors import NonExactDivision
from .fock import (
    FockOp, OscWord, State, Vector, add_into, osc_power, states_up_to,
    word_matrix,
)
from .models import (
    Failure, FockSpace, Generator, QMode, Report, Suite, VertexKind,
)
from .qscalar import (
    LaurentScalar, Monomial, QPoly, QRat, ZERO_POLY, chi, chi_prime,
    mono_mul, mono_pow, monomial, q2_factorial, q_binomial, q_power,
)

logger = logging.getLogger(__name__)

CoeffFn = Callable[[int, int, int, int, int, int], QPoly]


def conserves(a: int, b: int, c: int, i: int, j: int, k: int) -> bool:
    return a + b == i + j and b + c == j + k


def _r_sum(a: int, b: int, c: int, i: int, j: int, k: int,
           sign: int) -> QPoly:
    if min(a, b, c, i, j, k) < 0 or not conserves(a, b, c, i, j, k):
        return ZERO_POLY
    acc: Dict[int, int] = {}
    for lam in range(max(0, b - i), min(j, b) + 1):
        mu = b - lam
        shift = i * (c - j) + (k + 1) * lam + mu * (mu - k)
        term = (
            q2_factorial(c + mu).exquo(q2_factorial(c))
            * q_binomial(i, mu, 2)
            * q_binomial(j, lam, 2)
        )
        factor = sign ** lam
        for e, coeff in term.coeffs.items():
            acc[e + shift] = acc.get(e + shift, 0) + factor * coeff
    acc = {e: v for e, v in acc.items() if v}
    if any(e < 0 for e in acc):
        raise NonExactDivision(
            f'R^{a},{b},{c}_{i},{j},{k} has negative powers of q'
        )
    return QPoly(acc)


@lru_cache(maxsize=None)
def r_coeff(a: int, b: int, c: int, i: int, j: int, k: int) -> QPoly:
    """R^{abc}_{ijk}, a polynomial in q."""
    return _r_sum(a, b, c, i, j, k, -1)


def r_coeff_variant(sign: int) -> CoeffFn:
    """The coefficient formula with `sign` in place of the alternating -1.
    Only sign=-1 gives the R-operator; +1 is a negative control."""
    @lru_cache(maxsize=None)
    def coeff(a: int, b: int, c: int, i: int, j: int, k: int) -> QPoly:
        return _r_sum(a, b, c, i, j, k, sign)
    return coeff


def r_coeff_q0(a: int, b: int, c: int, i: int, j: int, k: int) -> int:
    """R^{abc}_{ijk} at q=0."""
    return int(
        a == j + max(i - k, 0)
        and b == min(i, k)
        and c == j + max(k - i, 0)
    )


@dataclass(frozen=True)
class RCoeff:
    indices: Tuple[int, int, int, int, int, int]
    value: QPoly


def r_coefficients(
    max_index: int, coeff: CoeffFn = r_coeff
) -> Iterable[RCoeff]:
    """Every index tuple <= max_index allowed by the conservation deltas,
    zero coefficients included."""
    for i, j, k, b in product(range(max_index + 1), repeat=4):
        a, c = i + j - b, j + k - b
        if 0 <= a <= max_index and 0 <= c <= max_index:
            yield RCoeff((a, b, c, i, j, k), coeff(a, b, c, i, j, k))


def vertex_coefficient(
    a: int, b: int, i: int, j: int, k: int, q_mode: QMode,
    coeff: CoeffFn = r_coeff,
) -> Optional[Tuple[int, QPoly]]:
    """Ket action of the vertex R_hat^{ab}_{ij} (without its z power) on |k>:
    the output mode and coefficient, or None."""
    if a + b != i + j:
        return None
    c = j + k - b
    if c < 0:
        return None
    if QMode(q_mode) == QMode.zero:
        value = r_coeff_q0(a, b, c, i, j, k)
        return (c, QPoly.constant(1)) if value else None
    value = coeff(a, b, c, i, j, k)
    return (c, value) if value else None


def zero_vertex_word(a: int, b: int, i: int, j: int) -> Optional[OscWord]:
    """The q=0 vertex (a+)^j k^[a>j] (a-)^b, or None when it vanishes."""
    if a + b != i + j or a < j:
        return None
    return OscWord(j, 1 if a > j else 0, b)


def zero_vertex_apply(a: int, b: int, i: int, j: int, m: int) -> Optional[int]:
    """Output mode of the q=0 vertex on |m>, or None when it annihilates."""
    if a + b != i + j or a < j or m < b:
        return None
    if a > j and m != b:
        return None
    return m - b + j


@dataclass(frozen=True)
class VertexOp:
    kind: VertexKind
    a: int
    b: int
    i: int
    j: int
    spectral: Monomial
    body: FockOp

    @property
    def weight(self) -> Monomial:
        return mono_pow(self.spectral, self.j - self.b)

    def operator(self) -> FockOp:
        return self.body.scale(LaurentScalar.from_monomial(self.weight))


def _r_hat_body(a: int, b: int, i: int, j: int, space: FockSpace) -> FockOp:
    shape = (space.cutoff,)
    if a + b != i + j or min(a, b, i, j) < 0:
        return FockOp.zero(shape, space.q_mode)
    if space.is_zero_mode:
        word = zero_vertex_word(a, b, i, j)
        if word is None:
            return FockOp.zero(shape, space.q_mode)
        return word_matrix(word, space)
    body = FockOp.zero(shape, space.q_mode)
    for lam in range(max(0, b - i), min(j, b) + 1):
        mu = b - lam
        coeff = (
            q_power(lam + mu * mu - i * b)
            * QRat(q_binomial(i, mu, 2) * q_binomial(j, lam, 2))
        )
        if lam % 2:
            coeff = -coeff
        term = osc_power(Generator.a_minus, mu, space).compose(
            osc_power(Generator.a_plus, j - lam, space).compose(
                osc_power(Generator.k, i + lam - mu, space)
            )
        )
        body = body + term.scale(LaurentScalar.constant(coeff))
    return body


def vertex_op(
    kind: VertexKind, a: int, b: int, i: int, j: int,
    spectral: Monomial, space: FockSpace,
) -> VertexOp:
    """R_hat^{ab}_{ij}(z) or S_hat^{ab}_{ij}(z) = R_hat^{ba}_{ji}(1/z)."""
    kind = VertexKind(kind)
    if kind == VertexKind.R_hat:
        body = _r_hat_body(a, b, i, j, space)
    else:
        body = _r_hat_body(b, a, j, i, space)
    return VertexOp(kind, a, b, i, j, spectral, body)


def apply_r3(
    vector: Vector,
    positions: Sequence[int],
    kind: VertexKind,
    spectral: Monomial,
    coeff: CoeffFn = r_coeff,
) -> Vector:
    """Act with the 3D operator R(z) (kind R_hat) or S(z) (kind S_hat) on
    the tensor factors at `positions`:

        R(z)|i,j,k> = sum z^(j-b) R^{abc}_{ijk} |a,b,c>
        S(z)|i,j,k> = sum z^(j-b) R^{bac}_{jik} |a,b,c>
    """
    p1, p2, p3 = positions
    result: Vector = {}
    for state, value in vector.items():
        i, j, k = state[p1], state[p2], state[p3]
        if VertexKind(kind) == VertexKind.R_hat:
            outs = [
                (i + j - b, b, j + k - b, coeff(i + j - b, b, j + k - b,
                                                i, j, k))
                for b in range(min(i + j, j + k) + 1)
            ]
        else:
            outs = [
                (a, i + j - a, i + k - a, coeff(i + j - a, a, i + k - a,
                                                j, i, k))
                for a in range(min(i + j, i + k) + 1)
            ]
        for a, b, c, poly in outs:
            if not poly:
                continue
            out = list(state)
            out[p1], out[p2], out[p3] = a, b, c
            term = LaurentScalar.from_monomial(
                mono_pow(spectral, j - b), poly
            )
            add_into(result, tuple(out), value * term)
    return result


def _compare_vectors(
    lhs: Vector, rhs: Vector, prefix: Sequence, failures: List[Failure]
) -> int:
    checked = 0
    zero = LaurentScalar()
    for out in sorted(set(lhs) | set(rhs)):
        checked += 1
        left, right = lhs.get(out, zero), rhs.get(out, zero)
        if left != right:
            failures.append(Failure.of(list(prefix) + list(out), left, right))
    return checked


def check_r_properties(max_index: int, coeff: CoeffFn = r_coeff) -> Report:
    """Involution, reflection, weight symmetry and grading of R for all
    index tuples <= max_index."""
    started = time.perf_counter()
    logger.info(f'Checking R properties up to index {max_index}')
    failures: List[Failure] = []
    checked = 0
    indices = range(max_index + 1)
    for a, b, c, i, j, k in product(indices, repeat=6):
        checked += 1
        if conserves(a, b, c, i, j, k):
            continue
        value = coeff(a, b, c, i, j, k)
        if value:
            failures.append(
                Failure.of(('grading', a, b, c, i, j, k), 0, value)
            )
    for entry in r_coefficients(max_index, coeff):
        a, b, c, i, j, k = entry.indices
        value = entry.value
        mirrored = coeff(c, b, a, k, j, i)
        if value != mirrored:
            failures.append(
                Failure.of(('reflection', a, b, c, i, j, k), value, mirrored)
            )
        lhs = (
            value * q2_factorial(a) * q2_factorial(b) * q2_factorial(c)
        )
        rhs = (
            coeff(i, j, k, a, b, c)
            * q2_factorial(i) * q2_factorial(j) * q2_factorial(k)
        )
        if lhs != rhs:
            failures.append(
                Failure.of(('weight', a, b, c, i, j, k), lhs, rhs)
            )
        total = ZERO_POLY
        for y in range(min(i + j, j + k) + 1):
            x, z = i + j - y, j + k - y
            total = total + coeff(a, b, c, x, y, z) * coeff(x, y, z, i, j, k)
        expected = int((a, b, c) == (i, j, k))
        if total != expected:
            failures.append(
                Failure.of(('involution', a, b, c, i, j, k), expected, total)
            )
    return Report.build(
        Suite.r_properties.value, {'max_index': max_index}, failures,
        checked, started,
    )


def tetrahedron_sides(
    state: State, spectral: bool = True, coeff: CoeffFn = r_coeff
) -> Tuple[Vector, Vector]:
    """Both sides of

        S(z12)_126 S(z34)_346 R(z13)_135 R(z24)_245
            = R(z24)_245 R(z13)_135 S(z34)_346 S(z12)_126

    applied to a basis state of F^6, with z_ij = z_i/z_j."""
    def ratio(p: int, r: int) -> Monomial:
        if not spectral:
            return ()
        return monomial({f'z{p}': 1, f'z{r}': -1})

    s12 = ((0, 1, 5), VertexKind.S_hat, ratio(1, 2))
    s34 = ((2, 3, 5), VertexKind.S_hat, ratio(3, 4))
    r13 = ((0, 2, 4), VertexKind.R_hat, ratio(1, 3))
    r24 = ((1, 3, 4), VertexKind.R_hat, ratio(2, 4))

    start: Vector = {tuple(state): LaurentScalar.constant(1)}
    lhs = start
    for positions, kind, z in (r24, r13, s34, s12):
        lhs = apply_r3(lhs, positions, kind, z, coeff)
    rhs = start
    for positions, kind, z in (s12, s34, r13, r24):
        rhs = apply_r3(rhs, positions, kind, z, coeff)
    return lhs, rhs


def check_tetrahedron(
    max_total_mode: int,
    spectral: bool = True,
    coeff: CoeffFn = r_coeff,
    states: Optional[Sequence[State]] = None,
) -> Report:
    """Compare both sides of the tetrahedron equation on every in-state of
    total mode <= max_total_mode (or on `states`)."""
    started = time.perf_counter()
    if states is None:
        states = states_up_to(6, max_total_mode)
    logger.info(f'Checking the tetrahedron equation on {len(states)} states')
    failures: List[Failure] = []
    checked = 0
    for state in states:
        lhs, rhs = tetrahedron_sides(state, spectral, coeff)
        checked += _compare_vectors(lhs, rhs, state, failures)
    if failures:
        logger.warning(
            f'Tetrahedron equation failed on {len(failures)} elements'
        )
    return Report.build(
        Suite.tetrahedron.value,
        {'max_mode': max_total_mode, 'spectral': spectral},
        failures, checked, started,
    )


def _chi_term(m: int, mono: Monomial, prime: bool = False) -> LaurentScalar:
    weight = chi_prime(m) if prime else chi(m)
    return LaurentScalar.from_monomial(mono_pow(mono, m), weight)


def _metric_ratio(top: Sequence[int], bottom: Sequence[int]) -> QRat:
    num, den = QPoly.constant(1), QPoly.constant(1)
    for m in top:
        num = num * q2_factorial(m)
    for m in bottom:
        den = den * q2_factorial(m)
    return QRat(num, den)


def check_eigenvectors(
    max_component: int, x_var: str = 'x', y_var: str = 'y',
    coeff: CoeffFn = r_coeff,
) -> Report:
    """Component checks of the chi-vector eigenvector identities of R and of
    their adaptation to the vertex S_hat."""
    started = time.perf_counter()
    failures: List[Failure] = []
    checked = 0
    x, y = monomial({x_var: 1}), monomial({y_var: 1})
    xy = mono_mul(x, y)
    comps = range(max_component + 1)

    def weight(i: int, j: int, k: int) -> LaurentScalar:
        return _chi_term(i, x) * _chi_term(j, xy) * _chi_term(k, y)

    for a, b, c in product(comps, repeat=3):
        # R |chi(x)> |chi(xy)> |chi(y)>, component |a,b,c>
        lhs = LaurentScalar()
        for j in range(min(a + b, b + c) + 1):
            i, k = a + b - j, b + c - j
            lhs = lhs + weight(i, j, k) * coeff(a, b, c, i, j, k)
        checked += 1
        if lhs != weight(a, b, c):
            failures.append(Failure.of(('ket', a, b, c), weight(a, b, c), lhs))

        # <chi(x)| <chi(xy)| <chi(y)| R, component <i,j,k| with (i,j,k)=(a,b,c)
        i, j, k = a, b, c
        lhs = LaurentScalar()
        for bb in range(min(i + j, j + k) + 1):
            aa, cc = i + j - bb, j + k - bb
            rho = coeff(aa, bb, cc, i, j, k) * _metric_ratio(
                (aa, bb, cc), (i, j, k)
            )
            lhs = lhs + weight(aa, bb, cc) * rho
        checked += 1
        if lhs != weight(i, j, k):
            failures.append(Failure.of(('bra', i, j, k), weight(i, j, k), lhs))

    lam, mu, z = monomial(lam=1), monomial(mu=1), monomial(z=1)
    w_ket = monomial(lam=1, mu=-1, z=-1)
    w_bra = monomial(lam=1, mu=-1, z=1)
    for a, b, c in product(comps, repeat=3):
        # sum_ij chi_i(lam) chi_j(mu) S_hat^{ab}_{ij}(z) |chi(lam/(mu z))>
        lhs = LaurentScalar()
        for i in range(a + b + 1):
            j = a + b - i
            k = a + c - i
            if k < 0:
                continue
            value = coeff(b, a, c, j, i, k)
            if not value:
                continue
            term = (
                _chi_term(i, lam) * _chi_term(j, mu) * _chi_term(k, w_ket)
            ).times_monomial(mono_pow(z, j - b))
            lhs = lhs + term * value
        rhs = _chi_term(a, lam) * _chi_term(b, mu) * _chi_term(c, w_ket)
        checked += 1
        if lhs != rhs:
            failures.append(Failure.of(('S-ket', a, b, c), rhs, lhs))

    for i, j, k in product(comps, repeat=3):
        # sum_ab chi'_a(lam) chi'_b(mu) <chi(lam z/mu)| S_hat^{ab}_{ij}(z)
        lhs = LaurentScalar()
        for a in range(i + j + 1):
            b = i + j - a
            c = i + k - a
            if c < 0:
                continue
            value = coeff(b, a, c, j, i, k)
            if not value:
                continue
            rho = value * _metric_ratio((c,), (k,))
            term = (
                _chi_term(a, lam, prime=True)
                * _chi_term(b, mu, prime=True)
                * _chi_term(c, w_bra)
            ).times_monomial(mono_pow(z, j - b))
            lhs = lhs + term * rho
        rhs = (
            _chi_term(i, lam, prime=True)
            * _chi_term(j, mu, prime=True)
            * _chi_term(k, w_bra)
        )
        checked += 1
        if lhs != rhs:
            failures.append(Failure.of(('S-bra', i, j, k), rhs, lhs))

    return Report.build(
        Suite.eigenvectors.value, {'max_component': max_component},
        failures, checked, started,
    )


def check_q0_limit(max_index: int, vertex_cutoff: int = 4) -> Report:
    """R at q=0 against its closed form, and the generic vertex at q=0
    against the q=0 vertex word."""
    started = time.perf_counter()
    failures: List[Failure] = []
    checked = 0
    for a, b, c, i, j, k in product(range(max_index + 1), repeat=6):
        value = r_coeff(a, b, c, i, j, k).constant_term
        closed = r_coeff_q0(a, b, c, i, j, k)
        checked += 1
        if value != closed:
            failures.append(
                Failure.of(('r_coeff', a, b, c, i, j, k), closed, value)
            )
    generic = FockSpace(cutoff=vertex_cutoff, q_mode=QMode.generic)
    zero = FockSpace(cutoff=vertex_cutoff, q_mode=QMode.zero)
    labels = range(min(max_index, 3) + 1)
    for a, b, i, j in product(labels, repeat=4):
        if a + b != i + j:
            continue
        full = vertex_op(VertexKind.R_hat, a, b, i, j, (), generic).body
        word = vertex_op(VertexKind.R_hat, a, b, i, j, (), zero).body
        for out, inn in product(range(vertex_cutoff + 1), repeat=2):
            if not full.is_safe((out,), (inn,)):
                continue
            limit = full.element((out,), (inn,)).at_q_zero()
            expected = word.element((out,), (inn,))
            checked += 1
            if limit != expected:
                failures.append(
                    Failure.of(('vertex', a, b, i, j, out, inn), expected,
                               limit)
                )
    return Report.build(
        Suite.q0_limit.value, {'max_index': max_index}, failures, checked,
        started,
    )
