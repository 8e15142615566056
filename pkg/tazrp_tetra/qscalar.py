"""Exact scalars: polynomials in q with big-integer coefficients, reduced
rational functions of q, and Laurent polynomials in named spectral variables
with rational-function coefficients.

The polynomial engine is sympy's sparse ring ``ZZ[q]``; everything above it is
a thin immutable wrapper so values can be hashed, compared structurally and
shipped to worker processes.
"""
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Callable, Dict, Iterable, Mapping, Optional, Tuple, Union

from sympy.polys.domains import ZZ
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import ring

from .errors import NonExactDivision

_RING, _Q = ring("q", ZZ)

Monomial = Tuple[Tuple[str, int], ...]


class QPoly:
    """Integer polynomial in q. Immutable."""

    __slots__ = ("_p",)

    def __init__(self, coeffs: Optional[Mapping[int, int]] = None) -> None:
        if not coeffs:
            self._p = _RING.zero
            return
        if any(e < 0 for e in coeffs):
            raise ValueError(f'Negative q-exponent in {dict(coeffs)}')
        self._p = _RING.from_dict(
            {(int(e),): int(c) for e, c in coeffs.items() if c}
        )

    @classmethod
    def _wrap(cls, element) -> 'QPoly':
        obj = cls.__new__(cls)
        obj._p = element
        return obj

    @classmethod
    def constant(cls, value: int) -> 'QPoly':
        return cls({0: value})

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> 'QPoly':
        return cls({exponent: coeff})

    @property
    def coeffs(self) -> Dict[int, int]:
        return {monom[0]: int(c) for monom, c in self._p.items()}

    @property
    def is_zero(self) -> bool:
        return not self._p

    def __bool__(self) -> bool:
        return bool(self._p)

    @property
    def degree(self) -> int:
        """Degree in q; -1 for the zero polynomial."""
        if not self._p:
            return -1
        return max(monom[0] for monom in self._p)

    @property
    def low_degree(self) -> int:
        if not self._p:
            return -1
        return min(monom[0] for monom in self._p)

    @property
    def constant_term(self) -> int:
        return int(self._p.get((0,), 0))

    def evaluate(self, value: Union[int, Fraction]) -> Union[int, Fraction]:
        return sum(
            (int(c) * value ** monom[0] for monom, c in self._p.items()), 0
        )

    def substitute_power(self, k: int) -> 'QPoly':
        """Substitute q -> q^k; k=2 turns a base-q object into base q^2."""
        if k < 1:
            raise ValueError(f'Cannot substitute q -> q^{k}')
        if k == 1:
            return self
        return QPoly({e * k: c for e, c in self.coeffs.items()})

    def shift(self, k: int) -> 'QPoly':
        """Multiply by q^k (k >= 0)."""
        return QPoly({e + k: c for e, c in self.coeffs.items()})

    def exquo(self, other: 'QPoly') -> 'QPoly':
        if other.is_zero:
            raise ZeroDivisionError('Division of a QPoly by zero')
        try:
            return QPoly._wrap(self._p.exquo(other._p))
        except ExactQuotientFailed:
            raise NonExactDivision(f'({self}) is not divisible by ({other})')

    def gcd(self, other: 'QPoly') -> 'QPoly':
        return QPoly._wrap(self._p.gcd(other._p))

    def __add__(self, other) -> 'QPoly':
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        return QPoly._wrap(self._p + other._p)

    __radd__ = __add__

    def __sub__(self, other) -> 'QPoly':
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        return QPoly._wrap(self._p - other._p)

    def __rsub__(self, other) -> 'QPoly':
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        return QPoly._wrap(other._p - self._p)

    def __mul__(self, other) -> 'QPoly':
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        return QPoly._wrap(self._p * other._p)

    __rmul__ = __mul__

    def __neg__(self) -> 'QPoly':
        return QPoly._wrap(-self._p)

    def __pow__(self, n: int) -> 'QPoly':
        if n < 0:
            raise ValueError('Negative powers of a QPoly are QRat values')
        return QPoly._wrap(self._p ** n)

    def __eq__(self, other) -> bool:
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        return self._p == other._p

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.coeffs.items())))

    def __str__(self) -> str:
        if not self._p:
            return '0'
        parts = []
        for e, c in sorted(self.coeffs.items()):
            if e == 0:
                body = str(abs(c))
            else:
                power = 'q' if e == 1 else f'q^{e}'
                body = power if abs(c) == 1 else f'{abs(c)}*{power}'
            if not parts:
                parts.append(body if c > 0 else f'-{body}')
            else:
                parts.append(f'+ {body}' if c > 0 else f'- {body}')
        return ' '.join(parts)

    def __repr__(self) -> str:
        return f'QPoly({self})'


def _coerce_poly(value) -> Optional[QPoly]:
    if isinstance(value, QPoly):
        return value
    if isinstance(value, int):
        return QPoly.constant(value)
    return None


ZERO_POLY = QPoly()
ONE_POLY = QPoly.constant(1)


class QRat:
    """Reduced rational function num/den of q.

    Canonical form: gcd(num, den) = 1 and the lowest-degree coefficient of
    den is positive, so equality is structural.
    """

    __slots__ = ("num", "den")

    def __init__(
        self,
        num: Union['QRat', QPoly, int] = 0,
        den: Union[QPoly, int] = 1,
    ) -> None:
        if isinstance(num, QRat):
            if den != 1:
                raise ValueError('A QRat numerator takes no denominator')
            self.num, self.den = num.num, num.den
            return
        num, den = _coerce_poly(num), _coerce_poly(den)
        if num is None or den is None:
            raise TypeError('QRat takes integers or QPoly values')
        if den.is_zero:
            raise ZeroDivisionError('QRat with zero denominator')
        self.num, self.den = _canonical(num, den)

    @classmethod
    def _make(cls, num: QPoly, den: QPoly) -> 'QRat':
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @classmethod
    def from_fraction(cls, value: Fraction) -> 'QRat':
        return cls(value.numerator, value.denominator)

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __bool__(self) -> bool:
        return not self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.den == ONE_POLY

    def to_poly(self) -> QPoly:
        if not self.is_polynomial:
            raise ValueError(f'{self} is not a polynomial in q')
        return self.num

    def at_zero(self) -> Fraction:
        """Value at q=0."""
        den = self.den.constant_term
        if den == 0:
            raise ZeroDivisionError(f'{self} has a pole at q=0')
        return Fraction(self.num.constant_term, den)

    def substitute_power(self, k: int) -> 'QRat':
        return QRat._make(self.num.substitute_power(k),
                          self.den.substitute_power(k))

    def inverse(self) -> 'QRat':
        if self.is_zero:
            raise ZeroDivisionError('Inverse of zero')
        return QRat(self.den, self.num)

    def __add__(self, other) -> 'QRat':
        other = _coerce_rat(other)
        if other is None:
            return NotImplemented
        if self.den == ONE_POLY and other.den == ONE_POLY:
            return QRat._make(self.num + other.num, ONE_POLY)
        return QRat(self.num * other.den + other.num * self.den,
                    self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> 'QRat':
        return QRat._make(-self.num, self.den)

    def __sub__(self, other) -> 'QRat':
        other = _coerce_rat(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> 'QRat':
        other = _coerce_rat(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> 'QRat':
        other = _coerce_rat(other)
        if other is None:
            return NotImplemented
        if self.den == ONE_POLY and other.den == ONE_POLY:
            return QRat._make(self.num * other.num, ONE_POLY)
        return QRat(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> 'QRat':
        other = _coerce_rat(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError('QRat division by zero')
        return QRat(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> 'QRat':
        other = _coerce_rat(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int) -> 'QRat':
        if n < 0:
            return self.inverse() ** (-n)
        return QRat._make(self.num ** n, self.den ** n)

    def __eq__(self, other) -> bool:
        other = _coerce_rat(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __str__(self) -> str:
        if self.den == ONE_POLY:
            return str(self.num)
        return f'({self.num})/({self.den})'

    def __repr__(self) -> str:
        return f'QRat({self})'


def _canonical(num: QPoly, den: QPoly) -> Tuple[QPoly, QPoly]:
    if num.is_zero:
        return ZERO_POLY, ONE_POLY
    if den == ONE_POLY:
        return num, den
    _, n, d = num._p.cofactors(den._p)
    if d.get((min(monom[0] for monom in d),)) < 0:
        n, d = -n, -d
    return QPoly._wrap(n), QPoly._wrap(d)


def _coerce_rat(value) -> Optional[QRat]:
    if isinstance(value, QRat):
        return value
    if isinstance(value, (int, QPoly)):
        return QRat._make(_coerce_poly(value), ONE_POLY)
    return None


ZERO = QRat()
ONE = QRat(1)


def q_power(e: int) -> QRat:
    """q^e for any integer e."""
    if e >= 0:
        return QRat._make(QPoly.monomial(e), ONE_POLY)
    return QRat._make(ONE_POLY, QPoly.monomial(-e))


# Laurent monomials in named variables are sorted tuples of (name, exponent)
# pairs with nonzero exponents; () is the unit monomial.


def monomial(exponents: Optional[Mapping[str, int]] = None,
             **kwargs: int) -> Monomial:
    merged = dict(exponents or {})
    merged.update(kwargs)
    return tuple(sorted((v, e) for v, e in merged.items() if e))


def variable(name: str) -> Monomial:
    return ((name, 1),)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for v, e in b:
        merged[v] = merged.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in merged.items() if e))


def mono_pow(a: Monomial, k: int) -> Monomial:
    if k == 0:
        return ()
    return tuple((v, e * k) for v, e in a)


def mono_degree(a: Monomial, var: str) -> int:
    return dict(a).get(var, 0)


def mono_str(a: Monomial) -> str:
    if not a:
        return '1'
    return '*'.join(v if e == 1 else f'{v}^{e}' for v, e in a)


class LaurentScalar:
    """Laurent polynomial in named variables with QRat coefficients."""

    __slots__ = ("_terms",)

    def __init__(
        self,
        terms: Optional[Mapping[Monomial, Union[QRat, QPoly, int]]] = None,
    ) -> None:
        clean = {}
        for mono, coeff in (terms or {}).items():
            coeff = _coerce_rat(coeff)
            if coeff:
                clean[mono] = coeff
        self._terms = clean

    @classmethod
    def _make(cls, terms: Dict[Monomial, QRat]) -> 'LaurentScalar':
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def constant(cls, value: Union[QRat, QPoly, int]) -> 'LaurentScalar':
        return cls({(): value})

    @classmethod
    def from_monomial(cls, mono: Monomial,
                      coeff: Union[QRat, QPoly, int] = 1) -> 'LaurentScalar':
        return cls({mono: coeff})

    @property
    def terms(self) -> Mapping[Monomial, QRat]:
        return MappingProxyType(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, mono: Monomial = ()) -> QRat:
        return self._terms.get(mono, ZERO)

    def as_constant(self) -> QRat:
        if any(mono for mono in self._terms):
            raise ValueError(f'{self} depends on {sorted(self.variables())}')
        return self.coefficient(())

    def variables(self) -> set:
        return {v for mono in self._terms for v, _ in mono}

    def __add__(self, other) -> 'LaurentScalar':
        other = _coerce_laurent(other)
        if other is None:
            return NotImplemented
        if not other._terms:
            return self
        result = dict(self._terms)
        for mono, coeff in other._terms.items():
            total = result.get(mono)
            total = coeff if total is None else total + coeff
            if total:
                result[mono] = total
            else:
                result.pop(mono, None)
        return LaurentScalar._make(result)

    __radd__ = __add__

    def __neg__(self) -> 'LaurentScalar':
        return LaurentScalar._make(
            {mono: -coeff for mono, coeff in self._terms.items()}
        )

    def __sub__(self, other) -> 'LaurentScalar':
        other = _coerce_laurent(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> 'LaurentScalar':
        other = _coerce_laurent(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> 'LaurentScalar':
        other = _coerce_laurent(other)
        if other is None:
            return NotImplemented
        result: Dict[Monomial, QRat] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = mono_mul(m1, m2)
                value = c1 * c2
                total = result.get(mono)
                result[mono] = value if total is None else total + value
        return LaurentScalar._make({m: c for m, c in result.items() if c})

    __rmul__ = __mul__

    def times_monomial(self, mono: Monomial) -> 'LaurentScalar':
        if not mono:
            return self
        return LaurentScalar._make(
            {mono_mul(m, mono): c for m, c in self._terms.items()}
        )

    def __pow__(self, n: int) -> 'LaurentScalar':
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError(f'{self} has no Laurent inverse')
            (mono, coeff), = self._terms.items()
            return LaurentScalar._make(
                {mono_pow(mono, n): coeff ** n}
            )
        result = LaurentScalar.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        other = _coerce_laurent(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def map_coefficients(
        self, fn: Callable[[QRat], QRat]
    ) -> 'LaurentScalar':
        return LaurentScalar({m: fn(c) for m, c in self._terms.items()})

    def at_q_zero(self) -> 'LaurentScalar':
        return self.map_coefficients(lambda c: QRat.from_fraction(c.at_zero()))

    def substitute(self, var: str, mono: Monomial) -> 'LaurentScalar':
        """Replace ``var`` by the monomial ``mono``; ``()`` sets it to 1."""
        result = LaurentScalar()
        for m, c in self._terms.items():
            exponents = dict(m)
            e = exponents.pop(var, 0)
            new = mono_mul(monomial(exponents), mono_pow(mono, e))
            result = result + LaurentScalar._make({new: c})
        return result

    def swap(self, a: str, b: str) -> 'LaurentScalar':
        rename = {a: b, b: a}
        return LaurentScalar._make(
            {
                monomial({rename.get(v, v): e for v, e in m}): c
                for m, c in self._terms.items()
            }
        )

    def euler_derivative(self, var: str) -> 'LaurentScalar':
        """var * d/dvar."""
        return LaurentScalar(
            {m: c * mono_degree(m, var) for m, c in self._terms.items()}
        )

    def __str__(self) -> str:
        if not self._terms:
            return '0'
        parts = []
        for mono in sorted(self._terms):
            coeff = self._terms[mono]
            if not mono:
                parts.append(str(coeff))
            elif coeff == ONE:
                parts.append(mono_str(mono))
            else:
                parts.append(f'({coeff})*{mono_str(mono)}')
        return ' + '.join(parts)

    def __repr__(self) -> str:
        return f'LaurentScalar({self})'


def _coerce_laurent(value) -> Optional[LaurentScalar]:
    if isinstance(value, LaurentScalar):
        return value
    rat = _coerce_rat(value)
    if rat is None:
        return None
    return LaurentScalar._make({(): rat} if rat else {})


@lru_cache(maxsize=None)
def q_factorial(m: int) -> QPoly:
    """(q)_m = (1-q)(1-q^2)...(1-q^m)."""
    if m < 0:
        raise ValueError(f'q_factorial of negative {m}')
    if m == 0:
        return ONE_POLY
    return q_factorial(m - 1) * (ONE_POLY - QPoly.monomial(m))


@lru_cache(maxsize=None)
def q2_factorial(m: int) -> QPoly:
    """(q^2; q^2)_m, the norm of |m> in the generic Fock space."""
    return q_factorial(m).substitute_power(2)


def q_pochhammer(
    z_coeff: Union[QRat, QPoly, int], z_qshift: int, m: int
) -> Union[QPoly, QRat]:
    """(z; q)_m with z = z_coeff * q^z_qshift."""
    if m < 0:
        raise ValueError(f'q_pochhammer of negative length {m}')
    z = _coerce_rat(z_coeff)
    result = ONE
    for j in range(1, m + 1):
        result = result * (ONE - z * q_power(z_qshift + j - 1))
    return result.num if result.is_polynomial else result


def formal_pochhammer(
    var: str, coeff: int, qshift: int, m: int
) -> LaurentScalar:
    """(w; q)_m with w = coeff * q^qshift * var as a polynomial in var."""
    result = LaurentScalar.constant(1)
    for j in range(1, m + 1):
        factor = LaurentScalar(
            {(): 1, variable(var): -coeff * q_power(qshift + j - 1)}
        )
        result = result * factor
    return result


@lru_cache(maxsize=None)
def q_binomial(m: int, j: int, base_power: int = 1) -> QPoly:
    """q-binomial coefficient; ``base_power=2`` gives the base q^2 version."""
    if j < 0 or j > m:
        return ZERO_POLY
    value = q_factorial(m).exquo(q_factorial(j) * q_factorial(m - j))
    return value.substitute_power(base_power)


@lru_cache(maxsize=None)
def chi(m: int) -> QRat:
    return QRat(ONE_POLY, q_factorial(m))


@lru_cache(maxsize=None)
def chi_prime(m: int) -> QRat:
    return QRat(q2_factorial(m), q_factorial(m))


def product(values: Iterable[QRat]) -> QRat:
    result = ONE
    for value in values:
        result = result * value
    return result
