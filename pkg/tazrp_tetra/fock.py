"""Truncated Fock spaces, oscillator matrices and the 0-oscillator normal
form.

A `FockOp` is stored column-wise: ``columns[in_state][out_state]``. Every
operator carries the bookkeeping needed to tell which of its truncated matrix
elements coincide with the untruncated ones:

* ``raise_bound[t]`` bounds the net increase of the mode in factor t
  (``None`` if unbounded). A column whose in-state satisfies
  ``in[t] + raise_bound[t] <= N[t]`` for every t is complete.
* ``drop_bound`` bounds the decrease of the total mode (``None`` if
  unbounded) and ``margin`` makes every element with
  ``|out| + margin <= min(N)`` exact (``None`` if no such guarantee).
"""
from dataclasses import dataclass, field
from itertools import product
from typing import (
    Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence,
    Tuple, Union,
)
import logging

from .errors import Divergent, ShapeMismatch
from .models import FockSpace, Generator, QMode
from .qscalar import LaurentScalar, ONE, QRat, q_power

logger = logging.getLogger(__name__)

State = Tuple[int, ...]
Vector = Dict[State, LaurentScalar]
Column = Dict[State, LaurentScalar]

_ONE = LaurentScalar.constant(1)


def box_states(shape: Sequence[int]) -> Iterator[State]:
    """All states of the truncated space, in lexicographic order."""
    return product(*(range(n + 1) for n in shape))


def states_up_to(factors: int, total: int) -> List[State]:
    """All states on `factors` tensor factors with total mode <= total."""
    if factors == 0:
        return [()]
    states = []
    for first in range(total + 1):
        for rest in states_up_to(factors - 1, total - first):
            states.append((first,) + rest)
    return sorted(states)


def add_into(target: Vector, state: State, value: LaurentScalar) -> None:
    total = target.get(state)
    total = value if total is None else total + value
    if total:
        target[state] = total
    else:
        target.pop(state, None)


def _add_bounds(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None or b is None:
        return None
    return a + b


def _max_bounds(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None or b is None:
        return None
    return max(a, b)


class FockOp:
    """Sparse operator on a tensor product of truncated Fock spaces."""

    __slots__ = (
        "shape", "q_mode", "_columns", "raise_bound", "drop_bound", "margin"
    )

    def __init__(
        self,
        shape: Sequence[int],
        columns: Mapping[State, Mapping[State, LaurentScalar]],
        q_mode: QMode = QMode.generic,
        raise_bound: Optional[Sequence[Optional[int]]] = None,
        drop_bound: Optional[int] = 0,
        margin: Optional[int] = 0,
    ) -> None:
        self.shape = tuple(shape)
        self.q_mode = QMode(q_mode)
        self._columns = {
            in_state: dict(column)
            for in_state, column in columns.items()
            if column
        }
        if raise_bound is None:
            raise_bound = (0,) * len(self.shape)
        if len(raise_bound) != len(self.shape):
            raise ShapeMismatch(
                f'raise_bound {raise_bound} does not match shape {self.shape}'
            )
        self.raise_bound = tuple(raise_bound)
        self.drop_bound = drop_bound
        self.margin = margin

    @classmethod
    def identity(
        cls, shape: Sequence[int], q_mode: QMode = QMode.generic
    ) -> 'FockOp':
        return cls(
            shape, {s: {s: _ONE} for s in box_states(shape)}, q_mode
        )

    @classmethod
    def zero(
        cls, shape: Sequence[int], q_mode: QMode = QMode.generic
    ) -> 'FockOp':
        return cls(shape, {}, q_mode)

    @property
    def columns(self) -> Mapping[State, Mapping[State, LaurentScalar]]:
        return self._columns

    @property
    def entries(self) -> Dict[Tuple[State, State], LaurentScalar]:
        return {
            (out_state, in_state): value
            for in_state, column in self._columns.items()
            for out_state, value in column.items()
        }

    @property
    def is_zero(self) -> bool:
        return not self._columns

    def element(self, out_state: State, in_state: State) -> LaurentScalar:
        return self._columns.get(tuple(in_state), {}).get(
            tuple(out_state), LaurentScalar()
        )

    def column(self, in_state: State) -> Column:
        return dict(self._columns.get(tuple(in_state), {}))

    def _check_compatible(self, other: 'FockOp') -> None:
        if self.shape != other.shape:
            raise ShapeMismatch(f'Shapes {self.shape} and {other.shape}')

    def is_safe(self, out_state: State, in_state: State) -> bool:
        if not self.shape:
            return True
        if all(b is not None for b in self.raise_bound) and all(
            m + b <= n
            for m, b, n in zip(in_state, self.raise_bound, self.shape)
        ):
            return True
        return (
            self.margin is not None
            and sum(out_state) + self.margin <= min(self.shape)
        )

    def apply(self, vector: Mapping[State, LaurentScalar]) -> Vector:
        result: Vector = {}
        for in_state, coeff in vector.items():
            if len(in_state) != len(self.shape):
                raise ShapeMismatch(
                    f'State {in_state} on shape {self.shape}'
                )
            for out_state, value in self._columns.get(in_state, {}).items():
                add_into(result, out_state, value * coeff)
        return result

    def compose(self, other: 'FockOp') -> 'FockOp':
        """self o other (other acts first)."""
        self._check_compatible(other)
        columns = {}
        for in_state, column in other._columns.items():
            out = self.apply(column)
            if out:
                columns[in_state] = out
        if (
            self.margin is None
            or other.margin is None
            or self.drop_bound is None
        ):
            margin = None
        else:
            margin = max(self.margin, self.drop_bound + other.margin)
        return FockOp(
            self.shape,
            columns,
            self.q_mode,
            tuple(
                _add_bounds(a, b)
                for a, b in zip(self.raise_bound, other.raise_bound)
            ),
            _add_bounds(self.drop_bound, other.drop_bound),
            margin,
        )

    def __matmul__(self, other: 'FockOp') -> 'FockOp':
        return self.compose(other)

    def add(self, other: 'FockOp') -> 'FockOp':
        self._check_compatible(other)
        columns = {s: dict(c) for s, c in self._columns.items()}
        for in_state, column in other._columns.items():
            target = columns.setdefault(in_state, {})
            for out_state, value in column.items():
                add_into(target, out_state, value)
        return FockOp(
            self.shape,
            columns,
            self.q_mode,
            tuple(
                _max_bounds(a, b)
                for a, b in zip(self.raise_bound, other.raise_bound)
            ),
            _max_bounds(self.drop_bound, other.drop_bound),
            _max_bounds(self.margin, other.margin),
        )

    def __add__(self, other: 'FockOp') -> 'FockOp':
        return self.add(other)

    def __sub__(self, other: 'FockOp') -> 'FockOp':
        return self.add(other.scale(LaurentScalar.constant(-1)))

    def scale(self, factor: LaurentScalar) -> 'FockOp':
        return self.map_coefficients(lambda value: value * factor)

    def map_coefficients(
        self, fn: Callable[[LaurentScalar], LaurentScalar]
    ) -> 'FockOp':
        columns = {}
        for in_state, column in self._columns.items():
            mapped = {}
            for out_state, value in column.items():
                value = fn(value)
                if value:
                    mapped[out_state] = value
            columns[in_state] = mapped
        return FockOp(
            self.shape, columns, self.q_mode, self.raise_bound,
            self.drop_bound, self.margin,
        )

    def transpose(self) -> 'FockOp':
        """Swap in and out states. Bounds are not carried over."""
        columns: Dict[State, Column] = {}
        for in_state, column in self._columns.items():
            for out_state, value in column.items():
                columns.setdefault(out_state, {})[in_state] = value
        return FockOp(
            self.shape, columns, self.q_mode,
            (None,) * len(self.shape), None, None,
        )

    def full_trace(self) -> LaurentScalar:
        """Trace at q=0, where every basis vector has norm one."""
        if self.q_mode != QMode.zero and self.shape:
            raise ValueError('Traces are only defined in the q=0 Fock space')
        total = LaurentScalar()
        for in_state, column in self._columns.items():
            value = column.get(in_state)
            if value is not None:
                total = total + value
        return total

    def partial_trace(self, factors: Iterable[int]) -> 'FockOp':
        """Trace out the given factor positions (q=0 only)."""
        if self.q_mode != QMode.zero:
            raise ValueError('Traces are only defined in the q=0 Fock space')
        traced = sorted(set(factors))
        if any(t < 0 or t >= len(self.shape) for t in traced):
            raise ShapeMismatch(f'Factors {traced} outside {self.shape}')
        kept = [t for t in range(len(self.shape)) if t not in traced]
        columns: Dict[State, Column] = {}
        for in_state, column in self._columns.items():
            for out_state, value in column.items():
                if all(out_state[t] == in_state[t] for t in traced):
                    target = columns.setdefault(
                        tuple(in_state[t] for t in kept), {}
                    )
                    add_into(
                        target, tuple(out_state[t] for t in kept), value
                    )
        return FockOp(
            tuple(self.shape[t] for t in kept),
            columns,
            self.q_mode,
            tuple(self.raise_bound[t] for t in kept),
            None,
            None,
        )

    def differences(self, other: 'FockOp') -> List[Tuple[State, State,
                                                          LaurentScalar,
                                                          LaurentScalar]]:
        """Elements where the two operators differ, restricted to the
        intersection of their safe windows. Sorted by (in, out)."""
        self._check_compatible(other)
        diffs = []
        in_states = sorted(set(self._columns) | set(other._columns))
        for in_state in in_states:
            mine = self._columns.get(in_state, {})
            theirs = other._columns.get(in_state, {})
            for out_state in sorted(set(mine) | set(theirs)):
                if not (
                    self.is_safe(out_state, in_state)
                    and other.is_safe(out_state, in_state)
                ):
                    continue
                a = mine.get(out_state, LaurentScalar())
                b = theirs.get(out_state, LaurentScalar())
                if a != b:
                    diffs.append((out_state, in_state, a, b))
        return diffs

    def agrees_on_window(self, other: 'FockOp') -> bool:
        return not self.differences(other)

    def __repr__(self) -> str:
        return (
            f'FockOp(shape={self.shape}, q_mode={self.q_mode.value}, '
            f'columns={len(self._columns)})'
        )


def tensor(ops: Sequence[FockOp]) -> FockOp:
    """Tensor product; the first operator acts on the first factors."""
    if not ops:
        return FockOp((), {(): {(): _ONE}}, QMode.zero, (), 0, 0)
    modes = {op.q_mode for op in ops}
    if len(modes) != 1:
        raise ShapeMismatch(f'Mixed q modes {sorted(m.value for m in modes)}')
    result = ops[0]
    for op in ops[1:]:
        columns = {}
        for in_a, col_a in result._columns.items():
            for in_b, col_b in op._columns.items():
                column = {}
                for out_a, va in col_a.items():
                    for out_b, vb in col_b.items():
                        value = va * vb
                        if value:
                            column[out_a + out_b] = value
                columns[in_a + in_b] = column
        result = FockOp(
            result.shape + op.shape,
            columns,
            result.q_mode,
            result.raise_bound + op.raise_bound,
            _add_bounds(result.drop_bound, op.drop_bound),
            _max_bounds(result.margin, op.margin),
        )
    return result


def _coefficient(value: Union[QRat, int]) -> LaurentScalar:
    return LaurentScalar.constant(value)


def osc_power(gen: Generator, power: int, space: FockSpace) -> FockOp:
    """Matrix of gen**power on the truncated space."""
    gen = Generator(gen)
    n = space.cutoff
    zero = space.is_zero_mode
    columns: Dict[State, Column] = {}
    raise_bound, drop_bound = 0, 0
    for m in range(n + 1):
        if gen == Generator.a_plus:
            raise_bound = power
            if m + power <= n:
                columns[(m,)] = {(m + power,): _ONE}
        elif gen == Generator.a_minus:
            drop_bound = power
            if m >= power:
                coeff = ONE
                if not zero:
                    for t in range(power):
                        coeff = coeff * (ONE - q_power(2 * (m - t)))
                columns[(m,)] = {(m - power,): _coefficient(coeff)}
        elif gen == Generator.k:
            if power == 0:
                columns[(m,)] = {(m,): _ONE}
            elif zero:
                if m == 0:
                    columns[(m,)] = {(m,): _ONE}
            else:
                columns[(m,)] = {(m,): _coefficient(q_power(power * m))}
        else:
            if m ** power:
                columns[(m,)] = {(m,): _coefficient(m ** power)}
    return FockOp(
        (n,), columns, space.q_mode, (raise_bound,), drop_bound, 0
    )


def osc_generator(gen: Generator, space: FockSpace) -> FockOp:
    """Matrix of a single oscillator generator; a+|N> is dropped."""
    return osc_power(gen, 1, space)


def dual_generator(gen: Generator, space: FockSpace) -> FockOp:
    """Right (bra) action of a generator: column <m| holds <m|X."""
    gen = Generator(gen)
    n = space.cutoff
    zero = space.is_zero_mode
    columns: Dict[State, Column] = {}
    for m in range(n + 1):
        if gen == Generator.a_plus:
            if m >= 1:
                coeff = ONE if zero else ONE - q_power(2 * m)
                columns[(m,)] = {(m - 1,): _coefficient(coeff)}
        elif gen == Generator.a_minus:
            if m + 1 <= n:
                columns[(m,)] = {(m + 1,): _ONE}
        elif gen == Generator.k:
            if zero:
                if m == 0:
                    columns[(m,)] = {(m,): _ONE}
            else:
                columns[(m,)] = {(m,): _coefficient(q_power(m))}
        elif m:
            columns[(m,)] = {(m,): _coefficient(m)}
    return FockOp((n,), columns, space.q_mode)


@dataclass(frozen=True)
class OscWord:
    """(a+)^f k^e (a-)^g with a Laurent coefficient."""
    f: int
    e: int
    g: int
    coeff: LaurentScalar = field(
        default_factory=lambda: LaurentScalar.constant(1)
    )

    def __post_init__(self) -> None:
        if self.f < 0 or self.g < 0 or self.e not in (0, 1):
            raise ValueError(
                f'Invalid word exponents ({self.f}, {self.e}, {self.g})'
            )

    @property
    def key(self) -> Tuple[int, int, int]:
        return (self.f, self.e, self.g)


def normalize_word(f: int, e: int, g: int,
                   coeff: LaurentScalar) -> List[OscWord]:
    """Rewrite (a+)^f k^e (a-)^g in the basis of matrix units
    (a+)^f k (a-)^g and pure shifts (a+)^f, (a-)^g."""
    if not coeff:
        return []
    if e == 1 or f == 0 or g == 0:
        return [OscWord(f, e, g, coeff)]
    if f >= g:
        return [OscWord(f - g, 0, 0, coeff)] + [
            OscWord(f - g + t, 1, t, -coeff) for t in range(g)
        ]
    return [OscWord(0, 0, g - f, coeff)] + [
        OscWord(t, 1, t + g - f, -coeff) for t in range(f)
    ]


def word_multiply(w1: OscWord, w2: OscWord) -> List[OscWord]:
    """Normal-form expansion of w1 * w2 in the 0-oscillator algebra.

    The result has at most min(F, G) + 1 words, where (a+)^F (a-)^G is the
    pure shift product left after cancelling; a single letter times a
    single letter gives at most two.
    """
    coeff = w1.coeff * w2.coeff
    middle = w1.g - w2.f
    if middle > 0:
        # (a-)^middle k^e2: a- k = 0
        if w2.e:
            return []
        return normalize_word(w1.f, w1.e, middle + w2.g, coeff)
    if middle < 0:
        # k^e1 (a+)^-middle: k a+ = 0
        if w1.e:
            return []
        return normalize_word(w1.f - middle, w2.e, w2.g, coeff)
    return normalize_word(w1.f, max(w1.e, w2.e), w2.g, coeff)


def word_trace_zero(word: OscWord) -> LaurentScalar:
    """Trace of a word over the untruncated q=0 Fock space."""
    if word.f != word.g:
        return LaurentScalar()
    if word.e:
        return word.coeff
    raise Divergent(f'Trace of (a+)^{word.f} (a-)^{word.g} diverges')


def word_matrix(word: OscWord, space: FockSpace) -> FockOp:
    op = osc_power(Generator.a_plus, word.f, space).compose(
        osc_power(Generator.k, word.e, space).compose(
            osc_power(Generator.a_minus, word.g, space)
        )
    )
    return op.scale(word.coeff)
