from functools import lru_cache
from itertools import product
from math import comb
from typing import List, Optional, Tuple

from pydantic import Field, validator

from ..qscalar import ONE, QRat, q2_factorial
from .base import FrozenModel
from .constants import QMode

Configuration = Tuple[Tuple[int, ...], ...]


class FockSpace(FrozenModel):
    """Truncated Fock space |0>..|cutoff> in generic or q=0 mode."""
    cutoff: int = Field(..., ge=0)
    q_mode: QMode = QMode.generic

    @property
    def is_zero_mode(self) -> bool:
        return self.q_mode == QMode.zero

    def pairing(self, m: int) -> QRat:
        """<m|m>: (q^2;q^2)_m generically, 1 at q=0."""
        if self.is_zero_mode:
            return ONE
        return QRat(q2_factorial(m))

    def with_cutoff(self, cutoff: int) -> 'FockSpace':
        return FockSpace(cutoff=cutoff, q_mode=self.q_mode)


class LocalState(FrozenModel):
    """Occupation of a single site: counts[a-1] particles of species a."""
    counts: Tuple[int, ...]

    @validator('counts')
    def _nonnegative(cls, value):
        if not value or any(c < 0 for c in value):
            raise ValueError(f'Invalid occupation {value}')
        return value

    @classmethod
    def parse(cls, text: str) -> 'LocalState':
        return cls(counts=tuple(int(c) for c in text.split(',')))

    @property
    def n(self) -> int:
        return len(self.counts)

    @property
    def size(self) -> int:
        return sum(self.counts)

    def __str__(self) -> str:
        return ','.join(str(c) for c in self.counts)


class Sector(FrozenModel):
    """Configurations of L sites on a ring with multiplicity[a-1] particles
    of species a.
    """
    n: int = Field(..., ge=1)
    L: int = Field(..., ge=1)
    multiplicity: Tuple[int, ...]

    @validator('multiplicity')
    def _matches_species(cls, value, values):
        n = values.get('n')
        if n is not None and len(value) != n:
            raise ValueError(
                f'Multiplicity {value} does not have {n} entries'
            )
        if any(m < 0 for m in value):
            raise ValueError(f'Negative multiplicity in {value}')
        return value

    @property
    def is_basic(self) -> bool:
        return all(m >= 1 for m in self.multiplicity)

    @property
    def ell(self) -> Tuple[int, ...]:
        """ell_a = m_a + ... + m_n."""
        return tuple(
            sum(self.multiplicity[a:]) for a in range(self.n)
        )

    @property
    def normalization(self) -> int:
        """Sum of the steady state probabilities."""
        total = 1
        for ell in self.ell:
            total *= comb(self.L - 1 + ell, ell)
        return total

    def configurations(self) -> List[Configuration]:
        return list(_configurations(self.n, self.L, self.multiplicity))


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _configurations(
    n: int, L: int, multiplicity: Tuple[int, ...]
) -> Tuple[Configuration, ...]:
    per_species = [list(_compositions(m, L)) for m in multiplicity]
    configs = set()
    for choice in product(*per_species):
        configs.add(
            tuple(
                tuple(choice[a][site] for a in range(n))
                for site in range(L)
            )
        )
    return tuple(sorted(configs))


def render_configuration(config: Configuration) -> str:
    return '|'.join(','.join(str(c) for c in site) for site in config)


def parse_configuration(text: str) -> Configuration:
    return tuple(
        tuple(int(c) for c in site.split(',')) for site in text.split('|')
    )


class LayerBoundary(FrozenModel):
    """Boundary labels of the m x n layer. `a`/`i` run over rows from the
    top, `b`/`j` over columns from the left. `a` and `j` may be left free.
    """
    m: int = Field(..., ge=1)
    n: int = Field(..., ge=1)
    a: Optional[Tuple[int, ...]] = None
    b: Tuple[int, ...]
    i: Tuple[int, ...]
    j: Optional[Tuple[int, ...]] = None

    @validator('a', 'i')
    def _row_length(cls, value, values, field):
        if value is not None and len(value) != values.get('m'):
            raise ValueError(f'{field.name}={value} needs m entries')
        if value is not None and any(v < 0 for v in value):
            raise ValueError(f'Negative label in {field.name}={value}')
        return value

    @validator('b', 'j')
    def _column_length(cls, value, values, field):
        if value is not None and len(value) != values.get('n'):
            raise ValueError(f'{field.name}={value} needs n entries')
        if value is not None and any(v < 0 for v in value):
            raise ValueError(f'Negative label in {field.name}={value}')
        return value

    @property
    def is_fixed(self) -> bool:
        return self.a is not None and self.j is not None

    @property
    def conserves(self) -> bool:
        return sum(self.a) + sum(self.b) == sum(self.i) + sum(self.j)
