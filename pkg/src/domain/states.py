"""
Pure-state domain types: generic multiqudit states, spin-j states and Majorana constellations.
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

import attrs
import numpy as np
import numpy.typing as npt

from src.config import settings
from src.exceptions import DimensionError, DomainError, NotNormalizedError

__all__ = ['PureState', 'SpinState', 'StarConstellation', 'StarPoint', 'two_j_of']

# None stands for the point at infinity
type StarPoint = complex | None


def _check_norm(amplitudes: npt.NDArray[np.complex128]) -> None:
    norm = float(np.linalg.norm(amplitudes))
    if abs(norm - 1.0) > settings.NORM_TOL:
        raise NotNormalizedError(norm, settings.NORM_TOL)


@attrs.define(frozen=True)
class PureState:
    """Unit vector in C^D."""

    amplitudes: npt.NDArray[np.complex128] = attrs.field(
        eq=False, converter=lambda v: np.array(v, dtype=np.complex128)
    )

    def __attrs_post_init__(self) -> None:
        if self.amplitudes.ndim != 1 or self.amplitudes.size == 0:
            raise DimensionError('PureState amplitudes', 'non-empty vector', self.amplitudes.shape)
        _check_norm(self.amplitudes)
        self.amplitudes.flags.writeable = False

    @property
    def dim(self) -> int:
        return int(self.amplitudes.shape[0])

    @classmethod
    def normalized(cls, vector: npt.ArrayLike) -> PureState:
        """Normalize an arbitrary non-zero vector."""
        array = np.asarray(vector, dtype=np.complex128)
        norm = float(np.linalg.norm(array))
        if norm == 0.0:
            raise DomainError('Cannot normalize the zero vector')
        return cls(array / norm)

    @classmethod
    def basis(cls, dim: int, index: int = 0) -> PureState:
        vector = np.zeros(dim, dtype=np.complex128)
        vector[index] = 1.0
        return cls(vector)

    def density(self) -> npt.NDArray[np.complex128]:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def tensor(self, other: PureState) -> PureState:
        return PureState(np.kron(self.amplitudes, other.amplitudes))

    def overlap(self, other: PureState) -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@attrs.define(frozen=True)
class SpinState:
    """
    Spin-j state in the |j, m> basis ordered m = j, j-1, ..., -j.

    two_j stores 2j so half-integers stay exact.
    """

    two_j: int
    amplitudes: npt.NDArray[np.complex128] = attrs.field(
        eq=False, converter=lambda v: np.array(v, dtype=np.complex128)
    )

    def __attrs_post_init__(self) -> None:
        if self.two_j < 0:
            raise DomainError(f'2j must be a non-negative integer, got {self.two_j}')
        if self.amplitudes.shape != (self.two_j + 1,):
            raise DimensionError('SpinState amplitudes', (self.two_j + 1,), self.amplitudes.shape)
        _check_norm(self.amplitudes)
        self.amplitudes.flags.writeable = False

    @property
    def j(self) -> Fraction:
        return Fraction(self.two_j, 2)

    @property
    def dim(self) -> int:
        return self.two_j + 1

    @classmethod
    def from_j(cls, j: float | Fraction, amplitudes: npt.ArrayLike) -> SpinState:
        return cls(two_j=two_j_of(j), amplitudes=amplitudes)

    @classmethod
    def highest(cls, two_j: int, m_index: int = 0) -> SpinState:
        """Basis state |j, j - m_index>."""
        vector = np.zeros(two_j + 1, dtype=np.complex128)
        vector[m_index] = 1.0
        return cls(two_j=two_j, amplitudes=vector)


def two_j_of(j: float | Fraction) -> int:
    """2j as an int, rejecting values that are not half-integers."""
    doubled = Fraction(j) * 2
    if doubled.denominator != 1 or doubled < 0:
        raise DomainError(f'Spin must be a non-negative half-integer, got {j}')
    return int(doubled)


@attrs.define(frozen=True)
class StarConstellation:
    """Multiset of 2j points of the extended complex plane (None is infinity)."""

    points: tuple[StarPoint, ...] = attrs.field(converter=tuple)

    @property
    def two_j(self) -> int:
        return len(self.points)

    @property
    def infinite_count(self) -> int:
        return sum(1 for point in self.points if point is None)

    @property
    def finite(self) -> tuple[complex, ...]:
        return tuple(point for point in self.points if point is not None)

    @classmethod
    def from_roots(cls, roots: Sequence[complex], two_j: int) -> StarConstellation:
        """Pad finite polynomial roots with infinity up to 2j points."""
        if len(roots) > two_j:
            raise DimensionError('Majorana roots', f'at most {two_j}', len(roots))
        return cls((*(complex(root) for root in roots), *([None] * (two_j - len(roots)))))
