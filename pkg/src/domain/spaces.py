"""
Hilbert-space descriptors.

A HilbertSpec fixes the local dimension d, the number of qudits n and the averaging
flavor. The flavor selects which of the three intrinsic closed forms applies:

- odd:        odd total dimension (multiqudit, any odd d)
- even:       even total dimension treated with the qudit WH group
- multiqubit: d = 2, the n-qubit Pauli group

Index conventions used everywhere:
- basis index k = sum_i k_i d^(n-1-i) (qudit 0 most significant)
- symplectic index a = (x_1, z_1, ..., x_n, z_n), flattened row-major over its 2n entries
"""

from __future__ import annotations

import enum
import sys

import attrs

from src.exceptions import DomainError, FlavorMismatchError

__all__ = ['Flavor', 'HilbertSpec', 'is_power_of_two']


def is_power_of_two(value: int) -> bool:
    return value >= 1 and value & (value - 1) == 0


class Flavor(enum.StrEnum):
    """Averaging case for closed-form Haar averages."""

    ODD = 'odd'
    EVEN = 'even'
    MULTIQUBIT = 'multiqubit'

    @classmethod
    def default_for(cls, dim: int) -> Flavor:
        """Odd for odd dimensions, multiqubit for powers of two, even otherwise."""
        if dim % 2 == 1:
            return cls.ODD
        if is_power_of_two(dim):
            return cls.MULTIQUBIT
        return cls.EVEN


@attrs.define(frozen=True)
class HilbertSpec:
    """
    Multiqudit Hilbert space (C^d)^{tensor n} with an averaging flavor.

    Immutable; safe to share across threads.
    """

    d: int
    n: int
    flavor: Flavor = attrs.field(converter=Flavor)

    def __attrs_post_init__(self) -> None:
        if self.d < 2:
            raise DomainError(f'Local dimension must be >= 2, got d={self.d}')
        if self.n < 1:
            raise DomainError(f'Number of qudits must be >= 1, got n={self.n}')
        # d^(2n) indexes every displacement; keep it inside int64
        if self.d ** (2 * self.n) >= sys.maxsize:
            raise DomainError(f'd^(2n) = {self.d}^{2 * self.n} overflows the index range')
        if self.flavor is Flavor.MULTIQUBIT and self.d != 2:
            raise FlavorMismatchError(self.flavor, f'multiqubit requires d = 2, got d={self.d}')
        if self.flavor is Flavor.ODD and self.dim % 2 == 0:
            raise FlavorMismatchError(self.flavor, f'total dimension {self.dim} is even')
        if self.flavor is Flavor.EVEN and self.dim % 2 == 1:
            raise FlavorMismatchError(self.flavor, f'total dimension {self.dim} is odd')

    @property
    def dim(self) -> int:
        """Total dimension D = d^n."""
        return int(self.d**self.n)

    @property
    def num_indices(self) -> int:
        """Number of reduced symplectic indices, d^(2n)."""
        return int(self.d ** (2 * self.n))

    @property
    def tau_order(self) -> int:
        """Multiplicative order of tau: 2d for even d, d for odd d."""
        return 2 * self.d if self.d % 2 == 0 else self.d

    @property
    def two_torsion(self) -> int:
        """Number of indices a with 2a = 0 mod d."""
        return 4**self.n if self.d % 2 == 0 else 1

    @classmethod
    def natural(cls, d: int, n: int = 1) -> HilbertSpec:
        """Spec whose flavor follows from (d, n): odd, multiqubit for d = 2, even otherwise."""
        if d == 2:
            return cls(d, n, Flavor.MULTIQUBIT)
        return cls(d, n, Flavor.ODD if (d**n) % 2 == 1 else Flavor.EVEN)

    @classmethod
    def from_dimension(cls, dim: int, flavor: Flavor | str | None = None) -> HilbertSpec:
        """
        Spec for a space described only by its dimension.

        Multiqubit flavor maps to (2, log2 dim); qudit flavors map to (dim, 1).

        Raises:
            FlavorMismatchError: If multiqubit is requested for a non power of two
        """
        resolved = Flavor.default_for(dim) if flavor is None else Flavor(flavor)
        if resolved is Flavor.MULTIQUBIT:
            if not is_power_of_two(dim) or dim < 2:
                raise FlavorMismatchError(resolved, f'dimension {dim} is not a power of two >= 2')
            return cls(2, dim.bit_length() - 1, resolved)
        return cls(dim, 1, resolved)

    def describe(self) -> str:
        return f'd={self.d}, n={self.n}, D={self.dim}, flavor={self.flavor.value}'
