"""
Stabilizer-code domain types.

IsotropicSet: additive subgroup S of Z_d^{2n} with [a, b] = 0 mod d on all pairs.
PhaseMap: f: S -> Z_d such that {omega^{f(a)} D_a : a in S} is a group, i.e.

    f(a + b) = f(a) + f(b) + k(a, b)   (mod d)

where D_a D_b = omega^{k(a, b)} D_{a+b}. The cocycle k vanishes for odd d, so f is then an
ordinary homomorphism. For even d it can be d/2 on some pairs ([[4,1,2]] needs that).
"""

from __future__ import annotations

import attrs
import numpy as np

from src.domain.operators import IntArray
from src.domain.spaces import HilbertSpec
from src.exceptions import CodeStructureError, DimensionError, IsotropyError, PhaseConsistencyError
from src.services.wh import canonicalize_sign_exponents, flat_index, symplectic_forms, tau_to_omega_array

__all__ = ['IsotropicSet', 'PhaseMap']


@attrs.define(frozen=True)
class IsotropicSet:
    """
    Totally isotropic subgroup of Z_d^{2n}.

    elements is (|S| x 2n), sorted by flat index, zero first.
    """

    spec: HilbertSpec
    elements: IntArray = attrs.field(eq=False, converter=lambda v: np.array(v, dtype=np.int64))
    generators: tuple[tuple[int, ...], ...] = ()

    def __attrs_post_init__(self) -> None:
        d, n = self.spec.d, self.spec.n
        if self.elements.ndim != 2 or self.elements.shape[1] != 2 * n:
            raise DimensionError('IsotropicSet elements', f'(m, {2 * n})', self.elements.shape)
        if np.any(self.elements < 0) or np.any(self.elements >= d):
            raise CodeStructureError('IsotropicSet components must lie in [0, d)')
        flats = np.asarray(flat_index(self.elements, d))
        if flats.size == 0 or flats[0] != 0:
            raise CodeStructureError('IsotropicSet must contain the zero index')
        if np.any(np.diff(flats) <= 0):
            raise CodeStructureError('IsotropicSet elements must be sorted and distinct')
        if (d**n) % self.size:
            raise CodeStructureError(f'|S| = {self.size} does not divide d^n = {d**n}')
        sums = np.asarray(flat_index((self.elements[:, None, :] + self.elements[None, :, :]) % d, d))
        if not np.all(np.isin(sums, flats)):
            raise CodeStructureError('IsotropicSet is not closed under addition mod d')
        forms = symplectic_forms(self.elements[:, None, :], self.elements[None, :, :], d) % d
        bad = np.argwhere(forms != 0)
        if bad.size:
            i, j = bad[0]
            raise IsotropyError(
                tuple(int(v) for v in self.elements[i]),
                tuple(int(v) for v in self.elements[j]),
                int(symplectic_forms(self.elements[i], self.elements[j], d)),
                d,
            )
        self.elements.flags.writeable = False

    @property
    def size(self) -> int:
        return int(self.elements.shape[0])

    @property
    def codespace_dim(self) -> int:
        """d_S = d^n / |S|."""
        return self.spec.dim // self.size

    @property
    def flats(self) -> IntArray:
        flats = np.asarray(flat_index(self.elements, self.spec.d), dtype=np.int64)
        flats.flags.writeable = False
        return flats

    def position(self, flat: int) -> int:
        """Row of the element with the given flat index."""
        row = int(np.searchsorted(self.flats, flat))
        if row >= self.size or self.flats[row] != flat:
            raise CodeStructureError(f'flat index {flat} is not in the set')
        return row

    def contains(self, a: IntArray) -> bool:
        flat = flat_index(np.asarray(a, dtype=np.int64) % self.spec.d, self.spec.d)
        return bool(np.isin(flat, self.flats))

    @property
    def cocycle(self) -> IntArray:
        """k[i, j] with D_{a_i} D_{a_j} = omega^{k[i, j]} D_{a_i + a_j}."""
        d = self.spec.d
        left = self.elements[:, None, :]
        right = self.elements[None, :, :]
        sign, _ = canonicalize_sign_exponents(left + right, d)
        table = tau_to_omega_array(symplectic_forms(left, right, d) + sign, d)
        table.flags.writeable = False
        return table

    @property
    def phase_free(self) -> bool:
        """True when the trivial phase map makes the displacements a group (always for odd d)."""
        return not bool(np.any(self.cocycle))

    @property
    def all_even(self) -> bool:
        """Every component even (S inside 2 Z_d^{2n})."""
        return not bool(np.any(self.elements % 2))

    def describe(self) -> str:
        return f'|S|={self.size} on {self.spec.describe()}, d_S={self.codespace_dim}'


@attrs.define(frozen=True)
class PhaseMap:
    """Phase exponents f(a) mod d aligned with isotropic.elements."""

    isotropic: IsotropicSet
    values: IntArray = attrs.field(eq=False, converter=lambda v: np.array(v, dtype=np.int64))

    def __attrs_post_init__(self) -> None:
        d = self.isotropic.spec.d
        if self.values.shape != (self.isotropic.size,):
            raise DimensionError('PhaseMap values', (self.isotropic.size,), self.values.shape)
        if np.any(self.values < 0) or np.any(self.values >= d):
            raise PhaseConsistencyError('PhaseMap values must lie in [0, d)')
        if self.values[0] != 0:
            raise PhaseConsistencyError('PhaseMap must send the zero index to 0')
        elements = self.isotropic.elements
        sums = np.asarray(flat_index((elements[:, None, :] + elements[None, :, :]) % d, d))
        rows = np.searchsorted(self.isotropic.flats, sums)
        expected = (self.values[:, None] + self.values[None, :] + self.isotropic.cocycle) % d
        if np.any(self.values[rows] != expected):
            raise PhaseConsistencyError(
                'Phase map is inconsistent with D_a D_b = omega^k D_{a+b}; the phased displacements are not a group'
            )
        self.values.flags.writeable = False

    @classmethod
    def trivial(cls, isotropic: IsotropicSet) -> PhaseMap:
        """
        f = 0.

        Raises:
            PhaseConsistencyError: If the set is not phase free
        """
        return cls(isotropic=isotropic, values=np.zeros(isotropic.size, dtype=np.int64))

    @property
    def is_trivial(self) -> bool:
        return not bool(np.any(self.values))
