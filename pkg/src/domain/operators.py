"""
Operator-valued domain types.

Architecture (bottom-up):
1. GeneralizedPermOp - sparse displacement operator (permutation + phases)
2. CharFunction - expansion coefficients of an operator in the displacement basis
3. Embedding - isometry from a d_S-dimensional space into the big space
4. SubspaceProjector - orthogonal projector onto the embedded subspace

All arrays are stored read-only; instances are immutable and thread-safe.
"""

from __future__ import annotations

import attrs
import numpy as np
import numpy.typing as npt

from src.config import settings
from src.domain.spaces import HilbertSpec
from src.exceptions import DimensionError, InternalError, NotAnIsometryError, NotAProjectorError

__all__ = [
    'CharFunction',
    'ComplexArray',
    'Embedding',
    'GeneralizedPermOp',
    'IntArray',
    'SubspaceProjector',
]

type ComplexArray = npt.NDArray[np.complex128]
type IntArray = npt.NDArray[np.int64]
type FloatArray = npt.NDArray[np.float64]


def _frozen[A: np.ndarray](array: A) -> A:
    array.flags.writeable = False
    return array


def _complex_copy(value: npt.ArrayLike) -> ComplexArray:
    return np.array(value, dtype=np.complex128)


def _int_copy(value: npt.ArrayLike) -> IntArray:
    return np.array(value, dtype=np.int64)


# ==============================================================================
# Displacement operators
# ==============================================================================


@attrs.define(frozen=True)
class GeneralizedPermOp:
    """
    Generalized permutation matrix: column k has a single entry phase[k] in row perm[k].

    Acting on a basis state, |k> -> phase[k] |perm[k]>.
    """

    perm: IntArray = attrs.field(eq=False, converter=_int_copy)
    phase: ComplexArray = attrs.field(eq=False, converter=_complex_copy)

    def __attrs_post_init__(self) -> None:
        if self.perm.shape != self.phase.shape or self.perm.ndim != 1:
            raise DimensionError('GeneralizedPermOp arrays', self.perm.shape, self.phase.shape)
        dim = self.perm.shape[0]
        if not np.array_equal(np.sort(self.perm), np.arange(dim)):
            raise InternalError('GeneralizedPermOp.perm is not a bijection')
        if not np.allclose(np.abs(self.phase), 1.0, atol=1e-12, rtol=0.0):
            raise InternalError('GeneralizedPermOp phases are not unit modulus')
        _frozen(self.perm)
        _frozen(self.phase)

    @property
    def dim(self) -> int:
        return int(self.perm.shape[0])

    def apply(self, vector: ComplexArray) -> ComplexArray:
        """Apply to a vector (or to the columns of a matrix)."""
        out = np.zeros_like(vector, dtype=np.complex128)
        if vector.ndim == 1:
            out[self.perm] = self.phase * vector
        else:
            out[self.perm] = self.phase[:, None] * vector
        return out

    def to_dense(self) -> ComplexArray:
        matrix = np.zeros((self.dim, self.dim), dtype=np.complex128)
        matrix[self.perm, np.arange(self.dim)] = self.phase
        return matrix

    def dagger(self) -> GeneralizedPermOp:
        inverse = np.empty_like(self.perm)
        inverse[self.perm] = np.arange(self.dim)
        return GeneralizedPermOp(perm=inverse, phase=np.conj(self.phase[inverse]))


# ==============================================================================
# Characteristic function
# ==============================================================================


@attrs.define(frozen=True)
class CharFunction:
    """
    chi_a = Tr(D_a^dag O) / D for every reduced symplectic index a (flat interleaved order).

    subspace_dim is set when O is a projector.
    """

    spec: HilbertSpec
    values: ComplexArray = attrs.field(eq=False, converter=_complex_copy)
    subspace_dim: int | None = None

    def __attrs_post_init__(self) -> None:
        if self.values.shape != (self.spec.num_indices,):
            raise DimensionError('CharFunction values', (self.spec.num_indices,), self.values.shape)
        _frozen(self.values)

    def support(self, cutoff: float | None = None) -> IntArray:
        """Flat indices with |chi| above the cutoff."""
        threshold = settings.SUPPORT_CUTOFF if cutoff is None else cutoff
        return np.flatnonzero(np.abs(self.values) > threshold).astype(np.int64)


# ==============================================================================
# Embeddings and projectors
# ==============================================================================


@attrs.define(frozen=True)
class Embedding:
    """Column-orthonormal d_B x d_S matrix mapping the small space into the big one."""

    big: HilbertSpec
    columns: ComplexArray = attrs.field(eq=False, converter=_complex_copy)

    def __attrs_post_init__(self) -> None:
        if self.columns.ndim != 2 or self.columns.shape[0] != self.big.dim:
            raise DimensionError('Embedding columns', f'({self.big.dim}, d_S)', self.columns.shape)
        small = self.columns.shape[1]
        if not 1 <= small <= self.big.dim:
            raise DimensionError('Embedding small dimension', f'1..{self.big.dim}', small)
        gram = self.columns.conj().T @ self.columns
        deviation = float(np.max(np.abs(gram - np.eye(small))))
        if deviation > settings.ISOMETRY_TOL:
            raise NotAnIsometryError(deviation, settings.ISOMETRY_TOL)
        _frozen(self.columns)

    @property
    def small_dim(self) -> int:
        return int(self.columns.shape[1])

    def apply(self, small_state: ComplexArray) -> ComplexArray:
        return np.asarray(self.columns @ small_state, dtype=np.complex128)

    def projector(self) -> SubspaceProjector:
        matrix = self.columns @ self.columns.conj().T
        return SubspaceProjector(big=self.big, matrix=matrix, rank=self.small_dim)

    def on(self, big: HilbertSpec) -> Embedding:
        if big.dim != self.big.dim:
            raise DimensionError('Embedding reinterpretation', self.big.dim, big.dim)
        return Embedding(big=big, columns=self.columns)

    @classmethod
    def canonical(cls, big: HilbertSpec, small_dim: int) -> Embedding:
        """First small_dim computational basis vectors."""
        return cls(big=big, columns=np.eye(big.dim, small_dim, dtype=np.complex128))


@attrs.define(frozen=True)
class SubspaceProjector:
    """Orthogonal projector of rank d_S on the big space; Pi^2 = Pi = Pi^dag."""

    big: HilbertSpec
    matrix: ComplexArray = attrs.field(eq=False, converter=_complex_copy)
    rank: int

    def __attrs_post_init__(self) -> None:
        dim = self.big.dim
        if self.matrix.shape != (dim, dim):
            raise DimensionError('Projector matrix', (dim, dim), self.matrix.shape)
        if not 1 <= self.rank <= dim:
            raise DimensionError('Projector rank', f'1..{dim}', self.rank)
        tol = settings.PROJECTOR_TOL
        hermiticity = float(np.max(np.abs(self.matrix - self.matrix.conj().T)))
        if hermiticity > tol:
            raise NotAProjectorError('hermiticity', hermiticity, tol)
        idempotency = float(np.max(np.abs(self.matrix @ self.matrix - self.matrix)))
        if idempotency > tol:
            raise NotAProjectorError('idempotency', idempotency, tol)
        trace_gap = abs(float(np.trace(self.matrix).real) - self.rank)
        if trace_gap > 10 * tol:
            raise NotAProjectorError('trace', trace_gap, 10 * tol)
        _frozen(self.matrix)

    @classmethod
    def from_matrix(cls, big: HilbertSpec, matrix: npt.ArrayLike) -> SubspaceProjector:
        """Validate a raw matrix as a projector; the rank is read off the trace."""
        array = np.asarray(matrix, dtype=np.complex128)
        rank = round(float(np.trace(array).real))
        return cls(big=big, matrix=array, rank=rank)

    @classmethod
    def identity(cls, big: HilbertSpec) -> SubspaceProjector:
        return cls(big=big, matrix=np.eye(big.dim, dtype=np.complex128), rank=big.dim)

    def basis(self) -> ComplexArray:
        """Orthonormal basis of the range (d_B x rank), from the top eigenvectors."""
        _, vectors = np.linalg.eigh(self.matrix)
        return np.ascontiguousarray(vectors[:, -self.rank :])

    def embedding(self) -> Embedding:
        return Embedding(big=self.big, columns=self.basis())

    def on(self, big: HilbertSpec) -> SubspaceProjector:
        """Same matrix read with another WH structure of equal dimension (e.g. 3 qubits as one 8-dim qudit)."""
        if big.dim != self.big.dim:
            raise DimensionError('Projector reinterpretation', self.big.dim, big.dim)
        return SubspaceProjector(big=big, matrix=self.matrix, rank=self.rank)
