"""
Haar-averaged stabilizer entropies.

Intrinsic ASE (average linear SE of Haar states in their own space) has closed forms; the
extrinsic ASE of a subspace with projector Pi on a d_B-dimensional host is

    1 - d_B * binom(d_S + 3, 4)^{-1} * Tr(Q Pi^{x4} Pi_sym4)

with three exact evaluators of the trace:

- characteristic: five quartic sums over the characteristic function of Pi, restricted
  to its support; cheap for stabilizer codespaces and small dense projectors
- compressed: with an orthonormal frame V of the range and A_a = V^dag D_a V, the trace is
  (1 / 24 d_B^2) sum_a S(A_a), S summing the 24 permutation-cycle trace products of
  (A, A, A^dag, A^dag); cost O(d_B^2 d_S^3), used for large supports and by the optimizer
- dense oracle: materializes Q, Pi^{x4} and the 24 permutation operators (d_B <= 6)
"""

from __future__ import annotations

import enum
import itertools
import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
import numpy.typing as npt

from src.config import settings
from src.domain.operators import CharFunction, ComplexArray, Embedding, SubspaceProjector
from src.domain.spaces import Flavor, HilbertSpec
from src.exceptions import (
    BadCharacterError,
    DimensionError,
    DomainError,
    EmptySectorError,
    FlavorMismatchError,
    NotAGroupError,
    NumericalIntegrityError,
    SizeGuardError,
)
from src.services.magic import char_function, eval_char_many
from src.services.wh import all_indices, displacement_dense, shift_table, symplectic_forms, tau_powers, unflat_index

__all__ = [
    'ExtrinsicMethod',
    'ase_gap',
    'dense_average_oracle',
    'expected_gap_exact',
    'expected_gap_random_subspace',
    'extrinsic_ase',
    'extrinsic_ase_of_embedding',
    'intrinsic_ase',
    'intrinsic_ase_exact',
    'invariant_projector',
    'isotypic_projector',
    'q_sym_trace',
    'q_sym_trace_exact',
    'random_subspace_gap_curve',
    'sym_trace',
]

logger = logging.getLogger(__name__)

GROUP_TOL = 1e-8
_BATCH_ENTRIES = 1 << 22


class ExtrinsicMethod(enum.StrEnum):
    AUTO = 'auto'
    CHARACTERISTIC = 'characteristic'
    COMPRESSED = 'compressed'


# ==============================================================================
# Closed forms
# ==============================================================================


def _resolve_small(small: HilbertSpec | int, flavor: Flavor | str | None) -> HilbertSpec | None:
    """Spec for the small space; None for the trivial one-dimensional space."""
    if isinstance(small, HilbertSpec):
        if flavor is not None and Flavor(flavor) is not small.flavor:
            raise FlavorMismatchError(Flavor(flavor), f'spec already carries flavor {small.flavor.value}')
        return small
    if small < 1:
        raise DomainError(f'Subspace dimension must be >= 1, got {small}')
    if small == 1:
        return None
    if flavor is None:
        raise DomainError(f'An averaging flavor is required for a bare dimension d_S={small}')
    return HilbertSpec.from_dimension(small, flavor)


def _two_torsion_count(spec: HilbertSpec) -> int:
    """Number of displacements D_a with D_{2a} proportional to identity, for the flavor's WH group."""
    if spec.flavor is Flavor.ODD:
        return 1
    if spec.flavor is Flavor.MULTIQUBIT:
        return spec.dim**2
    # even flavor on d = 2 reads the space as one 2^n-dimensional qudit
    return 4 if spec.n == 1 or spec.d == 2 else 4**spec.n


def q_sym_trace_exact(spec: HilbertSpec) -> Fraction:
    """
    Tr(Q Pi_sym4) on the full space.

    (D+1)(D+3)/8 odd, (D+2)^2/8 even qudit, (D+1)(D+2)/6 multiqubit; all are
    (3D^2 + 12D + 8 + N)/24 with N the two-torsion count, which also covers even multiqudits.
    """
    dim = spec.dim
    return Fraction(3 * dim * dim + 12 * dim + 8 + _two_torsion_count(spec), 24)


def q_sym_trace(spec: HilbertSpec) -> float:
    return float(q_sym_trace_exact(spec))


def intrinsic_ase_exact(small: HilbertSpec | int, flavor: Flavor | str | None = None) -> Fraction:
    """
    Average linear SE of Haar-random states of a space, as a fraction.

    Odd: 1 - 3/(D+2). Even qudit: 1 - 3(D+2)/((D+1)(D+3)). Multiqubit: 1 - 4/(D+3).

    Args:
        small: Spec, or a bare dimension together with an explicit flavor
        flavor: Required for bare dimensions > 1

    Raises:
        FlavorMismatchError: If the flavor does not fit the dimension
    """
    spec = _resolve_small(small, flavor)
    if spec is None:
        return Fraction(0)
    dim = spec.dim
    return 1 - dim * q_sym_trace_exact(spec) / math.comb(dim + 3, 4)


def intrinsic_ase(small: HilbertSpec | int, flavor: Flavor | str | None = None) -> float:
    return float(intrinsic_ase_exact(small, flavor))


def expected_gap_exact(big: HilbertSpec, small_dim: int, small_flavor: Flavor | str | None) -> Fraction:
    """Mean ASE gap over Haar-random d_S-dimensional subspaces: intrinsic(big) - intrinsic(d_S)."""
    if not 1 <= small_dim <= big.dim:
        raise DimensionError('subspace dimension', f'1..{big.dim}', small_dim)
    if small_dim == big.dim:
        return Fraction(0)
    return intrinsic_ase_exact(big) - intrinsic_ase_exact(small_dim, small_flavor)


def expected_gap_random_subspace(big: HilbertSpec, small_dim: int, small_flavor: Flavor | str | None) -> float:
    return float(expected_gap_exact(big, small_dim, small_flavor))


def random_subspace_gap_curve(
    big: HilbertSpec,
    flavor_for: Callable[[int], Flavor] = Flavor.default_for,
) -> list[tuple[int, Fraction]]:
    """(d_S, expected gap) for d_S = 1 .. d_B; flavor_for picks the small-space flavor per d_S."""
    return [(small, expected_gap_exact(big, small, flavor_for(small))) for small in range(1, big.dim + 1)]


# ==============================================================================
# Characteristic-function evaluator
# ==============================================================================


def _chunks(total: int, size: int) -> list[range]:
    return [range(start, min(start + size, total)) for start in range(0, total, size)]


def _parallel_sum(task: Callable[[range], complex], chunks: Sequence[range], threads: int) -> complex:
    """Sum task(chunk) over chunks; the reduction runs in chunk order."""
    if threads <= 1 or len(chunks) <= 1:
        return sum((task(chunk) for chunk in chunks), 0j)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(task, chunks), 0j)


def _characteristic_sym_trace(cf: CharFunction, threads: int) -> complex:
    spec = cf.spec
    d, dim = spec.d, spec.dim
    powers = tau_powers(d)
    support = cf.support()
    idx = unflat_index(support, d, 2 * spec.n)
    chi = cf.values[support]
    abs2 = np.abs(chi) ** 2
    m = support.size
    forms = symplectic_forms(idx[:, None, :], idx[None, :, :], d)

    first = 3 * dim * dim * np.sum(abs2**2)
    # omega^{[a,b]} = tau^{2[a,b]}
    second = 6 * dim * np.sum(abs2[:, None] * abs2[None, :] * powers[(2 * forms) % (2 * d)])
    shifted = np.conj(eval_char_many(cf, idx[None, :, :] + 2 * idx[:, None, :]))
    third = 6 * dim * np.sum((chi**2)[:, None] * chi[None, :] * shifted)

    pair = chi[:, None] * chi[None, :]

    def fourth_chunk(rows: range) -> complex:
        total = 0j
        for i in rows:
            raw = idx[i] + idx[:, None, :] + idx[None, :, :]
            exponents = (forms[i][:, None] - forms[i][None, :] - forms.T) % (2 * d)
            total += chi[i] * np.sum(pair * np.conj(eval_char_many(cf, raw)) * powers[exponents])
        return total

    everything = all_indices(spec)

    def fifth_chunk(rows: range) -> complex:
        block = everything[rows.start : rows.stop]
        values = eval_char_many(cf, idx[None, :, :] - 2 * block[:, None, :])
        return complex(np.sum(np.abs(values.conj() @ chi) ** 2))

    row_size = max(1, _BATCH_ENTRIES // max(1, m * m))
    fourth = 8 * _parallel_sum(fourth_chunk, _chunks(m, row_size), threads)
    fifth = _parallel_sum(fifth_chunk, _chunks(everything.shape[0], max(1, _BATCH_ENTRIES // max(1, m))), threads)
    logger.debug('characteristic sums over support %d of %d', m, spec.num_indices)
    return complex(first + second + third + fourth + fifth) / 24


# ==============================================================================
# Compressed-frame evaluator
# ==============================================================================


def _cycle_trace_sum(blocks: ComplexArray) -> float:
    """sum over a batch of S(A) for A, A, A^dag, A^dag (global phases of A cancel)."""
    adjoint = np.conj(np.swapaxes(blocks, -1, -2))
    square = blocks @ blocks
    gram = blocks @ adjoint
    t_a = np.trace(blocks, axis1=-2, axis2=-1)
    t_a2 = np.trace(square, axis1=-2, axis2=-1)
    t_ab = np.trace(gram, axis1=-2, axis2=-1).real
    t_a2b = np.trace(square @ adjoint, axis1=-2, axis2=-1)
    abs_a2 = np.abs(t_a) ** 2
    total = (
        abs_a2**2
        + 2 * np.real(t_a2 * np.conj(t_a) ** 2)
        + 4 * t_ab * abs_a2
        + np.abs(t_a2) ** 2
        + 2 * t_ab**2
        + 8 * np.real(t_a2b * np.conj(t_a))
        + 4 * np.sum(np.abs(square) ** 2, axis=(-2, -1))
        + 2 * np.sum(np.abs(gram) ** 2, axis=(-2, -1))
    )
    return float(np.sum(total))


def _compressed_sym_trace(big: HilbertSpec, frame: ComplexArray, threads: int) -> float:
    d, n, dim = big.d, big.n, big.dim
    small = frame.shape[1]
    shifts = shift_table(d, n)
    grid = (d,) * n

    def chunk_sum(rows: range) -> complex:
        xs = np.arange(rows.start, rows.stop)
        # W[x, k, i, j] = conj(V[k + x, i]) V[k, j]; summing omega^{z.k} over k gives A_{x,z} up to phase
        weights = np.conj(frame[shifts[xs]])[:, :, :, None] * frame[None, :, None, :]
        spectrum = np.fft.ifftn(weights.reshape(len(xs), *grid, small, small), axes=tuple(range(1, n + 1))) * dim
        return complex(_cycle_trace_sum(spectrum.reshape(len(xs) * dim, small, small)))

    rows_per_chunk = max(1, _BATCH_ENTRIES // (dim * small * small))
    total = _parallel_sum(chunk_sum, _chunks(dim, rows_per_chunk), threads).real
    return total / (24 * dim * dim)


# ==============================================================================
# Extrinsic ASE
# ==============================================================================


def sym_trace(
    projector: SubspaceProjector,
    method: ExtrinsicMethod | str = ExtrinsicMethod.AUTO,
    threads: int | None = None,
) -> float:
    """
    Tr(Q Pi^{x4} Pi_sym4) for the projector's WH structure.

    Raises:
        NumericalIntegrityError: If the characteristic sums leave an imaginary residue
    """
    workers = threads or settings.THREADS
    resolved = ExtrinsicMethod(method)
    cf: CharFunction | None = None
    if resolved is not ExtrinsicMethod.COMPRESSED:
        cf = char_function(projector.big, projector.matrix, subspace_dim=projector.rank)
        if resolved is ExtrinsicMethod.AUTO:
            support_size = cf.support().size
            resolved = (
                ExtrinsicMethod.CHARACTERISTIC
                if support_size <= settings.CHARACTERISTIC_SUPPORT_LIMIT
                else ExtrinsicMethod.COMPRESSED
            )
    if resolved is ExtrinsicMethod.COMPRESSED:
        return _compressed_sym_trace(projector.big, projector.basis(), workers)
    assert cf is not None
    value = _characteristic_sym_trace(cf, workers)
    if abs(value.imag) > settings.IMAGINARY_RESIDUE_TOL:
        raise NumericalIntegrityError(f'Characteristic sums have imaginary residue {value.imag:.3e}')
    return value.real


def _from_sym_trace(big_dim: int, small_dim: int, trace: float) -> float:
    return 1.0 - big_dim * trace / math.comb(small_dim + 3, 4)


def extrinsic_ase(
    projector: SubspaceProjector,
    method: ExtrinsicMethod | str = ExtrinsicMethod.AUTO,
    threads: int | None = None,
) -> float:
    """
    Average linear SE, measured on the host, of Haar-random states of the subspace.

    Args:
        projector: Validated projector; its big spec fixes the WH group
        method: auto, characteristic or compressed (all exact)
        threads: Worker budget (defaults to settings.THREADS)
    """
    trace = sym_trace(projector, method, threads)
    return _from_sym_trace(projector.big.dim, projector.rank, trace)


def extrinsic_ase_of_embedding(embedding: Embedding, threads: int | None = None) -> float:
    """Compressed evaluator straight from an isometry (no projector round trip)."""
    trace = _compressed_sym_trace(embedding.big, embedding.columns, threads or settings.THREADS)
    return _from_sym_trace(embedding.big.dim, embedding.small_dim, trace)


def ase_gap(
    projector: SubspaceProjector,
    small_flavor: Flavor | str,
    method: ExtrinsicMethod | str = ExtrinsicMethod.AUTO,
    threads: int | None = None,
) -> float:
    """Extrinsic ASE minus the intrinsic ASE of a d_S-dimensional space of the given flavor."""
    intrinsic = intrinsic_ase_exact(projector.rank, small_flavor)
    return extrinsic_ase(projector, method, threads) - float(intrinsic)


# ==============================================================================
# Dense oracle
# ==============================================================================


def dense_average_oracle(projector: SubspaceProjector) -> float:
    """
    Extrinsic ASE by explicit contraction of Q, Pi^{x4} and the 24 permutation operators.

    Raises:
        SizeGuardError: If d_B exceeds DENSE_ORACLE_MAX_DIM
    """
    big = projector.big
    dim = big.dim
    if dim > settings.DENSE_ORACLE_MAX_DIM:
        raise SizeGuardError('dense oracle dimension', dim, settings.DENSE_ORACLE_MAX_DIM)
    pi = projector.matrix
    pi4 = np.kron(np.kron(pi, pi), np.kron(pi, pi))
    q = np.zeros_like(pi4)
    for index in all_indices(big):
        op = displacement_dense(big, index)
        adjoint = op.conj().T
        q += np.kron(np.kron(op, op), np.kron(adjoint, adjoint))
    q /= dim * dim
    digits = np.indices((dim,) * 4).reshape(4, -1)
    weights = dim ** np.arange(3, -1, -1)
    total = 0j
    for sigma in itertools.permutations(range(4)):
        image = weights @ digits[list(sigma)]
        # Tr(Q Pi4 T_sigma) with T_sigma |r> = |image[r]>
        total += np.sum(q * pi4[:, image].T)
    return _from_sym_trace(dim, projector.rank, (total / 24).real)


# ==============================================================================
# Group projectors
# ==============================================================================


def _stack_group(group_elements: Sequence[npt.ArrayLike]) -> ComplexArray:
    elements = np.stack([np.asarray(g, dtype=np.complex128) for g in group_elements])
    if elements.ndim != 3 or elements.shape[1] != elements.shape[2]:
        raise DimensionError('group elements', '(|G|, D, D)', elements.shape)
    for i in range(elements.shape[0]):
        products = elements[i] @ elements
        for j in range(elements.shape[0]):
            deviation = np.max(np.abs(elements - products[j]), axis=(1, 2))
            if deviation.min() > GROUP_TOL:
                raise NotAGroupError(i, j)
    return elements


def _projector_from_sum(matrix: ComplexArray, big: HilbertSpec | None, context: str) -> SubspaceProjector:
    dim = matrix.shape[0]
    spec = big if big is not None else HilbertSpec.from_dimension(dim)
    if np.max(np.abs(matrix @ matrix - matrix)) > GROUP_TOL:
        raise BadCharacterError(f'{context} projector is not idempotent')
    rank = round(float(np.trace(matrix).real))
    if rank == 0:
        raise EmptySectorError(context, f'a {dim}-dimensional representation')
    return SubspaceProjector(big=spec, matrix=matrix, rank=rank)


def invariant_projector(group_elements: Sequence[npt.ArrayLike], big: HilbertSpec | None = None) -> SubspaceProjector:
    """
    Pi_0 = (1/|G|) sum_g rho(g), the projector onto the G-invariant subspace.

    Raises:
        NotAGroupError: If the elements are not closed under multiplication
    """
    elements = _stack_group(group_elements)
    return _projector_from_sum(elements.mean(axis=0), big, 'invariant')


def isotypic_projector(
    group_elements: Sequence[npt.ArrayLike],
    characters: Sequence[complex],
    irrep_dim: int,
    big: HilbertSpec | None = None,
) -> SubspaceProjector:
    """
    Pi_i = (dim V_i / |G|) sum_g conj(xi_i(g)) rho(g).

    Raises:
        NotAGroupError: If the elements are not closed under multiplication
        BadCharacterError: If xi(identity) != irrep_dim or the result is not idempotent
    """
    elements = _stack_group(group_elements)
    values = np.asarray(characters, dtype=np.complex128)
    if values.shape != (elements.shape[0],):
        raise DimensionError('character values', (elements.shape[0],), values.shape)
    identity = int(np.argmin(np.max(np.abs(elements - np.eye(elements.shape[1])), axis=(1, 2))))
    if abs(values[identity] - irrep_dim) > GROUP_TOL:
        raise BadCharacterError(f'character at the identity is {values[identity]}, expected {irrep_dim}')
    matrix = irrep_dim * np.einsum('g,gij->ij', values.conj(), elements) / elements.shape[0]
    return _projector_from_sum(matrix, big, 'isotypic')
