"""
Physically motivated subspaces.

- spin j as 2j symmetrized qubits (|j, m> -> even superposition of strings with j+m qubits up)
- Majorana stars: spin j as 2j separable qubits
- SU(2)-invariant (spin-0) sectors of several spins, i.e. quantum polyhedra
- the two-dimensional ground space of a frustration-free three-qubit Hamiltonian

Qubit |0> is spin up throughout, so |j, j> -> |0...0>.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from fractions import Fraction

import attrs
import numpy as np
import numpy.typing as npt
import scipy.sparse as sp

from src.config import settings
from src.domain.operators import ComplexArray, Embedding, SubspaceProjector
from src.domain.spaces import Flavor, HilbertSpec
from src.domain.states import PureState, SpinState, StarConstellation, StarPoint, two_j_of
from src.exceptions import DomainError, EmptySectorError, NumericalIntegrityError, SizeGuardError
from src.protocols import LoggerProtocol, NullLogger
from src.services.averages import extrinsic_ase_of_embedding, intrinsic_ase
from src.services.estimate import mc_state_map

__all__ = [
    'SymQubitPoint',
    'gss_projector',
    'majorana_polynomial',
    'majorana_product_state',
    'majorana_roots',
    'polyhedron_projector',
    'roots_to_bloch',
    'roots_to_product_state',
    'spin_operators',
    'spin_zero_projector',
    'sym_qubit_curve',
    'symmetric_qubit_embedding',
    'symmetric_qubit_spec',
    'symmetrize_product',
]

logger = logging.getLogger(__name__)

ROOT_RESIDUAL_TOL = 1e-8
ZERO_EIGENVALUE_TOL = 1e-8


# ==============================================================================
# Symmetrized qubits
# ==============================================================================


def symmetric_qubit_spec(two_j: int) -> HilbertSpec:
    return HilbertSpec(2, two_j, Flavor.MULTIQUBIT)


def symmetric_qubit_embedding(j: float | Fraction) -> Embedding:
    """
    Isometry C^{2j+1} -> (C^2)^{2j}; column m (ordered m = j .. -j) is the normalized
    sum of all bitstrings with j - m ones.

    Raises:
        DomainError: If 2j < 1 or j is not a half-integer
    """
    two_j = two_j_of(j)
    if two_j < 1:
        raise DomainError('The symmetric-qubit encoding needs j >= 1/2')
    big = symmetric_qubit_spec(two_j)
    weights = np.array([bin(k).count('1') for k in range(big.dim)])
    columns = np.zeros((big.dim, two_j + 1), dtype=np.complex128)
    for column in range(two_j + 1):
        members = weights == column
        columns[members, column] = 1.0 / math.sqrt(math.comb(two_j, column))
    return Embedding(big=big, columns=columns)


def symmetrize_product(states: Sequence[npt.ArrayLike]) -> PureState:
    """Normalized projection of a product of qubit states onto the symmetric subspace."""
    if not states:
        raise DomainError('Nothing to symmetrize')
    product = np.ones(1, dtype=np.complex128)
    for state in states:
        product = np.kron(product, np.asarray(state, dtype=np.complex128))
    embedding = symmetric_qubit_embedding(Fraction(len(states), 2))
    symmetric = embedding.columns @ (embedding.columns.conj().T @ product)
    return PureState.normalized(symmetric)


# ==============================================================================
# Majorana stars
# ==============================================================================


def majorana_polynomial(state: SpinState) -> ComplexArray:
    """
    Coefficients of p(z) = sum_m (-1)^{j-m} sqrt(C(2j, j-m)) <j,m|psi> z^{j+m}, lowest degree first.
    """
    two_j = state.two_j
    coefficients = np.zeros(two_j + 1, dtype=np.complex128)
    # amplitudes[k] is m = j - k, i.e. degree 2j - k
    for k, amplitude in enumerate(state.amplitudes):
        coefficients[two_j - k] = (-1) ** k * math.sqrt(math.comb(two_j, k)) * amplitude
    return coefficients


def majorana_roots(state: SpinState) -> StarConstellation:
    """
    Roots of the Majorana polynomial, padded with infinity up to 2j points.

    Raises:
        NumericalIntegrityError: If a computed root does not satisfy the polynomial
    """
    coefficients = majorana_polynomial(state)
    scale = float(np.max(np.abs(coefficients)))
    significant = np.nonzero(np.abs(coefficients) > 1e-14 * scale)[0]
    degree = int(significant[-1])
    lowest = int(significant[0])
    # z^lowest divides p exactly; the rest goes through the companion matrix
    reduced = coefficients[lowest : degree + 1]
    finite = [0j] * lowest
    if reduced.size > 1:
        roots = np.roots(reduced[::-1])
        for root in roots:
            powers = root ** np.arange(reduced.size)
            residual = abs(np.dot(reduced, powers)) / max(float(np.sum(np.abs(reduced * powers))), 1e-300)
            if residual > ROOT_RESIDUAL_TOL:
                raise NumericalIntegrityError(
                    f'Majorana root {root} has relative residual {residual:.3e} for coefficients {coefficients.tolist()}'
                )
        finite.extend(complex(root) for root in roots)
    return StarConstellation.from_roots(finite, state.two_j)


def roots_to_bloch(point: StarPoint) -> npt.NDArray[np.float64]:
    """Inverse stereographic projection; 0 is the north pole and infinity the south pole."""
    if point is None:
        return np.array([0.0, 0.0, -1.0])
    alpha = complex(point)
    norm = 1.0 + abs(alpha) ** 2
    return np.array([2.0 * alpha.real / norm, 2.0 * alpha.imag / norm, (1.0 - abs(alpha) ** 2) / norm])


def roots_to_product_state(constellation: StarConstellation) -> list[ComplexArray]:
    """alpha -> (1, alpha)/sqrt(1 + |alpha|^2), infinity -> (0, 1)."""
    qubits: list[ComplexArray] = []
    for point in constellation.points:
        if point is None:
            qubits.append(np.array([0.0, 1.0], dtype=np.complex128))
        else:
            qubits.append(np.array([1.0, point], dtype=np.complex128) / math.sqrt(1.0 + abs(point) ** 2))
    return qubits


def majorana_product_state(state: SpinState) -> PureState:
    """Separable 2j-qubit state whose Bloch vectors are the Majorana stars."""
    product = np.ones(1, dtype=np.complex128)
    for qubit in roots_to_product_state(majorana_roots(state)):
        product = np.kron(product, qubit)
    return PureState.normalized(product)


# ==============================================================================
# Spin-0 sectors
# ==============================================================================


def spin_operators(j: float | Fraction) -> tuple[ComplexArray, ComplexArray, ComplexArray]:
    """(J_x, J_y, J_z) in the basis m = j .. -j."""
    two_j = two_j_of(j)
    spin = two_j / 2
    m = spin - np.arange(two_j + 1)
    raising = np.zeros((two_j + 1, two_j + 1), dtype=np.complex128)
    # J+ |j, m> = sqrt(j(j+1) - m(m+1)) |j, m+1>
    raising[np.arange(two_j), np.arange(1, two_j + 1)] = np.sqrt(spin * (spin + 1) - m[1:] * (m[1:] + 1))
    lowering = raising.conj().T
    return (raising + lowering) / 2, (raising - lowering) / 2j, np.diag(m).astype(np.complex128)


def _collective(single: list[npt.NDArray[np.complex128]], dims: list[int]) -> sp.csr_matrix:
    total = sp.csr_matrix((math.prod(dims), math.prod(dims)), dtype=np.complex128)
    for site, op in enumerate(single):
        left = sp.identity(math.prod(dims[:site]), dtype=np.complex128, format='csr')
        right = sp.identity(math.prod(dims[site + 1 :]), dtype=np.complex128, format='csr')
        total = total + sp.kron(sp.kron(left, sp.csr_matrix(op)), right, format='csr')
    return total


def _sites_spec(two_js: Sequence[int]) -> HilbertSpec:
    dims = [t + 1 for t in two_js]
    if len(set(dims)) == 1:
        return HilbertSpec.natural(dims[0], len(dims))
    return HilbertSpec.from_dimension(math.prod(dims))


def spin_zero_projector(spins: Sequence[float | Fraction]) -> SubspaceProjector:
    """
    Projector onto the SU(2)-invariant sector of spins j_1 ... j_k.

    J^2 commutes with J_z, so the kernel of J^2 is found inside the M = 0 block.

    Raises:
        SizeGuardError: If prod(2 j_i + 1) exceeds SPIN_DIM_LIMIT
        EmptySectorError: If the spins do not couple to total spin 0
    """
    two_js = [two_j_of(j) for j in spins]
    if not two_js:
        raise DomainError('At least one spin is required')
    dims = [t + 1 for t in two_js]
    total = math.prod(dims)
    if total > settings.SPIN_DIM_LIMIT:
        raise SizeGuardError('spin product dimension', total, settings.SPIN_DIM_LIMIT)
    big = _sites_spec(two_js)
    context = f'spins {[str(Fraction(t, 2)) for t in two_js]}'

    components = [spin_operators(Fraction(t, 2)) for t in two_js]
    jx, jy, jz = (_collective([c[axis] for c in components], dims) for axis in range(3))
    casimir = (jx @ jx + jy @ jy + jz @ jz).tocsr()

    m_total = np.zeros(1)
    for t in two_js:
        m_total = np.add.outer(m_total, t / 2 - np.arange(t + 1)).ravel()
    sector = np.nonzero(np.abs(m_total) < 1e-9)[0]
    if sector.size == 0:
        logger.warning('spin-0 sector is empty for %s', context)
        raise EmptySectorError('spin-0', context)

    block = casimir[sector][:, sector].toarray()
    eigenvalues, eigenvectors = np.linalg.eigh((block + block.conj().T) / 2)
    kernel = eigenvectors[:, eigenvalues < ZERO_EIGENVALUE_TOL]
    if kernel.shape[1] == 0:
        logger.warning('spin-0 sector is empty for %s', context)
        raise EmptySectorError('spin-0', context)
    columns = np.zeros((total, kernel.shape[1]), dtype=np.complex128)
    columns[sector] = kernel
    logger.debug('%s: spin-0 multiplicity %d in dimension %d', context, kernel.shape[1], total)
    return Embedding(big=big, columns=columns).projector()


def polyhedron_projector(faces: int, spin: float | Fraction) -> SubspaceProjector:
    """Gauge-invariant space of a quantum polyhedron with equal face spins."""
    if faces < 2:
        raise DomainError(f'A polyhedron needs at least two faces, got {faces}')
    return spin_zero_projector([spin] * faces)


# ==============================================================================
# Ground space example
# ==============================================================================


def gss_projector(flavor: Flavor | str = Flavor.MULTIQUBIT) -> SubspaceProjector:
    """
    span{(|001> + |010> + |100>)/sqrt(3), |000>} inside three qubits (or one 8-dimensional qudit).
    """
    flavor = Flavor(flavor)
    big = HilbertSpec(2, 3, Flavor.MULTIQUBIT) if flavor is Flavor.MULTIQUBIT else HilbertSpec.from_dimension(8, flavor)
    w_state = np.zeros(8, dtype=np.complex128)
    w_state[[1, 2, 4]] = 1.0 / math.sqrt(3.0)
    ground = np.zeros(8, dtype=np.complex128)
    ground[0] = 1.0
    basis, _ = np.linalg.qr(np.stack([w_state, ground], axis=1))
    return Embedding(big=big, columns=basis).projector()


# ==============================================================================
# Symmetric versus separable qubits
# ==============================================================================


@attrs.define(frozen=True)
class SymQubitPoint:
    """ASE of spin j read intrinsically, as symmetrized qubits and as separable star qubits."""

    two_j: int
    intrinsic: float
    symmetrized: float
    separable: float
    separable_stderr: float


def sym_qubit_curve(
    two_j_max: int,
    samples: int = 2000,
    seed: int | None = None,
    threads: int | None = None,
    log: LoggerProtocol | None = None,
) -> list[SymQubitPoint]:
    """
    Per 2j = 1 .. two_j_max: intrinsic ASE (qudit flavor by parity), exact symmetrized-qubit ASE,
    and a Monte Carlo estimate for the separable Majorana encoding.
    """
    log = log or NullLogger()
    base_seed = settings.DEFAULT_SEED if seed is None else seed
    points: list[SymQubitPoint] = []
    for two_j in range(1, two_j_max + 1):
        small_dim = two_j + 1
        small_flavor = Flavor.ODD if small_dim % 2 else Flavor.EVEN
        embedding = symmetric_qubit_embedding(Fraction(two_j, 2))
        big = embedding.big

        def encode(batch: ComplexArray, two_j: int = two_j) -> ComplexArray:
            return np.stack([majorana_product_state(SpinState(two_j=two_j, amplitudes=row)).amplitudes for row in batch])

        separable = mc_state_map(encode, small_dim, big, samples=samples, seed=base_seed + two_j, threads=threads)
        point = SymQubitPoint(
            two_j=two_j,
            intrinsic=intrinsic_ase(small_dim, small_flavor),
            symmetrized=extrinsic_ase_of_embedding(embedding, threads=threads),
            separable=separable.mean,
            separable_stderr=separable.stderr,
        )
        log.info(f'j={Fraction(two_j, 2)}: symmetrized {point.symmetrized:.6f}, separable {point.separable:.6f}')
        points.append(point)
    return points
