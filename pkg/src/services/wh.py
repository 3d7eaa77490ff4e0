"""
Weyl-Heisenberg group algebra.

Symplectic indices are interleaved integer vectors a = (x_1, z_1, ..., x_n, z_n).
Displacements D_a = tau^{x.z} X^x Z^z with omega = e^{2 pi i/d} and tau = -e^{i pi/d},
so tau^2 = omega and tau^{2d} = 1. Phase exponents are integers mod 2d (powers of tau)
and only become complex numbers at the boundary (tau_powers).

Even-d subtlety: D_{x + d y} = (-1)^{[x, y]} D_x, so raw index vectors must pass through
canonicalize_index before they address a reduced displacement.

With this convention D_{(1,1)} = -Y at d = 2. Every entropy depends on |Tr| only.
"""

from __future__ import annotations

import functools
import logging
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from src.config import settings
from src.domain.operators import ComplexArray, GeneralizedPermOp, IntArray
from src.domain.spaces import HilbertSpec
from src.exceptions import DimensionError, DomainError, InternalError, SizeGuardError

__all__ = [
    'all_indices',
    'basis_digits',
    'canonicalize_index',
    'canonicalize_sign_exponents',
    'clifford_action',
    'clifford_generators',
    'displacement',
    'displacement_dense',
    'flat_index',
    'mul_indices',
    'negate_index',
    'omega',
    'random_clifford',
    'shift_table',
    'state_trace_overlaps',
    'symplectic_form',
    'symplectic_forms',
    'tau',
    'tau_powers',
    'tau_to_omega',
    'tau_to_omega_array',
    'trace_overlaps',
    'unflat_index',
]

logger = logging.getLogger(__name__)

# Overlap threshold for "phase times a displacement" is |Tr| >= D - NORMALIZER_TOL
NORMALIZER_TOL = 1e-8
DEFAULT_WORD_LENGTH = 24


# ==============================================================================
# Phases
# ==============================================================================


def tau(d: int) -> complex:
    return complex(-np.exp(1j * np.pi / d))


def omega(d: int) -> complex:
    return complex(np.exp(2j * np.pi / d))


@functools.cache
def tau_powers(d: int) -> ComplexArray:
    """tau^e for e = 0 .. 2d-1 (read-only table)."""
    exponents = np.arange(2 * d)
    table = np.exp(1j * np.pi * (d + 1) * exponents / d)
    table.flags.writeable = False
    return table


def tau_to_omega(exponent: int, d: int) -> int:
    """
    Rewrite tau^exponent as omega^k and return k mod d.

    Raises:
        DomainError: If d is even and the exponent is odd (tau^e is not a power of omega)
    """
    exponent %= 2 * d
    if d % 2 == 0:
        if exponent % 2:
            raise DomainError(f'tau^{exponent} is not a power of omega at d={d}')
        return (exponent // 2) % d
    # tau = omega^{(d+1)/2} for odd d
    return (exponent * (d + 1) // 2) % d


def tau_to_omega_array(exponents: npt.ArrayLike, d: int) -> IntArray:
    """Vectorized tau_to_omega."""
    values = _as_indices(exponents) % (2 * d)
    if d % 2 == 0:
        if np.any(values % 2):
            raise DomainError(f'odd tau exponent is not a power of omega at d={d}')
        return np.asarray((values // 2) % d, dtype=np.int64)
    return np.asarray((values * (d + 1) // 2) % d, dtype=np.int64)


# ==============================================================================
# Index arithmetic
# ==============================================================================


def _as_indices(a: npt.ArrayLike) -> IntArray:
    return np.asarray(a, dtype=np.int64)


def symplectic_forms(a: npt.ArrayLike, b: npt.ArrayLike, d: int) -> IntArray:
    """
    Broadcasting [a, b] = sum_i (a_{z,i} b_{x,i} - a_{x,i} b_{z,i}) mod 2d over leading axes.

    The last axis of both arguments is the interleaved index axis.
    """
    left = _as_indices(a)
    right = _as_indices(b)
    raw = np.sum(left[..., 1::2] * right[..., 0::2] - left[..., 0::2] * right[..., 1::2], axis=-1)
    return np.asarray(raw % (2 * d), dtype=np.int64)


def symplectic_form(a: npt.ArrayLike, b: npt.ArrayLike, d: int) -> int:
    """
    Symplectic form of two index vectors, reduced mod 2d.

    Raises:
        DimensionError: If the vectors differ in length or have odd length
    """
    left = _as_indices(a)
    right = _as_indices(b)
    if left.shape != right.shape or left.ndim != 1 or left.shape[0] % 2:
        raise DimensionError('symplectic index pair', left.shape, right.shape)
    return int(symplectic_forms(left, right, d))


def canonicalize_sign_exponents(raw: npt.ArrayLike, d: int) -> tuple[IntArray, IntArray]:
    """
    Vectorized canonicalize_index: returns (tau exponent of the sign, reduced indices).

    The exponent is 0 or d; tau^d = -1 for even d.
    """
    array = _as_indices(raw)
    reduced = array % d
    if d % 2 == 1:
        return np.zeros(array.shape[:-1], dtype=np.int64), reduced
    wraps = (array - reduced) // d
    parity = symplectic_forms(reduced, wraps, d) % 2
    return parity * d, reduced


def canonicalize_index(a: npt.ArrayLike, d: int) -> tuple[int, IntArray]:
    """
    Reduce a raw index vector: D_a = sign * D_x with x = a mod d.

    sign is +1 for odd d and (-1)^{[x, y]} with y = (a - x)/d for even d.
    """
    exponent, reduced = canonicalize_sign_exponents(_as_indices(a), d)
    return (-1 if int(exponent) else 1), reduced


def mul_indices(a: npt.ArrayLike, b: npt.ArrayLike, d: int) -> tuple[int, IntArray]:
    """
    D_a D_b = tau^e D_c with c = (a + b) mod d; returns (e mod 2d, c).

    Raises:
        DimensionError: If the vectors differ in length
    """
    left = _as_indices(a)
    right = _as_indices(b)
    form = symplectic_form(left, right, d)
    sign_exponent, reduced = canonicalize_sign_exponents(left + right, d)
    return (form + int(sign_exponent)) % (2 * d), reduced


def negate_index(a: npt.ArrayLike, d: int) -> tuple[int, IntArray]:
    """D_a^dag = D_{-a} = tau^e D_{(-a) mod d}; returns (e, (-a) mod d)."""
    exponent, reduced = canonicalize_sign_exponents(-_as_indices(a), d)
    return int(exponent), reduced


# ==============================================================================
# Enumeration and flat addressing
# ==============================================================================


def flat_index(a: npt.ArrayLike, d: int) -> IntArray | int:
    """Row-major base-d address of reduced index vectors (first entry most significant)."""
    array = _as_indices(a)
    weights = d ** np.arange(array.shape[-1] - 1, -1, -1, dtype=np.int64)
    flat = array @ weights
    return int(flat) if array.ndim == 1 else np.asarray(flat, dtype=np.int64)


def unflat_index(flat: npt.ArrayLike, d: int, length: int) -> IntArray:
    """Inverse of flat_index for vectors of the given length."""
    values = _as_indices(flat)
    weights = d ** np.arange(length - 1, -1, -1, dtype=np.int64)
    return np.asarray((values[..., None] // weights) % d, dtype=np.int64)


def all_indices(spec: HilbertSpec) -> IntArray:
    """
    Every reduced symplectic index, in flat order (d^{2n} x 2n).

    Raises:
        SizeGuardError: If d^{2n} exceeds the enumeration limit
    """
    if spec.num_indices > settings.ENUMERATION_LIMIT:
        raise SizeGuardError('symplectic index enumeration', spec.num_indices, settings.ENUMERATION_LIMIT)
    return unflat_index(np.arange(spec.num_indices), spec.d, 2 * spec.n)


@functools.cache
def basis_digits(d: int, n: int) -> IntArray:
    """Digits k_i of every basis index (D x n), qudit 0 most significant."""
    digits = unflat_index(np.arange(d**n), d, n)
    digits.flags.writeable = False
    return digits


@functools.cache
def shift_table(d: int, n: int) -> IntArray:
    """S[x, k] = basis index of k + x (digit-wise mod d)."""
    digits = basis_digits(d, n)
    shifted = (digits[:, None, :] + digits[None, :, :]) % d
    table = flat_index(shifted, d)
    assert isinstance(table, np.ndarray)
    table.flags.writeable = False
    return table


# ==============================================================================
# Displacement operators
# ==============================================================================


def displacement(spec: HilbertSpec, a: npt.ArrayLike) -> GeneralizedPermOp:
    """
    D_a as a generalized permutation: |k> -> tau^{x.z} omega^{z.k} |k + x>.

    Raw (unreduced) vectors are accepted and canonicalized.

    Raises:
        DimensionError: If the index length is not 2n
    """
    raw = _as_indices(a)
    if raw.shape != (2 * spec.n,):
        raise DimensionError('symplectic index', (2 * spec.n,), raw.shape)
    sign_exponent, index = canonicalize_sign_exponents(raw, spec.d)
    x, z = index[0::2], index[1::2]
    digits = basis_digits(spec.d, spec.n)
    perm = flat_index((digits + x) % spec.d, spec.d)
    assert isinstance(perm, np.ndarray)
    exponents = (int(sign_exponent) + int(x @ z) + 2 * (digits @ z)) % (2 * spec.d)
    return GeneralizedPermOp(perm=perm, phase=tau_powers(spec.d)[exponents])


def displacement_dense(spec: HilbertSpec, a: npt.ArrayLike) -> ComplexArray:
    return displacement(spec, a).to_dense()


def trace_overlaps(spec: HilbertSpec, operator: npt.ArrayLike) -> ComplexArray:
    """
    Tr(D_a^dag O) for every reduced index a, in flat order.

    For each shift x the diagonal v_k = O[k + x, k] is Fourier transformed over k,
    which yields all z at once: Tr(D_{x,z}^dag O) = tau^{-x.z} sum_k omega^{-z.k} v_k.

    Raises:
        DimensionError: If O is not D x D
    """
    matrix = np.asarray(operator, dtype=np.complex128)
    dim = spec.dim
    if matrix.shape != (dim, dim):
        raise DimensionError('operator', (dim, dim), matrix.shape)
    shifts = shift_table(spec.d, spec.n)
    diagonals = matrix[shifts, np.arange(dim)[None, :]]
    return _overlaps_from_diagonals(spec, diagonals)


def _overlaps_from_diagonals(spec: HilbertSpec, diagonals: ComplexArray) -> ComplexArray:
    d, n = spec.d, spec.n
    grid = (d,) * n
    spectrum = np.fft.fftn(diagonals.reshape((-1, *grid)), axes=tuple(range(1, n + 1)))
    digits = basis_digits(d, n)
    xz = (digits @ digits.T) % (2 * d)
    spectrum = spectrum.reshape(d**n, d**n) * np.conj(tau_powers(d)[xz])
    # axes (x_1..x_n, z_1..z_n) -> interleaved (x_1, z_1, ..., x_n, z_n)
    order = [axis for pair in zip(range(n), range(n, 2 * n), strict=True) for axis in pair]
    return np.ascontiguousarray(spectrum.reshape(grid + grid).transpose(order)).reshape(-1)


def state_trace_overlaps(spec: HilbertSpec, amplitudes: ComplexArray) -> ComplexArray:
    """Tr(D_a^dag psi psi^dag) = <psi|D_a^dag|psi> for every a, without forming psi psi^dag."""
    if amplitudes.shape != (spec.dim,):
        raise DimensionError('state', (spec.dim,), amplitudes.shape)
    shifts = shift_table(spec.d, spec.n)
    diagonals = amplitudes[shifts] * np.conj(amplitudes)[None, :]
    return _overlaps_from_diagonals(spec, diagonals)


# ==============================================================================
# Clifford words
# ==============================================================================


def _single_qudit_gates(d: int) -> dict[str, ComplexArray]:
    if d == 2:
        hadamard = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
        return {'H': hadamard, 'S': np.diag([1, 1j]).astype(np.complex128)}
    k = np.arange(d)
    fourier = np.exp(2j * np.pi * np.outer(k, k) / d) / np.sqrt(d)
    # tau^{k^2} is well defined mod d since tau^{d^2} = 1
    phase = np.diag(tau_powers(d)[(k * k) % (2 * d)])
    return {'F': fourier, 'P': phase}


def _embed_single(gate: ComplexArray, site: int, d: int, n: int) -> ComplexArray:
    left = np.eye(d**site, dtype=np.complex128)
    right = np.eye(d ** (n - site - 1), dtype=np.complex128)
    return np.kron(np.kron(left, gate), right)


def _controlled_z(site_a: int, site_b: int, d: int, n: int) -> ComplexArray:
    digits = basis_digits(d, n)
    exponents = (digits[:, site_a] * digits[:, site_b]) % d
    return np.diag(np.exp(2j * np.pi * exponents / d))


def _swap(site_a: int, site_b: int, d: int, n: int) -> ComplexArray:
    digits = basis_digits(d, n).copy()
    digits[:, [site_a, site_b]] = digits[:, [site_b, site_a]]
    image = flat_index(digits, d)
    matrix = np.zeros((d**n, d**n), dtype=np.complex128)
    matrix[image, np.arange(d**n)] = 1.0
    return matrix


def clifford_generators(spec: HilbertSpec) -> dict[str, ComplexArray]:
    """
    Named dense generators on the full space.

    Keys look like 'H@0', 'F@1', 'CZ@0,1', 'SWAP@0,2'. Qubits use {H, S}, qudits {F, P}.
    """
    d, n = spec.d, spec.n
    gates: dict[str, ComplexArray] = {}
    for name, gate in _single_qudit_gates(d).items():
        for site in range(n):
            gates[f'{name}@{site}'] = _embed_single(gate, site, d, n)
    for site_a in range(n):
        for site_b in range(site_a + 1, n):
            gates[f'CZ@{site_a},{site_b}'] = _controlled_z(site_a, site_b, d, n)
            gates[f'SWAP@{site_a},{site_b}'] = _swap(site_a, site_b, d, n)
    return gates


def clifford_action(spec: HilbertSpec, unitary: npt.ArrayLike, a: npt.ArrayLike) -> tuple[complex, IntArray]:
    """
    Identify U D_a U^dag = phase * D_b.

    Raises:
        InternalError: If the conjugate does not match exactly one displacement
    """
    matrix = np.asarray(unitary, dtype=np.complex128)
    conjugated = matrix @ displacement_dense(spec, a) @ matrix.conj().T
    overlaps = trace_overlaps(spec, conjugated)
    hits = np.flatnonzero(np.abs(overlaps) >= spec.dim - NORMALIZER_TOL)
    if hits.size != 1:
        raise InternalError(f'U D_a U^dag matches {hits.size} displacements for a={list(_as_indices(a))}')
    target = int(hits[0])
    return complex(overlaps[target] / spec.dim), unflat_index(target, spec.d, 2 * spec.n)


def random_clifford(
    spec: HilbertSpec,
    rng: np.random.Generator,
    length: int = DEFAULT_WORD_LENGTH,
    word: Sequence[str] | None = None,
) -> ComplexArray:
    """
    Dense Clifford unitary from a random generator word (or an explicit one).

    The normalizer property is checked on every unit index e_{x,i}, e_{z,i}.

    Raises:
        InternalError: If the product fails the normalizer check
    """
    generators = clifford_generators(spec)
    names = sorted(generators)
    chosen = list(word) if word is not None else [names[i] for i in rng.integers(len(names), size=length)]
    unitary = np.eye(spec.dim, dtype=np.complex128)
    for name in chosen:
        unitary = generators[name] @ unitary
    for position in range(2 * spec.n):
        unit = np.zeros(2 * spec.n, dtype=np.int64)
        unit[position] = 1
        clifford_action(spec, unitary, unit)
    logger.debug('random_clifford %s word=%s', spec.describe(), chosen)
    return unitary
