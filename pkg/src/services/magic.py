"""
Stabilizer entropies of pure states.

All quantities are built from the overlaps Tr(D_a^dag psi) with psi = |psi><psi|:

    chi_a = Tr(D_a^dag psi) / D
    P_a   = |Tr(D_a^dag psi)|^2 / D          (a probability vector)
    M_alpha = log(sum_a P_a^alpha) / (1 - alpha) - log D
    M       = 1 - (1/D) sum_a |Tr(D_a^dag psi)|^4   (linear / 2-Tsallis)

M_2 = -log(1 - M). Mixed states are rejected.
"""

from __future__ import annotations

import logging
import math

import attrs
import numpy as np
import numpy.typing as npt

from src.config import settings
from src.domain.operators import CharFunction, ComplexArray
from src.domain.spaces import HilbertSpec
from src.domain.states import PureState
from src.exceptions import DimensionError, DomainError, NumericalIntegrityError, PreconditionError
from src.services.wh import (
    canonicalize_sign_exponents,
    flat_index,
    shift_table,
    state_trace_overlaps,
    tau_powers,
    trace_overlaps,
)

__all__ = [
    'RobustnessBounds',
    'as_pure_state',
    'char_function',
    'eval_char_at',
    'eval_char_many',
    'linear_se',
    'linear_se_many',
    'renyi_se',
    'robustness_bounds',
    'robustness_lower_bound',
    'se_upper_bound',
    'st_norm',
    'stabilizer_purity',
    'state_char_function',
    'wh_distribution',
]

logger = logging.getLogger(__name__)

type StateLike = PureState | npt.ArrayLike

PROBABILITY_SUM_TOL = 1e-8
# Upper bound on complex entries held at once by linear_se_many
_BATCH_ENTRIES = 1 << 22


# ==============================================================================
# Characteristic functions
# ==============================================================================


def char_function(spec: HilbertSpec, operator: npt.ArrayLike, subspace_dim: int | None = None) -> CharFunction:
    """
    chi_a = Tr(D_a^dag O) / D for all reduced a.

    Raises:
        DimensionError: If O is not D x D
    """
    values = trace_overlaps(spec, operator) / spec.dim
    return CharFunction(spec=spec, values=values, subspace_dim=subspace_dim)


def state_char_function(spec: HilbertSpec, state: StateLike) -> CharFunction:
    psi = as_pure_state(spec, state)
    return CharFunction(spec=spec, values=state_trace_overlaps(spec, psi.amplitudes) / spec.dim)


def eval_char_many(cf: CharFunction, raw: npt.ArrayLike) -> ComplexArray:
    """chi at raw (unreduced) index vectors along the last axis, with the even-d sign folded in."""
    d = cf.spec.d
    sign_exponent, reduced = canonicalize_sign_exponents(raw, d)
    flats = flat_index(reduced, d)
    return np.asarray(tau_powers(d)[sign_exponent] * cf.values[flats], dtype=np.complex128)


def eval_char_at(cf: CharFunction, raw: npt.ArrayLike) -> complex:
    """chi at a single raw index: sign(canonicalize(raw)) * values[raw mod d]."""
    vector = np.asarray(raw, dtype=np.int64)
    if vector.shape != (2 * cf.spec.n,):
        raise DimensionError('symplectic index', (2 * cf.spec.n,), vector.shape)
    return complex(eval_char_many(cf, vector))


# ==============================================================================
# Input handling
# ==============================================================================


def as_pure_state(spec: HilbertSpec, state: StateLike) -> PureState:
    """
    Accept a PureState, an amplitude vector, or the density matrix of a pure state.

    Raises:
        DimensionError: If the dimension differs from D
        NotNormalizedError: If the vector is not unit norm
        PreconditionError: If a density matrix is not pure
    """
    if isinstance(state, PureState):
        psi = state
    else:
        array = np.asarray(state, dtype=np.complex128)
        if array.ndim == 2:
            if array.shape != (spec.dim, spec.dim):
                raise DimensionError('density matrix', (spec.dim, spec.dim), array.shape)
            eigenvalues, eigenvectors = np.linalg.eigh((array + array.conj().T) / 2)
            if abs(eigenvalues[-1] - 1.0) > 1e-8 or np.any(np.abs(eigenvalues[:-1]) > 1e-8):
                raise PreconditionError('Density matrix is not a pure state; mixed states are not supported')
            psi = PureState(eigenvectors[:, -1])
        else:
            psi = PureState(array)
    if psi.dim != spec.dim:
        raise DimensionError('state', (spec.dim,), (psi.dim,))
    return psi


def _clamp(value: float, what: str) -> float:
    if value >= 0.0:
        return value
    if value >= -settings.ENTROPY_CLAMP:
        return 0.0
    raise NumericalIntegrityError(f'{what} is negative ({value:.3e}); the displacement basis is inconsistent')


# ==============================================================================
# Distributions and entropies
# ==============================================================================


def wh_distribution(spec: HilbertSpec, state: StateLike) -> npt.NDArray[np.float64]:
    """
    P_a = |Tr(D_a^dag psi)|^2 / D, flat index order.

    Raises:
        NumericalIntegrityError: If P does not sum to 1
    """
    psi = as_pure_state(spec, state)
    overlaps = state_trace_overlaps(spec, psi.amplitudes)
    distribution = np.abs(overlaps) ** 2 / spec.dim
    total = float(distribution.sum())
    if abs(total - 1.0) > PROBABILITY_SUM_TOL:
        raise NumericalIntegrityError(f'WH distribution sums to {total:.12g}')
    return distribution


def stabilizer_purity(spec: HilbertSpec, state: StateLike, alpha: float) -> float:
    """sum_a P_a^alpha."""
    distribution = wh_distribution(spec, state)
    support = distribution[distribution > 0.0]
    return float(np.sum(support**alpha))


def _check_alpha(alpha: float) -> None:
    if alpha <= 0:
        raise DomainError(f'Renyi index must be positive, got alpha={alpha}')
    if alpha == 1:
        raise DomainError('alpha = 1 (Shannon limit) is not supported')


def renyi_se(spec: HilbertSpec, state: StateLike, alpha: float) -> float:
    """
    Stabilizer Renyi entropy M_alpha.

    Raises:
        DomainError: If alpha <= 0 or alpha == 1
        NumericalIntegrityError: If the result is negative beyond the clamp
    """
    _check_alpha(alpha)
    value = math.log(stabilizer_purity(spec, state, alpha)) / (1.0 - alpha) - math.log(spec.dim)
    return _clamp(value, f'M_{alpha}')


def linear_se(spec: HilbertSpec, state: StateLike) -> float:
    """Linear stabilizer entropy M = 1 - D sum_a P_a^2, in [0, 1)."""
    distribution = wh_distribution(spec, state)
    return _clamp(1.0 - spec.dim * float(np.sum(distribution**2)), 'linear SE')


def linear_se_many(spec: HilbertSpec, amplitudes: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """
    Linear SE for each row of an (m x D) array of unit vectors.

    Used by the Monte Carlo estimators; norms are the caller's responsibility.
    """
    states = np.atleast_2d(np.asarray(amplitudes, dtype=np.complex128))
    if states.shape[1] != spec.dim:
        raise DimensionError('state batch', f'(m, {spec.dim})', states.shape)
    d, n, dim = spec.d, spec.n, spec.dim
    shifts = shift_table(d, n)
    chunk = max(1, _BATCH_ENTRIES // (dim * dim))
    results = np.empty(states.shape[0], dtype=np.float64)
    for start in range(0, states.shape[0], chunk):
        block = states[start : start + chunk]
        diagonals = block[:, shifts] * np.conj(block)[:, None, :]
        spectrum = np.fft.fftn(diagonals.reshape(block.shape[0], dim, *(d,) * n), axes=tuple(range(2, n + 2)))
        fourth = np.sum(np.abs(spectrum.reshape(block.shape[0], -1)) ** 4, axis=1)
        results[start : start + chunk] = 1.0 - fourth / dim
    # clamp tiny negatives from rounding; larger ones are reported
    if np.any(results < -settings.ENTROPY_CLAMP):
        raise NumericalIntegrityError(f'linear SE batch has negative entries (min {results.min():.3e})')
    return np.maximum(results, 0.0)


def st_norm(spec: HilbertSpec, state: StateLike) -> float:
    """D(psi) = (1/D) sum_a |Tr(D_a^dag psi)|; equals exp(M_{1/2} / 2) and is 1 on stabilizer states."""
    psi = as_pure_state(spec, state)
    return float(np.sum(np.abs(state_trace_overlaps(spec, psi.amplitudes)))) / spec.dim


# ==============================================================================
# Bounds
# ==============================================================================


def robustness_lower_bound(linear_entropy: float) -> float:
    """
    R >= sqrt(1 / (1 - M)).

    Raises:
        DomainError: If M is outside [0, 1)
    """
    if not 0.0 <= linear_entropy < 1.0:
        raise DomainError(f'Linear SE must lie in [0, 1), got {linear_entropy}')
    return math.sqrt(1.0 / (1.0 - linear_entropy))


def se_upper_bound(spec: HilbertSpec | int, alpha: float) -> float:
    """log[(1 + (D-1)(D+1)^{1-alpha}) / D] / (1 - alpha), attained by SIC fiducials."""
    _check_alpha(alpha)
    dim = spec if isinstance(spec, int) else spec.dim
    return math.log((1.0 + (dim - 1) * (dim + 1) ** (1.0 - alpha)) / dim) / (1.0 - alpha)


@attrs.define(frozen=True)
class RobustnessBounds:
    """Lower bounds on the robustness of magic of a pure state."""

    alpha: float
    st_norm: float
    renyi: float
    linear: float

    @property
    def best(self) -> float:
        return max(self.st_norm, self.renyi, self.linear)


def robustness_bounds(spec: HilbertSpec, state: StateLike, alpha: float = 2.0) -> RobustnessBounds:
    """
    R >= D(psi), R >= exp(M_alpha / 2) for alpha >= 1/2, and R >= sqrt(1 / (1 - M)).

    Raises:
        DomainError: If alpha < 1/2 or alpha == 1
    """
    if alpha < 0.5:
        raise DomainError(f'The Renyi robustness bound needs alpha >= 1/2, got {alpha}')
    psi = as_pure_state(spec, state)
    return RobustnessBounds(
        alpha=alpha,
        st_norm=st_norm(spec, psi),
        renyi=math.exp(renyi_se(spec, psi, alpha) / 2.0),
        linear=robustness_lower_bound(linear_se(spec, psi)),
    )
