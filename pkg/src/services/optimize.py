"""
Extremization of the subspace ASE over embeddings.

Embeddings are parametrized by a raw real vector (real and imaginary parts of a d_B x d_S
matrix) that is re-orthonormalized by QR inside the objective. BFGS runs on that vector with
finite-difference gradients, from several random starts in parallel.
"""

from __future__ import annotations

import enum
import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor

import attrs
import numpy as np
import numpy.typing as npt
import scipy.optimize

from src.config import settings
from src.domain.operators import ComplexArray, Embedding
from src.domain.spaces import Flavor, HilbertSpec
from src.exceptions import (
    DimensionError,
    DomainError,
    OptimizationError,
    RankDeficientParametersError,
    SubspaceMagicError,
)
from src.protocols import LoggerProtocol, NullLogger
from src.schemas.base import csv_text
from src.schemas.operations.results import SweepRow
from src.services.averages import extrinsic_ase_of_embedding, intrinsic_ase
from src.services.magic import linear_se_many
from src.services.sampling import block_rng, sample_small_states

__all__ = [
    'Direction',
    'ExtremizationResult',
    'GradientScheme',
    'ObjectiveKind',
    'OptimizerConfig',
    'RestartOutcome',
    'embedding_from_params',
    'extremal_sweep',
    'extremize_ase',
    'finite_difference_gradient',
    'minimize_with_restarts',
    'params_from_frame',
    'sweep_csv',
]

logger = logging.getLogger(__name__)

RANK_TOL = 1e-10
TIE_TOL = 1e-9
_PERTURBATION = 1e-6
_PERTURB_ATTEMPTS = 3

type Objective = Callable[[npt.NDArray[np.float64]], float]


# ==============================================================================
# Configuration
# ==============================================================================


class Direction(enum.StrEnum):
    MINIMIZE = 'minimize'
    MAXIMIZE = 'maximize'


class ObjectiveKind(enum.StrEnum):
    AUTO = 'auto'
    EXACT = 'exact'
    MONTE_CARLO = 'monte_carlo'


class GradientScheme(enum.StrEnum):
    FORWARD = 'forward'
    CENTRAL = 'central'


def _open_step_range(instance: object, attribute: attrs.Attribute[float], value: float) -> None:
    if not 1e-8 < value < 1e-2:
        raise DomainError(f'{attribute.name} must lie in (1e-8, 1e-2), got {value}')


@attrs.define(frozen=True)
class OptimizerConfig:
    """
    BFGS driver settings.

    objective=auto uses the exact ASE when d_B <= EXACT_OBJECTIVE_MAX_DIM and a Monte Carlo
    estimate with fixed common random numbers otherwise.
    """

    restarts: int = attrs.field(default=8, validator=attrs.validators.ge(1))
    max_iters: int = attrs.field(default=400, validator=attrs.validators.ge(1))
    gradient_step: float = attrs.field(default=1e-6, validator=_open_step_range)
    tolerance: float = attrs.field(default=1e-8, validator=attrs.validators.gt(0.0))
    objective: ObjectiveKind = attrs.field(default=ObjectiveKind.AUTO, converter=ObjectiveKind)
    mc_samples: int | None = None
    direction: Direction = attrs.field(default=Direction.MINIMIZE, converter=Direction)
    gradient_scheme: GradientScheme = attrs.field(default=GradientScheme.FORWARD, converter=GradientScheme)
    seed: int | None = None

    def resolved_seed(self) -> int:
        return settings.DEFAULT_SEED if self.seed is None else self.seed

    def resolved_objective(self, big_dim: int) -> ObjectiveKind:
        if self.objective is not ObjectiveKind.AUTO:
            return self.objective
        if big_dim <= settings.EXACT_OBJECTIVE_MAX_DIM:
            return ObjectiveKind.EXACT
        return ObjectiveKind.MONTE_CARLO


# ==============================================================================
# Parametrization
# ==============================================================================


def embedding_from_params(big: HilbertSpec, small_dim: int, params: npt.ArrayLike) -> Embedding:
    """
    Orthonormalize the d_B x d_S matrix encoded by params (real parts, then imaginary parts).

    Raises:
        DimensionError: If params does not have length 2 d_B d_S
        RankDeficientParametersError: If the matrix has (numerically) dependent columns
    """
    vector = np.asarray(params, dtype=np.float64)
    size = big.dim * small_dim
    if vector.shape != (2 * size,):
        raise DimensionError('embedding parameters', (2 * size,), vector.shape)
    matrix = (vector[:size] + 1j * vector[size:]).reshape(big.dim, small_dim)
    q, r = np.linalg.qr(matrix)
    diagonal = np.diag(r)
    smallest = float(np.min(np.abs(diagonal)))
    if smallest < RANK_TOL:
        raise RankDeficientParametersError(f'Parameter matrix is rank deficient (min |R_ii| = {smallest:.3e})')
    return Embedding(big=big, columns=q * (diagonal / np.abs(diagonal))[None, :])


def params_from_frame(frame: npt.ArrayLike) -> npt.NDArray[np.float64]:
    matrix = np.asarray(frame, dtype=np.complex128)
    return np.concatenate([matrix.real.ravel(), matrix.imag.ravel()])


def finite_difference_gradient(
    function: Objective,
    x: npt.ArrayLike,
    step: float,
    scheme: GradientScheme | str = GradientScheme.FORWARD,
    value: float | None = None,
) -> npt.NDArray[np.float64]:
    """Forward or central finite differences, one coordinate at a time."""
    point = np.array(x, dtype=np.float64)
    gradient = np.empty_like(point)
    resolved = GradientScheme(scheme)
    base = function(point) if resolved is GradientScheme.FORWARD and value is None else value
    for i in range(point.size):
        original = point[i]
        point[i] = original + step
        upper = function(point)
        if resolved is GradientScheme.CENTRAL:
            point[i] = original - step
            gradient[i] = (upper - function(point)) / (2.0 * step)
        else:
            assert base is not None
            gradient[i] = (upper - base) / step
        point[i] = original
    return gradient


# ==============================================================================
# Restart driver
# ==============================================================================


@attrs.define(frozen=True)
class RestartOutcome:
    best_x: npt.NDArray[np.float64] = attrs.field(eq=False)
    best_value: float
    values: tuple[float, ...]
    failures: int


def _bfgs(function: Objective, start: npt.NDArray[np.float64], config: OptimizerConfig) -> tuple[np.ndarray, float]:
    result = scipy.optimize.minimize(
        function,
        start,
        jac=lambda x: finite_difference_gradient(function, x, config.gradient_step, config.gradient_scheme),
        method='BFGS',
        options={'maxiter': config.max_iters, 'gtol': config.tolerance},
    )
    return np.asarray(result.x, dtype=np.float64), float(result.fun)


def minimize_with_restarts(
    function: Objective,
    starts: Sequence[npt.NDArray[np.float64]],
    config: OptimizerConfig,
    threads: int | None = None,
) -> RestartOutcome:
    """
    Run BFGS from every start; keep the smallest value (ties within 1e-9 go to the earliest start).

    Raises:
        OptimizationError: If every restart fails
    """

    def run(start: npt.NDArray[np.float64]) -> tuple[np.ndarray, float] | None:
        try:
            x, value = _bfgs(function, start, config)
        except (SubspaceMagicError, ArithmeticError, np.linalg.LinAlgError) as e:
            logger.debug('restart failed: %s', e)
            return None
        return (x, value) if math.isfinite(value) else None

    workers = max(1, min(threads or settings.THREADS, len(starts)))
    if workers == 1:
        outcomes = [run(start) for start in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, starts))

    best: tuple[np.ndarray, float] | None = None
    for outcome in outcomes:
        if outcome is not None and (best is None or outcome[1] < best[1] - TIE_TOL):
            best = outcome
    failures = sum(1 for outcome in outcomes if outcome is None)
    if best is None:
        raise OptimizationError(f'All {len(starts)} restarts failed')
    values = tuple(math.nan if outcome is None else outcome[1] for outcome in outcomes)
    return RestartOutcome(best_x=best[0], best_value=best[1], values=values, failures=failures)


# ==============================================================================
# ASE extremization
# ==============================================================================


@attrs.define(frozen=True)
class ExtremizationResult:
    embedding: Embedding
    value: float
    exact_value: float
    restart_values: tuple[float, ...]
    objective: ObjectiveKind
    direction: Direction
    seed: int


def _frame_objective(
    big: HilbertSpec, small_dim: int, kind: ObjectiveKind, config: OptimizerConfig
) -> Callable[[ComplexArray], float]:
    if kind is ObjectiveKind.EXACT:
        return lambda frame: extrinsic_ase_of_embedding(Embedding(big=big, columns=frame), threads=1)
    samples = config.mc_samples or settings.MC_OBJECTIVE_SAMPLES
    # common random numbers: the same small-space states for every candidate frame
    fixed = sample_small_states(small_dim, samples, config.resolved_seed())
    return lambda frame: float(np.mean(linear_se_many(big, fixed @ frame.T)))


def _params_objective(
    big: HilbertSpec, small_dim: int, frame_value: Callable[[ComplexArray], float], sign: float, seed: int
) -> Objective:
    def objective(params: npt.NDArray[np.float64]) -> float:
        rng = np.random.default_rng(seed)
        current = params
        for attempt in range(_PERTURB_ATTEMPTS + 1):
            try:
                return sign * frame_value(embedding_from_params(big, small_dim, current).columns)
            except RankDeficientParametersError:
                if attempt == _PERTURB_ATTEMPTS:
                    raise
                current = params + _PERTURBATION * rng.standard_normal(params.shape)
        raise AssertionError('unreachable')

    return objective


def extremize_ase(
    big: HilbertSpec,
    small_dim: int,
    config: OptimizerConfig | None = None,
    threads: int | None = None,
    log: LoggerProtocol | None = None,
) -> ExtremizationResult:
    """
    Smallest (or largest) extrinsic ASE over d_S-dimensional subspaces, best over restarts.

    The reported embedding is always re-scored with the exact objective.

    Raises:
        DomainError: If d_S is outside [1, d_B]
        OptimizationError: If every restart fails
    """
    config = config or OptimizerConfig()
    log = log or NullLogger()
    if not 1 <= small_dim <= big.dim:
        raise DomainError(f'Need 1 <= d_S <= d_B, got d_S={small_dim}, d_B={big.dim}')
    seed = config.resolved_seed()
    kind = config.resolved_objective(big.dim)

    if small_dim == big.dim:
        embedding = Embedding.canonical(big, small_dim)
        value = extrinsic_ase_of_embedding(embedding)
        return ExtremizationResult(embedding, value, value, (value,), kind, config.direction, seed)

    sign = 1.0 if config.direction is Direction.MINIMIZE else -1.0
    objective = _params_objective(big, small_dim, _frame_objective(big, small_dim, kind, config), sign, seed)
    starts = [block_rng(seed, restart).standard_normal(2 * big.dim * small_dim) for restart in range(config.restarts)]
    log.info(f'{config.direction.value} ASE: d_B={big.dim} ({big.describe()}), d_S={small_dim}, {len(starts)} restarts')
    outcome = minimize_with_restarts(objective, starts, config, threads)
    if outcome.failures:
        log.warning(f'{outcome.failures} of {len(starts)} restarts failed')

    embedding = embedding_from_params(big, small_dim, outcome.best_x)
    exact = extrinsic_ase_of_embedding(embedding)
    restart_values = tuple(sign * value for value in outcome.values)
    return ExtremizationResult(embedding, sign * outcome.best_value, exact, restart_values, kind, config.direction, seed)


def extremal_sweep(
    big: HilbertSpec,
    small_dims: Sequence[int],
    config: OptimizerConfig | None = None,
    small_flavor_for: Callable[[int], Flavor] = Flavor.default_for,
    threads: int | None = None,
    log: LoggerProtocol | None = None,
) -> list[SweepRow]:
    """
    Minimum and maximum ASE per d_S with the intrinsic reference values.

    A decrease of the minimum with growing d_S is logged as a finding.
    """
    config = config or OptimizerConfig()
    log = log or NullLogger()
    big_intrinsic = intrinsic_ase(big)
    rows: list[SweepRow] = []
    for small_dim in small_dims:
        low = extremize_ase(big, small_dim, attrs.evolve(config, direction=Direction.MINIMIZE), threads, log)
        high = extremize_ase(big, small_dim, attrs.evolve(config, direction=Direction.MAXIMIZE), threads, log)
        small_flavor = small_flavor_for(small_dim) if small_dim > 1 else None
        row = SweepRow(
            d_S=int(small_dim),
            min_ase=low.exact_value,
            max_ase=high.exact_value,
            intrinsic_small=intrinsic_ase(small_dim, small_flavor),
            intrinsic_big=big_intrinsic,
        )
        if rows and row.min_ase < rows[-1].min_ase - 1e-6:
            log.warning(f'minimal ASE decreases from d_S={rows[-1].d_S} to d_S={small_dim}')
            logger.warning('non-monotone minimal ASE at d_S=%d: %.6f < %.6f', small_dim, row.min_ase, rows[-1].min_ase)
        rows.append(row)
    return rows


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    """CSV with header d_S,min_ase,max_ase,intrinsic_small,intrinsic_big."""
    return csv_text([row.model_dump(mode='json') for row in rows])
