"""
Monte Carlo estimates of subspace ASEs and complement-support analysis.

All estimators draw small-space Haar states from the block streams of src.services.sampling,
so a seed fixes every sample regardless of the thread budget.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence

import attrs
import numpy as np
import numpy.typing as npt
import scipy.linalg

from src.config import settings
from src.domain.operators import ComplexArray, Embedding, SubspaceProjector
from src.domain.spaces import HilbertSpec
from src.domain.states import PureState
from src.exceptions import ComplementError, DimensionError, DomainError, PreconditionError
from src.protocols import LoggerProtocol, NullLogger
from src.schemas.operations.results import ComplementReport, ConvergencePoint, EnsembleReport, McResult
from src.services.averages import extrinsic_ase, extrinsic_ase_of_embedding, intrinsic_ase
from src.services.magic import linear_se_many
from src.services.optimize import OptimizerConfig, minimize_with_restarts
from src.services.sampling import (
    StateMap,
    block_rng,
    haar_embedding,
    haar_state,
    sample_linear_se,
    sample_small_states,
)

__all__ = [
    'ComplementOptimum',
    'average_optimal_complement',
    'complement_basis',
    'complement_relative_change',
    'complement_state',
    'haar_embedding',
    'haar_state',
    'mc_ase',
    'mc_ase_preset',
    'mc_convergence_curve',
    'mc_state_map',
    'optimal_complement_per_state',
    'optimal_fixed_complement',
    'subspace_ensemble_stats',
]

logger = logging.getLogger(__name__)

COMPLEMENT_TOL = 1e-8

type McTarget = SubspaceProjector | Embedding


# ==============================================================================
# Monte Carlo ASE
# ==============================================================================


def _embedding_of(target: McTarget) -> Embedding:
    return target.embedding() if isinstance(target, SubspaceProjector) else target


def _summarize(values: npt.NDArray[np.float64], seed: int) -> McResult:
    return McResult(
        mean=float(np.mean(values)),
        stderr=float(np.std(values, ddof=1) / math.sqrt(values.size)),
        samples=int(values.size),
        seed=int(seed),
    )


def _check_samples(samples: int) -> None:
    if samples < 2:
        raise PreconditionError(f'At least two samples are needed for a standard error, got {samples}')


def mc_state_map(
    state_map: StateMap,
    small_dim: int,
    big: HilbertSpec,
    samples: int,
    seed: int | None = None,
    threads: int | None = None,
) -> McResult:
    """
    Mean linear SE on `big` of state_map(psi) over Haar psi in C^{d_S}.

    state_map takes an (m x d_S) batch and returns the (m x d_B) host states; it need not be linear.
    """
    _check_samples(samples)
    resolved = settings.DEFAULT_SEED if seed is None else seed
    values = sample_linear_se(big, small_dim, state_map, samples, resolved, threads)
    return _summarize(values, resolved)


def mc_ase(target: McTarget, samples: int, seed: int | None = None, threads: int | None = None) -> McResult:
    """
    Monte Carlo extrinsic ASE of a subspace.

    Raises:
        PreconditionError: If samples < 2
    """
    embedding = _embedding_of(target)
    frame = embedding.columns
    return mc_state_map(lambda small: small @ frame.T, embedding.small_dim, embedding.big, samples, seed, threads)


def mc_ase_preset(
    target: McTarget,
    seed: int | None = None,
    runs: int | None = None,
    samples: int | None = None,
    threads: int | None = None,
    log: LoggerProtocol | None = None,
) -> McResult:
    """Average of `runs` independent runs of `samples` samples each (20 x 1000 by default)."""
    log = log or NullLogger()
    run_count = runs or settings.PRESET_RUNS
    per_run = samples or settings.PRESET_SAMPLES
    base = settings.DEFAULT_SEED if seed is None else seed
    embedding = _embedding_of(target)
    frame = embedding.columns
    run_values = [
        sample_linear_se(embedding.big, embedding.small_dim, lambda small: small @ frame.T, per_run, base + run, threads)
        for run in range(run_count)
    ]
    means = np.array([float(np.mean(values)) for values in run_values])
    pooled = np.concatenate(run_values)
    spread = float(np.std(means, ddof=1)) if run_count > 1 else 0.0
    log.info(f'preset {run_count} x {per_run}: mean {pooled.mean():.6f}, run spread {spread:.6f}')
    return McResult(
        mean=float(np.mean(pooled)),
        stderr=float(np.std(pooled, ddof=1) / math.sqrt(pooled.size)),
        samples=int(pooled.size),
        seed=int(base),
        runs=int(run_count),
        run_spread=spread,
    )


def mc_convergence_curve(
    projector: SubspaceProjector,
    sample_grid: Sequence[int],
    repetitions: int = 10,
    seed: int | None = None,
    threads: int | None = None,
) -> list[ConvergencePoint]:
    """
    Median squared error (exact - mc)^2 over repetitions, per sample count.

    Raises:
        PreconditionError: If the grid is empty or holds a count below 2
    """
    if not sample_grid:
        raise PreconditionError('The sample grid is empty')
    for samples in sample_grid:
        _check_samples(samples)
    if repetitions < 1:
        raise PreconditionError(f'repetitions must be >= 1, got {repetitions}')
    exact = extrinsic_ase(projector, threads=threads)
    embedding = projector.embedding()
    base = settings.DEFAULT_SEED if seed is None else seed
    points: list[ConvergencePoint] = []
    for index, samples in enumerate(sample_grid):
        errors = [
            (exact - mc_ase(embedding, samples, seed=base + 1000 * index + rep, threads=threads).mean) ** 2
            for rep in range(repetitions)
        ]
        points.append(ConvergencePoint(samples=int(samples), squared_error=float(np.median(errors))))
    return points


def subspace_ensemble_stats(
    big: HilbertSpec,
    small_dim: int,
    num_subspaces: int,
    samples_per: int | None = None,
    seed: int | None = None,
    threads: int | None = None,
    log: LoggerProtocol | None = None,
) -> EnsembleReport:
    """
    ASE statistics over Haar-random subspaces; samples_per=None scores each subspace exactly.

    The ensemble mean is expected to equal the intrinsic ASE of the host.
    """
    log = log or NullLogger()
    if not 1 <= small_dim <= big.dim:
        raise DomainError(f'Need 1 <= d_S <= d_B, got d_S={small_dim}, d_B={big.dim}')
    if num_subspaces < 2:
        raise PreconditionError(f'At least two subspaces are needed, got {num_subspaces}')
    base = settings.DEFAULT_SEED if seed is None else seed
    exact = samples_per is None
    count = 1 if small_dim == big.dim else num_subspaces
    values = np.empty(count)
    for index in range(count):
        embedding = haar_embedding(big, small_dim, block_rng(base, index))
        if exact:
            values[index] = extrinsic_ase_of_embedding(embedding, threads=threads)
        else:
            assert samples_per is not None
            values[index] = mc_ase(embedding, samples_per, seed=base + index + 1, threads=threads).mean
    std = float(np.std(values, ddof=1)) if count > 1 else 0.0
    log.info(f'ensemble d_B={big.dim}, d_S={small_dim}: mean {values.mean():.6f}, std {std:.6f}')
    return EnsembleReport(
        big_dim=big.dim,
        small_dim=int(small_dim),
        num_subspaces=int(count),
        samples_per=samples_per,
        exact=exact,
        mean=float(np.mean(values)),
        std=std,
        stderr=std / math.sqrt(count),
        expected=intrinsic_ase(big),
        seed=int(base),
    )


# ==============================================================================
# Complement support
# ==============================================================================


def complement_basis(embedding: Embedding) -> ComplexArray:
    """
    Orthonormal basis (d_B x (d_B - d_S)) of the orthogonal complement of the range.

    Raises:
        ComplementError: If the subspace is the whole space
    """
    if embedding.small_dim == embedding.big.dim:
        raise ComplementError('The subspace is the whole space; its complement is empty')
    return np.asarray(scipy.linalg.null_space(embedding.columns.conj().T), dtype=np.complex128)


def complement_state(embedding: Embedding, small_state: PureState | npt.ArrayLike, kappa: PureState | npt.ArrayLike) -> PureState:
    """
    (E psi + kappa)/sqrt(2) for unit kappa orthogonal to the range of E.

    Raises:
        ComplementError: If kappa has weight on the subspace or the complement is empty
    """
    if embedding.small_dim == embedding.big.dim:
        raise ComplementError('The subspace is the whole space; no complement state exists')
    psi = small_state if isinstance(small_state, PureState) else PureState(small_state)
    support = kappa if isinstance(kappa, PureState) else PureState(kappa)
    if psi.dim != embedding.small_dim:
        raise DimensionError('small state', (embedding.small_dim,), (psi.dim,))
    if support.dim != embedding.big.dim:
        raise DimensionError('complement state', (embedding.big.dim,), (support.dim,))
    leak = float(np.linalg.norm(embedding.columns.conj().T @ support.amplitudes))
    if leak > COMPLEMENT_TOL:
        raise ComplementError(f'kappa has weight {leak:.3e} on the subspace')
    return PureState.normalized(embedding.apply(psi.amplitudes) + support.amplitudes)


def _kappa(basis: ComplexArray, params: npt.NDArray[np.float64]) -> ComplexArray:
    half = basis.shape[1]
    coefficients = params[:half] + 1j * params[half:]
    norm = float(np.linalg.norm(coefficients))
    if norm == 0.0:
        raise ComplementError('Zero complement coefficients')
    return basis @ (coefficients / norm)


@attrs.define(frozen=True)
class ComplementOptimum:
    kappa: ComplexArray = attrs.field(eq=False)
    value: float
    restart_values: tuple[float, ...]


def _complement_starts(basis: ComplexArray, restarts: int, seed: int) -> list[npt.NDArray[np.float64]]:
    return [block_rng(seed, restart).standard_normal(2 * basis.shape[1]) for restart in range(restarts)]


def optimal_complement_per_state(
    embedding: Embedding,
    small_state: PureState | npt.ArrayLike,
    restarts: int = 4,
    seed: int | None = None,
    config: OptimizerConfig | None = None,
    threads: int | None = None,
) -> ComplementOptimum:
    """
    Unit kappa in the complement minimizing the linear SE of (E psi + kappa)/sqrt(2).

    Raises:
        ComplementError: If the complement is empty
        OptimizationError: If every restart fails
    """
    basis = complement_basis(embedding)
    psi = small_state if isinstance(small_state, PureState) else PureState(small_state)
    image = embedding.apply(psi.amplitudes)

    def objective(params: npt.NDArray[np.float64]) -> float:
        return float(linear_se_many(embedding.big, (image + _kappa(basis, params)) / math.sqrt(2.0))[0])

    base = settings.DEFAULT_SEED if seed is None else seed
    outcome = minimize_with_restarts(
        objective, _complement_starts(basis, restarts, base), config or OptimizerConfig(restarts=restarts), threads
    )
    return ComplementOptimum(_kappa(basis, outcome.best_x), outcome.best_value, outcome.values)


def average_optimal_complement(
    embedding: Embedding,
    num_states: int,
    restarts: int = 4,
    seed: int | None = None,
    threads: int | None = None,
    log: LoggerProtocol | None = None,
) -> McResult:
    """Mean over Haar psi of the per-state optimal complement SE."""
    _check_samples(num_states)
    log = log or NullLogger()
    base = settings.DEFAULT_SEED if seed is None else seed
    states = sample_small_states(embedding.small_dim, num_states, base)
    values = np.empty(num_states)
    for index, state in enumerate(states):
        values[index] = optimal_complement_per_state(
            embedding, state, restarts=restarts, seed=base + index + 1, threads=threads
        ).value
        if (index + 1) % 50 == 0:
            log.info(f'per-state complements: {index + 1}/{num_states}')
    return _summarize(values, base)


def optimal_fixed_complement(
    embedding: Embedding,
    samples: int,
    restarts: int = 4,
    seed: int | None = None,
    config: OptimizerConfig | None = None,
    threads: int | None = None,
) -> tuple[ComplexArray, McResult]:
    """
    One unit kappa minimizing the average SE of (E psi + kappa)/sqrt(2) over the subspace.

    The inner average uses the same Haar sample for every kappa (common random numbers).
    """
    _check_samples(samples)
    basis = complement_basis(embedding)
    base = settings.DEFAULT_SEED if seed is None else seed
    images = sample_small_states(embedding.small_dim, samples, base) @ embedding.columns.T

    def values_for(kappa: ComplexArray) -> npt.NDArray[np.float64]:
        return linear_se_many(embedding.big, (images + kappa[None, :]) / math.sqrt(2.0))

    def objective(params: npt.NDArray[np.float64]) -> float:
        return float(np.mean(values_for(_kappa(basis, params))))

    outcome = minimize_with_restarts(
        objective, _complement_starts(basis, restarts, base + 1), config or OptimizerConfig(restarts=restarts), threads
    )
    kappa = _kappa(basis, outcome.best_x)
    return kappa, _summarize(values_for(kappa), base)


def complement_relative_change(
    big: HilbertSpec,
    small_dim: int,
    num_subspaces: int,
    samples: int = 200,
    restarts: int = 2,
    seed: int | None = None,
    threads: int | None = None,
    log: LoggerProtocol | None = None,
) -> ComplementReport:
    """
    Mean relative ASE change (fixed-complement ASE - ASE) / ASE over Haar-random subspaces.

    Both averages use the same Haar sample per subspace.
    """
    log = log or NullLogger()
    if not 1 <= small_dim < big.dim:
        raise ComplementError(f'Need 1 <= d_S < d_B, got d_S={small_dim}, d_B={big.dim}')
    _check_samples(num_subspaces)
    base = settings.DEFAULT_SEED if seed is None else seed
    changes = np.empty(num_subspaces)
    baselines = np.empty(num_subspaces)
    for index in range(num_subspaces):
        embedding = haar_embedding(big, small_dim, block_rng(base, index))
        sub_seed = base + 7919 * (index + 1)
        without = float(np.mean(linear_se_many(big, sample_small_states(small_dim, samples, sub_seed) @ embedding.columns.T)))
        _, fixed = optimal_fixed_complement(embedding, samples, restarts=restarts, seed=sub_seed, threads=threads)
        baselines[index] = without
        changes[index] = (fixed.mean - without) / without if without > 0 else 0.0
        log.info(f'subspace {index + 1}/{num_subspaces}: relative change {changes[index]:+.4f}')
    return ComplementReport(
        kind='relative-change',
        big_dim=big.dim,
        small_dim=int(small_dim),
        value=float(np.mean(changes)),
        stderr=float(np.std(changes, ddof=1) / math.sqrt(num_subspaces)),
        baseline=float(np.mean(baselines)),
        samples=int(samples),
        restarts=int(restarts),
        seed=int(base),
    )
