"""
Tests for the embedding parametrization, the restart driver and ASE extremization.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt
import pytest

from src.domain.spaces import Flavor, HilbertSpec
from src.exceptions import DimensionError, DomainError, OptimizationError, RankDeficientParametersError
from src.schemas.operations.results import SweepRow
from src.services.averages import intrinsic_ase
from src.services.optimize import (
    Direction,
    GradientScheme,
    ObjectiveKind,
    OptimizerConfig,
    embedding_from_params,
    extremal_sweep,
    extremize_ase,
    finite_difference_gradient,
    minimize_with_restarts,
    params_from_frame,
    sweep_csv,
)
from src.services.sampling import haar_frame


def shifted_square(x: npt.NDArray[np.float64]) -> float:
    return float(np.sum((x - 1.0) ** 2))


# ==============================================================================
# Parametrization
# ==============================================================================


def test_params_give_an_isometry(rng: np.random.Generator) -> None:
    big = HilbertSpec.natural(2, 3)
    embedding = embedding_from_params(big, 3, rng.standard_normal(2 * 8 * 3))
    np.testing.assert_allclose(embedding.columns.conj().T @ embedding.columns, np.eye(3), atol=1e-12)


def test_frame_survives_parametrization(rng: np.random.Generator) -> None:
    frame = haar_frame(6, 2, rng)
    rebuilt = embedding_from_params(HilbertSpec.natural(6, 1), 2, params_from_frame(frame))
    np.testing.assert_allclose(rebuilt.columns, frame, atol=1e-12)


def test_zero_params_are_rank_deficient() -> None:
    with pytest.raises(RankDeficientParametersError):
        embedding_from_params(HilbertSpec.natural(3, 1), 2, np.zeros(12))


def test_params_length_is_checked() -> None:
    with pytest.raises(DimensionError):
        embedding_from_params(HilbertSpec.natural(3, 1), 2, np.ones(5))


# ==============================================================================
# Gradients and restarts
# ==============================================================================


def test_central_gradient_of_quadratic() -> None:
    x = np.array([0.0, 2.0, -1.0])
    gradient = finite_difference_gradient(shifted_square, x, 1e-5, GradientScheme.CENTRAL)
    np.testing.assert_allclose(gradient, 2 * (x - 1.0), atol=1e-8)


def test_forward_gradient_of_quadratic() -> None:
    x = np.array([0.5, 3.0])
    gradient = finite_difference_gradient(shifted_square, x, 1e-6)
    np.testing.assert_allclose(gradient, 2 * (x - 1.0), atol=1e-4)
    np.testing.assert_array_equal(x, [0.5, 3.0])


def test_restarts_find_minimum() -> None:
    starts = [np.array([5.0, -3.0]), np.array([0.0, 0.0]), np.array([-2.0, 4.0])]
    outcome = minimize_with_restarts(shifted_square, starts, OptimizerConfig(), threads=2)
    assert outcome.best_value == pytest.approx(0.0, abs=1e-8)
    np.testing.assert_allclose(outcome.best_x, [1.0, 1.0], atol=1e-4)
    assert len(outcome.values) == 3
    assert outcome.failures == 0


def test_ties_go_to_earliest_start() -> None:
    starts = [np.array([2.0]), np.array([7.0])]
    outcome = minimize_with_restarts(lambda x: 0.0, starts, OptimizerConfig(), threads=1)
    np.testing.assert_array_equal(outcome.best_x, [2.0])


def test_failed_restarts_are_counted() -> None:
    def guarded(x: npt.NDArray[np.float64]) -> float:
        if x[0] < -2.0:
            raise DomainError('outside')
        return float((x[0] - 3.0) ** 2)

    outcome = minimize_with_restarts(guarded, [np.array([-5.0]), np.array([4.0])], OptimizerConfig(), threads=1)
    assert outcome.failures == 1
    assert np.isnan(outcome.values[0])
    assert outcome.best_value == pytest.approx(0.0, abs=1e-8)


def test_all_restarts_failing_raises() -> None:
    def broken(x: npt.NDArray[np.float64]) -> float:
        raise DomainError('always')

    with pytest.raises(OptimizationError):
        minimize_with_restarts(broken, [np.zeros(2), np.ones(2)], OptimizerConfig(), threads=1)


def test_config_validation() -> None:
    with pytest.raises(DomainError):
        OptimizerConfig(gradient_step=0.1)
    with pytest.raises(ValueError, match='restarts'):
        OptimizerConfig(restarts=0)
    config = OptimizerConfig(direction='maximize', objective='exact')
    assert config.direction is Direction.MAXIMIZE
    assert config.objective is ObjectiveKind.EXACT


def test_auto_objective_switches_on_dimension() -> None:
    config = OptimizerConfig()
    assert config.resolved_objective(8) is ObjectiveKind.EXACT
    assert config.resolved_objective(64) is ObjectiveKind.MONTE_CARLO


# ==============================================================================
# Extremization
# ==============================================================================


def test_full_subspace_needs_no_search() -> None:
    big = HilbertSpec.natural(3, 1)
    result = extremize_ase(big, 3)
    assert result.value == pytest.approx(intrinsic_ase(big), abs=1e-10)
    assert result.restart_values == (result.value,)


def test_extremize_rejects_bad_dimension() -> None:
    with pytest.raises(DomainError):
        extremize_ase(HilbertSpec.natural(2, 2), 5)


def test_min_below_max() -> None:
    big = HilbertSpec.natural(3, 1)
    config = OptimizerConfig(restarts=2, max_iters=60, seed=1)
    low = extremize_ase(big, 2, config, threads=1)
    high = extremize_ase(big, 2, OptimizerConfig(restarts=2, max_iters=60, seed=1, direction='maximize'), threads=1)
    assert low.objective is ObjectiveKind.EXACT
    assert low.exact_value == pytest.approx(low.value, abs=1e-10)
    assert len(low.restart_values) == 2
    assert low.exact_value <= high.exact_value + 1e-9
    assert low.embedding.small_dim == 2


@pytest.mark.slow
def test_minimum_on_even_qudit_matches_qubit_average() -> None:
    big = HilbertSpec.from_dimension(4, Flavor.EVEN)
    result = extremize_ase(big, 2, OptimizerConfig(restarts=8, seed=3))
    assert result.exact_value == pytest.approx(1 / 5, abs=1e-4)


@pytest.mark.slow
def test_restarts_reliably_reach_qubit_average() -> None:
    """Nearly every start on a 4-dim qudit converges to the qubit-like minimum 1/5."""
    result = extremize_ase(HilbertSpec.from_dimension(4, Flavor.EVEN), 2, OptimizerConfig(restarts=100, seed=3))
    assert len(result.restart_values) == 100
    hits = sum(abs(value - 1 / 5) < 1e-4 for value in result.restart_values)
    assert hits >= 90


@pytest.mark.slow
def test_three_qubits_admit_negative_gap() -> None:
    """Some 4-dim subspace of three qubits sits below the even-qudit average."""
    result = extremize_ase(HilbertSpec.natural(2, 3), 4, OptimizerConfig(restarts=8, seed=5))
    assert result.exact_value <= intrinsic_ase(4, Flavor.EVEN) - 1e-3


@pytest.mark.slow
def test_sweep_rows() -> None:
    big = HilbertSpec.natural(2, 2)
    rows = extremal_sweep(big, [1, 2, 4], OptimizerConfig(restarts=3, seed=2), threads=1)
    assert [row.d_S for row in rows] == [1, 2, 4]
    assert rows[0].min_ase == pytest.approx(0.0, abs=1e-5)
    assert rows[-1].min_ase == pytest.approx(rows[-1].intrinsic_big, abs=1e-10)


def test_sweep_csv_layout() -> None:
    rows = [SweepRow(d_S=1, min_ase=0.0, max_ase=0.4, intrinsic_small=0.0, intrinsic_big=3 / 7)]
    text = sweep_csv(rows)
    header, line = text.strip().split('\n')
    assert header == 'd_S,min_ase,max_ase,intrinsic_small,intrinsic_big'
    assert line == '1,0,0.4,0,0.428571428571'
