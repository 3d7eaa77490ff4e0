"""
Tests for single-state stabilizer entropies.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.domain.spaces import HilbertSpec
from src.domain.states import PureState
from src.exceptions import DimensionError, DomainError, NotNormalizedError, PreconditionError
from src.services.magic import (
    char_function,
    eval_char_at,
    linear_se,
    linear_se_many,
    renyi_se,
    robustness_bounds,
    robustness_lower_bound,
    se_upper_bound,
    st_norm,
    stabilizer_purity,
    wh_distribution,
)
from src.services.sampling import haar_state, haar_states
from src.services.wh import displacement_dense, random_clifford
from tests.conftest import dense_linear_se

QUBIT = HilbertSpec.natural(2, 1)
T_STATE = PureState([1 / math.sqrt(2), complex(0.5, 0.5)])


def sic_fiducial() -> PureState:
    theta = math.acos(math.sqrt((1 + 1 / math.sqrt(3)) / 2))
    return PureState([math.cos(theta), np.exp(1j * np.pi / 4) * math.sin(theta)])


# ==============================================================================
# Known values
# ==============================================================================


def test_t_state_values() -> None:
    assert linear_se(QUBIT, T_STATE) == pytest.approx(0.25, abs=1e-12)
    assert renyi_se(QUBIT, T_STATE, 2.0) == pytest.approx(math.log(4 / 3), abs=1e-12)


def test_sic_fiducial_attains_upper_bound() -> None:
    psi = sic_fiducial()
    assert renyi_se(QUBIT, psi, 2.0) == pytest.approx(se_upper_bound(QUBIT, 2.0), abs=1e-10)
    assert renyi_se(QUBIT, psi, 2.0) == pytest.approx(math.log(1.5), abs=1e-10)
    assert linear_se(QUBIT, psi) == pytest.approx(1 / 3, abs=1e-12)


@pytest.mark.parametrize('spec', [QUBIT, HilbertSpec.natural(2, 3), HilbertSpec.natural(3, 2), HilbertSpec.natural(5, 1)], ids=lambda s: s.describe())
def test_basis_states_are_stabilizer(spec: HilbertSpec) -> None:
    for index in range(spec.dim):
        psi = PureState.basis(spec.dim, index)
        assert linear_se(spec, psi) == pytest.approx(0.0, abs=1e-10)
        assert renyi_se(spec, psi, 2.0) == pytest.approx(0.0, abs=1e-10)
        assert st_norm(spec, psi) == pytest.approx(1.0, abs=1e-10)


def test_distribution_sums_to_one(rng: np.random.Generator) -> None:
    spec = HilbertSpec.natural(3, 2)
    distribution = wh_distribution(spec, haar_state(spec.dim, rng))
    assert distribution.sum() == pytest.approx(1.0, abs=1e-10)
    assert np.all(distribution >= 0)


@pytest.mark.parametrize('spec', [QUBIT, HilbertSpec.natural(2, 2), HilbertSpec.natural(3, 1), HilbertSpec.natural(4, 1)], ids=lambda s: s.describe())
def test_linear_se_matches_dense_definition(spec: HilbertSpec, rng: np.random.Generator) -> None:
    for _ in range(5):
        psi = haar_state(spec.dim, rng)
        assert linear_se(spec, psi) == pytest.approx(dense_linear_se(spec, psi.amplitudes), abs=1e-10)


def test_linear_se_many_matches_single(rng: np.random.Generator) -> None:
    spec = HilbertSpec.natural(3, 2)
    batch = haar_states(spec.dim, 20, rng)
    expected = [linear_se(spec, row) for row in batch]
    np.testing.assert_allclose(linear_se_many(spec, batch), expected, atol=1e-10)


def test_renyi_two_relation_to_linear(rng: np.random.Generator) -> None:
    """M_2 = -log(1 - M)."""
    spec = HilbertSpec.natural(2, 3)
    psi = haar_state(spec.dim, rng)
    assert renyi_se(spec, psi, 2.0) == pytest.approx(-math.log(1 - linear_se(spec, psi)), abs=1e-10)


def test_renyi_two_is_additive(rng: np.random.Generator) -> None:
    left, right = haar_state(2, rng), haar_state(2, rng)
    product = left.tensor(right)
    expected = renyi_se(QUBIT, left, 2.0) + renyi_se(QUBIT, right, 2.0)
    assert renyi_se(HilbertSpec.natural(2, 2), product, 2.0) == pytest.approx(expected, abs=1e-10)


def test_density_matrix_input_matches_vector(rng: np.random.Generator) -> None:
    spec = HilbertSpec.natural(3, 1)
    psi = haar_state(3, rng)
    assert linear_se(spec, psi.density()) == pytest.approx(linear_se(spec, psi), abs=1e-12)


# ==============================================================================
# Invariances
# ==============================================================================


@pytest.mark.parametrize('spec', [HilbertSpec.natural(2, 3), HilbertSpec.natural(3, 2), HilbertSpec.natural(5, 1)], ids=lambda s: s.describe())
def test_clifford_orbit_of_zero_is_stabilizer(spec: HilbertSpec, rng: np.random.Generator) -> None:
    zero = np.zeros(spec.dim, dtype=np.complex128)
    zero[0] = 1.0
    for _ in range(25):
        unitary = random_clifford(spec, rng)
        assert linear_se(spec, unitary @ zero) == pytest.approx(0.0, abs=1e-10)


@pytest.mark.parametrize('spec', [HilbertSpec.natural(2, 2), HilbertSpec.natural(3, 2)], ids=lambda s: s.describe())
def test_clifford_invariance(spec: HilbertSpec, rng: np.random.Generator) -> None:
    for _ in range(10):
        unitary = random_clifford(spec, rng)
        psi = haar_state(spec.dim, rng).amplitudes
        assert linear_se(spec, unitary @ psi) == pytest.approx(linear_se(spec, psi), abs=1e-9)


@pytest.mark.slow
@pytest.mark.parametrize('spec', [HilbertSpec.natural(2, 3), HilbertSpec.natural(3, 2), HilbertSpec.natural(5, 1)], ids=lambda s: s.describe())
def test_clifford_orbit_of_zero_is_stabilizer_many(spec: HilbertSpec, rng: np.random.Generator) -> None:
    zero = np.zeros(spec.dim, dtype=np.complex128)
    zero[0] = 1.0
    for _ in range(500):
        unitary = random_clifford(spec, rng)
        assert linear_se(spec, unitary @ zero) == pytest.approx(0.0, abs=1e-10)


@pytest.mark.slow
def test_clifford_invariance_many(rng: np.random.Generator) -> None:
    specs = [HilbertSpec.natural(2, 2), HilbertSpec.natural(2, 3), HilbertSpec.natural(3, 2), HilbertSpec.natural(5, 1)]
    for trial in range(200):
        spec = specs[trial % len(specs)]
        unitary = random_clifford(spec, rng)
        psi = haar_state(spec.dim, rng).amplitudes
        assert linear_se(spec, unitary @ psi) == pytest.approx(linear_se(spec, psi), abs=1e-9)


@given(st.integers(0, 2**32 - 1))
def test_linear_se_range(seed: int) -> None:
    spec = HilbertSpec.natural(3, 1)
    value = linear_se(spec, haar_state(3, np.random.default_rng(seed)))
    assert 0.0 <= value < 1.0
    assert value <= 1 - 2 / (spec.dim + 1) + 1e-10


# ==============================================================================
# Characteristic function
# ==============================================================================


def test_char_function_of_projector_origin(rng: np.random.Generator) -> None:
    spec = HilbertSpec.natural(2, 2)
    frame, _ = np.linalg.qr(rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2)))
    cf = char_function(spec, frame @ frame.conj().T, subspace_dim=2)
    assert cf.values[0] == pytest.approx(0.5, abs=1e-10)


def test_eval_char_at_folds_even_sign() -> None:
    spec = HilbertSpec.natural(2, 1)
    operator = displacement_dense(spec, [1, 0])
    cf = char_function(spec, operator)
    # D_{(1, 2)} = -D_{(1, 0)} at d = 2
    assert eval_char_at(cf, [1, 0]) == pytest.approx(1.0)
    assert eval_char_at(cf, [1, 2]) == pytest.approx(-1.0)


# ==============================================================================
# Bounds and errors
# ==============================================================================


def test_robustness_bounds_on_t_state() -> None:
    bounds = robustness_bounds(QUBIT, T_STATE)
    assert bounds.linear == pytest.approx(robustness_lower_bound(0.25))
    assert bounds.renyi == pytest.approx(math.sqrt(4 / 3))
    assert bounds.best >= 1.0


def test_upper_bound_linear_limit() -> None:
    """M_2 bound equals -log(1 - M_max) with M_max = 1 - 2/(D+1)."""
    for dim in (2, 3, 4, 8):
        assert se_upper_bound(dim, 2.0) == pytest.approx(-math.log(2 / (dim + 1)), abs=1e-12)


@pytest.mark.parametrize('alpha', [0.0, -1.0, 1.0])
def test_renyi_rejects_bad_alpha(alpha: float) -> None:
    with pytest.raises(DomainError):
        renyi_se(QUBIT, T_STATE, alpha)


def test_robustness_bound_rejects_out_of_range() -> None:
    with pytest.raises(DomainError):
        robustness_lower_bound(1.0)


def test_rejects_unnormalized_state() -> None:
    with pytest.raises(NotNormalizedError):
        linear_se(QUBIT, [1.0, 1.0])


def test_rejects_wrong_dimension() -> None:
    with pytest.raises(DimensionError):
        linear_se(HilbertSpec.natural(3, 1), [1.0, 0.0])


def test_rejects_mixed_state() -> None:
    with pytest.raises(PreconditionError):
        linear_se(QUBIT, np.eye(2) / 2)


def test_stabilizer_purity_matches_linear_se(rng: np.random.Generator) -> None:
    spec = HilbertSpec.natural(3, 2)
    psi = haar_state(spec.dim, rng)
    assert stabilizer_purity(spec, psi, 1.0) == pytest.approx(1.0, abs=1e-10)
    assert stabilizer_purity(spec, psi, 2.0) == pytest.approx((1 - linear_se(spec, psi)) / spec.dim, abs=1e-12)
