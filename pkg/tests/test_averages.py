"""
Tests for intrinsic and extrinsic average stabilizer entropies.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from src.domain.operators import SubspaceProjector
from src.domain.spaces import Flavor, HilbertSpec
from src.domain.states import PureState
from src.exceptions import DimensionError, DomainError, EmptySectorError, FlavorMismatchError, NotAGroupError, SizeGuardError
from src.services.averages import (
    ExtrinsicMethod,
    ase_gap,
    dense_average_oracle,
    expected_gap_exact,
    extrinsic_ase,
    extrinsic_ase_of_embedding,
    intrinsic_ase,
    intrinsic_ase_exact,
    invariant_projector,
    isotypic_projector,
    q_sym_trace_exact,
    random_subspace_gap_curve,
)
from src.services.codes import codespace_projector, gauge_group, zd_gauge_set
from src.services.encodings import gss_projector
from src.services.magic import linear_se
from src.services.sampling import haar_embedding, haar_state
from src.services.wh import random_clifford
from tests.conftest import basis_projector, random_projector

# ==============================================================================
# Closed forms
# ==============================================================================


@pytest.mark.parametrize(
    ('dim', 'flavor', 'expected'),
    [
        (2, Flavor.MULTIQUBIT, Fraction(1, 5)),
        (2, Flavor.EVEN, Fraction(1, 5)),
        (3, Flavor.ODD, Fraction(2, 5)),
        (5, Flavor.ODD, Fraction(4, 7)),
        (4, Flavor.MULTIQUBIT, Fraction(3, 7)),
        (4, Flavor.EVEN, Fraction(17, 35)),
        (8, Flavor.EVEN, Fraction(23, 33)),
    ],
)
def test_intrinsic_closed_forms(dim: int, flavor: Flavor, expected: Fraction) -> None:
    assert intrinsic_ase_exact(dim, flavor) == expected
    assert intrinsic_ase(dim, flavor) == pytest.approx(float(expected), abs=1e-12)


def test_intrinsic_one_dimensional_space_is_zero() -> None:
    assert intrinsic_ase_exact(1) == 0


def test_intrinsic_from_spec() -> None:
    assert intrinsic_ase_exact(HilbertSpec.natural(3, 2)) == 1 - Fraction(3, 11)


def test_intrinsic_requires_flavor_for_bare_dimension() -> None:
    with pytest.raises(DomainError):
        intrinsic_ase_exact(4)


def test_intrinsic_rejects_mismatched_flavor() -> None:
    with pytest.raises(FlavorMismatchError):
        intrinsic_ase_exact(3, Flavor.MULTIQUBIT)
    with pytest.raises(FlavorMismatchError):
        intrinsic_ase_exact(HilbertSpec.natural(3, 1), Flavor.EVEN)


@pytest.mark.parametrize(
    ('spec', 'expected'),
    [
        (HilbertSpec.natural(3, 1), Fraction(4 * 6, 8)),
        (HilbertSpec.natural(6, 1), Fraction(8 * 8, 8)),
        (HilbertSpec.natural(2, 2), Fraction(5 * 6, 6)),
    ],
    ids=lambda v: v.describe() if isinstance(v, HilbertSpec) else str(v),
)
def test_q_sym_trace_cases(spec: HilbertSpec, expected: Fraction) -> None:
    assert q_sym_trace_exact(spec) == expected


def test_random_subspace_gap_curve_ends_at_zero() -> None:
    curve = random_subspace_gap_curve(HilbertSpec.natural(2, 2))
    assert [small for small, _ in curve] == [1, 2, 3, 4]
    assert curve[-1][1] == 0
    assert curve[0][1] == intrinsic_ase_exact(HilbertSpec.natural(2, 2))


def test_expected_gap_rejects_bad_dimension() -> None:
    with pytest.raises(DimensionError):
        expected_gap_exact(HilbertSpec.natural(2, 2), 5, Flavor.ODD)


# ==============================================================================
# Extrinsic ASE: worked examples
# ==============================================================================


def test_gss_on_three_qubits() -> None:
    projector = gss_projector(Flavor.MULTIQUBIT)
    assert extrinsic_ase(projector) == pytest.approx(5 / 9, abs=1e-9)
    assert ase_gap(projector, Flavor.MULTIQUBIT) == pytest.approx(16 / 45, abs=1e-9)


def test_gss_on_one_qudit() -> None:
    projector = gss_projector(Flavor.EVEN)
    assert projector.big == HilbertSpec(8, 1, Flavor.EVEN)
    assert extrinsic_ase(projector) == pytest.approx(83 / 135, abs=1e-9)
    assert ase_gap(projector, Flavor.MULTIQUBIT) == pytest.approx(56 / 135, abs=1e-9)


def test_full_space_gap_is_zero() -> None:
    big = HilbertSpec.natural(3, 2)
    projector = SubspaceProjector.identity(big)
    assert extrinsic_ase(projector) == pytest.approx(intrinsic_ase(big), abs=1e-10)


def test_stabilizer_projector_has_zero_extrinsic() -> None:
    assert extrinsic_ase(basis_projector(HilbertSpec.natural(2, 3), [0])) == pytest.approx(0.0, abs=1e-10)


def test_rank_one_matches_linear_se(rng: np.random.Generator) -> None:
    big = HilbertSpec.natural(3, 2)
    for _ in range(5):
        psi = haar_state(big.dim, rng)
        projector = SubspaceProjector(big=big, matrix=psi.density(), rank=1)
        assert extrinsic_ase(projector) == pytest.approx(linear_se(big, psi), abs=1e-9)


# ==============================================================================
# Extrinsic ASE: evaluators agree
# ==============================================================================


@pytest.mark.parametrize('dim', [2, 3, 4, 5, 6])
def test_characteristic_matches_dense_oracle(dim: int, rng: np.random.Generator) -> None:
    big = HilbertSpec.from_dimension(dim)
    for rank in range(1, dim + 1):
        projector = random_projector(big, rank, rng)
        assert extrinsic_ase(projector, ExtrinsicMethod.CHARACTERISTIC) == pytest.approx(
            dense_average_oracle(projector), abs=1e-8
        )


@pytest.mark.slow
@pytest.mark.parametrize('dim', [2, 3, 4, 5, 6])
def test_oracle_agreement_many_projectors(dim: int, rng: np.random.Generator) -> None:
    big = HilbertSpec.from_dimension(dim)
    for _ in range(40):
        projector = random_projector(big, int(rng.integers(1, dim + 1)), rng)
        assert extrinsic_ase(projector) == pytest.approx(dense_average_oracle(projector), abs=1e-8)


@pytest.mark.parametrize('big', [HilbertSpec.natural(2, 3), HilbertSpec.natural(3, 2), HilbertSpec.natural(6, 1)], ids=lambda s: s.describe())
def test_compressed_matches_characteristic(big: HilbertSpec, rng: np.random.Generator) -> None:
    for rank in (1, 2, big.dim // 2):
        projector = random_projector(big, rank, rng)
        characteristic = extrinsic_ase(projector, ExtrinsicMethod.CHARACTERISTIC)
        assert extrinsic_ase(projector, ExtrinsicMethod.COMPRESSED) == pytest.approx(characteristic, abs=1e-9)
        assert extrinsic_ase_of_embedding(projector.embedding()) == pytest.approx(characteristic, abs=1e-9)


def test_thread_count_does_not_change_result(rng: np.random.Generator) -> None:
    projector = random_projector(HilbertSpec.natural(2, 3), 3, rng)
    single = extrinsic_ase(projector, threads=1)
    assert extrinsic_ase(projector, threads=4) == pytest.approx(single, abs=1e-12)


def test_clifford_covariance(rng: np.random.Generator) -> None:
    big = HilbertSpec.natural(3, 2)
    projector = random_projector(big, 3, rng)
    for _ in range(3):
        unitary = random_clifford(big, rng)
        rotated = SubspaceProjector(big=big, matrix=unitary @ projector.matrix @ unitary.conj().T, rank=3)
        assert extrinsic_ase(rotated) == pytest.approx(extrinsic_ase(projector), abs=1e-9)


@pytest.mark.slow
@pytest.mark.parametrize(
    'big', [HilbertSpec.natural(2, 2), HilbertSpec.natural(2, 3), HilbertSpec.natural(3, 2)], ids=lambda s: s.describe()
)
def test_clifford_covariance_many(big: HilbertSpec, rng: np.random.Generator) -> None:
    for rank in range(1, big.dim):
        projector = random_projector(big, rank, rng)
        reference = extrinsic_ase(projector)
        for _ in range(10):
            unitary = random_clifford(big, rng)
            rotated = SubspaceProjector(big=big, matrix=unitary @ projector.matrix @ unitary.conj().T, rank=rank)
            assert extrinsic_ase(rotated) == pytest.approx(reference, abs=1e-9)


def test_extrinsic_within_bounds(rng: np.random.Generator) -> None:
    big = HilbertSpec.natural(2, 3)
    embedding = haar_embedding(big, 4, rng)
    value = extrinsic_ase_of_embedding(embedding)
    assert 0.0 <= value <= 1 - 2 / (big.dim + 1)


def test_dense_oracle_size_guard() -> None:
    with pytest.raises(SizeGuardError):
        dense_average_oracle(gss_projector())


# ==============================================================================
# Group projectors
# ==============================================================================


def test_invariant_projector_of_gauge_group() -> None:
    projector = invariant_projector(gauge_group(3, 2), HilbertSpec.natural(3, 2))
    assert projector.rank == 3
    np.testing.assert_allclose(projector.matrix, codespace_projector(zd_gauge_set(3, 2)).matrix, atol=1e-10)


def test_isotypic_projector_sign_character() -> None:
    swap = np.eye(4)[[0, 2, 1, 3]]
    projector = isotypic_projector([np.eye(4), swap], [1, -1], irrep_dim=1)
    assert projector.rank == 1
    singlet = PureState([0, 1 / np.sqrt(2), -1 / np.sqrt(2), 0])
    np.testing.assert_allclose(projector.matrix, singlet.density(), atol=1e-12)


def test_invariant_projector_rejects_non_group() -> None:
    x = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    z = np.diag([1.0, -1.0]).astype(np.complex128)
    with pytest.raises(NotAGroupError):
        invariant_projector([np.eye(2), x, z])


def test_trivial_sector_can_be_empty() -> None:
    minus = -np.eye(2, dtype=np.complex128)
    with pytest.raises(EmptySectorError):
        invariant_projector([np.eye(2), minus])
