"""
Tests for stabilizer codespaces, A_S enumeration and the closed-form codespace gap.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from src.domain.codes import PhaseMap
from src.domain.spaces import Flavor, HilbertSpec
from src.exceptions import DomainError, IsotropyError, NontrivialPhaseError, PhaseConsistencyError
from src.services.averages import extrinsic_ase, intrinsic_ase
from src.services.codes import (
    GapSign,
    a_set,
    builtin_codes,
    classify_gap,
    code_gap_closed_form,
    code_gap_closed_form_exact,
    code_report,
    codespace_projector,
    codewords,
    default_small_flavor,
    isotropic_from_generators,
    perp,
    phases_from_mapping,
    random_isotropic_set,
    stabilizer_group,
    zd_gauge_set,
)

# ==============================================================================
# [[4,2,2]] and [[4,1,2]]
# ==============================================================================


def test_422_structure() -> None:
    code = builtin_codes()['422']
    assert code.isotropic.size == 4
    assert code.isotropic.codespace_dim == 4
    assert code.isotropic.phase_free
    projector = code.projector()
    assert projector.rank == 4
    ghz = np.zeros(16, dtype=np.complex128)
    ghz[[0, 15]] = 1 / np.sqrt(2)
    np.testing.assert_allclose(projector.matrix @ ghz, ghz, atol=1e-12)


def test_422_extrinsic_and_gaps() -> None:
    code = builtin_codes()['422']
    extrinsic = extrinsic_ase(code.projector())
    assert extrinsic == pytest.approx(3 / 7, abs=1e-9)
    assert extrinsic - intrinsic_ase(4, Flavor.MULTIQUBIT) == pytest.approx(0.0, abs=1e-9)
    assert extrinsic - intrinsic_ase(4, Flavor.EVEN) == pytest.approx(-2 / 35, abs=1e-9)


def test_422_closed_form() -> None:
    isotropic = builtin_codes()['422'].isotropic
    assert code_gap_closed_form_exact(isotropic, Flavor.MULTIQUBIT) == 0
    assert code_gap_closed_form_exact(isotropic, Flavor.EVEN) == Fraction(-2, 35)
    assert a_set(isotropic).shape[0] == 64


def test_412_subcode() -> None:
    code = builtin_codes()['412']
    projector = code.projector()
    assert projector.rank == 2
    assert extrinsic_ase(projector) == pytest.approx(1 / 5, abs=1e-9)


def test_422_report_both_readings() -> None:
    code = builtin_codes()['422']
    qubits = code_report('422', code.isotropic, code.phases, Flavor.MULTIQUBIT)
    qudit = code_report('422', code.isotropic, code.phases, Flavor.EVEN)
    assert qubits.classification == 'zero'
    assert qubits.gap == pytest.approx(0.0, abs=1e-9)
    assert qubits.closed_form_gap == pytest.approx(0.0, abs=1e-12)
    assert qudit.classification == 'negative'
    assert qudit.closed_form_fraction == '-2/35'
    assert qudit.gap == pytest.approx(-2 / 35, abs=1e-9)
    assert qudit.perp_size == 64


# ==============================================================================
# Z_d gauge sets
# ==============================================================================


@pytest.mark.parametrize(('d', 'n'), [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (5, 2), (6, 2)])
def test_gauge_a_set_cardinality(d: int, n: int) -> None:
    isotropic = zd_gauge_set(d, n)
    assert isotropic.size == d
    assert isotropic.codespace_dim == d ** (n - 1)
    expected = d if d % 2 else d * 4 ** (n - 1)
    assert a_set(isotropic).shape[0] == expected


def test_gauge_projector_is_group_average() -> None:
    projector = codespace_projector(zd_gauge_set(3, 2))
    shift = np.roll(np.eye(3), 1, axis=0)
    expected = sum(np.kron(np.linalg.matrix_power(shift, i), np.linalg.matrix_power(shift, i)) for i in range(3)) / 3
    assert projector.rank == 3
    np.testing.assert_allclose(projector.matrix, expected, atol=1e-12)


def test_gauge_two_qubit_sites_as_qudit() -> None:
    isotropic = zd_gauge_set(2, 3)
    closed = code_gap_closed_form_exact(isotropic, Flavor.EVEN)
    assert closed == Fraction(4 - 16, 5 * 6 * 7)
    exact = extrinsic_ase(codespace_projector(isotropic)) - intrinsic_ase(4, Flavor.EVEN)
    assert exact == pytest.approx(float(closed), abs=1e-8)


def test_gauge_even_qudits() -> None:
    isotropic = zd_gauge_set(4, 2)
    flavor = default_small_flavor(isotropic)
    assert flavor is Flavor.EVEN
    exact = extrinsic_ase(codespace_projector(isotropic)) - intrinsic_ase(4, flavor)
    assert exact == pytest.approx(code_gap_closed_form(isotropic, flavor), abs=1e-8)


def test_gauge_needs_two_sites() -> None:
    with pytest.raises(DomainError):
        zd_gauge_set(3, 1)


# ==============================================================================
# Closed form against exact evaluation
# ==============================================================================

CROSS_CHECK_SPECS = [
    HilbertSpec.natural(2, 2),
    HilbertSpec.natural(2, 3),
    HilbertSpec.natural(3, 2),
    HilbertSpec.natural(4, 2),
    HilbertSpec.natural(5, 2),
    HilbertSpec.natural(6, 1),
]


@pytest.mark.parametrize('spec', CROSS_CHECK_SPECS, ids=lambda s: s.describe())
def test_closed_form_matches_exact_gap(spec: HilbertSpec, rng: np.random.Generator) -> None:
    for _ in range(4):
        isotropic = random_isotropic_set(spec, rng)
        if not isotropic.phase_free:
            continue
        flavor = default_small_flavor(isotropic)
        small = isotropic.codespace_dim
        closed = code_gap_closed_form(isotropic, flavor)
        exact = extrinsic_ase(codespace_projector(isotropic)) - intrinsic_ase(small, flavor if small > 1 else None)
        assert exact == pytest.approx(closed, abs=1e-8)
        verdict = classify_gap(isotropic, flavor)
        if verdict.sign is GapSign.ZERO:
            assert closed == pytest.approx(0.0, abs=1e-12)
        elif verdict.sign is GapSign.NEGATIVE:
            assert closed < 0


@pytest.mark.slow
@pytest.mark.parametrize('spec', [*CROSS_CHECK_SPECS, HilbertSpec.natural(2, 4)], ids=lambda s: s.describe())
def test_closed_form_matches_exact_gap_many(spec: HilbertSpec, rng: np.random.Generator) -> None:
    for _ in range(20):
        isotropic = random_isotropic_set(spec, rng)
        flavor = default_small_flavor(isotropic)
        small = isotropic.codespace_dim
        exact = extrinsic_ase(codespace_projector(isotropic)) - intrinsic_ase(small, flavor if small > 1 else None)
        assert exact == pytest.approx(code_gap_closed_form(isotropic, flavor), abs=1e-8)


def test_mixed_parity_d6_set_is_unknown() -> None:
    """{0, (3,0)} mixes parities, so no sufficient condition applies; A_S settles the sign."""
    isotropic = isotropic_from_generators(HilbertSpec.natural(6, 1), [[3, 0]])
    assert isotropic.size == 2
    assert isotropic.codespace_dim == 3
    assert classify_gap(isotropic).sign is GapSign.UNKNOWN
    closed = code_gap_closed_form(isotropic, Flavor.ODD)
    exact = extrinsic_ase(codespace_projector(isotropic)) - intrinsic_ase(3, Flavor.ODD)
    assert exact == pytest.approx(closed, abs=1e-8)


def test_even_d6_set_is_zero() -> None:
    isotropic = isotropic_from_generators(HilbertSpec.natural(6, 1), [[2, 0]])
    assert sorted(map(tuple, isotropic.elements.tolist())) == [(0, 0), (2, 0), (4, 0)]
    assert classify_gap(isotropic).sign is GapSign.ZERO


def test_odd_d_classified_zero(rng: np.random.Generator) -> None:
    isotropic = random_isotropic_set(HilbertSpec.natural(3, 2), rng, num_generators=1)
    assert classify_gap(isotropic).sign is GapSign.ZERO
    assert code_gap_closed_form(isotropic, default_small_flavor(isotropic)) == pytest.approx(0.0, abs=1e-12)


# ==============================================================================
# Construction and errors
# ==============================================================================


def test_perp_cardinality() -> None:
    isotropic = zd_gauge_set(3, 2)
    assert perp(isotropic).shape[0] == 9 * 3


def test_codewords_are_orthonormal() -> None:
    words = codewords(builtin_codes()['422'].isotropic)
    np.testing.assert_allclose(words.conj().T @ words, np.eye(4), atol=1e-10)


def test_non_commuting_generators_rejected() -> None:
    with pytest.raises(IsotropyError):
        isotropic_from_generators(HilbertSpec.natural(2, 1), [[1, 0], [0, 1]])


def test_sign_clash_is_not_phase_free() -> None:
    """XX ZZ = -YY, so {I, XX, YY, ZZ} has no trivial phase map."""
    spec = HilbertSpec.natural(2, 2)
    isotropic = isotropic_from_generators(spec, [[1, 0, 1, 0], [0, 1, 0, 1]])
    assert not isotropic.phase_free
    with pytest.raises(PhaseConsistencyError):
        PhaseMap.trivial(isotropic)
    with pytest.raises(PhaseConsistencyError):
        stabilizer_group(spec, [[1, 0, 1, 0], [0, 1, 0, 1], [1, 1, 1, 1]])


def test_phase_map_from_mapping() -> None:
    spec = HilbertSpec.natural(2, 2)
    isotropic = isotropic_from_generators(spec, [[0, 1, 0, 1]])
    phases = phases_from_mapping(isotropic, {(0, 1, 0, 1): 1})
    assert not phases.is_trivial
    projector = codespace_projector(isotropic, phases)
    expected = np.diag([0.0, 1.0, 1.0, 0.0])
    np.testing.assert_allclose(projector.matrix, expected, atol=1e-12)


def test_closed_form_rejects_nontrivial_phases() -> None:
    spec = HilbertSpec.natural(2, 2)
    isotropic = isotropic_from_generators(spec, [[0, 1, 0, 1]])
    phases = phases_from_mapping(isotropic, {(0, 1, 0, 1): 1})
    with pytest.raises(NontrivialPhaseError):
        code_gap_closed_form(isotropic, Flavor.MULTIQUBIT, phases)


def test_report_skips_closed_form_for_nontrivial_phases() -> None:
    code = builtin_codes()['412']
    report = code_report('412', code.isotropic, code.phases)
    assert report.closed_form_gap is None
    assert report.extrinsic == pytest.approx(1 / 5, abs=1e-9)
