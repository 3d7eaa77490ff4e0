"""
Stabilizer codespaces from isotropic sets.

Main entry points:
- isotropic_from_generators / stabilizer_group: close generators into S (and a phase map)
- codespace_projector: Pi = (1/|S|) sum_a omega^{f(a)} D_a
- perp / a_set: S^perp and A_S = {a in S^perp : 2a in S} by enumeration
- code_gap_closed_form: ASE gap of a codespace from |A_S| alone (trivial phases)
- classify_gap: sign of the gap from structure, without enumeration
"""

from __future__ import annotations

import enum
import logging
from collections import deque
from collections.abc import Mapping, Sequence
from fractions import Fraction

import attrs
import numpy as np
import numpy.typing as npt

from src.config import settings
from src.domain.codes import IsotropicSet, PhaseMap
from src.domain.operators import ComplexArray, IntArray, SubspaceProjector
from src.domain.spaces import Flavor, HilbertSpec, is_power_of_two
from src.exceptions import (
    DomainError,
    FlavorMismatchError,
    InternalError,
    IsotropyError,
    NontrivialPhaseError,
    NotAProjectorError,
    PhaseConsistencyError,
    SizeGuardError,
)
from src.schemas.operations.results import CodeReport, SpaceInfo
from src.services.averages import extrinsic_ase, intrinsic_ase
from src.services.wh import (
    all_indices,
    displacement,
    flat_index,
    mul_indices,
    symplectic_form,
    symplectic_forms,
    tau_to_omega,
    unflat_index,
)

__all__ = [
    'GapClassification',
    'GapSign',
    'StabilizerCode',
    'a_set',
    'builtin_codes',
    'classify_gap',
    'code_gap_closed_form',
    'code_gap_closed_form_exact',
    'codespace_projector',
    'code_report',
    'codewords',
    'default_small_flavor',
    'gauge_group',
    'isotropic_from_generators',
    'perp',
    'phases_from_mapping',
    'random_isotropic_set',
    'stabilizer_group',
    'zd_gauge_set',
]

logger = logging.getLogger(__name__)

_ENUMERATION_CHUNK = 1 << 20


# ==============================================================================
# Construction
# ==============================================================================


def _close(spec: HilbertSpec, generators: IntArray) -> IntArray:
    d = spec.d
    current = np.zeros((1, 2 * spec.n), dtype=np.int64)
    multiples = np.arange(d, dtype=np.int64)[:, None]
    for generator in generators:
        grown = (current[:, None, :] + multiples[None, :, :] * generator[None, None, :]) % d
        flats = np.unique(np.asarray(flat_index(grown.reshape(-1, 2 * spec.n), d)))
        if flats.size > spec.dim:
            raise SizeGuardError('isotropic closure', int(flats.size), spec.dim)
        current = unflat_index(flats, d, 2 * spec.n)
    return current


def isotropic_from_generators(spec: HilbertSpec, generators: Sequence[Sequence[int]] | npt.ArrayLike) -> IsotropicSet:
    """
    Close generators under addition mod d.

    Raises:
        IsotropyError: If two generators do not commute (form != 0 mod d)
        SizeGuardError: If the closure exceeds d^n elements
    """
    gens = np.asarray(generators, dtype=np.int64).reshape(-1, 2 * spec.n) % spec.d
    for i in range(gens.shape[0]):
        for j in range(i + 1, gens.shape[0]):
            form = symplectic_form(gens[i], gens[j], spec.d)
            if form % spec.d:
                raise IsotropyError(tuple(map(int, gens[i])), tuple(map(int, gens[j])), form, spec.d)
    elements = _close(spec, gens)
    return IsotropicSet(spec=spec, elements=elements, generators=tuple(tuple(map(int, g)) for g in gens))


def stabilizer_group(
    spec: HilbertSpec,
    generators: Sequence[Sequence[int]] | npt.ArrayLike,
    phases: Sequence[int] | None = None,
) -> tuple[IsotropicSet, PhaseMap]:
    """
    Close phased generators omega^{f_i} D_{g_i} into a stabilizer group.

    Raises:
        IsotropyError: If two generators do not commute
        PhaseConsistencyError: If the group contains a nontrivial multiple of the identity
    """
    isotropic = isotropic_from_generators(spec, generators)
    gens = np.asarray(generators, dtype=np.int64).reshape(-1, 2 * spec.n) % spec.d
    gen_phases = [0] * gens.shape[0] if phases is None else [int(p) % spec.d for p in phases]
    if len(gen_phases) != gens.shape[0]:
        raise PhaseConsistencyError(f'{gens.shape[0]} generators but {len(gen_phases)} phases')
    found: dict[int, int] = {0: 0}
    queue: deque[tuple[IntArray, int]] = deque([(np.zeros(2 * spec.n, dtype=np.int64), 0)])
    while queue:
        element, phase = queue.popleft()
        for generator, gen_phase in zip(gens, gen_phases, strict=True):
            exponent, product = mul_indices(element, generator, spec.d)
            value = (phase + gen_phase + tau_to_omega(exponent, spec.d)) % spec.d
            key = int(flat_index(product, spec.d))
            if key not in found:
                found[key] = value
                queue.append((product, value))
            elif found[key] != value:
                raise PhaseConsistencyError(
                    f'Index {list(map(int, product))} is reached with phases omega^{found[key]} and omega^{value}; '
                    'the generated group contains a nontrivial multiple of the identity'
                )
    values = np.array([found[int(flat)] for flat in isotropic.flats], dtype=np.int64)
    return isotropic, PhaseMap(isotropic=isotropic, values=values)


# ==============================================================================
# Codespaces
# ==============================================================================


def codespace_projector(isotropic: IsotropicSet, phases: PhaseMap | None = None) -> SubspaceProjector:
    """
    Pi_{S,f} = (1/|S|) sum_{a in S} omega^{f(a)} D_a, of rank d^n/|S|.

    Raises:
        PhaseConsistencyError: If the phased displacements do not average to a projector
    """
    spec = isotropic.spec
    phase_map = phases if phases is not None else PhaseMap.trivial(isotropic)
    if phase_map.isotropic is not isotropic and not np.array_equal(phase_map.isotropic.flats, isotropic.flats):
        raise PhaseConsistencyError('Phase map belongs to a different isotropic set')
    dim = spec.dim
    matrix = np.zeros((dim, dim), dtype=np.complex128)
    columns = np.arange(dim)
    for element, value in zip(isotropic.elements, phase_map.values, strict=True):
        op = displacement(spec, element)
        matrix[op.perm, columns] += np.exp(2j * np.pi * value / spec.d) * op.phase
    matrix /= isotropic.size
    rank = isotropic.codespace_dim
    if abs(np.trace(matrix).real - rank) > 1e-8:
        raise PhaseConsistencyError(f'Codespace trace {np.trace(matrix).real:.6g} differs from d^n/|S| = {rank}')
    try:
        return SubspaceProjector(big=spec, matrix=matrix, rank=rank)
    except NotAProjectorError as e:
        raise PhaseConsistencyError(f'Phased displacements do not give a projector: {e}') from e


def codewords(isotropic: IsotropicSet, phases: PhaseMap | None = None) -> ComplexArray:
    """Orthonormal basis (D x d_S) of the codespace."""
    return codespace_projector(isotropic, phases).basis()


def perp(isotropic: IsotropicSet) -> IntArray:
    """
    S^perp = {a : [a, b] = 0 mod d for all b in S}, in flat order.

    Raises:
        SizeGuardError: If d^{2n} exceeds the enumeration limit
        InternalError: If |S^perp| != d^n d_S
    """
    spec = isotropic.spec
    everything = all_indices(spec)
    mask = np.empty(everything.shape[0], dtype=bool)
    for start in range(0, everything.shape[0], _ENUMERATION_CHUNK):
        block = everything[start : start + _ENUMERATION_CHUNK]
        forms = symplectic_forms(block[:, None, :], isotropic.elements[None, :, :], spec.d) % spec.d
        mask[start : start + block.shape[0]] = np.all(forms == 0, axis=1)
    result = everything[mask]
    expected = spec.dim * isotropic.codespace_dim
    if result.shape[0] != expected:
        raise InternalError(f'|S^perp| = {result.shape[0]}, expected d^n d_S = {expected}')
    return result


def a_set(isotropic: IsotropicSet) -> IntArray:
    """
    A_S = {a in S^perp : 2a mod d in S}.

    Raises:
        SizeGuardError: If d^{2n} exceeds ENUMERATION_LIMIT (use classify_gap instead)
    """
    spec = isotropic.spec
    orthogonal = perp(isotropic)
    doubled = np.asarray(flat_index((2 * orthogonal) % spec.d, spec.d))
    return orthogonal[np.isin(doubled, isotropic.flats)]


# ==============================================================================
# Closed-form gap and classification
# ==============================================================================


def default_small_flavor(isotropic: IsotropicSet) -> Flavor:
    """Odd for odd d_S, multiqubit for qubit codes, even qudit otherwise."""
    small = isotropic.codespace_dim
    if small % 2 == 1:
        return Flavor.ODD
    if isotropic.spec.d == 2 and is_power_of_two(small):
        return Flavor.MULTIQUBIT
    return Flavor.EVEN


def _alpha(small_dim: int, flavor: Flavor) -> int:
    if small_dim == 1:
        if flavor is not Flavor.ODD:
            raise FlavorMismatchError(flavor, 'a one-dimensional codespace only admits the odd flavor')
        return 1
    HilbertSpec.from_dimension(small_dim, flavor)
    return {Flavor.ODD: 1, Flavor.EVEN: 4, Flavor.MULTIQUBIT: small_dim**2}[flavor]


def code_gap_closed_form_exact(
    isotropic: IsotropicSet,
    small_flavor: Flavor | str,
    phases: PhaseMap | None = None,
    a_size: int | None = None,
) -> Fraction:
    """
    (alpha d_B - |A_S| d_S) / (d_B (d_S+1)(d_S+2)(d_S+3)), alpha = 1, 4, d_S^2 for odd, even, multiqubit.

    Args:
        isotropic: Code set S
        small_flavor: Flavor of the logical space
        phases: Must be trivial when given
        a_size: Known |A_S| (skips enumeration)

    Raises:
        NontrivialPhaseError: If the phase map is nontrivial or S is not phase free
        FlavorMismatchError: If the flavor does not fit d_S
    """
    if phases is not None and not phases.is_trivial:
        raise NontrivialPhaseError('The closed-form codespace gap holds only for the trivial phase map')
    if not isotropic.phase_free:
        raise NontrivialPhaseError(
            'The trivial phase map is not consistent on this set (some products carry a sign); '
            'use extrinsic_ase on the codespace projector instead'
        )
    small = isotropic.codespace_dim
    big = isotropic.spec.dim
    alpha = _alpha(small, Flavor(small_flavor))
    size = a_size if a_size is not None else int(a_set(isotropic).shape[0])
    return Fraction(alpha * big - size * small, big * (small + 1) * (small + 2) * (small + 3))


def code_gap_closed_form(
    isotropic: IsotropicSet,
    small_flavor: Flavor | str,
    phases: PhaseMap | None = None,
    a_size: int | None = None,
) -> float:
    return float(code_gap_closed_form_exact(isotropic, small_flavor, phases, a_size))


class GapSign(enum.StrEnum):
    ZERO = 'zero'
    NEGATIVE = 'negative'
    POSITIVE = 'positive'
    UNKNOWN = 'unknown'


@attrs.define(frozen=True)
class GapClassification:
    sign: GapSign
    reason: str


def classify_gap(isotropic: IsotropicSet, small_flavor: Flavor | str | None = None) -> GapClassification:
    """Sign of the codespace gap from sufficient conditions only (no enumeration of A_S)."""
    spec = isotropic.spec
    d, n = spec.d, spec.n
    small = isotropic.codespace_dim
    flavor = Flavor(small_flavor) if small_flavor is not None else default_small_flavor(isotropic)
    if small == 1:
        return GapClassification(GapSign.ZERO, 'd_S = 1: stabilizer states have zero SE on both sides')
    if d % 2 == 1:
        return GapClassification(GapSign.ZERO, '2 is invertible mod odd d, so A_S = S')
    if d == 2:
        if flavor is Flavor.MULTIQUBIT:
            return GapClassification(GapSign.ZERO, 'qubit code read as qubits: A_S = S^perp with alpha = d_S^2')
        if small <= 2:
            return GapClassification(GapSign.ZERO, 'd_S = 2: even-qudit and qubit averages coincide')
        return GapClassification(GapSign.NEGATIVE, f'qubit code with {flavor.value} flavor: alpha < d_S^2')
    if small % 2 == 0 and isotropic.all_even and flavor is Flavor.EVEN:
        if n == 1:
            return GapClassification(GapSign.ZERO, 'single even qudit with S inside 2Z_d^2')
        return GapClassification(GapSign.NEGATIVE, 'even multiqudit with S inside 2Z_d^{2n}')
    return GapClassification(GapSign.UNKNOWN, 'no sufficient condition applies; enumerate A_S')


# ==============================================================================
# Named sets
# ==============================================================================


def zd_gauge_set(d: int, n: int) -> IsotropicSet:
    """
    S = {(x, 0, ..., x, 0)}: the Z_d gauge symmetry generated by X^{x n}.

    Raises:
        DomainError: If n < 2
    """
    if n < 2:
        raise DomainError(f'The gauge set needs at least two sites, got n={n}')
    spec = HilbertSpec.natural(d, n)
    return isotropic_from_generators(spec, [[1, 0] * n])


def gauge_group(d: int, n: int) -> list[ComplexArray]:
    """Dense elements (X^i)^{x n}, i = 0 .. d-1."""
    spec = HilbertSpec.natural(d, n)
    return [displacement(spec, [i, 0] * n).to_dense() for i in range(d)]


@attrs.define(frozen=True)
class StabilizerCode:
    name: str
    isotropic: IsotropicSet
    phases: PhaseMap
    description: str

    def projector(self) -> SubspaceProjector:
        return codespace_projector(self.isotropic, self.phases)


def builtin_codes() -> dict[str, StabilizerCode]:
    """
    '422': the [[4,2,2]] code, S generated by XXXX and ZZZZ.
    '412': its subcode span{|00>, |01>} (logical), obtained by also stabilizing Z_1 Z_2.
    """
    spec = HilbertSpec(2, 4, Flavor.MULTIQUBIT)
    xxxx = [1, 0, 1, 0, 1, 0, 1, 0]
    zzzz = [0, 1, 0, 1, 0, 1, 0, 1]
    z1z2 = [0, 1, 0, 1, 0, 0, 0, 0]
    s422, f422 = stabilizer_group(spec, [xxxx, zzzz])
    s412, f412 = stabilizer_group(spec, [xxxx, zzzz, z1z2])
    return {
        '422': StabilizerCode('422', s422, f422, '[[4,2,2]] code'),
        '412': StabilizerCode('412', s412, f412, '[[4,1,2]] subcode span{|00>, |01>}'),
    }


def random_isotropic_set(
    spec: HilbertSpec,
    rng: np.random.Generator,
    num_generators: int | None = None,
    phase_free: bool = True,
    attempts: int | None = None,
) -> IsotropicSet:
    """
    Greedy random isotropic set: draw indices, keep those that commute with the current
    set and enlarge it (and keep it phase free when requested).
    """
    target = int(rng.integers(0, spec.n + 1)) if num_generators is None else num_generators
    budget = attempts if attempts is not None else 50 * (spec.n + 1)
    generators: list[IntArray] = []
    current = isotropic_from_generators(spec, np.zeros((0, 2 * spec.n), dtype=np.int64))
    for _ in range(budget):
        if len(generators) >= target:
            break
        candidate = rng.integers(0, spec.d, size=2 * spec.n)
        if current.contains(candidate):
            continue
        forms = symplectic_forms(candidate[None, :], current.elements, spec.d) % spec.d
        if np.any(forms):
            continue
        grown = isotropic_from_generators(spec, np.array([*generators, candidate]))
        if phase_free and not grown.phase_free:
            continue
        generators.append(candidate)
        current = grown
    logger.debug('random_isotropic_set %s: %d generators, |S|=%d', spec.describe(), len(generators), current.size)
    return current


def phases_from_mapping(isotropic: IsotropicSet, mapping: Mapping[tuple[int, ...], int]) -> PhaseMap:
    """Phase map from explicit {index: f(index)} entries; unspecified generators get 0."""
    generators = [list(g) for g in isotropic.generators]
    phases = [int(mapping.get(tuple(g), 0)) for g in generators]
    closed, phase_map = stabilizer_group(isotropic.spec, generators, phases) if generators else (isotropic, None)
    if phase_map is None:
        phase_map = PhaseMap.trivial(closed)
    for index, value in mapping.items():
        row = closed.position(int(flat_index(np.asarray(index) % isotropic.spec.d, isotropic.spec.d)))
        if phase_map.values[row] != int(value) % isotropic.spec.d:
            raise PhaseConsistencyError(f'f{list(index)} = {value} contradicts the generated value {phase_map.values[row]}')
    return phase_map


def code_report(
    name: str,
    isotropic: IsotropicSet,
    phases: PhaseMap | None = None,
    small_flavor: Flavor | str | None = None,
    exact: bool = True,
    threads: int | None = None,
) -> CodeReport:
    """
    Structure, classification, closed-form gap (when it applies) and the exact extrinsic ASE.

    Enumeration-based fields are left empty when d^{2n} exceeds ENUMERATION_LIMIT.
    """
    spec = isotropic.spec
    phase_map = phases if phases is not None else PhaseMap.trivial(isotropic)
    flavor = Flavor(small_flavor) if small_flavor is not None else default_small_flavor(isotropic)
    verdict = classify_gap(isotropic, flavor)
    small = isotropic.codespace_dim

    perp_size: int | None = None
    a_size: int | None = None
    closed: Fraction | None = None
    if spec.d ** (2 * spec.n) <= settings.ENUMERATION_LIMIT:
        perp_size = int(perp(isotropic).shape[0])
        a_size = int(a_set(isotropic).shape[0])
        if phase_map.is_trivial and isotropic.phase_free:
            closed = code_gap_closed_form_exact(isotropic, flavor, phase_map, a_size)

    intrinsic = intrinsic_ase(small, flavor if small > 1 else None)
    extrinsic: float | None = None
    if exact and spec.dim <= settings.SPIN_DIM_LIMIT:
        extrinsic = extrinsic_ase(codespace_projector(isotropic, phase_map), threads=threads)
    logger.debug('code %s: %s, %s', name, isotropic.describe(), verdict.sign.value)
    return CodeReport(
        name=name,
        space=SpaceInfo(d=spec.d, n=spec.n, flavor=spec.flavor.value, dim=spec.dim),
        size=isotropic.size,
        codespace_dim=small,
        phase_free=isotropic.phase_free,
        trivial_phases=phase_map.is_trivial,
        small_flavor=flavor.value,
        classification=verdict.sign.value,
        reason=verdict.reason,
        perp_size=perp_size,
        a_set_size=a_size,
        closed_form_gap=None if closed is None else float(closed),
        closed_form_fraction=None if closed is None else str(closed),
        extrinsic=extrinsic,
        intrinsic=intrinsic,
        gap=None if extrinsic is None else extrinsic - intrinsic,
    )
