"""
Result schemas.

Every record returned by a service or printed by the CLI. Floats are stored at full
precision; the CLI rounds to 12 significant digits on output. Fields named *_fraction
hold an exact rational ('17/45') when a closed form exists.
"""

from __future__ import annotations

from collections.abc import Sequence
from typing import Literal

import pydantic

from src.schemas.base import StrictModel
from src.schemas.types import ComplexMatrix, ComplexVector, FlavorName, JsonComplex

# ==============================================================================
# Generic
# ==============================================================================


class ScalarResult(StrictModel):
    """Single named number with the parameters that produced it."""

    name: str
    value: float
    fraction: str | None = None
    parameters: dict[str, str | int | float | bool | None] = pydantic.Field(default_factory=dict)


class SpaceInfo(StrictModel):
    d: int
    n: int
    flavor: FlavorName
    dim: int


# ==============================================================================
# Entropies and averages
# ==============================================================================


class EntropyReport(StrictModel):
    """Stabilizer entropies of one pure state."""

    space: SpaceInfo
    state: str
    M: float = pydantic.Field(description='linear stabilizer entropy')
    alpha: float
    renyi: float
    st_norm: float
    robustness_lower_bound: float
    upper_bound: float


class AseReport(StrictModel):
    """Extrinsic and intrinsic ASE of a subspace and their difference."""

    space: SpaceInfo
    small_dim: int
    small_flavor: FlavorName | None
    method: str
    extrinsic: float
    intrinsic: float | None = None
    intrinsic_fraction: str | None = None
    gap: float | None = None


class GapCurvePoint(StrictModel):
    small_dim: int
    small_flavor: FlavorName | None
    expected_gap: float
    fraction: str


class CodeReport(StrictModel):
    """Structure and magic gap of a stabilizer codespace."""

    name: str
    space: SpaceInfo
    size: int
    codespace_dim: int
    phase_free: bool
    trivial_phases: bool
    small_flavor: FlavorName
    classification: Literal['zero', 'negative', 'positive', 'unknown']
    reason: str
    perp_size: int | None = None
    a_set_size: int | None = None
    closed_form_gap: float | None = None
    closed_form_fraction: str | None = None
    extrinsic: float | None = None
    intrinsic: float | None = None
    gap: float | None = None


# ==============================================================================
# Monte Carlo
# ==============================================================================


class McResult(StrictModel):
    """
    Monte Carlo estimate of an average linear SE.

    For multi-run presets, mean pools all runs, stderr is that of the pooled mean and
    run_spread is the standard deviation of the per-run means.
    """

    mean: float
    stderr: float = pydantic.Field(ge=0.0)
    samples: int = pydantic.Field(ge=2)
    seed: int
    runs: int = pydantic.Field(default=1, ge=1)
    run_spread: float | None = None


class ConvergencePoint(StrictModel):
    samples: int
    squared_error: float


class EnsembleReport(StrictModel):
    """Statistics of the ASE over Haar-random subspaces."""

    big_dim: int
    small_dim: int
    num_subspaces: int
    samples_per: int | None
    exact: bool
    mean: float
    std: float
    stderr: float
    expected: float
    seed: int


class ComplementReport(StrictModel):
    """Average linear SE with support on the complement (even superposition)."""

    kind: Literal['per-state', 'fixed', 'relative-change']
    big_dim: int
    small_dim: int
    value: float
    stderr: float | None = None
    baseline: float | None = None
    samples: int
    restarts: int
    seed: int
    kappa: ComplexVector | None = None


# ==============================================================================
# Optimization
# ==============================================================================


class ExtremizationReport(StrictModel):
    space: SpaceInfo
    small_dim: int
    direction: Literal['minimize', 'maximize']
    objective: str
    value: float
    exact_value: float
    intrinsic_small: float | None
    restart_values: Sequence[float]
    seed: int
    columns: ComplexMatrix | None = None


class SweepRow(StrictModel):
    """One row of an extremal sweep (CSV header d_S,min_ase,max_ase,intrinsic_small,intrinsic_big)."""

    d_S: int
    min_ase: float
    max_ase: float
    intrinsic_small: float
    intrinsic_big: float


# ==============================================================================
# Examples
# ==============================================================================


class PolyhedronReport(StrictModel):
    faces: int
    spin: str
    big_dim: int
    small_dim: int
    method: Literal['exact', 'mc']
    extrinsic: float
    stderr: float | None = None
    intrinsic: float
    gap: float
    extrinsic_fraction: str | None = None


class SymQubitRow(StrictModel):
    j: str
    intrinsic: float
    symmetrized: float
    separable: float
    separable_stderr: float


class MajoranaReport(StrictModel):
    j: str
    amplitudes: ComplexVector
    roots: Sequence[JsonComplex | None]
    bloch: Sequence[Sequence[float]]
    fidelity: float

class IndexSet(StrictModel):
    """Listing of symplectic indices (S^perp, A_S)."""

    name: str
    space: SpaceInfo
    size: int
    indices: Sequence[Sequence[int]]
