"""
Numerical configuration.

Tolerances, size guards, Monte Carlo presets and the worker budget. Every value can be
overridden through the environment (prefix SUBSPACE_MAGIC_) or a .env file.
"""

from __future__ import annotations

import psutil
import pydantic

from src.config.base import BaseAppSettings, lazy_settings


def _physical_cores() -> int:
    return psutil.cpu_count(logical=False) or 1


class ComputeSettings(BaseAppSettings):
    """Numerical defaults shared by services and CLI."""

    # Worker budget (restarts, sample blocks and index chunks share it)
    THREADS: int = pydantic.Field(default_factory=_physical_cores)
    DEFAULT_SEED: int = 20240917

    # Tolerances
    SUPPORT_CUTOFF: float = 1e-12
    IMAGINARY_RESIDUE_TOL: float = 1e-8
    ISOMETRY_TOL: float = 1e-10
    PROJECTOR_TOL: float = 1e-9
    NORM_TOL: float = 1e-10
    ENTROPY_CLAMP: float = 1e-10

    # Size guards
    DENSE_ORACLE_MAX_DIM: int = 6
    ENUMERATION_LIMIT: int = 10**8
    SPIN_DIM_LIMIT: int = 4096
    CHARACTERISTIC_SUPPORT_LIMIT: int = 256

    # Objective selection and Monte Carlo
    EXACT_OBJECTIVE_MAX_DIM: int = 16
    MC_OBJECTIVE_SAMPLES: int = 1000
    MC_BLOCK_SIZE: int = 256
    PRESET_RUNS: int = 20
    PRESET_SAMPLES: int = 1000

    @pydantic.field_validator('THREADS', 'MC_BLOCK_SIZE', 'PRESET_RUNS', 'PRESET_SAMPLES')
    @classmethod
    def validate_positive(cls, v: int) -> int:
        """Counts must be at least one."""
        if v < 1:
            raise ValueError('must be >= 1')
        return v

    @pydantic.field_validator('SUPPORT_CUTOFF', 'IMAGINARY_RESIDUE_TOL', 'ISOMETRY_TOL', 'PROJECTOR_TOL', 'NORM_TOL')
    @classmethod
    def validate_tolerance(cls, v: float) -> float:
        """Tolerances live in (0, 1e-2]."""
        if not 0 < v <= 1e-2:
            raise ValueError('tolerance must be in (0, 1e-2]')
        return v


# Module-level singleton (lazy-loaded)
settings = lazy_settings(ComputeSettings)
