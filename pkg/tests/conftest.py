"""
Shared fixtures and dense reference helpers.

The helpers build everything from explicit dense displacement matrices so the fast
evaluators in src.services are checked against an independent construction.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
import numpy.typing as npt
import pytest
from hypothesis import HealthCheck, settings

from src.domain.operators import SubspaceProjector
from src.domain.spaces import HilbertSpec
from src.services.sampling import haar_frame
from src.services.wh import all_indices, displacement_dense

settings.register_profile('ci', max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile('dev', max_examples=10, deadline=None)
settings.load_profile(os.getenv('HYPOTHESIS_PROFILE', 'dev'))

FIXTURES_DIR = Path(__file__).parent.parent / 'fixtures'
INPUTS_DIR = FIXTURES_DIR / 'inputs'


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def inputs_dir() -> Path:
    return INPUTS_DIR


def dense_linear_se(spec: HilbertSpec, psi: npt.ArrayLike) -> float:
    """1 - (1/D) sum_a |<psi|D_a|psi>|^4 with every D_a built densely."""
    vector = np.asarray(psi, dtype=np.complex128)
    total = 0.0
    for index in all_indices(spec):
        total += abs(np.vdot(vector, displacement_dense(spec, index) @ vector)) ** 4
    return 1.0 - total / spec.dim


def random_projector(big: HilbertSpec, rank: int, rng: np.random.Generator) -> SubspaceProjector:
    frame = haar_frame(big.dim, rank, rng)
    return SubspaceProjector(big=big, matrix=frame @ frame.conj().T, rank=rank)


def basis_projector(big: HilbertSpec, indices: list[int]) -> SubspaceProjector:
    matrix = np.zeros((big.dim, big.dim), dtype=np.complex128)
    matrix[indices, indices] = 1.0
    return SubspaceProjector(big=big, matrix=matrix, rank=len(indices))
