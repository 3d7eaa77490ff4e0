"""
Input-file loaders for the CLI.

Files are decoded with orjson, checked against the input schemas, and then turned into
domain objects whose constructors re-validate every invariant.
"""

from __future__ import annotations

import numpy as np

from src.domain.codes import IsotropicSet, PhaseMap
from src.domain.operators import Embedding, SubspaceProjector
from src.domain.spaces import HilbertSpec
from src.domain.states import PureState
from src.exceptions import DimensionError
from src.schemas.operations.inputs import EmbeddingFile, IsotropicFile, ProjectorFile, StateFile
from src.schemas.types import rows_to_matrix
from src.services.codes import isotropic_from_generators, phases_from_mapping
from src.storage.local import load_json


def _spec(d: int, n: int, flavor: str | None) -> HilbertSpec:
    return HilbertSpec.natural(d, n) if flavor is None else HilbertSpec(d, n, flavor)


def load_projector(path: str) -> SubspaceProjector:
    """
    Raises:
        InputFileError: Unreadable or non-JSON file
        pydantic.ValidationError: Schema mismatch
        NotAProjectorError: Hermiticity, idempotency or trace check fails
    """
    model = ProjectorFile.model_validate(load_json(path))
    return SubspaceProjector.from_matrix(_spec(model.d, model.n, model.flavor), rows_to_matrix(model.matrix))


def load_embedding(path: str) -> Embedding:
    model = EmbeddingFile.model_validate(load_json(path))
    return Embedding(big=_spec(model.d, model.n, model.flavor), columns=rows_to_matrix(model.columns))


def load_isotropic(path: str) -> tuple[IsotropicSet, PhaseMap]:
    """Isotropic set with its phase map (generators default to phase 0)."""
    model = IsotropicFile.model_validate(load_json(path))
    isotropic = isotropic_from_generators(_spec(model.d, model.n, model.flavor), model.generators)
    return isotropic, phases_from_mapping(isotropic, model.phase_entries())


def load_state(path: str, spec: HilbertSpec) -> PureState:
    model = StateFile.model_validate(load_json(path))
    amplitudes = np.array([complex(a) for a in model.amplitudes], dtype=np.complex128)
    if amplitudes.shape != (spec.dim,):
        raise DimensionError('state file amplitudes', (spec.dim,), amplitudes.shape)
    return PureState(amplitudes)
