"""
Input file schemas.

Projector JSON:  {"d": int, "n": int, "flavor"?: str, "matrix": [[[re, im], ...], ...]}
Embedding JSON:  {"d": int, "n": int, "flavor"?: str, "d_small": int, "columns": [[[re, im], ...], ...]}
Isotropic JSON:  {"d": int, "n": int, "generators": [[a_x1, a_z1, ...], ...],
                  "homomorphism"?: {"a_x1,a_z1,...": f, ...}}

Structural checks live here; mathematical invariants (idempotency, isometry, isotropy) are
re-validated when the domain objects are built from these models.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence

import pydantic

from src.schemas.base import StrictModel
from src.schemas.types import ComplexMatrix, ComplexVector, FlavorName


class _SpaceFields(StrictModel):
    d: int = pydantic.Field(ge=2)
    n: int = pydantic.Field(ge=1)
    flavor: FlavorName | None = None


class ProjectorFile(_SpaceFields):
    matrix: ComplexMatrix

    @pydantic.model_validator(mode='after')
    def _square(self) -> ProjectorFile:
        dim = self.d**self.n
        if len(self.matrix) != dim or any(len(row) != dim for row in self.matrix):
            raise ValueError(f'matrix must be {dim} x {dim} for d={self.d}, n={self.n}')
        return self


class EmbeddingFile(_SpaceFields):
    d_small: int = pydantic.Field(ge=1)
    columns: ComplexMatrix

    @pydantic.model_validator(mode='after')
    def _shape(self) -> EmbeddingFile:
        dim = self.d**self.n
        if len(self.columns) != dim or any(len(row) != self.d_small for row in self.columns):
            raise ValueError(f'columns must be {dim} x {self.d_small}')
        return self


class IsotropicFile(_SpaceFields):
    generators: Sequence[Sequence[int]]
    homomorphism: Mapping[str, int] | None = None

    @pydantic.model_validator(mode='after')
    def _lengths(self) -> IsotropicFile:
        for generator in self.generators:
            if len(generator) != 2 * self.n:
                raise ValueError(f'generator {list(generator)} must have length 2n = {2 * self.n}')
        for key in (self.homomorphism or {}):
            if len(parse_index_key(key)) != 2 * self.n:
                raise ValueError(f'homomorphism key {key!r} must list 2n = {2 * self.n} integers')
        return self

    def phase_entries(self) -> dict[tuple[int, ...], int]:
        return {parse_index_key(key): value for key, value in (self.homomorphism or {}).items()}


def parse_index_key(key: str) -> tuple[int, ...]:
    """'1,0,1,0' -> (1, 0, 1, 0)."""
    try:
        return tuple(int(part) for part in key.split(','))
    except ValueError as e:
        raise ValueError(f'index key {key!r} is not a comma-separated list of integers') from e


class StateFile(StrictModel):
    """{"amplitudes": [[re, im], ...]} in the computational basis."""

    amplitudes: ComplexVector
