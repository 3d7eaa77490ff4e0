"""
Shared type definitions for schemas.

Layering:
- This module provides the JSON complex-number and matrix types
- base.StrictModel and operations/ build the file and result models on top of them
"""

from __future__ import annotations

from collections.abc import Sequence
from typing import Annotated, Literal

import numpy as np
import numpy.typing as npt
import pydantic

# ==============================================================================
# Complex numbers
# ==============================================================================


def _decode_complex(v: object) -> complex:
    """Accept [re, im] pairs (from JSON) or Python numbers."""
    if isinstance(v, complex):
        return v
    if isinstance(v, int | float) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, Sequence) and not isinstance(v, str) and len(v) == 2:
        re, im = v
        if all(isinstance(part, int | float) and not isinstance(part, bool) for part in (re, im)):
            return complex(float(re), float(im))
    raise ValueError(f'Expected a [re, im] pair, got {v!r}')


def _encode_complex(v: complex) -> list[float]:
    return [v.real, v.imag]


JsonComplex = Annotated[
    complex,
    pydantic.BeforeValidator(_decode_complex),
    pydantic.PlainSerializer(_encode_complex, return_type=list[float], when_used='json'),
]
"""Complex number stored as [re, im] in JSON.

Compatible with strict=True and the orjson.loads() -> model_validate() pattern.
"""

type ComplexMatrix = Sequence[Sequence[JsonComplex]]
"""Row-major nested rows of [re, im] entries."""

type ComplexVector = Sequence[JsonComplex]

FlavorName = Literal['odd', 'even', 'multiqubit']


def matrix_to_rows(matrix: npt.ArrayLike) -> list[list[complex]]:
    return [[complex(entry) for entry in row] for row in np.asarray(matrix, dtype=np.complex128)]


def rows_to_matrix(rows: ComplexMatrix) -> npt.NDArray[np.complex128]:
    return np.array([[complex(entry) for entry in row] for row in rows], dtype=np.complex128)
