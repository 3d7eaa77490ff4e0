"""
Strict base model and the output conventions shared by every result record.

Floats are kept at full precision inside models and rounded to 12 significant digits
only when a record is rendered (JSON or CSV).
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Mapping, Sequence
from typing import Any

import pydantic

__all__ = [
    'SIGNIFICANT_DIGITS',
    'StrictModel',
    'csv_text',
    'round_floats',
]

SIGNIFICANT_DIGITS = 12


def round_floats(value: Any) -> Any:
    """Round every finite float in a JSON-ready structure to SIGNIFICANT_DIGITS."""
    if isinstance(value, float):
        return float(f'{value:.{SIGNIFICANT_DIGITS}g}') if math.isfinite(value) else value
    if isinstance(value, dict):
        return {key: round_floats(item) for key, item in value.items()}
    if isinstance(value, list):
        return [round_floats(item) for item in value]
    return value


def _cell(value: Any) -> Any:
    return f'{value:.{SIGNIFICANT_DIGITS}g}' if isinstance(value, float) else value


def csv_text(records: Sequence[Mapping[str, Any]]) -> str:
    """
    Flat records as CSV with a header row; floats written with %.12g.

    Raises:
        ValueError: If there are no records or a field is nested
    """
    if not records:
        raise ValueError('CSV output needs at least one row')
    if any(isinstance(value, dict | list) for record in records for value in record.values()):
        raise ValueError('CSV output needs flat rows')
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(records[0]), lineterminator='\n')
    writer.writeheader()
    for record in records:
        writer.writerow({key: _cell(value) for key, value in record.items()})
    return buffer.getvalue()


class StrictModel(pydantic.BaseModel):
    """
    Base for input files and result records.

    extra='forbid' rejects unknown keys, strict=True refuses coercion (no '3' for 3),
    frozen=True makes records hashable and comparable.
    """

    model_config = pydantic.ConfigDict(
        extra='forbid',
        strict=True,
        frozen=True,
        validate_default=True,
    )

    def record(self) -> dict[str, Any]:
        """JSON-ready dict with floats rounded for output."""
        rounded: dict[str, Any] = round_floats(self.model_dump(mode='json'))
        return rounded
