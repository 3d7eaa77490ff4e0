"""
Schema definitions for subspace-magic.

This package contains Pydantic models for everything that crosses the process boundary:
- operations.inputs: projector, embedding and isotropic-set JSON files
- operations.results: records returned by services and printed by the CLI
"""

from __future__ import annotations

from src.schemas.base import StrictModel
from src.schemas.types import JsonComplex

__all__ = [
    'JsonComplex',
    'StrictModel',
]
