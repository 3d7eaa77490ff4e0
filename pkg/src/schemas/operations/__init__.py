"""
Operation schemas: input files and service results.
"""

from __future__ import annotations

from src.schemas.operations.inputs import EmbeddingFile, IsotropicFile, ProjectorFile, StateFile, parse_index_key
from src.schemas.operations.results import (
    AseReport,
    CodeReport,
    ComplementReport,
    ConvergencePoint,
    EnsembleReport,
    EntropyReport,
    ExtremizationReport,
    GapCurvePoint,
    IndexSet,
    MajoranaReport,
    McResult,
    PolyhedronReport,
    ScalarResult,
    SpaceInfo,
    SweepRow,
    SymQubitRow,
)

__all__ = [
    # Inputs
    'EmbeddingFile',
    'IsotropicFile',
    'ProjectorFile',
    'StateFile',
    'parse_index_key',
    # Results
    'AseReport',
    'CodeReport',
    'ComplementReport',
    'ConvergencePoint',
    'EnsembleReport',
    'EntropyReport',
    'ExtremizationReport',
    'GapCurvePoint',
    'IndexSet',
    'MajoranaReport',
    'McResult',
    'PolyhedronReport',
    'ScalarResult',
    'SpaceInfo',
    'SweepRow',
    'SymQubitRow',
]
