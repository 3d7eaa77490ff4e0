"""Service layer: WH algebra, entropies, Haar averages, codes, encodings, estimation and optimization."""

from __future__ import annotations
