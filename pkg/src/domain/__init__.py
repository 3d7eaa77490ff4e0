"""
Domain types for subspace-magic.

Re-exports the immutable value types shared by every service.
"""

from __future__ import annotations

from src.domain.operators import CharFunction, Embedding, GeneralizedPermOp, SubspaceProjector
from src.domain.spaces import Flavor, HilbertSpec
from src.domain.states import PureState, SpinState, StarConstellation

__all__ = [
    'CharFunction',
    'Embedding',
    'Flavor',
    'GeneralizedPermOp',
    'HilbertSpec',
    'PureState',
    'SpinState',
    'StarConstellation',
    'SubspaceProjector',
]
