"""
Haar sampling with reproducible block streams.

Sample i of a run seeded with s is drawn from the stream SeedSequence(s, spawn_key=(i // B,)),
B = MC_BLOCK_SIZE, so results do not depend on how blocks are spread over threads.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import numpy.typing as npt

from src.config import settings
from src.domain.operators import ComplexArray, Embedding
from src.domain.spaces import HilbertSpec
from src.domain.states import PureState
from src.exceptions import DomainError
from src.services.magic import linear_se_many

__all__ = [
    'StateMap',
    'block_rng',
    'haar_embedding',
    'haar_frame',
    'haar_state',
    'haar_states',
    'sample_linear_se',
    'sample_small_states',
]

logger = logging.getLogger(__name__)

# Maps a batch of small-space states (m x d_S) to host states (m x d_B)
type StateMap = Callable[[ComplexArray], ComplexArray]


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))


def haar_states(dim: int, count: int, rng: np.random.Generator) -> ComplexArray:
    """count x dim array of Haar-random unit vectors (normalized complex Gaussians)."""
    if dim < 1:
        raise DomainError(f'dim must be >= 1, got {dim}')
    gaussian = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return gaussian / np.linalg.norm(gaussian, axis=1, keepdims=True)


def haar_state(dim: int, rng: np.random.Generator) -> PureState:
    if dim == 1:
        return PureState.basis(1)
    return PureState(haar_states(dim, 1, rng)[0])


def haar_frame(big_dim: int, small_dim: int, rng: np.random.Generator) -> ComplexArray:
    """Haar-random isometry: QR of a complex Gaussian matrix with the R diagonal made positive."""
    if not 1 <= small_dim <= big_dim:
        raise DomainError(f'Need 1 <= d_S <= d_B, got d_S={small_dim}, d_B={big_dim}')
    gaussian = rng.standard_normal((big_dim, small_dim)) + 1j * rng.standard_normal((big_dim, small_dim))
    q, r = np.linalg.qr(gaussian)
    diagonal = np.diag(r)
    return q * (diagonal / np.abs(diagonal))[None, :]


def haar_embedding(big: HilbertSpec, small_dim: int, rng: np.random.Generator) -> Embedding:
    return Embedding(big=big, columns=haar_frame(big.dim, small_dim, rng))


def sample_small_states(small_dim: int, samples: int, seed: int) -> ComplexArray:
    """The first `samples` states of the block streams for `seed`."""
    block_size = settings.MC_BLOCK_SIZE
    blocks = [
        haar_states(small_dim, min(block_size, samples - start), block_rng(seed, index))
        for index, start in enumerate(range(0, samples, block_size))
    ]
    return np.concatenate(blocks, axis=0)


def sample_linear_se(
    big: HilbertSpec,
    small_dim: int,
    state_map: StateMap,
    samples: int,
    seed: int,
    threads: int | None = None,
) -> npt.NDArray[np.float64]:
    """
    Linear SE on the host of `samples` mapped Haar states of the small space, in sample order.
    """
    block_size = settings.MC_BLOCK_SIZE
    starts = list(range(0, samples, block_size))

    def run_block(index: int) -> npt.NDArray[np.float64]:
        count = min(block_size, samples - starts[index])
        small = haar_states(small_dim, count, block_rng(seed, index))
        return linear_se_many(big, state_map(small))

    workers = max(1, min(threads or settings.THREADS, len(starts)))
    if workers == 1:
        values = [run_block(index) for index in range(len(starts))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(run_block, range(len(starts))))
    return np.concatenate(values)
