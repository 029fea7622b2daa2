"""Seeded random streams.

Every stochastic routine takes an explicit integer seed. Generators are
numpy ``PCG64`` bit generators keyed by ``SeedSequence``, whose output is
specified bit-for-bit and identical across platforms. Replicated work is
split into fixed-size blocks, each with its own spawned child seed, so the
result of a run depends on the master seed and never on the worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")

# Replications per independently seeded block.
BLOCK_SIZE = 256

SeedLike = int | np.random.SeedSequence | np.random.Generator


def make_rng(seed: SeedLike) -> np.random.Generator:
    """Generator for ``seed``; an existing Generator is passed through unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        raise ValueError("an explicit seed is required")
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    if isinstance(seed, (bool, float)) or int(seed) < 0:
        raise ValueError(f"seed must be a non-negative integer, got {seed!r}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def block_plan(reps: int, block_size: int = BLOCK_SIZE) -> list[int]:
    """Sizes of the consecutive replication blocks covering ``reps``."""
    if reps < 1:
        raise ValueError("reps must be >= 1")
    full, rest = divmod(reps, block_size)
    return [block_size] * full + ([rest] if rest else [])


def block_seeds(seed: int, n_blocks: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(int(seed)).spawn(n_blocks)


def run_blocks(
    fn: Callable[[np.random.Generator, int], T],
    reps: int,
    seed: int,
    threads: int = 1,
    block_size: int = BLOCK_SIZE,
) -> list[T]:
    """Run ``fn(rng, size)`` once per block and return results in block order."""
    sizes = block_plan(reps, block_size)
    seeds = block_seeds(seed, len(sizes))
    jobs: Sequence[tuple[np.random.SeedSequence, int]] = list(zip(seeds, sizes))
    if threads <= 1 or len(jobs) == 1:
        return [fn(make_rng(s), k) for s, k in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: fn(make_rng(job[0]), job[1]), jobs))
