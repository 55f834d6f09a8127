"""Seed schedules and chunked, thread-parallel Monte Carlo.

Work is cut into chunks of a fixed size that does not depend on the number of threads. Chunk k
always draws from the k-th child of the root seed and results are returned in chunk order, so the
outcome is the same for any thread count.
"""

from concurrent.futures import ThreadPoolExecutor

import logging
import numpy as np
from numpy.random import SeedSequence, default_rng


logger = logging.getLogger(__name__)

CHUNK_SIZE = 50_000
MAX_SEED = 2 ** 64


def check_seed(seed):
    """Raise `ValueError` unless ``seed`` is an unsigned 64-bit integer."""
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ValueError(f"Seeds must be integers, got {seed!r}")
    if not 0 <= seed < MAX_SEED:
        raise ValueError(f"Seeds must be unsigned 64-bit integers, got {seed}")
    return int(seed)


def as_seed_sequence(seed):
    """``seed`` itself if it is a `numpy.random.SeedSequence`, else the sequence rooted at it."""
    if isinstance(seed, SeedSequence):
        return seed
    return SeedSequence(check_seed(seed))


def child_seeds(seed, count):
    """``count`` independent child seed sequences of ``seed``."""
    return as_seed_sequence(seed).spawn(count)


def derived_seed(sequence):
    """An unsigned 64-bit integer seed drawn from a seed sequence."""
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def child_rngs(seed, count):
    return [default_rng(s) for s in child_seeds(seed, count)]


def chunk_sizes(size, chunk_size=CHUNK_SIZE):
    if size < 0:
        raise ValueError(f"Sample size must be nonnegative, got {size}")
    full, rest = divmod(size, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def map_chunks(draw, size, seed, threads=1, chunk_size=CHUNK_SIZE):
    """Apply ``draw(rng, n)`` to every chunk and return the results in chunk order.

    Parameters
    ----------
    draw : `Callable[[numpy.random.Generator, int], Any]`
        Must only use the generator it is handed.
    size : `int`
        Total number of draws.
    seed : `int` or `numpy.random.SeedSequence`
        Root of the chunk seed schedule.
    threads : `int`
        Number of worker threads.
    chunk_size : `int`
        Draws per chunk.

    Returns
    -------
    `List[Any]`

    """
    sizes = chunk_sizes(size, chunk_size)
    rngs = child_rngs(seed, len(sizes))
    logger.debug("Drawing %d samples in %d chunks on %d threads", size, len(sizes), threads)
    if threads <= 1 or len(sizes) <= 1:
        return [draw(rng, n) for rng, n in zip(rngs, sizes)]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(draw, rngs, sizes))


def draw_samples(draw, size, seed, threads=1, chunk_size=CHUNK_SIZE):
    """Concatenate the chunked draws of ``draw(rng, n)`` along the first axis."""
    chunks = map_chunks(draw, size, seed, threads, chunk_size)
    return np.concatenate(chunks, axis=0)
