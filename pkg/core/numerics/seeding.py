# core/numerics/seeding.py
"""
Reproducible seed splitting.

A root seed and an integer path (grid point, channel arm, chunk index, ...)
are mixed by numpy's SeedSequence, which hashes (entropy, spawn_key) into
independent streams. The same (root, path) always yields the same stream,
so chunked or parallel sampling never depends on scheduling.
"""

import numpy as np

MAX_SEED = 2 ** 64 - 1

# Default number of samples per independently seeded chunk
DEFAULT_CHUNK_SIZE = 65536


def validate_seed(seed):
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ValueError(f"seed must be an integer, got {seed!r}")
    if seed < 0 or seed > MAX_SEED:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {seed}")
    return int(seed)


def seed_sequence(root_seed, *path):
    root_seed = validate_seed(root_seed)
    return np.random.SeedSequence(
        entropy=root_seed,
        spawn_key=tuple(int(p) for p in path),
    )


def derive_seed(root_seed, *path):
    """64-bit child seed of ``root_seed`` along ``path``."""
    state = seed_sequence(root_seed, *path).generate_state(1, dtype=np.uint64)
    return int(state[0])


def rng_for(root_seed, *path):
    return np.random.default_rng(seed_sequence(root_seed, *path))


def chunk_layout(count, chunk_size=DEFAULT_CHUNK_SIZE):
    """
    Split ``count`` draws into fixed-size chunks.

    Returns a list of (chunk_index, size). The layout depends only on
    ``count`` and ``chunk_size``, so chunk k is identical in every run that
    reaches it.
    """
    if count <= 0:
        raise ValueError(f"count must be positive, got {count}")
    if chunk_size <= 0:
        raise ValueError(f"chunk_size must be positive, got {chunk_size}")

    layout = []
    index = 0
    remaining = count
    while remaining > 0:
        size = min(chunk_size, remaining)
        layout.append((index, size))
        remaining -= size
        index += 1
    return layout
