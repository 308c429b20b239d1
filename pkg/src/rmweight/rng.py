"""Seedable, splittable random streams.

Every randomized operation in this package takes a ``numpy.random.Generator``.
Streams are single-owner: never share one across threads. Parallel work gets
its own child stream, derived deterministically from the parent seed and an
integer label path, so results are reproducible regardless of schedule.
"""

from __future__ import annotations

import numpy as np

RngStream = np.random.Generator


def master_stream(seed: int | None = 0) -> RngStream:
    """Root stream for a run. Seeds default to a fixed constant, not entropy."""
    return np.random.default_rng(seed)


def child_stream(seed: int | None, *path: int) -> RngStream:
    """Stream for a labelled subtask, e.g. ``child_stream(seed, round, chain)``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=path))


def as_stream(rng: RngStream | int | None) -> RngStream:
    """Accept either a ready stream or a seed."""
    if isinstance(rng, np.random.Generator):
        return rng
    return master_stream(rng)
