# Path from repo root: app/core/rng.py
"""
Named, independent RNG streams.

Every consumer of randomness asks for its own stream (``init``, ``data``,
``adversary``, ``index``, ``bench``, ``verify``) keyed by the run seed plus an
optional tuple of integers (iteration, example, ...). Streams never share state,
so the choice of engine or worker count cannot shift the draws of another
consumer.
"""
from __future__ import annotations

import numpy as np


STREAMS: dict[str, int] = {
    "init": 1,
    "data": 2,
    "adversary": 3,
    "index": 4,
    "bench": 5,
    "verify": 6,
}


def seed_sequence(seed: int, stream: str, *key: int) -> np.random.SeedSequence:
    """SeedSequence for `stream` under `seed`, further keyed by `key`."""
    try:
        stream_id = STREAMS[stream]
    except KeyError:
        raise KeyError(f"unknown RNG stream {stream!r}") from None
    return np.random.SeedSequence(int(seed), spawn_key=(stream_id, *(int(k) for k in key)))


def rng_for(seed: int, stream: str, *key: int) -> np.random.Generator:
    """Fresh Generator for the named stream."""
    return np.random.default_rng(seed_sequence(seed, stream, *key))
