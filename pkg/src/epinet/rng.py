"""Reproducible random-number streams.

All randomness in the package flows from a single 64-bit user seed.
Independent sub-streams are derived by XOR-ing the seed with a stream
index and keying a counter-based generator (Philox) with the result, so
any component can be re-run in isolation and ensembles can be dispatched
in any order without changing results.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

# Purpose tags keep the key spaces of the per-run sub-streams disjoint.
TAG_NETWORK = 0
TAG_WEIGHTS = 1
TAG_PLACEMENT = 2
TAG_KERNEL = 3


def substream(seed: int, index: int = 0) -> np.random.Generator:
    """Generator for stream `index` of the given seed (seed XOR index, Philox-keyed)."""
    key = (int(seed) ^ int(index)) & _MASK64
    return np.random.Generator(np.random.Philox(key=key))


def stream_key(seed: int, run: int, tag: int) -> int:
    """64-bit key for sub-stream `tag` of ensemble run `run`."""
    return (int(seed) ^ (((run + 1) << 2) | tag)) & _MASK64


def fold32(key: int) -> int:
    """Fold a 64-bit key to 32 bits (XOR of halves); used to seed the event kernel."""
    key &= _MASK64
    return (key ^ (key >> 32)) & 0xFFFFFFFF
