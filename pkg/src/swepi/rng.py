"""Seed derivation for reproducible, parallel-safe random streams.

A single 64-bit master seed is split into independent child streams by
hashing (master, purpose tag, index). Replicas, retries and sweep cells
each get their own tag/index, so results do not depend on execution
order or worker count.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(master: int, tag: str, index: int = 0) -> int:
    """Child seed = first 8 bytes of sha256("master:tag:index")."""
    payload = f"{master}:{tag}:{index}".encode()
    digest = hashlib.sha256(payload).digest()
    return int.from_bytes(digest[:8], "little")


def make_rng(master: int, tag: str = "", index: int = 0) -> np.random.Generator:
    """PCG64 generator seeded from the derived child seed."""
    return np.random.default_rng(derive_seed(master, tag, index))
