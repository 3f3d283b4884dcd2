"""Seeded, purpose-split random streams.

Everything random in the package (observable sampling, dataset noise,
parameter initialization, batch shuffling) draws from a numpy PCG64
generator keyed by (master_seed, purpose string). Runs are therefore
bit-reproducible from one master seed, and adding a new purpose never
perturbs existing streams.
"""
from __future__ import annotations

import zlib

import numpy as np


def stream(master_seed: int, purpose: str) -> np.random.Generator:
    """Return the PCG64 generator for a named purpose under a master seed."""
    key = zlib.crc32(purpose.encode("utf-8"))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((master_seed, key))))
