"""

    Named random streams.

    Every consumer of randomness asks for stream(seed, name). The name is hashed into the
    spawn key of a numpy SeedSequence, so two names never share draws and adding a new
    consumer leaves the existing streams untouched.

"""
import zlib

import numpy as np


def stream_key(name: str) -> int:
    return zlib.crc32(name.encode('utf-8')) & 0xFFFFFFFF


def stream(seed: int, name: str) -> np.random.Generator:
    if seed is None:
        raise ValueError('seeds.stream: a seed is required for reproducible runs')
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(stream_key(name),)))
