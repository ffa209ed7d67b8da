"""Deterministic counter-based pseudo-randomness.

Every random quantity in this package is a pure function of a 64-bit seed
and a counter, obtained through a splitmix64-style finalizer.  This keeps
sampling reproducible regardless of evaluation order or parallel
scheduling: the value at counter i never depends on whether counter j was
evaluated first.

Two entry points:

* ``hash_at(seed, i)`` / ``hash_block(seed, start, count)`` - keyed
  counter hashing, scalar and numpy-vectorised.  Used for edge sampling,
  where the counter is the row-major edge slot index.
* ``RandomStream`` - a sequential stream over the same primitive, used
  for algorithm-internal draws (preference coin flips, subsampling).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D49BF24592E92D

# Domain separation constants: distinct sampling purposes fed the same
# user seed must not share a hash stream.
TAG_GRAPH = 0x67726170685F6269  # "graph_bi"
TAG_COLOURING = 0x636F6C6F75725F32  # "colour_2"
TAG_MINDEG = 0x6D696E6465677261  # "mindegra"
TAG_SWEEP = 0x737765657054524C  # "sweepTRL"


def mix64(x: int) -> int:
    """Finalizer of splitmix64: a 64-bit bijective scrambler."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * _MIX1) & MASK64
    x = ((x ^ (x >> 27)) * _MIX2) & MASK64
    return x ^ (x >> 31)


def hash_at(seed: int, counter: int) -> int:
    """64-bit hash of (seed, counter), identical to one hash_block lane."""
    return mix64((seed + (counter + 1) * _GOLDEN) & MASK64)


def hash_block(seed: int, start: int, count: int) -> np.ndarray:
    """Vectorised ``hash_at(seed, start + k)`` for k in range(count)."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    x = idx * np.uint64(_GOLDEN) + np.uint64(seed & MASK64)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(_MIX1)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(_MIX2)
    return x ^ (x >> np.uint64(31))


def combine(*parts: int) -> int:
    """Derive one seed from several integers (order-sensitive)."""
    acc = 0x243F6A8885A308D3  # arbitrary nonzero start
    for p in parts:
        acc = mix64(acc ^ ((p & MASK64) + _GOLDEN))
    return acc


def threshold_u64(probability: Fraction) -> int:
    """Inclusion threshold t such that P(u64 < t) == probability up to 2^-64."""
    if probability < 0 or probability > 1:
        raise ValueError(f"probability {probability} outside [0, 1]")
    return (probability.numerator << 64) // probability.denominator


class RandomStream:
    """Sequential deterministic stream of 64-bit words.

    Thin stateful wrapper over the counter hash; one instance per
    algorithm invocation keeps every draw a function of the seed alone.
    """

    def __init__(self, seed: int):
        self._seed = seed & MASK64
        self._counter = 0

    def next_u64(self) -> int:
        v = hash_at(self._seed, self._counter)
        self._counter += 1
        return v

    def coin(self) -> bool:
        return self.next_u64() & 1 == 1

    def bernoulli(self, probability: Fraction) -> bool:
        return self.next_u64() < threshold_u64(probability)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection (n must be positive)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n
