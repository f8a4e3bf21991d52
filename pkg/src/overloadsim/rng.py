"""Deterministic counter-based random numbers.

Every random quantity in a run is a pure function of (seed, purpose, index),
so identical configurations replay bit-identically regardless of execution
order, thread count, or backend. The mixing core is the SplitMix64
finalizer; streams are split by hashing the parent seed with a tagged
counter rather than by advancing shared state.

Documented constants (stable across versions):
  GOLDEN = 0x9e3779b97f4a7c15
  MIX1   = 0xbf58476d1ce4e5b9
  MIX2   = 0x94d049bb133111eb
  mix64(z):  z ^= z>>30; z *= MIX1; z ^= z>>27; z *= MIX2; z ^= z>>31
  child(s, k) = mix64(s ^ ((k+1) * GOLDEN))        (all mod 2**64)
  derive_seed(base, cell, rep) = mix64(base ^ (cell * GOLDEN) ^ rep)

Integer draws use modulo reduction (child(s, k) % n); the bias is at most
n / 2**64 and is accepted for cross-backend bit equality. Floats use the
53-bit mantissa mapping (u >> 11) * 2**-53, giving uniforms in [0, 1).
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB

# Stream tags: one per purpose so draws never alias across phases.
TAG_INIT = 0x11
TAG_POOL = 0x22
TAG_CONSUME = 0x33

_U64_30 = np.uint64(30)
_U64_27 = np.uint64(27)
_U64_31 = np.uint64(31)
_U64_11 = np.uint64(11)
_GOLDEN64 = np.uint64(GOLDEN)
_MIX1_64 = np.uint64(MIX1)
_MIX2_64 = np.uint64(MIX2)
_ONE64 = np.uint64(1)
_TWO53_INV = 2.0 ** -53


def mix64(z: int) -> int:
    """SplitMix64 finalizer; bijective on 64-bit integers."""
    z &= MASK64
    z ^= z >> 30
    z = (z * MIX1) & MASK64
    z ^= z >> 27
    z = (z * MIX2) & MASK64
    z ^= z >> 31
    return z


def child(seed: int, k: int) -> int:
    """k-th child of a stream seed; used for both splitting and draws."""
    return mix64((seed ^ (((k + 1) * GOLDEN) & MASK64)) & MASK64)


def child_array(seed: int, ks: np.ndarray) -> np.ndarray:
    """Vectorized child(); bit-identical to the scalar form."""
    z = np.uint64(seed) ^ ((ks.astype(np.uint64) + _ONE64) * _GOLDEN64)
    z ^= z >> _U64_30
    z *= _MIX1_64
    z ^= z >> _U64_27
    z *= _MIX2_64
    z ^= z >> _U64_31
    return z


def uniform01(u) -> float:
    """Map a 64-bit word to [0, 1) using the top 53 bits."""
    if isinstance(u, np.ndarray):
        return (u >> _U64_11).astype(np.float64) * _TWO53_INV
    return (int(u) >> 11) * _TWO53_INV


def bounded(u: int, n: int) -> int:
    """Reduce a 64-bit word to [0, n). Modulo; bias < n / 2**64."""
    return int(u) % n


def derive_seed(base_seed: int, cell_index: int, replicate_index: int) -> int:
    """Seed for one (grid cell, replicate) pair of a sweep.

    Depends only on logical identity, never on execution order, so any
    subset of cells can run in any order or thread and reproduce exactly.
    """
    z = (base_seed ^ ((cell_index * GOLDEN) & MASK64) ^ replicate_index) & MASK64
    return mix64(z)


def init_stream(seed: int) -> int:
    return child(seed, TAG_INIT)


def pool_stream(seed: int, t: int) -> int:
    return child(child(seed, TAG_POOL), t)


def consume_stream_base(seed: int, t: int) -> int:
    return child(child(seed, TAG_CONSUME), t)


def consume_stream(seed: int, t: int, agent_id: int) -> int:
    return child(consume_stream_base(seed, t), agent_id)
