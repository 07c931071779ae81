"""Counter-based per-event randomness.

Every stochastic decision in a run is a pure function of an :class:`EventKey`
(run seed, day, channel, subject ids).  This removes any dependence on
traversal order, lets paired scenarios share identical randomness for the
channels they have in common, and makes parallel execution bit-reproducible.

The derivation hashes the key through splitmix64-style avalanche rounds and
scales the top 53 bits to a uniform in [0, 1).  A scalar path (Python ints)
and a vectorised path (numpy uint64) produce bit-identical values.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB

# Subject ids are packed into one 64-bit lane: actor_a<<32 | actor_b<<8 | layer.
_MAX_ACTOR_A = 1 << 32
_MAX_ACTOR_B = 1 << 24
_MAX_LAYER = 1 << 8

_U64_MIX_A = np.uint64(_MIX_A)
_U64_MIX_B = np.uint64(_MIX_B)
_INV_2_53 = 2.0 ** -53


class Channel(IntEnum):
    """Trial channels; disjoint key namespaces within a run."""

    INFECTION = 0
    RECOVERY = 1
    AWARENESS_EDGE = 2
    FORGETTING = 3
    SYMPTOM_AWARENESS = 4
    INFECTED_SEED = 5
    AWARE_SEED = 6
    EDGE_GENERATION = 7


@dataclass(frozen=True)
class EventKey:
    """Identity of a single stochastic event within a run."""

    run_seed: int
    iteration: int
    channel: int
    actor_a: int = 0
    actor_b: int = 0
    layer: int = 0


def mix64(z: int) -> int:
    """Splitmix64 finalizer over Python ints (mod 2**64)."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX_A) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX_B) & _MASK64
    return z ^ (z >> 31)


def event_base(run_seed: int, iteration: int, channel: int) -> int:
    """Per-(run, day, channel) hash state; subjects are absorbed afterwards."""
    h = mix64(run_seed ^ _GOLDEN)
    return mix64(h ^ ((iteration << 4) | channel))


def pack_subjects(actor_a: int, actor_b: int = 0, layer: int = 0) -> int:
    if not (0 <= actor_a < _MAX_ACTOR_A and 0 <= actor_b < _MAX_ACTOR_B
            and 0 <= layer < _MAX_LAYER):
        raise ValueError("subject ids out of packable range")
    return (actor_a << 32) | (actor_b << 8) | layer


def event_uniform(key: EventKey) -> float:
    """Uniform in [0, 1) derived from the key alone."""
    base = event_base(key.run_seed, key.iteration, key.channel)
    h = mix64(mix64(base ^ pack_subjects(key.actor_a, key.actor_b, key.layer)))
    return (h >> 11) * _INV_2_53


def event_bernoulli(key: EventKey, p: float) -> bool:
    """True with probability p, as a deterministic function of the key."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0,1], got {p}")
    return event_uniform(key) < p


def pack_subject_arrays(actor_a, actor_b=0, layer=0) -> np.ndarray:
    """Vectorised pack_subjects; callers must respect the packing ranges."""
    out = np.asarray(actor_a, dtype=np.uint64) << np.uint64(32)
    out = out | (np.asarray(actor_b, dtype=np.uint64) << np.uint64(8))
    return out | np.asarray(layer, dtype=np.uint64)


def uniforms_from_packed(base: int, packed: np.ndarray) -> np.ndarray:
    """Uniforms for many events sharing one (run, day, channel) base.

    Bit-identical to event_uniform on the corresponding scalar keys.
    """
    z = np.uint64(base) ^ packed
    # two splitmix64 finalizer rounds
    z = (z ^ (z >> np.uint64(30))) * _U64_MIX_A
    z = (z ^ (z >> np.uint64(27))) * _U64_MIX_B
    z ^= z >> np.uint64(31)
    z = (z ^ (z >> np.uint64(30))) * _U64_MIX_A
    z = (z ^ (z >> np.uint64(27))) * _U64_MIX_B
    z ^= z >> np.uint64(31)
    return (z >> np.uint64(11)).astype(np.float64) * _INV_2_53
