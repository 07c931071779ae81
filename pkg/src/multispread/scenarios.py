"""Seeding, the three experimental scenarios, termination, and run traces.

Scenarios:
  * ``sir``           -- only the virus spreads, awareness never activates;
  * ``simultaneous``  -- virus and awareness both start at day 0;
  * ``blocking:D``    -- awareness is blocked for the first D iterations,
                         aware seeds are drawn when the block ends and
                         awareness spreads from iteration D+1.

Trace rows record the state after each day's update; aware seeds drawn at
the end of day D first become visible through their effect on day D+1, so
A(t) = 0 for every t <= D (blocking:0 is therefore identical to
simultaneous, row by row).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .dynamics import INFECTED, RECOVERED, SUSCEPTIBLE, PopulationState, SpreadParams, step
from .netmodel import MultilayerNetwork
from .randomness import Channel, EventKey, event_base, uniforms_from_packed

VIRUS_ONLY = "sir"
SIMULTANEOUS = "simultaneous"
BLOCKING = "blocking"


@dataclass(frozen=True)
class ScenarioSpec:
    """One experimental scenario: kind, blocking delay, horizon, seeding."""

    kind: str
    delay: int = 0
    horizon: int = 150
    infected_seed_fraction: float = 0.01
    aware_seed_fraction: float = 0.01

    def __post_init__(self):
        if self.kind not in (VIRUS_ONLY, SIMULTANEOUS, BLOCKING):
            raise ValueError(f"unknown scenario kind '{self.kind}'")
        if self.delay < 0:
            raise ValueError("blocking delay must be >= 0")
        if self.horizon < 0:
            raise ValueError("horizon must be >= 0")
        if not 0.0 < self.infected_seed_fraction <= 1.0:
            raise ValueError("infected_seed_fraction must be in (0,1]")
        # 0.0 is allowed as an explicit "no aware seeds" switch
        if not 0.0 <= self.aware_seed_fraction <= 1.0:
            raise ValueError("aware_seed_fraction must be in [0,1]")

    @classmethod
    def parse(cls, label: str, **kwargs) -> "ScenarioSpec":
        """Parse 'sir', 'simultaneous' or 'blocking:D' labels."""
        if label == VIRUS_ONLY:
            return cls(kind=VIRUS_ONLY, **kwargs)
        if label == SIMULTANEOUS:
            return cls(kind=SIMULTANEOUS, **kwargs)
        if label.startswith(BLOCKING + ":"):
            try:
                delay = int(label.split(":", 1)[1])
            except ValueError:
                raise ValueError(f"bad blocking delay in scenario '{label}'") from None
            return cls(kind=BLOCKING, delay=delay, **kwargs)
        raise ValueError(f"unknown scenario '{label}' "
                         "(expected sir, simultaneous or blocking:D)")

    @property
    def label(self) -> str:
        return f"{BLOCKING}:{self.delay}" if self.kind == BLOCKING else self.kind

    @property
    def aware_seed_day(self) -> int | None:
        """Day at whose end aware seeds are drawn; None if awareness is off."""
        if self.kind == VIRUS_ONLY:
            return None
        return self.delay if self.kind == BLOCKING else 0


class TerminationReason(str, Enum):
    HORIZON_REACHED = "horizon_reached"
    ALL_RECOVERED = "all_recovered"
    NO_INFECTED = "no_infected"


@dataclass
class RunTrace:
    """Per-day compartment counts plus the final per-actor states of one run."""

    s: np.ndarray
    i: np.ndarray
    r: np.ndarray
    u: np.ndarray
    a: np.ndarray
    termination_day: int
    termination_reason: TerminationReason
    horizon: int
    final_epidemic: np.ndarray
    final_aware: np.ndarray

    @property
    def days(self) -> np.ndarray:
        return np.arange(len(self.s))

    def to_csv(self) -> str:
        lines = ["day,S,I,R,U,A"]
        for d in range(len(self.s)):
            lines.append(f"{d},{self.s[d]},{self.i[d]},{self.r[d]},"
                         f"{self.u[d]},{self.a[d]}")
        return "\n".join(lines) + "\n"


def seed_count(fraction: float, population: int) -> int:
    """ceil(fraction * population) with a floor of one seed.

    The small epsilon guards against binary float artefacts such as
    0.07 * 100 landing just above the exact integer.
    """
    return min(population, max(1, math.ceil(fraction * population - 1e-9)))


def _draw_subset(candidates: np.ndarray, count: int, seed_key: EventKey) -> set[int]:
    base = event_base(seed_key.run_seed, seed_key.iteration, seed_key.channel)
    u = uniforms_from_packed(base, np.asarray(candidates, dtype=np.uint64) << np.uint64(32))
    order = np.argsort(u, kind="stable")
    return set(int(c) for c in np.asarray(candidates)[order[:count]])


def seed_infected(net: MultilayerNetwork, fraction: float, seed_key: EventKey) -> set[int]:
    """Uniform subset of the contact-layer actors, ceil(fraction*size), min 1."""
    if fraction <= 0.0:
        raise ValueError("infected seed fraction must be > 0")
    candidates = net.presence(net.contact_layer)
    if candidates.size == 0:
        raise ValueError("contact layer has no actors")
    return _draw_subset(candidates, seed_count(fraction, candidates.size), seed_key)


def seed_aware(net: MultilayerNetwork, fraction: float, seed_key: EventKey) -> set[int]:
    """Uniform subset of ALL actors, independent of the infected draw."""
    if fraction <= 0.0:
        raise ValueError("aware seed fraction must be > 0")
    candidates = np.arange(net.num_actors, dtype=np.int32)
    return _draw_subset(candidates, seed_count(fraction, net.num_actors), seed_key)


def run_scenario(net: MultilayerNetwork, params: SpreadParams, spec: ScenarioSpec,
                 run_seed: int) -> RunTrace:
    """Run one scenario to its horizon or until no actor is infected.

    Seed draws use event keys that do not depend on the scenario kind or
    blocking delay, so paired scenarios under the same run_seed share both
    their seeds and their per-trial randomness.
    """
    state = PopulationState.initial(net.num_actors)
    infected = seed_infected(net, spec.infected_seed_fraction,
                             EventKey(run_seed, 0, Channel.INFECTED_SEED))
    state.epidemic[sorted(infected)] = INFECTED

    rows = [state.counts()]  # day-0 row: infected seeds only, A = 0
    aware_day = spec.aware_seed_day
    if aware_day == 0 and spec.horizon > 0:
        _apply_aware_seeds(net, spec, run_seed, state)
    reason = TerminationReason.HORIZON_REACHED

    for day in range(1, spec.horizon + 1):
        active = aware_day is not None and day > aware_day
        state = step(state, net, params, active, run_seed)
        counts = state.counts()
        rows.append(counts)
        if counts[1] == 0:
            reason = (TerminationReason.ALL_RECOVERED if counts[0] == 0
                      else TerminationReason.NO_INFECTED)
            break
        if aware_day is not None and day == aware_day and day < spec.horizon:
            _apply_aware_seeds(net, spec, run_seed, state)

    arr = np.array(rows, dtype=np.int64)
    return RunTrace(s=arr[:, 0], i=arr[:, 1], r=arr[:, 2], u=arr[:, 3], a=arr[:, 4],
                    termination_day=len(rows) - 1, termination_reason=reason,
                    horizon=spec.horizon,
                    final_epidemic=state.epidemic, final_aware=state.aware)


def _apply_aware_seeds(net, spec, run_seed, state) -> None:
    if spec.aware_seed_fraction <= 0.0:
        return
    seeds = seed_aware(net, spec.aware_seed_fraction,
                       EventKey(run_seed, 0, Channel.AWARE_SEED))
    state.aware[sorted(seeds)] = True
