"""One synchronous day of the coupled virus (SIR) + awareness (UAU) process.

The virus spreads on the direct-contact layer only; awareness spreads on
every layer.  All transitions are computed from the day-t snapshot and take
effect on day t+1.  Every trial draws its own counter-based uniform, so a
step is a pure function of (state, network, params, run_seed) and trials
may be evaluated in any order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .netmodel import MultilayerNetwork
from .randomness import (Channel, EventKey, event_base, event_bernoulli,
                         event_uniform, pack_subject_arrays, uniforms_from_packed)

__all__ = [
    "SUSCEPTIBLE", "INFECTED", "RECOVERED", "ActorState", "SpreadParams",
    "PopulationState", "EventKey", "Channel", "event_bernoulli",
    "event_uniform", "effective_infection_probability", "step",
]

# epidemic states; Recovered is absorbing
SUSCEPTIBLE = 0
INFECTED = 1
RECOVERED = 2

# awareness is a per-actor boolean: False = Unaware, True = Aware


@dataclass(frozen=True)
class ActorState:
    """Joint per-actor state: one epidemic compartment plus awareness."""

    epidemic: int
    aware: bool


@dataclass(frozen=True)
class SpreadParams:
    """Per-iteration probabilities of the coupled process.

    `from_rates` applies the standard construction: the infection
    probability of an aware susceptible is beta/10, and the awareness
    probabilities scale the epidemic ones by an integer multiplier x,
    clamped to 1.
    """

    beta: float
    gamma: float
    beta_aware: float
    epsilon: float
    mu: float
    epsilon_infected: float
    x: int = 1

    def __post_init__(self):
        for name in ("beta", "gamma", "beta_aware", "epsilon", "mu",
                     "epsilon_infected"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0,1], got {v}")

    @classmethod
    def from_rates(cls, beta: float, gamma: float, x: int = 1,
                   epsilon_infected: float = 0.692) -> "SpreadParams":
        return cls(beta=beta, gamma=gamma, beta_aware=beta / 10.0,
                   epsilon=min(beta * x, 1.0), mu=min(gamma * x, 1.0),
                   epsilon_infected=epsilon_infected, x=x)


@dataclass
class PopulationState:
    """Per-actor epidemic and awareness state at the end of a given day."""

    epidemic: np.ndarray  # int8, values in {SUSCEPTIBLE, INFECTED, RECOVERED}
    aware: np.ndarray     # bool
    iteration: int = 0

    @classmethod
    def initial(cls, num_actors: int) -> "PopulationState":
        return cls(epidemic=np.zeros(num_actors, dtype=np.int8),
                   aware=np.zeros(num_actors, dtype=bool),
                   iteration=0)

    def counts(self) -> tuple[int, int, int, int, int]:
        """(S, I, R, U, A) over all actors."""
        c = np.bincount(self.epidemic, minlength=3)
        a = int(np.count_nonzero(self.aware))
        return int(c[0]), int(c[1]), int(c[2]), len(self.aware) - a, a


def effective_infection_probability(target: ActorState, params: SpreadParams) -> float:
    """Infection probability faced by a susceptible target per infectious edge."""
    if target.epidemic != SUSCEPTIBLE:
        raise ValueError("target must be susceptible")
    return params.beta_aware if target.aware else params.beta


class _EngineArrays:
    """Directed per-layer edge arrays with precomputed event-key packs."""

    def __init__(self, net: MultilayerNetwork):
        n = net.num_actors
        if n >= (1 << 24) or net.num_layers >= (1 << 8):
            raise ValueError("network too large for subject packing")
        self.directed = []
        for li in range(net.num_layers):
            und = net.edges(li)
            src = np.concatenate([und[:, 0], und[:, 1]])
            dst = np.concatenate([und[:, 1], und[:, 0]])
            self.directed.append((src, dst, pack_subject_arrays(src, dst, li)))
        self.contact = self.directed[net.contact_layer]
        self.actor_pack = pack_subject_arrays(np.arange(n))


def _engine(net: MultilayerNetwork) -> _EngineArrays:
    cache = net.__dict__.get("_engine_cache")
    if cache is None:
        cache = _EngineArrays(net)
        net.__dict__["_engine_cache"] = cache
    return cache


def step(state: PopulationState, net: MultilayerNetwork, params: SpreadParams,
         awareness_active: bool, run_seed: int) -> PopulationState:
    """Advance the population by one day (synchronous update).

    Trials per day, each on its own event key:
      * infection: one per directed contact-layer pair with an infected
        source and a susceptible target, at beta (beta_aware if the target
        is aware);
      * recovery: one per infected actor at gamma;
      * if awareness is active: one per directed edge on any layer with an
        aware source and an unaware target at epsilon, one per infected
        unaware actor at epsilon_infected (symptom channel), and one per
        aware actor at mu (forgetting).
    """
    arrays = _engine(net)
    day = state.iteration + 1
    epi = state.epidemic
    aware = state.aware
    new_epi = epi.copy()
    new_aware = aware.copy()

    src, dst, pack = arrays.contact
    hot = np.flatnonzero((epi[src] == INFECTED) & (epi[dst] == SUSCEPTIBLE))
    if hot.size:
        u = uniforms_from_packed(event_base(run_seed, day, Channel.INFECTION),
                                 pack[hot])
        targets = dst[hot]
        p_eff = np.where(aware[targets], params.beta_aware, params.beta)
        new_epi[targets[u < p_eff]] = INFECTED

    infected = np.flatnonzero(epi == INFECTED)
    if infected.size:
        u = uniforms_from_packed(event_base(run_seed, day, Channel.RECOVERY),
                                 arrays.actor_pack[infected])
        new_epi[infected[u < params.gamma]] = RECOVERED

    if awareness_active:
        base = event_base(run_seed, day, Channel.AWARENESS_EDGE)
        for src, dst, pack in arrays.directed:
            told = np.flatnonzero(aware[src] & ~aware[dst])
            if told.size:
                u = uniforms_from_packed(base, pack[told])
                new_aware[dst[told[u < params.epsilon]]] = True

        symptomatic = np.flatnonzero((epi == INFECTED) & ~aware)
        if symptomatic.size:
            u = uniforms_from_packed(
                event_base(run_seed, day, Channel.SYMPTOM_AWARENESS),
                arrays.actor_pack[symptomatic])
            new_aware[symptomatic[u < params.epsilon_infected]] = True

        knowing = np.flatnonzero(aware)
        if knowing.size:
            u = uniforms_from_packed(event_base(run_seed, day, Channel.FORGETTING),
                                     arrays.actor_pack[knowing])
            new_aware[knowing[u < params.mu]] = False

    return PopulationState(epidemic=new_epi, aware=new_aware, iteration=day)
