"""Reproducible Monte Carlo simulation of coupled virus and awareness
spreading (SIR + UAU) in multilayer networks, with information blocking."""

from .dynamics import (INFECTED, RECOVERED, SUSCEPTIBLE, ActorState, Channel,
                       EventKey, PopulationState, SpreadParams,
                       effective_infection_probability, event_bernoulli, step)
from .experiment import (MetricRow, ParamGrid, RunKey, RunSummary,
                         build_param_grid, compare_scenarios, cumulative_ir,
                         derive_run_seed, meanfield_sir, peak_day,
                         run_experiment)
from .netmodel import (EdgeListError, MultilayerNetwork, NetworkSummary,
                       generate_synthetic, neighbors_on_layer,
                       parse_multilayer_edgelist, serialize_multilayer_edgelist,
                       summarize_network, summary_csv)
from .scenarios import (BLOCKING, SIMULTANEOUS, VIRUS_ONLY, RunTrace,
                        ScenarioSpec, TerminationReason, run_scenario,
                        seed_aware, seed_count, seed_infected)
from .stats import WilcoxonResult, exact_signed_rank_p, wilcoxon_signed_rank

__version__ = "0.1.0"
