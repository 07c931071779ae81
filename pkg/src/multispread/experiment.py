"""Parameter grid, batch execution, comparison metrics, and the ODE oracle.

A batch experiment runs every (parameter combo, scenario, repetition)
triple.  The run seed is derived from (master seed, network, combo,
repetition) with the scenario deliberately excluded, so compared scenarios
share randomness pair by pair (common random numbers).  Scenario pairs are
then reduced to the three comparison metrics -- relative peak-day shift,
excess infected+recovered at the baseline pair's peak day, and excess
infected+recovered at the horizon -- each with a Wilcoxon signed-rank
p-value over the paired raw differences.
"""
from __future__ import annotations

import concurrent.futures
import hashlib
from dataclasses import dataclass

import numpy as np

from .dynamics import SpreadParams
from .netmodel import MultilayerNetwork
from .randomness import mix64
from .scenarios import BLOCKING, SIMULTANEOUS, RunTrace, ScenarioSpec, run_scenario
from .stats import wilcoxon_signed_rank

DEFAULT_BASE_PAIRS = ((0.19, 0.10), (0.22, 0.02), (0.28, 0.08), (0.31, 0.10))
DEFAULT_MULTIPLIERS = (1, 2, 3, 4)


@dataclass(frozen=True)
class ParamGrid:
    base_pairs: tuple[tuple[float, float], ...]
    multipliers: tuple[int, ...]
    combos: tuple[SpreadParams, ...]


def build_param_grid(base_pairs=None, multipliers=None) -> ParamGrid:
    """Cartesian product of (beta, gamma) pairs and awareness multipliers."""
    pairs = tuple(tuple(p) for p in (base_pairs or DEFAULT_BASE_PAIRS))
    mults = tuple(multipliers or DEFAULT_MULTIPLIERS)
    combos = tuple(SpreadParams.from_rates(beta, gamma, x)
                   for beta, gamma in pairs for x in mults)
    return ParamGrid(base_pairs=pairs, multipliers=mults, combos=combos)


@dataclass(frozen=True)
class RunKey:
    """Identity of one run; the seed derivation excludes the scenario."""

    network: str
    scenario: str
    combo_index: int
    rep: int


def _stable_name_hash(name: str) -> int:
    return int.from_bytes(hashlib.blake2b(name.encode("utf-8"),
                                          digest_size=8).digest(), "big")


def derive_run_seed(master_seed: int, network: str, combo_index: int, rep: int) -> int:
    """64-bit run seed; scenario-independent so paired scenarios couple."""
    h = mix64(master_seed ^ _stable_name_hash(network))
    h = mix64(h ^ combo_index)
    return mix64(h ^ rep)


def peak_day(trace: RunTrace) -> int:
    """Earliest day with the maximal infected count."""
    return int(np.argmax(trace.i))


def cumulative_ir(trace: RunTrace, day: int) -> int:
    """Infected + recovered at a day; final counts persist past termination."""
    if day < 0:
        raise ValueError("day must be >= 0")
    d = min(day, trace.termination_day)
    return int(trace.i[d] + trace.r[d])


@dataclass
class RunSummary:
    """Per-run reduction of a trace, sufficient for every reported metric."""

    peak_day: int
    peak_i: int
    ir: np.ndarray  # infected+recovered per day, day 0 .. termination_day
    termination_day: int
    termination_reason: str
    horizon: int

    @classmethod
    def from_trace(cls, trace: RunTrace) -> "RunSummary":
        return cls(peak_day=peak_day(trace),
                   peak_i=int(trace.i.max()),
                   ir=(trace.i + trace.r),
                   termination_day=trace.termination_day,
                   termination_reason=trace.termination_reason.value,
                   horizon=trace.horizon)

    def ir_at(self, day: int) -> int:
        return int(self.ir[min(day, self.termination_day)])


def _as_summary(run) -> RunSummary:
    return run if isinstance(run, RunSummary) else RunSummary.from_trace(run)


@dataclass(frozen=True)
class MetricRow:
    """Mean paired metrics of one scenario against a baseline."""

    scenario: str
    baseline: str
    peak_day_shift_pct: float
    excess_ir_at_peak_pct: float
    excess_ir_at_150_pct: float
    n_pairs: int
    p_peak: float
    p_ir_peak: float
    p_ir_150: float

    @property
    def comparison(self) -> str:
        return f"{self.scenario}_vs_{self.baseline}"


def _paired_p(differences) -> float:
    try:
        return wilcoxon_signed_rank(differences).p_two_sided
    except ValueError:  # all differences zero: test carries no information
        return float("nan")


def compare_scenarios(baseline_runs, other_runs, *, scenario: str = "other",
                      baseline: str = "baseline") -> MetricRow:
    """Reduce paired runs to the three mean metrics plus Wilcoxon p-values.

    Both arguments map the same pairing keys (combo, repetition) to runs.
    Pairs whose baseline peaks on day 0 have an undefined relative shift
    and are dropped entirely.
    """
    if not baseline_runs or set(baseline_runs) != set(other_runs):
        raise ValueError("runs must be non-empty and share the same keys")
    d_peak, d_ir_peak, d_ir_150 = [], [], []
    shift_pct, excess_peak_pct, excess_150_pct = [], [], []
    for key in sorted(baseline_runs):
        base = _as_summary(baseline_runs[key])
        other = _as_summary(other_runs[key])
        if base.peak_day == 0:
            continue
        t_star = base.peak_day
        ir_b_peak, ir_o_peak = base.ir_at(t_star), other.ir_at(t_star)
        ir_b_end = base.ir_at(base.horizon)
        ir_o_end = other.ir_at(other.horizon)
        d_peak.append(base.peak_day - other.peak_day)
        d_ir_peak.append(ir_o_peak - ir_b_peak)
        d_ir_150.append(ir_o_end - ir_b_end)
        shift_pct.append(100.0 * (base.peak_day - other.peak_day) / base.peak_day)
        excess_peak_pct.append(100.0 * (ir_o_peak - ir_b_peak) / ir_b_peak)
        excess_150_pct.append(100.0 * (ir_o_end - ir_b_end) / ir_b_end)
    if not shift_pct:
        raise ValueError("no valid pairs to compare")
    return MetricRow(
        scenario=scenario, baseline=baseline,
        peak_day_shift_pct=float(np.mean(shift_pct)),
        excess_ir_at_peak_pct=float(np.mean(excess_peak_pct)),
        excess_ir_at_150_pct=float(np.mean(excess_150_pct)),
        n_pairs=len(shift_pct),
        p_peak=_paired_p(d_peak),
        p_ir_peak=_paired_p(d_ir_peak),
        p_ir_150=_paired_p(d_ir_150),
    )


# -- batch execution ---------------------------------------------------------

_WORKER: dict = {}


def _worker_init(net, scenarios, combos, reps, master_seed, network_name):
    _WORKER.update(net=net, scenarios=scenarios, combos=combos, reps=reps,
                   master_seed=master_seed, network_name=network_name)


def _worker_task(args):
    si, ci = args
    net = _WORKER["net"]
    spec = _WORKER["scenarios"][si]
    params = _WORKER["combos"][ci]
    out = []
    for rep in range(_WORKER["reps"]):
        seed = derive_run_seed(_WORKER["master_seed"], _WORKER["network_name"], ci, rep)
        out.append((rep, RunSummary.from_trace(run_scenario(net, params, spec, seed))))
    return si, ci, out


@dataclass
class ExperimentResult:
    network: str
    master_seed: int
    reps: int
    grid: ParamGrid
    scenario_labels: list[str]
    summaries: dict  # (scenario_label, combo_index, rep) -> RunSummary
    metric_rows: list[MetricRow]

    def raw_csv(self) -> str:
        base_label = _raw_baseline_label(self.scenario_labels)
        lines = ["network,scenario,combo_index,beta,gamma,epsilon,mu,rep,"
                 "peak_day,peak_I,ir_at_base_peak,ir_final,termination_day,"
                 "termination_reason,run_seed"]
        for label in self.scenario_labels:
            for ci, params in enumerate(self.grid.combos):
                for rep in range(self.reps):
                    s = self.summaries[(label, ci, rep)]
                    t_star = self.summaries[(base_label, ci, rep)].peak_day
                    seed = derive_run_seed(self.master_seed, self.network, ci, rep)
                    lines.append(
                        f"{self.network},{label},{ci},{params.beta:g},"
                        f"{params.gamma:g},{params.epsilon:g},{params.mu:g},"
                        f"{rep},{s.peak_day},{s.peak_i},{s.ir_at(t_star)},"
                        f"{s.ir_at(s.horizon)},{s.termination_day},"
                        f"{s.termination_reason},{seed}")
        return "\n".join(lines) + "\n"

    def comparison_csv(self) -> str:
        lines = ["network,comparison,peak_day_shift_pct,excess_ir_peak_pct,"
                 "excess_ir_150_pct,p_peak,p_ir_peak,p_ir_150,n_pairs"]
        for row in self.metric_rows:
            lines.append(
                f"{self.network},{row.comparison},{row.peak_day_shift_pct:.6f},"
                f"{row.excess_ir_at_peak_pct:.6f},{row.excess_ir_at_150_pct:.6f},"
                f"{row.p_peak:.6g},{row.p_ir_peak:.6g},{row.p_ir_150:.6g},"
                f"{row.n_pairs}")
        return "\n".join(lines) + "\n"


def _raw_baseline_label(labels: list[str]) -> str:
    """Baseline scenario used for the raw CSV's ir_at_base_peak column."""
    if SIMULTANEOUS in labels:
        return SIMULTANEOUS
    blocking = [l for l in labels if l.startswith(BLOCKING + ":")]
    if blocking:
        return max(blocking, key=lambda l: int(l.split(":")[1]))
    return labels[0]


def _comparison_plan(labels: list[str]) -> list[tuple[str, str]]:
    """(other, baseline) pairs: every scenario vs simultaneous, and shorter
    blocking delays vs the longest one when several delays are present."""
    plan = []
    if SIMULTANEOUS in labels:
        plan.extend((label, SIMULTANEOUS) for label in labels
                    if label != SIMULTANEOUS)
    blocking = sorted((l for l in labels if l.startswith(BLOCKING + ":")),
                      key=lambda l: int(l.split(":")[1]))
    if len(blocking) >= 2:
        longest = blocking[-1]
        plan.extend((label, longest) for label in blocking[:-1])
    return plan


def run_experiment(net: MultilayerNetwork, grid: ParamGrid,
                   scenarios: list[ScenarioSpec], reps: int, master_seed: int,
                   *, network_name: str = "network",
                   threads: int = 1) -> ExperimentResult:
    """Execute the full (combo x scenario x repetition) batch.

    Output is identical for any `threads` value: every run's randomness is
    fixed by its key, and results are assembled in key order.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    labels = [spec.label for spec in scenarios]
    if len(set(labels)) != len(labels):
        raise ValueError("duplicate scenario labels")

    tasks = [(si, ci) for si in range(len(scenarios))
             for ci in range(len(grid.combos))]
    initargs = (net, scenarios, grid.combos, reps, master_seed, network_name)
    summaries = {}
    if threads <= 1:
        _worker_init(*initargs)
        results = list(map(_worker_task, tasks))
    else:
        with concurrent.futures.ProcessPoolExecutor(
                max_workers=threads, initializer=_worker_init,
                initargs=initargs) as pool:
            results = list(pool.map(_worker_task, tasks,
                                    chunksize=max(1, len(tasks) // (4 * threads))))
    for si, ci, reps_out in results:
        for rep, summary in reps_out:
            summaries[(labels[si], ci, rep)] = summary

    metric_rows = []
    for other, baseline in _comparison_plan(labels):
        base_runs = {(ci, rep): summaries[(baseline, ci, rep)]
                     for ci in range(len(grid.combos)) for rep in range(reps)}
        other_runs = {(ci, rep): summaries[(other, ci, rep)]
                      for ci in range(len(grid.combos)) for rep in range(reps)}
        metric_rows.append(compare_scenarios(base_runs, other_runs,
                                             scenario=other, baseline=baseline))
    return ExperimentResult(network=network_name, master_seed=master_seed,
                            reps=reps, grid=grid, scenario_labels=labels,
                            summaries=summaries, metric_rows=metric_rows)


# -- mean-field oracle --------------------------------------------------------

def meanfield_sir(beta: float, gamma: float, s0: float, i0: float,
                  dt: float = 0.01, horizon: float = 150.0):
    """Explicit fixed-step integration of the classical SIR fractions.

    Returns (t, s, i, r) arrays covering [0, horizon], with r starting at
    zero.  The three derivatives cancel exactly, so s+i+r is conserved to
    rounding.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    if s0 + i0 > 1.0 + 1e-12:
        raise ValueError("s0 + i0 must be <= 1")
    steps = int(round(horizon / dt))
    t = np.arange(steps + 1) * dt
    s = np.empty(steps + 1)
    i = np.empty(steps + 1)
    r = np.empty(steps + 1)
    s[0], i[0], r[0] = s0, i0, 0.0
    for k in range(steps):
        flow_si = beta * i[k] * s[k] * dt
        flow_ir = gamma * i[k] * dt
        s[k + 1] = s[k] - flow_si
        i[k + 1] = i[k] + flow_si - flow_ir
        r[k + 1] = r[k] + flow_ir
    return t, s, i, r
