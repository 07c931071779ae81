"""Command-line entry point: simulate, experiment, summarize.

Configuration can come from a JSON file (--config) mirroring the flags;
explicit flags win over the file.  Exit codes: 0 success, 2 usage or
configuration error, 3 I/O error while writing results.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .experiment import build_param_grid, derive_run_seed, run_experiment
from .netmodel import (EdgeListError, MultilayerNetwork, generate_synthetic,
                       parse_multilayer_edgelist, summarize_network, summary_csv)
from .scenarios import ScenarioSpec, run_scenario

DEFAULT_SCENARIOS = ["sir", "simultaneous"]


class ConfigError(Exception):
    pass


@dataclass
class ExperimentConfig:
    network: str | None = None
    contact_layer: str | None = None
    synthetic: dict | None = None
    scenarios: list[str] = field(default_factory=list)
    blocking_days: list[int] = field(default_factory=lambda: [21])
    horizon: int = 150
    reps: int = 20
    master_seed: int = 0
    infected_seed_fraction: float = 0.01
    aware_seed_fraction: float = 0.01
    grid_pairs: list | None = None
    grid_multipliers: list | None = None
    out: str = "results"
    threads: int = 1

    @classmethod
    def load(cls, args: argparse.Namespace) -> "ExperimentConfig":
        cfg = cls()
        if getattr(args, "config", None):
            path = Path(args.config)
            if not path.is_file():
                raise ConfigError(f"config file not found: {path}")
            try:
                data = json.loads(path.read_text())
            except json.JSONDecodeError as exc:
                raise ConfigError(f"bad JSON in {path}: {exc}") from exc
            for key, value in data.items():
                if not hasattr(cfg, key):
                    raise ConfigError(f"unknown config key '{key}'")
                setattr(cfg, key, value)
        overrides = {
            "network": getattr(args, "network", None),
            "contact_layer": getattr(args, "contact_layer", None),
            "scenarios": getattr(args, "scenario", None),
            "horizon": getattr(args, "horizon", None),
            "reps": getattr(args, "reps", None),
            "master_seed": getattr(args, "seed", None),
            "out": getattr(args, "out", None),
            "threads": getattr(args, "threads", None),
        }
        if getattr(args, "blocking_days", None):
            try:
                overrides["blocking_days"] = [int(d) for d in
                                              args.blocking_days.split(",")]
            except ValueError:
                raise ConfigError(f"bad --blocking-days '{args.blocking_days}'") from None
        for key, value in overrides.items():
            if value is not None:
                setattr(cfg, key, value)
        return cfg

    def scenario_specs(self, default_with_blocking: bool) -> list[ScenarioSpec]:
        labels = list(self.scenarios)
        if not labels:
            labels = list(DEFAULT_SCENARIOS)
            if default_with_blocking:
                labels += [f"blocking:{d}" for d in self.blocking_days]
        if len(set(labels)) != len(labels):
            raise ConfigError(f"duplicate scenarios in {labels}")
        try:
            return [ScenarioSpec.parse(
                label, horizon=self.horizon,
                infected_seed_fraction=self.infected_seed_fraction,
                aware_seed_fraction=self.aware_seed_fraction)
                for label in labels]
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def load_network(self) -> tuple[MultilayerNetwork, str]:
        if self.network is not None:
            path = Path(self.network)
            if not path.is_file():
                raise ConfigError(f"network file not found: {path}")
            if not self.contact_layer:
                raise ConfigError("--contact-layer is required with --network")
            try:
                net = parse_multilayer_edgelist(path.read_text(), self.contact_layer)
            except EdgeListError as exc:
                raise ConfigError(f"{path}: {exc}") from exc
            return net, path.stem
        if self.synthetic is not None:
            spec = dict(self.synthetic)
            try:
                net = generate_synthetic(
                    num_actors=int(spec["actors"]),
                    layer_specs=[(str(n), float(p)) for n, p in spec["layers"]],
                    contact_layer_name=str(spec["contact_layer"]),
                    seed=int(spec.get("seed", 0)))
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"bad synthetic network spec: {exc}") from exc
            return net, str(spec.get("name", "synthetic"))
        raise ConfigError("no network given: use --network or a synthetic config")

    def build_grid(self):
        try:
            return build_param_grid(self.grid_pairs, self.grid_multipliers)
        except ValueError as exc:
            raise ConfigError(f"bad parameter grid: {exc}") from exc


def _file_label(scenario_label: str) -> str:
    return scenario_label.replace(":", "-")


_SIM_CTX: dict = {}


def _simulate_init(net, name, master_seed):
    _SIM_CTX.update(net=net, name=name, master_seed=master_seed)


def _simulate_task(args):
    spec, params, ci, rep = args
    name = _SIM_CTX["name"]
    seed = derive_run_seed(_SIM_CTX["master_seed"], name, ci, rep)
    trace = run_scenario(_SIM_CTX["net"], params, spec, seed)
    fname = f"trace_{name}_{_file_label(spec.label)}_c{ci:02d}_r{rep:03d}.csv"
    return fname, trace.to_csv()


def cmd_simulate(cfg: ExperimentConfig) -> int:
    if cfg.reps < 1:
        raise ConfigError("reps must be >= 1")
    net, name = cfg.load_network()
    specs = cfg.scenario_specs(default_with_blocking=False)
    grid = cfg.build_grid()
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    tasks = [(spec, params, ci, rep)
             for spec in specs
             for ci, params in enumerate(grid.combos)
             for rep in range(cfg.reps)]
    if cfg.threads > 1:
        with concurrent.futures.ProcessPoolExecutor(
                max_workers=cfg.threads, initializer=_simulate_init,
                initargs=(net, name, cfg.master_seed)) as pool:
            outputs = list(pool.map(_simulate_task, tasks, chunksize=8))
    else:
        _simulate_init(net, name, cfg.master_seed)
        outputs = [_simulate_task(t) for t in tasks]
    for fname, text in outputs:
        (out_dir / fname).write_text(text)
    return 0


def cmd_experiment(cfg: ExperimentConfig) -> int:
    net, name = cfg.load_network()
    specs = cfg.scenario_specs(default_with_blocking=True)
    grid = cfg.build_grid()
    result = run_experiment(net, grid, specs, cfg.reps, cfg.master_seed,
                            network_name=name, threads=cfg.threads)
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / f"raw_{name}.csv").write_text(result.raw_csv())
    (out_dir / f"comparison_{name}.csv").write_text(result.comparison_csv())
    return 0


def cmd_summarize(cfg: ExperimentConfig, out_file: str | None) -> int:
    net, name = cfg.load_network()
    text = summary_csv(name, summarize_network(net))
    if out_file:
        Path(out_file).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multispread",
        description="Coupled virus and awareness spreading on multilayer networks")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--network", help="edge-list file (actor actor layer)")
        p.add_argument("--contact-layer", dest="contact_layer",
                       help="name of the direct-contact layer")
        p.add_argument("--config", help="JSON config file; flags override it")

    sim = sub.add_parser("simulate", help="write one trace CSV per run")
    common(sim)
    sim.add_argument("--scenario", action="append",
                     help="sir | simultaneous | blocking:D (repeatable)")
    sim.add_argument("--horizon", type=int)
    sim.add_argument("--reps", type=int)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--out")
    sim.add_argument("--threads", type=int)

    exp = sub.add_parser("experiment", help="full grid run; raw + comparison CSVs")
    common(exp)
    exp.add_argument("--scenario", action="append",
                     help="sir | simultaneous | blocking:D (repeatable)")
    exp.add_argument("--blocking-days", dest="blocking_days",
                     help="comma-separated delays, e.g. 7,14,21")
    exp.add_argument("--horizon", type=int)
    exp.add_argument("--reps", type=int)
    exp.add_argument("--seed", type=int)
    exp.add_argument("--out")
    exp.add_argument("--threads", type=int)

    summ = sub.add_parser("summarize", help="network summary CSV")
    common(summ)
    summ.add_argument("--out")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = ExperimentConfig.load(args)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "experiment":
            return cmd_experiment(cfg)
        return cmd_summarize(cfg, args.out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())
