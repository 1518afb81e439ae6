"""
Main Entry Point - Command Line
===============================
Front end for runs, sweeps, the checker suite and the lower-bound
experiment.

Run with: python main.py {run,sweep,verify,lower-bound} [flags]

Exit codes: 0 success, 1 configuration error, 2 checker failure.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
from dotenv import dotenv_values

from checkers import trace_verdicts
from config import (
    EXIT_CHECK_FAILED,
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    JOBS,
    LOG_FORMAT,
    LOG_LEVEL,
    POLICIES,
    REWARD_KINDS,
    TOPOLOGIES,
    get_output_dir,
    validate_config,
)
from experiments_config import get_experiment, get_experiment_list, lower_bound_instance
from graph import run_verify
from models import ConfigError, ExperimentSpec, InstanceSpec, SimConfig
from simulator import build_graph, run
from sweep import sweep, write_json, write_run, write_sweep

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """argparse that reports bad flags as a config error instead of exiting."""

    def error(self, message):
        raise ConfigError(message)


# ═══════════════════════════════════════════════════════════════════════
# ARGUMENTS
# ═══════════════════════════════════════════════════════════════════════

# flag dest -> parser for values coming from a --config file
FILE_KEYS = {
    "policy": str, "topology": str, "m": str, "A": int, "T": int,
    "means": str, "gap": float, "kind": str, "seeds": int, "master_seed": int,
    "out": str, "trace": "bool", "fast": "bool", "jobs": int, "graph_file": str,
    "selection": str, "p": float, "root": int, "preset": str, "log_level": str,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key=value file; explicit flags win")
    common.add_argument("--preset", help=f"named experiment: {', '.join(get_experiment_list())}")
    common.add_argument("--policy", choices=POLICIES)
    common.add_argument("--topology", choices=TOPOLOGIES)
    common.add_argument("--m", help="agent count (comma list for sweep/verify)")
    common.add_argument("--A", dest="A", type=int, help="number of actions")
    common.add_argument("--T", dest="T", type=int, help="horizon")
    common.add_argument("--means", help="comma list of action means")
    common.add_argument("--gap", type=float, help="uniform-gap shorthand")
    common.add_argument("--kind", choices=REWARD_KINDS)
    common.add_argument("--seeds", type=int, help="number of seeds (0..N-1)")
    common.add_argument("--master-seed", dest="master_seed", type=int)
    common.add_argument("--out", help="artifact directory")
    common.add_argument("--trace", action="store_true", default=None, help="capture traces")
    common.add_argument("--fast", action="store_true", default=None, help="coop-se fast path")
    common.add_argument("--jobs", type=int, help="parallel runs in a sweep")
    common.add_argument("--graph-file", dest="graph_file", help="edge list, one 'u v' per line")
    common.add_argument("--selection", choices=["uniform", "round-robin"])
    common.add_argument("--p", type=float, help="edge probability for random-connected")
    common.add_argument("--root", type=int, help="spanning-tree root")
    common.add_argument("--log-level", dest="log_level")

    parser = _Parser(prog="main.py", description="Cooperative bandits on communication graphs")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="one configuration, per-run CSV")
    sub.add_parser("sweep", parents=[common], help="aggregate regret over m/topologies")
    sub.add_parser("verify", parents=[common], help="checker suite")
    sub.add_parser("lower-bound", parents=[common], help="line with m = T, one paying action")
    return parser


def _from_file(path: str) -> Dict[str, Any]:
    """Flat key=value file; keys are the flag names without leading dashes."""
    if not Path(path).is_file():
        raise ConfigError(f"config file not found: {path}")
    values = {}
    for key, raw in dotenv_values(path).items():
        dest = key.strip().lstrip("-").replace("-", "_")
        if dest not in FILE_KEYS:
            dest = {k.lower(): k for k in FILE_KEYS}.get(dest.lower())
        if dest is None:
            raise ConfigError(f"unknown key '{key}' in {path}")
        kind = FILE_KEYS[dest]
        if raw is None or raw == "":
            continue
        try:
            if kind == "bool":
                values[dest] = raw.strip().lower() in ("1", "true", "yes", "on")
            else:
                values[dest] = kind(raw.strip())
        except ValueError:
            raise ConfigError(f"bad value for '{key}': {raw!r}")
    return values


def merge_settings(args: argparse.Namespace) -> Dict[str, Any]:
    """Flags over --config file values; unset entries are dropped."""
    settings = _from_file(args.config) if args.config else {}
    for key in FILE_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def _int_list(text: Any) -> List[int]:
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"expected a comma list of integers, got {text!r}")


def _float_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"expected a comma list of numbers, got {text!r}")


# ═══════════════════════════════════════════════════════════════════════
# CONFIG RESOLUTION
# ═══════════════════════════════════════════════════════════════════════

def resolve_experiment(settings: Dict[str, Any], kind: str) -> ExperimentSpec:
    """
    Turn merged settings (over an optional preset) into an ExperimentSpec.

    Raises:
        ConfigError / pydantic.ValidationError on invalid input
    """
    if "preset" in settings:
        try:
            preset = get_experiment(settings["preset"])
        except KeyError as e:
            raise ConfigError(str(e))
        base = preset.config
        m_values = list(preset.m_values)
        topologies = list(preset.topologies)
    else:
        preset = None
        base = SimConfig()
        m_values, topologies = [], []

    if "m" in settings:
        m_values = _int_list(settings["m"])
        if not m_values:
            raise ConfigError("--m needs at least one value")
    if "topology" in settings:
        topologies = [settings["topology"]]

    # instance
    inst = base.instance.model_dump()
    if "means" in settings:
        inst = {"means": _float_list(settings["means"]), "kind": inst["kind"],
                "shuffle_optimal": inst["shuffle_optimal"]}
    elif "gap" in settings or "A" in settings:
        inst = {"A": settings.get("A", base.A), "gap": settings.get("gap", base.instance.gap or 0.2),
                "kind": inst["kind"], "shuffle_optimal": inst["shuffle_optimal"]}
    if "kind" in settings:
        inst["kind"] = settings["kind"]

    # topology
    topo = base.topology.model_dump()
    topo["name"] = topologies[0] if topologies else topo["name"]
    topo["m"] = m_values[0] if m_values else topo["m"]
    for key in ("p", "root"):
        if key in settings:
            topo[key] = settings[key]
    if "graph_file" in settings:
        topo["edge_file"] = settings["graph_file"]

    fields = base.model_dump()
    fields.update({"instance": InstanceSpec(**inst).model_dump(), "topology": topo})
    if "policy" in settings:
        fields["policy"] = settings["policy"]
        if settings["policy"] != "coop-se" and "fast" not in settings:
            fields["fast_path"] = False
    if "T" in settings:
        fields["T"] = settings["T"]
    if "seeds" in settings:
        if settings["seeds"] < 0:
            raise ConfigError(f"--seeds must be >= 0, got {settings['seeds']}")
        fields["seeds"] = list(range(settings["seeds"]))
    if "master_seed" in settings:
        fields["master_seed"] = settings["master_seed"]
    if "trace" in settings:
        fields["capture_trace"] = settings["trace"]
    if "fast" in settings:
        fields["fast_path"] = settings["fast"]
    if "selection" in settings:
        fields["selection"] = settings["selection"]

    config = SimConfig.model_validate(fields)
    name = preset.name if preset is not None else kind
    # a bare verify covers every policy on the chosen graph
    policies = list(POLICIES) if kind == "verify" and preset is None and "policy" not in settings else []
    return ExperimentSpec(
        name=name,
        config=config,
        m_values=m_values if len(m_values) > 1 else [],
        topologies=topologies if len(topologies) > 1 else [],
        policies=policies,
        out=settings.get("out"),
        description=preset.description if preset is not None else "",
    )


# ═══════════════════════════════════════════════════════════════════════
# COMMANDS
# ═══════════════════════════════════════════════════════════════════════

def cmd_run(spec: ExperimentSpec, out: Path) -> int:
    if spec.m_values or spec.topologies:
        raise ConfigError("run takes a single --m and --topology; use sweep for grids")
    config = spec.config
    print("\n" + "=" * 60)
    print(f"🚀 RUN: {config.policy} on {config.topology.name} m={config.m} A={config.A} T={config.T}")
    print("=" * 60)

    status = EXIT_OK
    g = build_graph(config)
    for seed in config.seeds:
        metrics, trace = run(config, seed, graph=g)
        if trace is not None and any(trace_verdicts(metrics, trace, config, g).values()):
            status = EXIT_CHECK_FAILED
        path = write_run(metrics, out)
        print(f"📊 seed {seed}: max regret {metrics.max_regret:.2f}, mean {metrics.mean_regret:.2f}, "
              f"max message {metrics.max_message_bits} bits → {path}")
    return status


def cmd_sweep(spec: ExperimentSpec, out: Path, jobs: int) -> int:
    table = sweep(spec.expand(), parallelism=jobs)
    path = write_sweep(table, out)
    failed = int((table["error"] != "").sum()) if len(table) else 0
    print(f"\n📊 {len(table)} rows → {path}")
    if failed:
        logger.warning("⚠️ %d sweep cells failed, see the error column", failed)
    if len(table):
        print(table[["policy", "topology", "m", "seed_count", "mean_max_regret", "stderr"]].to_string(index=False))
    return EXIT_OK


def cmd_verify(spec: ExperimentSpec, out: Path) -> int:
    status = EXIT_OK
    for config in spec.expand():
        result = run_verify(config)
        tag = f"verify_{config.policy}_{config.topology.name}_m{config.m}"
        write_json({
            "policy": config.policy,
            "topology": config.topology.name,
            "m": config.m,
            "A": config.A,
            "T": config.T,
            "seeds": result["seeds"],
            "deterministic": {k: int(v) for k, v in result["deterministic"].items()},
            "statistical": {k: int(v) for k, v in result["statistical"].items()},
            "notes": result["notes"],
            "passed": bool(result["passed"]),
        }, out / f"{tag}.json")
        if not result["passed"]:
            status = EXIT_CHECK_FAILED
    return status


def cmd_lower_bound(settings: Dict[str, Any], out: Path) -> int:
    A = settings.get("A", 441)
    T = settings.get("T", 60)
    config, floor = lower_bound_instance(A, T=T, seeds=settings.get("seeds", 200))
    update: Dict[str, Any] = {"master_seed": settings.get("master_seed", config.master_seed)}
    if settings.get("policy", "coop-se") != "coop-se":
        update.update({"policy": settings["policy"], "fast_path": False})
    config = SimConfig.model_validate({**config.model_dump(), **update})

    print("\n" + "=" * 60)
    print(f"🚀 LOWER BOUND: {config.policy}, A={A}, line m=T={T}, {len(config.seeds)} draws")
    print("=" * 60)

    middle = [run(config, seed)[0].middle_regret for seed in config.seeds]
    mean = float(np.mean(middle)) if middle else float("nan")
    pd.DataFrame({"seed": config.seeds, "middle_regret": middle}).to_csv(out / "lower_bound.csv", index=False)
    threshold = 0.9 * floor
    write_json({"policy": config.policy, "A": A, "T": T, "seeds": len(middle),
                "mean_middle_regret": mean, "floor": floor, "threshold": threshold},
               out / "lower_bound_summary.json")

    ok = bool(middle) and mean >= threshold
    print(f"{'✅' if ok else '❌'} middle-agent regret {mean:.4f} against floor {floor:.4f} "
          f"(threshold {threshold:.4f})")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def main(argv: Optional[List[str]] = None) -> int:
    """Parse `argv`, dispatch, and return the exit code."""
    try:
        args = build_parser().parse_args(argv)
        settings = merge_settings(args)
        logging.basicConfig(level=settings.get("log_level", LOG_LEVEL).upper(), format=LOG_FORMAT, force=True)
        validate_config()
        out = get_output_dir(settings.get("out"))

        if args.command == "lower-bound":
            return cmd_lower_bound(settings, out)
        spec = resolve_experiment(settings, {"run": "single-run", "sweep": "regret-sweep",
                                             "verify": "verify"}[args.command])
        if args.command == "run":
            return cmd_run(spec, out)
        if args.command == "sweep":
            return cmd_sweep(spec, out, settings.get("jobs", JOBS))
        return cmd_verify(spec, out)
    except ValueError as e:
        # ConfigError and pydantic.ValidationError are both ValueErrors
        print(f"❌ Configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
