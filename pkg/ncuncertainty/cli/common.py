from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

from ncuncertainty.algebra.params import AlgebraParams, derive_constants
from ncuncertainty.core.config import RunConfig, load_config_file, resolve_threads
from ncuncertainty.core.errors import NcuError
from ncuncertainty.core.models import GridSpec, WaveFunction
from ncuncertainty.states.constructors import (
    GaussianSpec,
    gaussian,
    hermite_superposition,
    random_smooth,
    seeded_rng,
)
from ncuncertainty.states.io import load_state, save_state

# keys of the argparse namespace that are not subcommand options
_SHARED = {
    "command",
    "config",
    "theta",
    "eta",
    "epsilon",
    "split",
    "grid",
    "L",
    "seed",
    "threads",
    "tol",
    "out",
    "csv",
    "pretty",
    "state_in",
    "state_out",
    "handler",
}


class UsageError(NcuError):
    kind = "usage"
    default_module = "cli"


@dataclass
class CommandResult:
    """What a subcommand hands back to ``run``: the payload, a pass flag and CSV rows."""

    kind: str
    payload: Any
    passed: bool = True
    rows: Optional[Iterable[Mapping[str, Any]]] = None
    notes: List[str] = field(default_factory=list)


def add_common_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("shared")
    g.add_argument("--config", help="YAML/JSON config file")
    g.add_argument("--theta", type=float)
    g.add_argument("--eta", type=float)
    g.add_argument("--epsilon", type=float)
    g.add_argument("--split", type=float, help="lambda/mu ratio (default 1)")
    g.add_argument("--grid", type=int, help="points per axis (power of two)")
    g.add_argument("--L", type=float, help="half-width of the grid")
    g.add_argument("--seed", type=int)
    g.add_argument("--threads", type=int, help="worker threads (env NCU_THREADS)")
    g.add_argument("--tol", type=float)
    g.add_argument("--out", help="write the JSON report here instead of stdout")
    g.add_argument("--csv", help="write the table of this run as CSV")
    g.add_argument("--pretty", action="store_true", help="render the report with rich")
    g.add_argument("--state-in", dest="state_in", help="load the test state from a state file")
    g.add_argument("--state-out", dest="state_out", help="save the test state used")


def _pick(flag: Any, conf: Mapping[str, Any], key: str, default: Any) -> Any:
    if flag is not None:
        return flag
    if conf.get(key) is not None:
        return conf[key]
    return default


def _optional_float(flag: Any, value: Any) -> Optional[float]:
    if flag is not None:
        return float(flag)
    return None if value is None else float(value)


def resolve_run_config(args: argparse.Namespace) -> Tuple[RunConfig, Dict[str, Any]]:
    """Merge flags over the config file over defaults; returns the config and the raw file."""
    conf = load_config_file(getattr(args, "config", None))
    grid_conf: Dict[str, Any] = dict(conf)
    if getattr(args, "grid", None) is not None:
        grid_conf["grid"] = args.grid
        grid_conf.pop("n1", None)
        grid_conf.pop("n2", None)
    if getattr(args, "L", None) is not None:
        grid_conf["L"] = args.L
        grid_conf.pop("L1", None)
        grid_conf.pop("L2", None)
    options = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in _SHARED and not callable(v)
    }
    try:
        cfg = RunConfig(
            subcommand=str(args.command),
            theta=float(_pick(args.theta, conf, "theta", 0.0)),
            eta=float(_pick(args.eta, conf, "eta", 0.0)),
            epsilon=float(_pick(args.epsilon, conf, "epsilon", 0.0)),
            split=float(_pick(args.split, conf, "split", 1.0)),
            grid=GridSpec.from_mapping(grid_conf),
            seed=int(_pick(args.seed, conf, "seed", 0)),
            threads=resolve_threads(args.threads, conf),
            tol=_optional_float(args.tol, conf.get("tol")),
            options=options,
            outputs={"out": args.out, "csv": args.csv, "state_out": args.state_out},
        )
    except (TypeError, ValueError) as e:
        raise UsageError(f"bad parameter value: {e}") from e
    return cfg, conf


def params_of(cfg: RunConfig) -> AlgebraParams:
    return derive_constants(cfg.theta, cfg.eta, cfg.epsilon, cfg.split)


def add_state_flags(p: argparse.ArgumentParser, default: str = "gaussian") -> None:
    p.add_argument(
        "--state",
        choices=["gaussian", "hermite", "random"],
        default=default,
        help="test state family when --state-in is not given",
    )
    p.add_argument("--gauss-a", dest="gauss_a", type=float, default=2.0)
    p.add_argument("--gauss-b", dest="gauss_b", type=float, default=2.0)
    p.add_argument("--x1-0", dest="x1_0", type=float, default=0.0)
    p.add_argument("--x2-0", dest="x2_0", type=float, default=0.0)
    p.add_argument("--real", action="store_true", help="real-valued random/Hermite state")


def state_of(args: argparse.Namespace, cfg: RunConfig) -> WaveFunction:
    """Test state from --state-in or the chosen family; saved to --state-out if asked.

    A loaded state keeps the grid of its file, so handlers work on ``f.grid``.
    """
    if getattr(args, "state_in", None):
        f = load_state(args.state_in)
    else:
        family = getattr(args, "state", "gaussian")
        if family == "gaussian":
            spec = GaussianSpec(args.gauss_a, args.gauss_b, args.x1_0, args.x2_0)
            f = gaussian(cfg.grid, spec)
        elif family == "hermite":
            f = hermite_superposition(cfg.grid, seeded_rng(cfg.seed), real=args.real)
        else:
            f = random_smooth(cfg.grid, seeded_rng(cfg.seed), real=args.real)
    if getattr(args, "state_out", None):
        save_state(args.state_out, f)
    return f


def parse_range(text: str) -> Tuple[float, float]:
    """'lo:hi' -> (lo, hi); 'inf' is accepted for hi."""
    try:
        lo, hi = str(text).split(":", 1)
        return float(lo), float(hi)
    except ValueError:
        raise UsageError(f"expected a range lo:hi, got {text!r}")


def parse_floats(text: Optional[str]) -> Optional[List[float]]:
    if text is None or str(text).strip() == "":
        return None
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected a comma separated list of numbers, got {text!r}")


__all__ = [
    "CommandResult",
    "UsageError",
    "add_common_flags",
    "add_state_flags",
    "resolve_run_config",
    "params_of",
    "state_of",
    "parse_range",
    "parse_floats",
]
