"""Command-line surface: one subcommand per experiment, JSON report on stdout or --out.

Exit codes: 0 success, 2 when a checked invariant fails, 1 on usage and domain errors.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from ncuncertainty import __version__
from ncuncertainty.algebra.maps import commutator_closure
from ncuncertainty.algebra.symbols import FUNDAMENTAL, Tag
from ncuncertainty.cli.common import (
    CommandResult,
    UsageError,
    add_common_flags,
    add_state_flags,
    params_of,
    parse_floats,
    parse_range,
    resolve_run_config,
    state_of,
)
from ncuncertainty.core.config import RunConfig
from ncuncertainty.core.errors import InvariantViolation, NcuError
from ncuncertainty.core.utils import now_stamp, to_jsonable
from ncuncertainty.eigensolver.ground import SolverOptions, ground_state, spectrum_low
from ncuncertainty.eigensolver.probes import (
    coherent_state_probe,
    sample_states,
    variational_probe,
)
from ncuncertainty.infra.logging import init_logging, log_error, mdc_clear, mdc_put
from ncuncertainty.modspace.norms import norm_equivalence_report, sandwich_constants
from ncuncertainty.modspace.stft import StftLattice
from ncuncertainty.modspace.weights import weight_checks
from ncuncertainty.operators.assemble import assemble
from ncuncertainty.operators.checks import reconstruct_hw, verify_algebra
from ncuncertainty.services.reporting import build_report, print_pretty, write_csv, write_json
from ncuncertainty.services.runs import runs_base_dir
from ncuncertainty.services.selftest import run_selftest
from ncuncertainty.states.constructors import hermite_function
from ncuncertainty.states.measure import dispersion, expectation
from ncuncertainty.uncertainty.entropy import (
    entropic_check,
    gaussian_1d,
    line_axis,
    marginal_amplitude,
    normalize_1d,
)
from ncuncertainty.uncertainty.functionals import functional_F, nullifying_translation, robertson
from ncuncertainty.uncertainty.gaussian import (
    default_schedules,
    gaussian_closed_forms,
    hpw_sweep,
    minimal_length_probe,
)
from ncuncertainty.uncertainty.pairs import ALL_PAIRS, PairAlpha
from ncuncertainty.uncertainty.scaling import scaling_demo
from ncuncertainty.wdw.ode import envelope_exponent, solve_zero_energy, tail_l2_proxy
from ncuncertainty.wdw.potentials import PotentialKind, PotentialSpec, find_minimum

Handler = Callable[[argparse.Namespace, RunConfig], CommandResult]

HPW_A_VALUES = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6]


def _pairs(text: Optional[str]) -> List[PairAlpha]:
    if not text or text == "all":
        return list(ALL_PAIRS)
    return [PairAlpha.parse(t) for t in text.split(",")]


def _opts(args: argparse.Namespace, cfg: RunConfig) -> SolverOptions:
    return SolverOptions(
        tol=cfg.tol or 1e-8, max_iter=int(getattr(args, "max_iter", 5000)), seed=cfg.seed
    )


# ---------------- handlers ----------------


def cmd_constants(args: argparse.Namespace, cfg: RunConfig) -> CommandResult:
    p = params_of(cfg)
    defects = p.invariant_defects()
    return CommandResult(
        "constants",
        {**p.to_dict(), "r_multiplier": p.r_multiplier, "defects": defects},
        passed=max(defects.values()) <= 1e-12,
    )


def cmd_commutators(args: argparse.Namespace, cfg: RunConfig) -> CommandResult:
    p = params_of(cfg)
    closures = {
        f"[{a.value},{b.value}]": str(commutator_closure(p, a, b))
        for a, b in itertools.combinations(FUNDAMENTAL, 2)
    }
    states = sample_states(cfg.grid, args.states, cfg.seed)
    tol = cfg.tol or (1e-8 if p.epsilon == 0.0 else 1e-6)
    report = verify_algebra(p, cfg.grid, states, tol=tol)
    rec = reconstruct_hw(p, cfg.grid, states[0])
    ok = report.passed and rec.max_deviation <= 1e-6
    rows = [{"pair": c.pair, "max_error": c.max_error} for c in report.pairs]
    return CommandResult(
        "commutators",
        {"closures": closures, "verification": report, "reconstruction": rec},
        passed=ok,
        rows=rows,
    )


def cmd_dispersion(args: argparse.Namespace, cfg: RunConfig) -> CommandResult:
    p = params_of(cfg)
    f = state_of(args, cfg)
    op = assemble(Tag.parse(args.op), p, f.grid)
    mean = expectation(op, f)
    return CommandResult(
        "dispersion",
        {
            "op": Tag.parse(args.op).value,
            "expectation": mean,
            "center": args.center if args.center is not None else mean.real,
            "dispersion": dispersion(op, f, args.center),
            "state": f.summary(),
        },
    )


def cmd_robertson(args: argparse.Namespace, cfg: RunConfig) -> CommandResult:
    p = params_of(cfg)
    f = state_of(args, cfg)
    reports = []
    ok = True
    for alpha in _pairs(args.pair):
        rep = robertson(alpha, p, f.grid, f, tol=cfg.tol or 1e-8)
        entry: Dict[str, Any] = {"report": rep}
        ok = ok and rep.satisfied
        if args.nullify:
            res = nullifying_translation(alpha, p, f.grid, f)
            entry["nullification"] = res
            ok = ok and abs(res.residual_rhs) <= 1e-6
        reports.append(entry)
    rows = [
        {
            "pair": e["report"].pair,
            "lhs": e["report"].robertson_lhs,
            "rhs": e["report"].robertson_rhs,
            "F": e["report"].functional_value,
        }
        for e in reports
    ]
    return CommandResult("robertson", {"pairs": reports, "state": f.summary()}, ok, rows)


def cmd_minimize(args: argparse.Namespace, cfg: RunConfig) -> CommandResult:
    p = params_of(cfg)
    opts = _opts(args, cfg)
    out = []
    ok = True
    for alpha in _pairs(args.pair):
        res = ground_state(alpha, p, cfg.grid, opts)
        entry: Dict[str, Any] = {
            "ground": res,
            "F_at_ground": functional_F(alpha, p, cfg.grid, res.state),
        }
        if args.probes > 0:
            probe = variational_probe(res, args.probes, args.magnitude, cfg.seed)
            entry["probe"] = probe
            ok = ok and probe.passed
        out.append(entry)
    rows = [{"pair": e["ground"].alpha.value, "nu0": e["ground"].nu0} for e in out]
    return CommandResult("minimize", {"pairs": out}, ok, rows)


def cmd_spectrum(args: argparse.Namespace, cfg: RunConfig) -> CommandResult:
    p = params_of(cfg)
    spec = spectrum_low(PairAlpha.parse(args.pair), p, cfg.grid, args.k, _opts(args, cfg))
    rows = [{"index": j, "nu": e.nu, "residual": e.residual} for j, e in enumerate(spec.entries)]
    return CommandResult("spectrum", spec, rows=rows)


def cmd_hpw(args: argparse.Namespace, cfg: RunConfig) -> CommandResult:
    p = params_of(cfg)
    a_values = parse_floats(args.a_values) or HPW_A_VALUES
    sweep = hpw_sweep(p, a_values, args.exponent, threads=cfg.threads)
    payload: Dict[str, Any] = {"sweep": sweep, "limit": sweep.limit}
    ok = sweep.decreasing and sweep.below_half
    if args.a is not None:
        b = args.b if args.b is not None else args.a**args.exponent
        point = gaussian_closed_forms(p, args.a, b)
        payload["point"] = point
        payload["violates_hpw"] = point.product < 0.5
    return CommandResult("hpw", payload, ok, rows=sweep.table())


def cmd_minlength(args: argparse.Namespace, cfg: RunConfig) -> CommandResult:
    p = params_of(cfg)
    q, pp = default_schedules(args.k_max)
    table = minimal_length_probe(p, q, pp)
    rows = [{"series": "dq1", "a": r["a"], "b": r["b"], "value": r["dq1"]} for r in table.q_rows]
    rows += [{"series": "dp1", "a": r["a"], "b": r["b"], "value": r["dp1"]} for r in table.p_rows]
    return CommandResult("minlength", table, table.q_decreasing and table.p_decreasing, rows)


def cmd_scaling(args: argparse.Namespace, cfg: RunConfig) -> CommandResult:
    f = state_of(args, cfg)
    reports = [scaling_demo(f, args.n, args.m, s) for s in parse_floats(args.s) or [2.0]]
    ok = all(
        abs(r.product_ratio - r.expected_ratio) <= 1e-6 * r.expected_ratio for r in reports
    )
    return CommandResult("scaling", {"reports": reports}, ok, rows=[r.to_dict() for r in reports])


def cmd_entropy(args: argparse.Namespace, cfg: RunConfig) -> CommandResult:
    n, L = args.points, args.line_L
    if args.family == "gaussian":
        f1d = gaussian_1d(n, L, args.sigma, args.center)
    elif args.family == "hermite":
        f1d = normalize_1d(hermite_function(args.order, line_axis(n, L), args.sigma), L)
    else:
        f = state_of(args, cfg)
        f1d = normalize_1d(marginal_amplitude(f, 1), f.grid.L1)
        L = f.grid.L1
    rep = entropic_check(f1d, L, tol=cfg.tol or 1e-4)
    return CommandResult("entropy", rep, rep.satisfied)


def cmd_modnorm(args: argparse.Namespace, cfg: RunConfig) -> CommandResult:
    p = params_of(cfg)
    f = state_of(args, cfg)
    rep = norm_equivalence_report(
        f, p, lattice=StftLattice(args.stride), pairs=_pairs(args.pair), threads=cfg.threads
    )
    constants = {a.value: sandwich_constants(a, p) for a in _pairs(args.pair)}
    rows = [pn.to_dict() for pn in rep.pairs]
    return CommandResult("modnorm", {"report": rep, "constants": constants}, rep.passed, rows)


def cmd_weights(args: argparse.Namespace, cfg: RunConfig) -> CommandResult:
    p = params_of(cfg)
    rep = weight_checks(p, parse_floats(args.R), n_samples=args.samples, seed=cfg.seed)
    ok = all(r.holds for r in rep.decay) and rep.moderate_stable
    return CommandResult("weights", rep, ok, rows=[asdict(r) for r in rep.decay])


def cmd_wdw(args: argparse.Namespace, cfg: RunConfig) -> CommandResult:
    p = params_of(cfg)
    spec = PotentialSpec(PotentialKind(args.kind), p, args.a)
    x0, x1 = parse_range(args.range)
    payload: Dict[str, Any] = {"potential": spec}
    if args.bracket:
        payload["minimum"] = find_minimum(spec, parse_range(args.bracket))
        if args.at_minimum:
            x0 = payload["minimum"].x_min
    ic = parse_floats(args.ic) or [1.0, 0.0]
    if len(ic) != 2:
        raise UsageError(f"--ic takes phi,dphi; got {args.ic!r}")
    sol = solve_zero_energy(spec, x0, x1, (ic[0], ic[1]))
    payload["solution"] = sol
    tol = cfg.tol or 1e-6
    ok = sol.residual <= tol
    if args.tail:
        tail = parse_range(args.tail)
        payload["envelope_exponent"] = envelope_exponent(sol, tail)
        lo, hi = tail
        checkpoints = [lo * (hi / lo) ** (j / 4.0) for j in range(5)] if lo > 0 else [hi]
        payload["tail_l2"] = tail_l2_proxy(sol, checkpoints)
    return CommandResult("wdw", payload, ok, rows=sol.rows() if cfg.outputs.get("csv") else None)


def cmd_probe_coherent(args: argparse.Namespace, cfg: RunConfig) -> CommandResult:
    p = params_of(cfg)
    f = state_of(args, cfg)
    alpha, beta = PairAlpha.parse(args.alpha), PairAlpha.parse(args.beta)
    rep = coherent_state_probe(alpha, beta, p, f.grid, f, opts=_opts(args, cfg))
    # evidence only; nothing is gated
    return CommandResult("probe-coherent", rep)


def cmd_selftest(args: argparse.Namespace, cfg: RunConfig) -> CommandResult:
    only = [s for s in (args.only or "").split(",") if s] or None
    base = Path(args.runs_dir) if args.runs_dir else runs_base_dir()
    rep = run_selftest(cfg.seed, only=only, runs_dir=base)
    rows = [{"check": c.name, "passed": c.passed, "seconds": c.duration} for c in rep.checks]
    return CommandResult("selftest", rep, rep.passed, rows)


# ---------------- parser ----------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncuncertainty",
        description="Uncertainty relations of a non-canonical noncommutative phase-space algebra",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Handler, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        add_common_flags(p)
        p.set_defaults(handler=handler)
        return p

    add("constants", cmd_constants, "derived constants lambda, mu, E, F")

    p = add("commutators", cmd_commutators, "closures and their numerical verification")
    p.add_argument("--states", type=int, default=10)

    p = add("dispersion", cmd_dispersion, "expectation and dispersion of one operator")
    p.add_argument("--op", default="Q1", help="Q1, Q2, P1, P2, X1, X2, Xi1, Xi2 or R")
    p.add_argument("--center", type=float)
    add_state_flags(p)

    p = add("robertson", cmd_robertson, "Robertson inequality and nullifying translation")
    p.add_argument("--pair", default="all")
    p.add_argument("--nullify", action="store_true")
    add_state_flags(p)

    p = add("minimize", cmd_minimize, "ground state of H^(alpha) and the variational probe")
    p.add_argument("--pair", default="q1q2")
    p.add_argument("--probes", type=int, default=0)
    p.add_argument("--magnitude", type=float, default=0.1)
    p.add_argument("--max-iter", dest="max_iter", type=int, default=5000)

    p = add("spectrum", cmd_spectrum, "lowest eigenvalues of H^(alpha)")
    p.add_argument("--pair", default="q1q2")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--max-iter", dest="max_iter", type=int, default=5000)

    p = add("hpw", cmd_hpw, "Gaussian closed forms and the HPW sweep")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--exponent", type=float, default=-1.5, help="b = a^exponent")
    p.add_argument("--a-values", dest="a_values")

    p = add("minlength", cmd_minlength, "dq1 and dp1 along shrinking schedules")
    p.add_argument("--k-max", dest="k_max", type=int, default=6)

    p = add("scaling", cmd_scaling, "dilation scaling of dispersions")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--s", default="2,4", help="comma separated dilation factors")
    add_state_flags(p)

    p = add("entropy", cmd_entropy, "entropic uncertainty on the line")
    p.add_argument("--family", choices=["gaussian", "hermite", "marginal"], default="gaussian")
    p.add_argument("--points", type=int, default=4096)
    p.add_argument("--line-L", dest="line_L", type=float, default=40.0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--center", type=float, default=0.0)
    p.add_argument("--order", type=int, default=1)
    add_state_flags(p)

    p = add("modnorm", cmd_modnorm, "B, alpha and modulation norms with sandwich checks")
    p.add_argument("--pair", default="all")
    p.add_argument("--stride", type=int, default=2)
    add_state_flags(p, default="random")

    p = add("weights", cmd_weights, "moderateness and decay of the weight m")
    p.add_argument("--R", help="comma separated sphere radii")
    p.add_argument("--samples", type=int, default=20000)

    p = add("wdw", cmd_wdw, "reduced Wheeler-De Witt equation")
    p.add_argument("--kind", choices=[k.value for k in PotentialKind], default="noncanonical")
    p.add_argument("--a", type=float, default=0.0, help="c (canonical) or a (non-canonical)")
    p.add_argument("--range", default="0:60")
    p.add_argument("--ic", help="phi,dphi at the left end (default 1,0)")
    p.add_argument("--bracket", help="lo:hi for the potential minimum")
    p.add_argument("--at-minimum", dest="at_minimum", action="store_true")
    p.add_argument("--tail", default="20:60")

    p = add("probe-coherent", cmd_probe_coherent, "commutator of two Hamiltonians on a state")
    p.add_argument("--alpha", default="q1q2")
    p.add_argument("--beta", default="p1p2")
    p.add_argument("--max-iter", dest="max_iter", type=int, default=5000)
    add_state_flags(p, default="random")

    p = add("selftest", cmd_selftest, "run the acceptance checks")
    p.add_argument("--only", help="comma separated check names")
    p.add_argument("--runs-dir", dest="runs_dir")

    return parser


def _emit_error(err: Dict[str, Any]) -> None:
    sys.stdout.write(json.dumps(err, ensure_ascii=False) + "\n")


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as e:
        # --help and --version exit 0; bad usage exits 2 from argparse and becomes 1 here
        return 0 if e.code in (0, None) else 1

    init_logging()
    mdc_clear()
    try:
        cfg, _ = resolve_run_config(args)
        mdc_put("run_id", now_stamp())
        mdc_put("subcommand", cfg.subcommand)
        mdc_put("seed", cfg.seed)
        result = args.handler(args, cfg)
        report = build_report(cfg, result.kind, result.payload)
        report["passed"] = bool(result.passed)
        if args.pretty and not args.out:
            print_pretty(report)
        else:
            write_json(report, args.out)
        if args.csv and result.rows is not None:
            write_csv(result.rows, args.csv)
        if not result.passed:
            raise InvariantViolation(f"{result.kind}: a checked invariant failed")
        return 0
    except InvariantViolation as e:
        # the report with passed=false is already out
        log_error("cli", str(args.command), e)
        return 2
    except NcuError as e:
        log_error("cli", str(args.command), e)
        _emit_error(to_jsonable(e.to_dict()))
        return 1
    except OSError as e:
        # --out / --csv / --state-out targets that cannot be written
        log_error("cli", str(args.command), e)
        _emit_error({"error": "cli.io", "message": str(e)})
        return 1
    finally:
        mdc_clear()


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
