"""Acceptance checks on laptop-sized grids, run in sequence with a rich progress bar."""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from rich.console import Console
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn, TimeElapsedColumn
from rich.table import Table

from ncuncertainty import __version__
from ncuncertainty.algebra.params import derive_constants
from ncuncertainty.algebra.symbols import OperatorSymbol, Tag
from ncuncertainty.core.errors import DegenerateCase, NcuError
from ncuncertainty.core.models import GridSpec
from ncuncertainty.core.utils import to_jsonable
from ncuncertainty.eigensolver.ground import SolverOptions, ground_state
from ncuncertainty.eigensolver.probes import coherent_state_probe, sample_states, variational_probe
from ncuncertainty.infra.logging import log_batch_processing, log_error, log_task_end, log_task_start
from ncuncertainty.modspace.norms import modulation_norm, norm_equivalence_report
from ncuncertainty.modspace.stft import default_window
from ncuncertainty.modspace.weights import weight_checks
from ncuncertainty.operators.assemble import assemble
from ncuncertainty.operators.checks import reconstruct_hw, verify_algebra
from ncuncertainty.services.runs import new_run_dir, runs_base_dir
from ncuncertainty.states.constructors import (
    GaussianSpec,
    gaussian,
    hermite_function,
    hermite_superposition,
    random_smooth,
    seeded_rng,
)
from ncuncertainty.states.measure import dispersion
from ncuncertainty.uncertainty.entropy import (
    entropic_check,
    gaussian_1d,
    line_axis,
    normalize_1d,
)
from ncuncertainty.uncertainty.functionals import (
    commutator_expectation,
    nullifying_translation,
    robertson,
)
from ncuncertainty.uncertainty.gaussian import (
    dp1_closed_form,
    dq1_closed_form,
    hpw_sweep,
    minimal_length_probe,
    optimal_center,
)
from ncuncertainty.uncertainty.pairs import ALL_PAIRS, PairAlpha
from ncuncertainty.uncertainty.scaling import scaling_demo
from ncuncertainty.wdw.ode import envelope_exponent, solve_zero_energy
from ncuncertainty.wdw.potentials import PotentialKind, PotentialSpec, find_minimum

CheckFn = Callable[[int], Tuple[bool, Dict[str, Any]]]

DEFORMED = (0.2, 0.2, 0.1)


@dataclass
class CheckOutcome:
    name: str
    passed: bool
    gating: bool
    duration: float
    details: Dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None


@dataclass
class SelftestReport:
    version: str
    seed: int
    checks: List[CheckOutcome] = field(default_factory=list)
    run_dir: Optional[str] = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.gating)

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def _constants(seed: int) -> Tuple[bool, Dict[str, Any]]:
    worst = 0.0
    rows = []
    for theta, eta, eps in ((0.0, 0.0, 0.0), (0.2, 0.2, 0.1), (0.6, 0.6, 0.1)):
        p = derive_constants(theta, eta, eps)
        d = p.invariant_defects()
        worst = max(worst, max(d.values()))
        rows.append({"theta": theta, "eta": eta, "epsilon": eps, **d})
    return worst <= 1e-12, {"max_defect": worst, "rows": rows}


def _algebra(seed: int) -> Tuple[bool, Dict[str, Any]]:
    grid = GridSpec(128, 128, 12.0, 12.0)
    states = sample_states(grid, 10, seed)
    deformed = verify_algebra(derive_constants(*DEFORMED), grid, states, tol=1e-6)
    exact = verify_algebra(derive_constants(0.2, 0.2, 0.0), grid, states, tol=1e-8)
    rec = reconstruct_hw(derive_constants(*DEFORMED), grid, states[0])
    ok = deformed.passed and exact.passed and rec.max_deviation <= 1e-6
    return ok, {
        "deformed_max_error": deformed.max_error,
        "constant_commutator_max_error": exact.max_error,
        "reconstruction_max_deviation": rec.max_deviation,
    }


def _ground_oracles(seed: int) -> Tuple[bool, Dict[str, Any]]:
    params = derive_constants(0.5, 0.2, 0.0)
    expected = {
        PairAlpha.Q1Q2: params.theta,
        PairAlpha.P1P2: params.eta,
        PairAlpha.Q1P1: 1.0,
        PairAlpha.Q2P2: 1.0,
    }
    opts = SolverOptions(tol=1e-8, seed=seed)
    coarse, fine = GridSpec(128, 128, 12.0, 12.0), GridSpec(256, 256, 12.0, 12.0)
    out: Dict[str, Any] = {}
    ok = True
    for alpha, nu in expected.items():
        a = ground_state(alpha, params, coarse, opts).nu0
        b = ground_state(alpha, params, fine, opts).nu0
        out[alpha.value] = {"expected": nu, "nu0": b, "doubling_gap": abs(a - b)}
        ok = ok and abs(b - nu) <= 1e-3 and abs(a - b) <= 1e-3
    return ok, out


def _variational(seed: int) -> Tuple[bool, Dict[str, Any]]:
    params = derive_constants(*DEFORMED)
    grid = GridSpec(64, 64, 10.0, 10.0)
    out: Dict[str, Any] = {}
    ok = True
    for alpha in ALL_PAIRS:
        res = ground_state(alpha, params, grid, SolverOptions(seed=seed))
        probe = variational_probe(res, 100, 0.1, seed)
        out[alpha.value] = {"nu0": res.nu0, "min_value": probe.min_value, "passed": probe.passed}
        ok = ok and probe.passed
    return ok, out


def _gaussian_forms(seed: int) -> Tuple[bool, Dict[str, Any]]:
    # epsilon large enough that the optimal centre -lambda/2E sits inside the grid
    params = derive_constants(0.2, 0.2, 0.5)
    grid = GridSpec(128, 128, 12.0, 12.0)
    x0 = optimal_center(params)
    f = gaussian(grid, GaussianSpec(1.0, 1.0, x0, 0.0))
    dq = dispersion(assemble(Tag.Q1, params, grid), f)
    dp = dispersion(assemble(Tag.P1, params, grid), f)
    cq, cp = dq1_closed_form(params, 1.0, 1.0), dp1_closed_form(params, 1.0, 1.0)
    rq, rp = abs(dq - cq) / cq, abs(dp - cp) / cp
    return max(rq, rp) <= 1e-6, {
        "center": x0,
        "dq1": dq,
        "dq1_closed": cq,
        "dp1": dp,
        "dp1_closed": cp,
        "max_rel_error": max(rq, rp),
    }


def _hpw(seed: int) -> Tuple[bool, Dict[str, Any]]:
    params = derive_constants(0.6, 0.6, 0.1)
    sweep = hpw_sweep(params, [1e-2, 1e-3, 1e-4, 1e-5, 1e-6])
    last = min(sweep.rows, key=lambda r: r.a)
    near = abs(last.product - sweep.limit) / sweep.limit <= 0.02
    return sweep.decreasing and sweep.below_half and near, {
        "product_at_1e-6": last.product,
        "limit": sweep.limit,
        "decreasing": sweep.decreasing,
    }


def _minlength(seed: int) -> Tuple[bool, Dict[str, Any]]:
    table = minimal_length_probe(derive_constants(*DEFORMED))
    q_last = table.q_rows[-1]["dq1"]
    p_last = table.p_rows[-1]["dp1"]
    ok = table.q_decreasing and table.p_decreasing and q_last <= 1e-3 and p_last <= 1e-3
    return ok, {"dq1_final": q_last, "dp1_final": p_last}


def _scaling(seed: int) -> Tuple[bool, Dict[str, Any]]:
    grid = GridSpec(256, 256, 12.0, 12.0)
    f = gaussian(grid, GaussianSpec(0.25, 0.25))
    worst = 0.0
    for s in (2.0, 4.0):
        for n, m in ((1, 1), (1, 2)):
            rep = scaling_demo(f, n, m, s)
            worst = max(worst, abs(rep.product_ratio - rep.expected_ratio) / rep.expected_ratio)
    return worst <= 1e-6, {"max_rel_error": worst}


def _vanishing_commutator(seed: int) -> Tuple[bool, Dict[str, Any]]:
    params = derive_constants(0.0, 0.0, 0.0)
    grid = GridSpec(128, 128, 12.0, 12.0)
    f = gaussian(grid, GaussianSpec(2.0, 2.0))
    x2 = assemble(OperatorSymbol.base(Tag.X1) ** 2, params, grid)
    k2 = assemble(OperatorSymbol.base(Tag.XI1) ** 2, params, grid)
    value = abs(commutator_expectation(x2, k2, f))
    return value <= 1e-8, {"abs_expectation": value}


def _entropy(seed: int) -> Tuple[bool, Dict[str, Any]]:
    n, L = 4096, 40.0
    g = entropic_check(gaussian_1d(n, L, 1.0), L)
    x = line_axis(n, L)
    sums = []
    for order in range(1, 11):
        rep = entropic_check(normalize_1d(hermite_function(order, x), L), L)
        sums.append(rep.sum)
    gauss_ok = abs(g.sum - g.bound) <= 1e-4
    return gauss_ok and min(sums) >= g.bound - 1e-4, {
        "gaussian_sum": g.sum,
        "bound": g.bound,
        "min_non_gaussian_sum": min(sums),
    }


def _robertson(seed: int) -> Tuple[bool, Dict[str, Any]]:
    params = derive_constants(*DEFORMED)
    grid = GridSpec(128, 128, 12.0, 12.0)
    states = sample_states(grid, 6, seed)
    ok = True
    gaps = {}
    for alpha in ALL_PAIRS:
        worst = math.inf
        for f in states:
            rep = robertson(alpha, params, grid, f)
            worst = min(worst, rep.robertson_lhs - rep.robertson_rhs)
            ok = ok and rep.satisfied
        gaps[alpha.value] = worst
    f0 = gaussian(grid, GaussianSpec(2.0, 2.0))
    nullified = {}
    for alpha in ALL_PAIRS:
        res = nullifying_translation(alpha, params, grid, f0)
        nullified[alpha.value] = res.residual_rhs
        ok = ok and abs(res.residual_rhs) <= 1e-6
    try:
        nullifying_translation(PairAlpha.Q1Q2, derive_constants(0.2, 0.2, 0.0), grid, f0)
        degenerate = False
    except DegenerateCase:
        degenerate = True
    return ok and degenerate, {
        "min_gap": gaps,
        "nullified_rhs": nullified,
        "degenerate_at_zero_epsilon": degenerate,
    }


def _modulation(seed: int) -> Tuple[bool, Dict[str, Any]]:
    params = derive_constants(*DEFORMED)
    grid = GridSpec(64, 64, 8.0, 8.0)
    rng = seeded_rng(seed)
    g = default_window(grid)
    moyal = 0.0
    for j in range(20):
        f = random_smooth(grid, rng) if j % 2 == 0 else hermite_superposition(grid, rng)
        err = abs(modulation_norm(f, g) - f.norm() * g.norm()) / (f.norm() * g.norm())
        moyal = max(moyal, err)
    sandwich_ok = True
    for j in range(20):
        state = (
            random_smooth(grid, rng, real=True)
            if j % 2 == 0
            else hermite_superposition(grid, rng, real=True)
        )
        rep = norm_equivalence_report(state, params, g=g)
        sandwich_ok = sandwich_ok and rep.passed
    weights = weight_checks(params, seed=seed)
    decay_ok = all(r.holds for r in weights.decay)
    return moyal <= 1e-6 and sandwich_ok and decay_ok, {
        "moyal_rel_error": moyal,
        "sandwich_passed": sandwich_ok,
        "decay_holds": decay_ok,
    }


def _wdw(seed: int) -> Tuple[bool, Dict[str, Any]]:
    params = derive_constants(*DEFORMED)
    canonical = PotentialSpec(PotentialKind.CANONICAL, params, 0.0)
    noncanonical = PotentialSpec(PotentialKind.NONCANONICAL, params, 0.0)
    p_can = envelope_exponent(solve_zero_energy(canonical, 0.0, 60.0), (20.0, 60.0))
    nc_sol = solve_zero_energy(noncanonical, 10.0, 60.0)
    p_nc = envelope_exponent(nc_sol, (20.0, 60.0))
    m_can = find_minimum(PotentialSpec(PotentialKind.CANONICAL, params, 1.0), (0.5, 4.0))
    m_nc = find_minimum(PotentialSpec(PotentialKind.NONCANONICAL, params, -1.0), (0.5, 2.5))
    ok = (
        abs(p_nc + 1.0) <= 0.1
        and abs(p_can + 0.5) <= 0.1
        and m_can.curvature > 0.0
        and m_nc.curvature > 0.0
        and nc_sol.residual <= 1e-6
    )
    return ok, {
        "exponent_noncanonical": p_nc,
        "exponent_canonical": p_can,
        "minimum_canonical": m_can.to_dict(),
        "minimum_noncanonical": m_nc.to_dict(),
        "residual": nc_sol.residual,
    }


def _coherent(seed: int) -> Tuple[bool, Dict[str, Any]]:
    params = derive_constants(*DEFORMED)
    grid = GridSpec(64, 64, 10.0, 10.0)
    f = random_smooth(grid, seeded_rng(seed))
    rep = coherent_state_probe(PairAlpha.Q1Q2, PairAlpha.P1P2, params, grid, f)
    return rep.commutator_norm > 0.0, rep.to_dict()


CHECKS: List[Tuple[str, CheckFn, bool]] = [
    ("constants", _constants, True),
    ("algebra", _algebra, True),
    ("ground_state_oracles", _ground_oracles, True),
    ("variational", _variational, True),
    ("gaussian_closed_forms", _gaussian_forms, True),
    ("hpw_violation", _hpw, True),
    ("no_minimal_length", _minlength, True),
    ("scaling_laws", _scaling, True),
    ("vanishing_commutator", _vanishing_commutator, True),
    ("entropic", _entropy, True),
    ("robertson_nullification", _robertson, True),
    ("modulation", _modulation, True),
    ("wdw_contrast", _wdw, True),
    ("coherent_states", _coherent, False),
]


def run_selftest(
    seed: int = 0,
    *,
    only: Optional[List[str]] = None,
    runs_dir: Optional[Path] = None,
    console: Optional[Console] = None,
) -> SelftestReport:
    """Run the checks, show progress and a summary on stderr, save runs/<stamp>/selftest.json."""
    console = console or Console(stderr=True, highlight=False)
    selected = [c for c in CHECKS if only is None or c[0] in only]
    report = SelftestReport(version=__version__, seed=seed)
    log_task_start("services", "selftest", {"checks": [c[0] for c in selected], "seed": seed})
    t_all = time.perf_counter()
    with Progress(
        SpinnerColumn(),
        TextColumn("[bold]check[/]: {task.fields[name]}", justify="left"),
        BarColumn(),
        TextColumn("{task.completed}/{task.total}"),
        TimeElapsedColumn(),
        console=console,
        transient=False,
    ) as progress:
        task = progress.add_task("selftest", total=len(selected), name="starting")
        for name, fn, gating in selected:
            progress.update(task, name=name)
            t0 = time.perf_counter()
            try:
                passed, details = fn(seed)
                outcome = CheckOutcome(name, bool(passed), gating, 0.0, to_jsonable(details))
            except (NcuError, ArithmeticError, ValueError, np.linalg.LinAlgError) as e:
                log_error("services", "selftest", e, context=name)
                outcome = CheckOutcome(name, False, gating, 0.0, error=f"{type(e).__name__}: {e}")
            outcome.duration = time.perf_counter() - t0
            report.checks.append(outcome)
            progress.advance(task)

    table = Table(title=f"selftest {__version__}")
    table.add_column("check")
    table.add_column("result")
    table.add_column("seconds", justify="right")
    for c in report.checks:
        mark = "[green]pass[/]" if c.passed else ("[red]FAIL[/]" if c.gating else "[yellow]note[/]")
        table.add_row(c.name, mark, f"{c.duration:.2f}")
    console.print(table)

    run_dir = new_run_dir(runs_dir or runs_base_dir())
    report.run_dir = str(run_dir)
    (run_dir / "selftest.json").write_text(
        json.dumps(to_jsonable(report), ensure_ascii=False, indent=2), encoding="utf-8"
    )
    failed = sum(1 for c in report.checks if not c.passed)
    log_batch_processing(
        "services",
        "selftest",
        "run_selftest",
        len(report.checks),
        len(report.checks) - failed,
        failed,
        time.perf_counter() - t_all,
        "success" if report.passed else "failed",
    )
    log_task_end("services", "selftest", report.passed, {"run_dir": str(run_dir)})
    return report


__all__ = ["run_selftest", "SelftestReport", "CheckOutcome", "CHECKS"]
