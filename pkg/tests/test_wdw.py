from __future__ import annotations

import math

import numpy as np
import pytest

from ncuncertainty.algebra.params import derive_constants
from ncuncertainty.core.errors import GridMismatch, NoBracket, StepFailure, TooFewExtrema
from ncuncertainty.wdw.ode import (
    LEFT_CLAMP_V,
    _left_clamp,
    envelope_exponent,
    solve_zero_energy,
    tail_l2_proxy,
)
from ncuncertainty.wdw.potentials import (
    EXP_CLAMP,
    PotentialKind,
    PotentialSpec,
    exponent_clamped,
    find_minimum,
    potential_eval,
)
from ncuncertainty.wdw.separated import (
    assemble_separated,
    expected_phase_gradient,
    gaussian_profile,
    phase_gradient_x1,
)

SQRT3 = math.sqrt(3.0)


@pytest.fixture(scope="module")
def params():
    return derive_constants(0.2, 0.2, 0.1)


@pytest.fixture(scope="module")
def canonical_run(params):
    spec = PotentialSpec(PotentialKind.CANONICAL, params, 0.0)
    return solve_zero_energy(spec, 0.0, 60.0)


@pytest.fixture(scope="module")
def noncanonical_run(params):
    spec = PotentialSpec(PotentialKind.NONCANONICAL, params, 0.0)
    return solve_zero_energy(spec, 10.0, 40.0)


# potentials


def test_canonical_potential_value(params):
    spec = PotentialSpec(PotentialKind.CANONICAL, params, 1.0)
    x = 1.3
    expected = 48.0 * math.exp(-2.0 * SQRT3 * x) - (params.eta * x - 1.0) ** 2
    assert spec(x) == pytest.approx(expected, rel=1e-14)
    assert potential_eval(spec, x) == pytest.approx(expected, rel=1e-14)


def test_noncanonical_potential_value(params):
    a = -1.0
    spec = PotentialSpec(PotentialKind.NONCANONICAL, params, a)
    x = 1.5
    mu, lam = params.mu, params.lambda_
    g = -2.0 * SQRT3 * x - 2.0 * SQRT3 * mu**2 * params.E * x**2 + SQRT3 * params.theta * a / (mu * lam)
    poly = params.F * mu**2 * x**2 + params.eta * x - a
    assert spec(x) == pytest.approx(48.0 * math.exp(g) - poly**2, rel=1e-12)


@pytest.mark.parametrize("kind", [PotentialKind.CANONICAL, PotentialKind.NONCANONICAL])
def test_derivatives_match_finite_differences(params, kind):
    spec = PotentialSpec(kind, params, -0.5)
    xs = np.linspace(0.5, 5.0, 7)
    h = 1e-5
    fd1 = (spec(xs + h) - spec(xs - h)) / (2.0 * h)
    fd2 = (spec(xs + h) - 2.0 * spec(xs) + spec(xs - h)) / h**2
    assert np.allclose(spec.derivative(xs), fd1, rtol=1e-6, atol=1e-7)
    assert np.allclose(spec.second_derivative(xs), fd2, rtol=1e-3, atol=1e-3)


def test_constant_potential(params):
    spec = PotentialSpec(PotentialKind.CONSTANT, params, -1.0)
    assert spec(3.0) == -1.0
    assert spec.derivative(3.0) == 0.0
    with pytest.raises(NoBracket):
        find_minimum(spec, (0.0, 1.0))


def test_exponent_is_clamped(params):
    spec = PotentialSpec(PotentialKind.CANONICAL, params, 0.0)
    assert exponent_clamped(spec, -300.0)
    assert not exponent_clamped(spec, 1.0)
    assert math.isfinite(potential_eval(spec, -300.0))
    assert potential_eval(spec, -300.0) == pytest.approx(48.0 * math.exp(EXP_CLAMP) - 0.0, rel=1e-6)


def test_canonical_minimum(params):
    spec = PotentialSpec(PotentialKind.CANONICAL, params, 1.0)
    m = find_minimum(spec, (0.5, 4.0))
    assert m.x_min == pytest.approx(1.9, abs=0.05)
    assert m.curvature > 0.0
    assert abs(spec.derivative(m.x_min)) <= 1e-10


def test_noncanonical_minimum(params):
    spec = PotentialSpec(PotentialKind.NONCANONICAL, params, -1.0)
    m = find_minimum(spec, (0.5, 2.5))
    assert 1.3 < m.x_min < 1.7
    assert m.curvature > 0.0
    assert m.V_min == pytest.approx(spec(m.x_min))


@pytest.mark.parametrize(
    "kind, bracket",
    [(PotentialKind.CANONICAL, (0.5, 4.0)), (PotentialKind.NONCANONICAL, (0.5, 2.5))],
)
def test_no_minimum_without_shift(params, kind, bracket):
    with pytest.raises(NoBracket):
        find_minimum(PotentialSpec(kind, params, 0.0), bracket)


def test_empty_bracket(params):
    with pytest.raises(NoBracket):
        find_minimum(PotentialSpec(PotentialKind.CANONICAL, params, 1.0), (2.0, 1.0))


# zero-energy integration


def test_free_solution_is_linear(params):
    spec = PotentialSpec(PotentialKind.CONSTANT, params, 0.0)
    sol = solve_zero_energy(spec, 0.0, 10.0, ic=(0.0, 1.0))
    assert np.allclose(sol.phi, sol.xs, atol=1e-10)
    assert sol.extrema_x.size == 0
    with pytest.raises(TooFewExtrema):
        envelope_exponent(sol, (1.0, 10.0))


def test_decaying_exponential(params):
    spec = PotentialSpec(PotentialKind.CONSTANT, params, 1.0)
    sol = solve_zero_energy(spec, 0.0, 5.0, ic=(1.0, -1.0))
    xs = np.linspace(0.0, 5.0, 51)
    assert np.max(np.abs(sol.dense(xs)[0] - np.exp(-xs))) <= 1e-8


def test_oscillator_has_flat_envelope(params):
    spec = PotentialSpec(PotentialKind.CONSTANT, params, -1.0)
    sol = solve_zero_energy(spec, 0.0, 60.0)
    assert envelope_exponent(sol, (20.0, 60.0)) == pytest.approx(0.0, abs=1e-3)
    assert np.allclose(np.diff(sol.extrema_x), math.pi, atol=1e-6)
    with pytest.raises(TooFewExtrema):
        envelope_exponent(sol, (-1.0, 60.0))


def test_canonical_envelope_decays_like_inverse_root(canonical_run):
    p = envelope_exponent(canonical_run, (20.0, 60.0))
    assert p == pytest.approx(-0.5, abs=0.1)
    assert canonical_run.residual <= 1e-6


def test_noncanonical_envelope_decays_like_inverse(noncanonical_run):
    p = envelope_exponent(noncanonical_run, (20.0, 40.0))
    assert p == pytest.approx(-1.0, abs=0.1)


def test_steps_shrink_as_oscillations_speed_up(canonical_run):
    assert canonical_run.median_step(20.0, 30.0) > canonical_run.median_step(40.0, 60.0)
    assert canonical_run.steps.size == canonical_run.xs.size - 1


def test_tail_proxies_separate_the_two_cases(canonical_run, noncanonical_run):
    can = tail_l2_proxy(canonical_run, [15.0, 30.0, 60.0])
    assert can.increments[1] / can.increments[0] == pytest.approx(1.0, abs=0.2)
    non = tail_l2_proxy(noncanonical_run, [10.0, 20.0, 40.0])
    assert non.converging
    assert non.increments[1] / non.increments[0] == pytest.approx(0.5, abs=0.1)


def test_solution_export(canonical_run):
    rows = canonical_run.rows()
    assert set(rows[0]) == {"x", "phi", "V"}
    d = canonical_run.to_dict()
    assert d["method"]["integrator"] == "DOP853"
    assert d["n_extrema"] == canonical_run.extrema_x.size


def test_empty_range_fails(params):
    spec = PotentialSpec(PotentialKind.CANONICAL, params, 0.0)
    with pytest.raises(StepFailure) as exc:
        solve_zero_energy(spec, 5.0, 5.0)
    assert exc.value.details["last_good_x"] == 5.0


def test_wall_moves_the_start(params):
    spec = PotentialSpec(PotentialKind.CANONICAL, params, 0.0)
    with pytest.raises(StepFailure):
        solve_zero_energy(spec, -20.0, -10.0)
    start = _left_clamp(spec, -10.0, 5.0)
    assert start > -10.0
    assert spec(start) == pytest.approx(LEFT_CLAMP_V, rel=1e-6)
    assert _left_clamp(spec, 1.0, 5.0) == 1.0


# separated solutions


def test_separated_phase_gradient(params, small_grid):
    a = 0.7
    psi = assemble_separated(params, a, gaussian_profile(small_grid), small_grid)
    grad = phase_gradient_x1(psi)
    expected = expected_phase_gradient(params, a, small_grid.axis(2))
    assert grad.shape == (small_grid.n1 - 2, small_grid.n2)
    assert np.allclose(grad, expected[None, :], atol=1e-10)
    assert psi.meta["family"] == "separated"


def test_separated_profile_must_match_axis(params, small_grid):
    with pytest.raises(GridMismatch) as exc:
        assemble_separated(params, 0.0, np.ones(small_grid.n2 + 1), small_grid)
    assert exc.value.code == "wdw.grid_mismatch"


def test_gaussian_profile_is_normalized(small_grid):
    r = gaussian_profile(small_grid)
    assert small_grid.h2 * float(np.sum(r**2)) == pytest.approx(1.0, abs=1e-10)
