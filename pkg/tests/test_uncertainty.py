from __future__ import annotations

import math

import numpy as np
import pytest

from ncuncertainty.algebra.params import derive_constants
from ncuncertainty.algebra.symbols import OperatorSymbol, Tag
from ncuncertainty.core.errors import DegenerateCase, DomainError, NotNormalized, UnsupportedSymbol
from ncuncertainty.core.models import GridSpec
from ncuncertainty.eigensolver.probes import sample_states
from ncuncertainty.operators.assemble import assemble
from ncuncertainty.states.constructors import (
    GaussianSpec,
    gaussian,
    hermite_function,
    random_smooth,
    seeded_rng,
)
from ncuncertainty.states.measure import dispersion
from ncuncertainty.uncertainty.entropy import (
    ENTROPY_BOUND,
    entropic_check,
    gaussian_1d,
    line_axis,
    marginal_amplitude,
    normalize_1d,
)
from ncuncertainty.uncertainty.functionals import (
    commutator_expectation,
    functional_F,
    nullifying_translation,
    robertson,
    robertson_general,
    scale_infimum,
    scale_minimizer,
    target_r_expectation,
)
from ncuncertainty.uncertainty.gaussian import (
    default_schedules,
    dp1_closed_form,
    dq1_closed_form,
    gaussian_closed_forms,
    gaussian_moments,
    hpw_limit,
    hpw_sweep,
    minimal_length_probe,
    optimal_center,
    product_closed_form,
)
from ncuncertainty.uncertainty.pairs import ALL_PAIRS, PairAlpha
from ncuncertainty.uncertainty.scaling import scaling_demo


@pytest.mark.parametrize("alpha", ALL_PAIRS)
def test_robertson_holds_on_random_states(alpha, deformed, grid):
    for f in sample_states(grid, 3, seed=21):
        report = robertson(alpha, deformed, grid, f)
        assert report.satisfied, report
        assert report.r_expectation is not None
        assert report.functional_value > 0.0


def test_robertson_off_centre_dispersions_are_larger(deformed, grid):
    f = sample_states(grid, 1, seed=4)[0]
    best = robertson(PairAlpha.Q1P1, deformed, grid, f)
    shifted = robertson(PairAlpha.Q1P1, deformed, grid, f, a=best.centers[0] + 0.3, b=0.0)
    assert shifted.robertson_lhs >= best.robertson_lhs
    assert shifted.centers[0] == pytest.approx(best.centers[0] + 0.3)


def test_robertson_without_epsilon_has_no_r(canonical, grid):
    f = sample_states(grid, 1, seed=2)[0]
    report = robertson(PairAlpha.Q1Q2, canonical, grid, f)
    assert report.r_expectation is None
    assert report.robertson_rhs == pytest.approx(canonical.theta / 2.0, rel=1e-10)


def test_general_robertson_for_heisenberg_pair(undeformed, grid):
    f = gaussian(grid, GaussianSpec(2.0, 2.0))
    x = assemble(Tag.X1, undeformed, grid)
    k = assemble(Tag.XI1, undeformed, grid)
    report = robertson_general(x, k, f)
    # the Gaussian saturates |[x, xi]|/2 = 1/2
    assert report.robertson_rhs == pytest.approx(0.5, abs=1e-10)
    assert report.robertson_lhs == pytest.approx(0.5, abs=1e-10)


def test_functional_needs_normalized_state(deformed, grid):
    f = random_smooth(grid, seeded_rng(0))
    with pytest.raises(NotNormalized):
        functional_F(PairAlpha.P1P2, deformed, grid, f.with_values(3.0 * f.values))


def test_target_r_values(deformed):
    s = deformed.s
    assert target_r_expectation(PairAlpha.Q1Q2, deformed) == pytest.approx(-1.0 / deformed.theta)
    assert target_r_expectation(PairAlpha.P1P2, deformed) == pytest.approx(
        -deformed.eta / (1.0 + s) ** 2
    )
    assert target_r_expectation(PairAlpha.Q2P2, deformed) == pytest.approx(
        -1.0 / (deformed.theta * (1.0 + s))
    )


@pytest.mark.parametrize("alpha", ALL_PAIRS)
def test_nullifying_translation_kills_the_bound(alpha, deformed, grid):
    f0 = gaussian(grid, GaussianSpec(2.0, 2.0))
    result = nullifying_translation(alpha, deformed, grid, f0)
    assert abs(result.residual_rhs) <= 1e-6
    assert result.achieved_r == pytest.approx(result.target_r, abs=1e-6)
    assert result.state.grid.same_spacing(grid)
    assert result.report.satisfied


def test_nullification_is_degenerate_without_epsilon(canonical, grid):
    f0 = gaussian(grid, GaussianSpec(2.0, 2.0))
    with pytest.raises(DegenerateCase):
        nullifying_translation(PairAlpha.Q1Q2, canonical, grid, f0)


def test_nullification_is_degenerate_without_theta(grid):
    params = derive_constants(0.0, 0.3, 0.1)
    with pytest.raises(DegenerateCase):
        target_r_expectation(PairAlpha.Q1Q2, params)


def test_scale_infimum():
    assert scale_infimum(2.0, 8.0) == pytest.approx(8.0)
    s = scale_minimizer(2.0, 8.0)
    assert s**2 * 2.0 + 8.0 / s**2 == pytest.approx(8.0)
    assert scale_infimum(0.0, 5.0) == 0.0
    with pytest.raises(DomainError):
        scale_minimizer(0.0, 5.0)
    with pytest.raises(DomainError):
        scale_infimum(-1.0, 1.0)


def test_pair_parse_rejects_unknown():
    with pytest.raises(UnsupportedSymbol):
        PairAlpha.parse("q1q1")


# Gaussian closed forms


def test_gaussian_dispersions_match_numerics(grid):
    params = derive_constants(0.2, 0.2, 0.5)
    x0 = optimal_center(params)
    f = gaussian(grid, GaussianSpec(1.0, 1.0, x0, 0.0))
    dq = dispersion(assemble(Tag.Q1, params, grid), f)
    dp = dispersion(assemble(Tag.P1, params, grid), f)
    assert dq == pytest.approx(dq1_closed_form(params, 1.0, 1.0), rel=1e-6)
    assert dp == pytest.approx(dp1_closed_form(params, 1.0, 1.0), rel=1e-6)


def test_off_centre_dispersion_and_moments(deformed, grid):
    spec = GaussianSpec(1.5, 2.0, 0.5, -0.25)
    f = gaussian(grid, spec)
    dq = dispersion(assemble(Tag.Q1, deformed, grid), f)
    assert dq == pytest.approx(dq1_closed_form(deformed, 1.5, 2.0, 0.5), rel=1e-8)
    moments = gaussian_moments(deformed, spec)
    q1 = assemble(Tag.Q1, deformed, grid)(f).inner(f).real
    assert moments["q1"] == pytest.approx(q1, rel=1e-8)
    assert moments["R"] == pytest.approx(deformed.r_multiplier * 0.5)


def test_product_expansion_agrees(deformed):
    for a, b in [(1.0, 1.0), (1e-3, 1e4), (10.0, 0.1)]:
        forms = gaussian_closed_forms(deformed, a, b)
        assert forms.product == pytest.approx(forms.product_expanded, rel=1e-12)
        assert forms.product == pytest.approx(product_closed_form(deformed, a, b), rel=1e-12)


def test_hpw_limit_values():
    params = derive_constants(0.6, 0.6, 0.1)
    assert hpw_limit(params) == pytest.approx(0.05)
    xi = params.xi
    assert hpw_limit(params) == pytest.approx(xi / (4.0 * (1.0 + math.sqrt(1.0 - xi))))


def test_hpw_sweep_violates_half():
    params = derive_constants(0.6, 0.6, 0.1)
    sweep = hpw_sweep(params, [1e-2, 1e-3, 1e-4, 1e-5, 1e-6], threads=2)
    assert sweep.decreasing
    assert sweep.below_half
    last = sweep.rows[-1]
    assert last.a == pytest.approx(1e-6)
    assert last.product == pytest.approx(0.0509, abs=5e-4)
    assert last.product < 0.5
    assert [r["a"] for r in sweep.table()] == sorted([r.a for r in sweep.rows], reverse=True)


def test_gaussian_example_needs_nonzero_e(canonical):
    with pytest.raises(DomainError):
        optimal_center(canonical)
    with pytest.raises(DomainError):
        hpw_sweep(canonical, [1e-2])
    with pytest.raises(DomainError):
        dq1_closed_form(canonical, -1.0, 1.0, 0.0)


def test_no_minimal_length(deformed):
    table = minimal_length_probe(deformed)
    assert table.q_decreasing and table.p_decreasing
    assert table.q_rows[-1]["dq1"] <= 1e-3
    assert table.p_rows[-1]["dp1"] <= 1e-3
    assert table.p_rows[-1]["dp1"] == pytest.approx(0.996e-3, abs=2e-6)


def test_default_schedules_shape():
    q, p = default_schedules(3)
    assert [v for row in q for v in row] == pytest.approx([0.1, 10.0, 0.01, 100.0, 0.001, 1000.0])
    assert all(a * b == pytest.approx(1.0) for a, b in p)


# scaling


@pytest.mark.parametrize("n, m", [(1, 1), (1, 2), (2, 1)])
def test_scaling_laws(n, m):
    grid = GridSpec(256, 256, 12.0, 12.0)
    f = gaussian(grid, GaussianSpec(0.25, 0.25))
    report = scaling_demo(f, n, m, 2.0)
    assert report.product_ratio == pytest.approx(report.expected_ratio, rel=1e-6)
    if n == m:
        assert report.dA_scaled != pytest.approx(report.dA)


def test_scaling_rejects_bad_powers(grid):
    f = gaussian(grid, GaussianSpec(1.0, 1.0))
    with pytest.raises(DomainError):
        scaling_demo(f, 0, 1, 2.0)


def test_vanishing_commutator_on_real_gaussian(undeformed, grid):
    f = gaussian(grid, GaussianSpec(2.0, 2.0))
    x2 = assemble(OperatorSymbol.base(Tag.X1) ** 2, undeformed, grid)
    k2 = assemble(OperatorSymbol.base(Tag.XI1) ** 2, undeformed, grid)
    assert abs(commutator_expectation(x2, k2, f)) <= 1e-8
    # yet the Robertson product is strictly positive
    assert robertson_general(x2, k2, f).robertson_lhs > 0.1


# entropy


def test_entropy_bound_is_attained_by_gaussians():
    for sigma in (0.5, 1.0, 2.0):
        report = entropic_check(gaussian_1d(4096, 40.0, sigma), 40.0)
        assert report.sum == pytest.approx(ENTROPY_BOUND, abs=1e-4)
        assert report.bound == pytest.approx(2.1447299, abs=1e-7)


def test_entropy_of_hermite_functions_exceeds_bound():
    n, L = 4096, 40.0
    x = line_axis(n, L)
    for order in range(1, 11):
        report = entropic_check(normalize_1d(hermite_function(order, x), L), L)
        assert report.satisfied
        assert report.sum > ENTROPY_BOUND + 1e-3


def test_entropy_requires_normalization():
    with pytest.raises(NotNormalized):
        entropic_check(2.0 * gaussian_1d(1024, 20.0), 20.0)


def test_marginal_of_product_gaussian(grid):
    f = gaussian(grid, GaussianSpec(2.0, 2.0))
    amp = marginal_amplitude(f)
    report = entropic_check(amp, grid.L1)
    assert report.sum == pytest.approx(ENTROPY_BOUND, abs=1e-4)
    assert np.all(amp >= 0.0)


def test_gaussian_closed_forms_against_exact_integrals():
    sp = pytest.importorskip("sympy")
    theta, eta, eps = sp.Rational(3, 5), sp.Rational(3, 5), sp.Rational(1, 10)
    s = sp.sqrt(1 - theta * eta)
    lam = sp.sqrt((1 + s) / 2)
    mu = (1 + s) / (2 * lam)
    F = -(lam / mu) * eps * s * (1 + s)
    E = -theta * F / (1 + s)
    params = derive_constants(0.6, 0.6, 0.1)

    u, y = sp.symbols("u y", real=True)
    L, M, Ec, A, B, x0 = sp.symbols("L M E A B x0", real=True)
    coefficients = {L: lam, M: mu, Ec: E, A: theta / (2 * lam), B: eta / (2 * mu)}

    for a, b in [(sp.Rational(1, 3), sp.Rational(5, 2)), (sp.Rational(1, 100), sp.Integer(1000))]:
        weight = sp.exp(-2 * u**2 / a) * sp.exp(-2 * y**2 / b)
        mass = sp.integrate(weight, (u, -sp.oo, sp.oo), (y, -sp.oo, sp.oo))

        def average(poly):
            expr = sp.expand(poly) * weight
            return sp.integrate(expr, (u, -sp.oo, sp.oo), (y, -sp.oo, sp.oo)) / mass

        def variance(poly):
            return average(poly * sp.conjugate(poly)) - average(poly) ** 2

        # q1 and p1 applied to exp(-u^2/a - y^2/b), u = x1 - x0, divided by the Gaussian
        x1 = u + x0
        q1_poly = L * x1 + Ec * x1**2 - 2 * sp.I * A * y / b
        p1_poly = 2 * sp.I * M * u / a + B * y
        var_q = variance(q1_poly).subs(coefficients)
        var_p = variance(p1_poly).subs(coefficients)

        dp1 = sp.sqrt(var_p).evalf(30)
        assert dp1_closed_form(params, float(a), float(b)) == pytest.approx(float(dp1), rel=1e-12)
        for centre in (sp.Rational(-3, 2), sp.Rational(1, 4)):
            dq1 = sp.sqrt(var_q.subs(x0, centre)).evalf(30)
            got = dq1_closed_form(params, float(a), float(b), float(centre))
            assert got == pytest.approx(float(dq1), rel=1e-12)
        optimal = sp.sqrt(var_q.subs(x0, -lam / (2 * E))).evalf(30)
        assert dq1_closed_form(params, float(a), float(b)) == pytest.approx(float(optimal), rel=1e-12)
        product = product_closed_form(params, float(a), float(b))
        assert product == pytest.approx(float(optimal * dp1), rel=1e-12)
