from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncuncertainty.algebra.maps import (
    commutator_closure,
    expand_r,
    forward_map,
    inverse_map,
    r_squared_coefficient,
    r_symbol,
)
from ncuncertainty.algebra.params import AlgebraParams, derive_constants
from ncuncertainty.algebra.symbols import OperatorSymbol, Tag, base, commutator
from ncuncertainty.core.errors import DomainError, NcuError, UnsupportedSymbol
from ncuncertainty.uncertainty.pairs import ALL_PAIRS, PairAlpha


def test_reference_constants(deformed):
    assert deformed.xi == pytest.approx(0.04)
    assert deformed.lambda_ == pytest.approx(0.994936, abs=1e-6)
    assert deformed.mu == pytest.approx(deformed.lambda_, rel=1e-15)
    assert deformed.E == pytest.approx(0.019596, abs=1e-6)
    assert deformed.F == pytest.approx(-0.193979, abs=1e-6)


def test_undeformed_constants(undeformed):
    assert (undeformed.lambda_, undeformed.mu, undeformed.E, undeformed.F) == (1.0, 1.0, 0.0, 0.0)
    assert undeformed.is_undeformed and undeformed.is_canonical


def test_split_keeps_product():
    p = derive_constants(0.3, 0.4, 0.2, split=2.5)
    assert p.lambda_ / p.mu == pytest.approx(2.5)
    assert 2.0 * p.lambda_ * p.mu == pytest.approx(1.0 + p.s)
    assert max(p.invariant_defects().values()) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(
    theta=st.floats(0.0, 0.99),
    eta=st.floats(0.0, 0.99),
    eps=st.floats(0.0, 5.0),
    split=st.floats(0.1, 10.0),
)
def test_invariants_hold_everywhere(theta, eta, eps, split):
    p = derive_constants(theta, eta, eps, split)
    assert max(p.invariant_defects().values()) <= 1e-12


@pytest.mark.parametrize(
    "theta, eta, eps, split",
    [
        (-0.1, 0.2, 0.1, None),
        (0.2, float("nan"), 0.1, None),
        (0.2, 0.2, float("inf"), None),
        (2.0, 0.5, 0.1, None),
        (0.2, 0.2, 0.1, 0.0),
        (0.2, 0.2, 0.1, -1.0),
    ],
)
def test_domain_errors(theta, eta, eps, split):
    with pytest.raises(DomainError) as exc:
        derive_constants(theta, eta, eps, split)
    assert exc.value.code == "algebra.domain"


def test_from_mapping_round_trip(deformed):
    again = AlgebraParams.from_mapping({"theta": 0.2, "eta": 0.2, "epsilon": 0.1})
    assert again == deformed


def test_closed_form_constants_against_sympy():
    sympy = pytest.importorskip("sympy")
    theta, eta, eps = sympy.Rational(3, 10), sympy.Rational(1, 5), sympy.Rational(1, 10)
    s = sympy.sqrt(1 - theta * eta)
    lam = sympy.sqrt((1 + s) / 2)
    mu = (1 + s) / (2 * lam)
    F = -(lam / mu) * eps * s * (1 + s)
    E = -theta * F / (1 + s)
    p = derive_constants(0.3, 0.2, 0.1)
    assert p.lambda_ == pytest.approx(float(lam), rel=1e-14)
    assert p.mu == pytest.approx(float(mu), rel=1e-14)
    assert p.F == pytest.approx(float(F), rel=1e-14)
    assert p.E == pytest.approx(float(E), rel=1e-14)


# symbols


def test_tag_parse_accepts_names_and_values():
    assert Tag.parse("xi1") is Tag.XI1
    assert Tag.parse("Identity") is Tag.I
    assert Tag.parse(" q2 ") is Tag.Q2
    with pytest.raises(UnsupportedSymbol):
        Tag.parse("Q3")


def test_products_are_not_reordered():
    x, k = base(Tag.X1), base(Tag.XI1)
    c = commutator(x, k)
    assert c.coefficient(Tag.X1, Tag.XI1) == 1
    assert c.coefficient(Tag.XI1, Tag.X1) == -1
    assert commutator(x, x).is_zero


def test_symbol_arithmetic_and_adjoint():
    q1, p2 = base(Tag.Q1), base(Tag.P2)
    s = (2.0 + 1j) * (q1 * p2) - 3.0 * q1
    adj = s.adjoint()
    assert adj.coefficient(Tag.P2, Tag.Q1) == pytest.approx(2.0 - 1j)
    assert adj.coefficient(Tag.Q1) == pytest.approx(-3.0)
    assert (s - s).simplify().is_zero
    assert (q1**2).coefficient(Tag.Q1, Tag.Q1) == 1


def test_identity_drops_out_of_words():
    one = OperatorSymbol.identity()
    q1 = base(Tag.Q1)
    assert (one * q1).simplify().coefficient(Tag.Q1) == 1


def test_from_terms_merges_words():
    s = OperatorSymbol.from_terms([(1.0, ["Q1", "P2"]), (0.5, [Tag.Q1, Tag.P2]), (2.0, ["I", "Q2"])])
    assert len(s.terms) == 2
    assert s.coefficient("Q1", "P2") == pytest.approx(1.5)
    assert s.coefficient(Tag.Q2) == pytest.approx(2.0)
    assert OperatorSymbol.from_terms([(1.0, ["Q1"]), (-1.0, ["Q1"])]).is_zero


# commutator closure


@pytest.mark.parametrize("alpha", ALL_PAIRS)
def test_closure_matches_pair_coefficients(alpha, deformed):
    i, j = alpha.tags
    rhs = commutator_closure(deformed, i, j, keep_r=True)
    c0, c1 = alpha.closure_coefficients(deformed)
    assert rhs.coefficient() == pytest.approx(1j * c0)
    assert rhs.coefficient(Tag.R) == pytest.approx(1j * c1)


def test_closure_is_antisymmetric(deformed):
    a = commutator_closure(deformed, Tag.Q1, Tag.Q2, keep_r=True)
    b = commutator_closure(deformed, Tag.Q2, Tag.Q1, keep_r=True)
    assert (a + b).simplify().is_zero


def test_vanishing_pairs(deformed):
    for i, j in [(Tag.Q1, Tag.P2), (Tag.Q2, Tag.P1), (Tag.Q1, Tag.Q1)]:
        assert commutator_closure(deformed, i, j).is_zero


def test_r_expands_through_q1_and_p2(deformed):
    rhs = commutator_closure(deformed, Tag.Q1, Tag.P1)
    factor = 1j * deformed.theta * (1.0 + deformed.s) * deformed.epsilon
    assert rhs.coefficient(Tag.Q1) == pytest.approx(factor)
    assert rhs.coefficient(Tag.P2) == pytest.approx(factor * deformed.r_ratio)
    assert expand_r(base(Tag.R), deformed).coefficient(Tag.Q1) == pytest.approx(deformed.epsilon)
    assert r_symbol(deformed).coefficient(Tag.P2) == pytest.approx(deformed.epsilon * deformed.r_ratio)


def test_closure_constant_at_zero_epsilon(canonical):
    rhs = commutator_closure(canonical, Tag.Q1, Tag.Q2)
    assert rhs.coefficient() == pytest.approx(1j * canonical.theta)
    assert not rhs.tags() - {Tag.I}


def test_closure_rejects_non_fundamental(deformed):
    with pytest.raises(UnsupportedSymbol) as exc:
        commutator_closure(deformed, Tag.X1, Tag.Q1)
    assert isinstance(exc.value, NcuError)


def test_forward_map_coefficients(deformed):
    q1 = forward_map(deformed, Tag.Q1)
    assert q1.coefficient(Tag.X1) == pytest.approx(deformed.lambda_)
    assert q1.coefficient(Tag.X1, Tag.X1) == pytest.approx(deformed.E)
    assert q1.coefficient(Tag.XI2) == pytest.approx(-deformed.a_coef)
    p2 = forward_map(deformed, "P2")
    assert p2.coefficient(Tag.X1, Tag.X1) == pytest.approx(deformed.F)
    with pytest.raises(UnsupportedSymbol):
        forward_map(deformed, Tag.X1)


def test_inverse_map_branches(deformed, canonical):
    with_r = inverse_map(deformed, Tag.XI2)
    assert with_r.coefficient(Tag.R, Tag.R) == pytest.approx(r_squared_coefficient(deformed))
    without = inverse_map(deformed, Tag.XI2, use_r=False)
    assert Tag.R not in without.tags()
    assert Tag.R not in inverse_map(canonical, Tag.XI2).tags()
    x1 = inverse_map(deformed, Tag.X1)
    assert x1.coefficient(Tag.Q1) == pytest.approx(deformed.mu / deformed.s)


def test_r_squared_coefficient_undefined_without_epsilon(canonical):
    with pytest.raises(DomainError):
        r_squared_coefficient(canonical)


def test_pair_parse_and_labels():
    assert PairAlpha.parse("q1q2") is PairAlpha.Q1Q2
    assert PairAlpha.Q1P1.tags == (Tag.Q1, Tag.P1)
    assert all(isinstance(a.label, str) for a in ALL_PAIRS)


def test_hamiltonian_symbol_is_hermitian_sum():
    h = PairAlpha.Q1Q2.hamiltonian_symbol()
    assert h.coefficient(Tag.Q1, Tag.Q1) == 1
    assert h.coefficient(Tag.Q2, Tag.Q2) == 1
    assert math.isclose(abs(h.adjoint().coefficient(Tag.Q1, Tag.Q1)), 1.0)
