from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncuncertainty.algebra.params import derive_constants
from ncuncertainty.algebra.symbols import OperatorSymbol, Tag
from ncuncertainty.core.errors import GridMismatch, UnsupportedSymbol
from ncuncertainty.core.models import GridSpec
from ncuncertainty.eigensolver.probes import sample_states
from ncuncertainty.operators.assemble import (
    assemble,
    commutator_apply,
    fundamental_handles,
    hermiticity_defect,
    linearity_defect,
)
from ncuncertainty.operators.checks import reconstruct_hw, verify_algebra
from ncuncertainty.states.constructors import GaussianSpec, gaussian, random_smooth, seeded_rng


def test_deformed_algebra_closes(deformed, grid):
    report = verify_algebra(deformed, grid, sample_states(grid, 3, seed=7), tol=1e-6)
    assert report.passed, report.pairs
    assert len(report.pairs) == 6


def test_constant_commutators_at_zero_epsilon(canonical, grid):
    report = verify_algebra(canonical, grid, sample_states(grid, 3, seed=3), tol=1e-8)
    assert report.passed
    assert report.max_error <= 1e-8


def test_verify_algebra_rejects_foreign_states(deformed, grid, small_grid):
    with pytest.raises(GridMismatch):
        verify_algebra(deformed, grid, sample_states(small_grid, 1))


@pytest.mark.parametrize("use_r", [True, False])
def test_inverse_map_reconstructs_heisenberg_weyl(deformed, grid, use_r):
    f = sample_states(grid, 1, seed=11)[0]
    report = reconstruct_hw(deformed, grid, f, use_r=use_r)
    assert report.max_deviation <= 1e-6
    assert set(report.deviations) == {"X1", "X2", "Xi1", "Xi2"}
    assert report.r_squared_form == ("R^2" if use_r else "cancelled")


def test_heisenberg_commutator_on_gaussian(undeformed, grid):
    f = gaussian(grid, GaussianSpec(2.0, 2.0))
    x = assemble(Tag.X1, undeformed, grid)
    k = assemble(Tag.XI1, undeformed, grid)
    comm = commutator_apply(x, k, f).values
    assert np.max(np.abs(comm - 1j * f.values)) <= 1e-8


@pytest.mark.parametrize("tag", [Tag.Q1, Tag.Q2, Tag.P1, Tag.P2])
def test_fundamental_operators_are_symmetric(deformed, small_grid, tag):
    rng = seeded_rng(5)
    f, g = random_smooth(small_grid, rng), random_smooth(small_grid, rng)
    op = assemble(tag, deformed, small_grid)
    assert hermiticity_defect(op, f, g) <= 1e-10


@settings(max_examples=20, deadline=None)
@given(
    a=st.complex_numbers(max_magnitude=10.0, allow_nan=False, allow_infinity=False),
    b=st.complex_numbers(max_magnitude=10.0, allow_nan=False, allow_infinity=False),
    seed=st.integers(0, 2**16),
)
def test_assembled_operators_are_linear(a, b, seed):
    params = derive_constants(0.2, 0.2, 0.1)
    grid = GridSpec(32, 32, 8.0, 8.0)
    rng = seeded_rng(seed)
    f, g = random_smooth(grid, rng), random_smooth(grid, rng)
    for op in fundamental_handles(params, grid).values():
        assert linearity_defect(op, f, g, a, b) <= 1e-10


def test_composite_symbol_matches_composition(deformed, small_grid):
    f = random_smooth(small_grid, seeded_rng(2))
    q1 = assemble(Tag.Q1, deformed, small_grid)
    q1sq = assemble(OperatorSymbol.base(Tag.Q1) ** 2, deformed, small_grid)
    assert np.allclose(q1sq(f).values, q1(q1(f)).values, atol=1e-10)


def test_matvec_matches_apply(deformed, small_grid):
    f = random_smooth(small_grid, seeded_rng(9))
    op = assemble("P2", deformed, small_grid)
    assert np.allclose(op.matvec(f.values.ravel()), op(f).values.ravel())
    lin = op.as_linear_operator()
    assert lin.shape == (small_grid.n1 * small_grid.n2,) * 2


def test_assemble_rejects_unknown_input(deformed, small_grid):
    with pytest.raises(UnsupportedSymbol):
        assemble(3.0, deformed, small_grid)
    with pytest.raises(UnsupportedSymbol):
        assemble("Q7", deformed, small_grid)


def test_operator_refuses_state_on_other_grid(deformed, grid, small_grid):
    op = assemble(Tag.Q1, deformed, grid)
    with pytest.raises(GridMismatch):
        op(random_smooth(small_grid, seeded_rng(0)))
