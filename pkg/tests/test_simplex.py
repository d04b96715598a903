"""Tableau simplex against an independent LP solver and hand-checked cases."""

import numpy as np
import pytest

from paretohull.model import Constraint, SENSE_EQ, SENSE_GE, SENSE_LE
from paretohull.simplex import (
    LinearProgram,
    NumericalError,
    SolveStatus,
    solve,
)

from helpers import random_linear_program, scipy_lp


def _lp(c, rows, lower, upper):
    return LinearProgram(
        objective=np.asarray(c, dtype=float),
        rows=tuple(rows),
        lower=np.asarray(lower, dtype=float),
        upper=np.asarray(upper, dtype=float),
    )


def test_trivial_box_minimum():
    lp = _lp([1.0, 1.0], [], [0.0, 0.0], [2.0, 2.0])
    res = solve(lp)
    assert res.status is SolveStatus.OPTIMAL
    assert np.allclose(res.x, [0.0, 0.0])
    assert res.value == pytest.approx(0.0, abs=1e-9)


def test_single_constraint_vertex():
    # min x0 + 2 x1 s.t. x0 + x1 >= 1, x in [0, 5]^2 -> (1, 0)
    lp = _lp(
        [1.0, 2.0],
        [Constraint(np.array([1.0, 1.0]), SENSE_GE, 1.0)],
        [0.0, 0.0],
        [5.0, 5.0],
    )
    res = solve(lp)
    assert res.status is SolveStatus.OPTIMAL
    assert np.allclose(res.x, [1.0, 0.0], atol=1e-8)
    assert res.value == pytest.approx(1.0, abs=1e-8)


def test_equality_row_with_free_variable():
    # min x0 with x0 free, x0 + x1 = 3, 0 <= x1 <= 2 -> x1 = 2, x0 = 1
    lp = _lp(
        [1.0, 0.0],
        [Constraint(np.array([1.0, 1.0]), SENSE_EQ, 3.0)],
        [-np.inf, 0.0],
        [np.inf, 2.0],
    )
    res = solve(lp)
    assert res.status is SolveStatus.OPTIMAL
    assert res.value == pytest.approx(1.0, abs=1e-8)
    assert np.allclose(res.x, [1.0, 2.0], atol=1e-8)


def test_unbounded_free_direction():
    lp = _lp([-1.0, 0.0], [], [-np.inf, 0.0], [np.inf, 1.0])
    assert solve(lp).status is SolveStatus.UNBOUNDED


def test_infeasible_rows():
    rows = [
        Constraint(np.array([1.0]), SENSE_GE, 3.0),
        Constraint(np.array([1.0]), SENSE_LE, 1.0),
    ]
    lp = _lp([1.0], rows, [0.0], [10.0])
    assert solve(lp).status is SolveStatus.INFEASIBLE


def test_crossed_bounds_are_infeasible():
    lp = _lp([1.0, 1.0], [], [0.0, 3.0], [1.0, 2.0])
    assert solve(lp).status is SolveStatus.INFEASIBLE


def test_shifted_bounds():
    # min -x0 - x1 over [-2, -1] x [4, 6] -> corner (-1, 6)
    lp = _lp([-1.0, -1.0], [], [-2.0, 4.0], [-1.0, 6.0])
    res = solve(lp)
    assert res.status is SolveStatus.OPTIMAL
    assert np.allclose(res.x, [-1.0, 6.0], atol=1e-8)


def test_degenerate_cycling_candidate():
    # Beale-style degenerate LP; Bland's rule must terminate at -1/20.
    rows = [
        Constraint(np.array([0.25, -60.0, -0.04, 9.0]), SENSE_LE, 0.0),
        Constraint(np.array([0.5, -90.0, -0.02, 3.0]), SENSE_LE, 0.0),
        Constraint(np.array([0.0, 0.0, 1.0, 0.0]), SENSE_LE, 1.0),
    ]
    lp = _lp([-0.75, 150.0, -0.02, 6.0], rows, [0.0] * 4, [np.inf] * 4)
    res = solve(lp)
    assert res.status is SolveStatus.OPTIMAL
    assert res.value == pytest.approx(-0.05, abs=1e-9)


def test_pivot_budget_raises():
    rows = [Constraint(np.array([1.0, 1.0, 1.0]), SENSE_GE, 1.0)]
    lp = _lp([1.0, 1.0, 1.0], rows, [0.0] * 3, [np.inf] * 3)
    with pytest.raises(NumericalError):
        solve(lp, max_pivots=0)


@pytest.mark.parametrize("seed", range(120))
def test_matches_reference_solver(seed):
    rng = np.random.default_rng(1000 + seed)
    lp = random_linear_program(rng)
    res = solve(lp)
    ref_status, ref_x, ref_value = scipy_lp(lp)
    assert res.status.name.lower() == ref_status
    if ref_status == "optimal":
        assert res.value == pytest.approx(ref_value, abs=1e-6, rel=1e-6)
        # the reported point must attain the value and satisfy every row
        assert float(lp.objective @ res.x) == pytest.approx(res.value, abs=1e-7)
        for row in lp.rows:
            lhs = float(row.coeffs @ res.x)
            if row.sense == SENSE_LE:
                assert lhs <= row.rhs + 1e-6
            elif row.sense == SENSE_GE:
                assert lhs >= row.rhs - 1e-6
            else:
                assert lhs == pytest.approx(row.rhs, abs=1e-6)
        assert np.all(res.x >= lp.lower - 1e-6)
        assert np.all(res.x <= lp.upper + 1e-6)


def test_pivot_counter_is_reported():
    lp = _lp(
        [1.0, 2.0],
        [Constraint(np.array([1.0, 1.0]), SENSE_GE, 1.0)],
        [0.0, 0.0],
        [5.0, 5.0],
    )
    res = solve(lp)
    assert res.pivots >= 1
