"""Weighted-sum oracles: builtin LP/MILP backend, analytic ball, plugin loading."""

import sys
import types

import numpy as np
import pytest

from paretohull.model import Constraint, Problem, SENSE_GE
from paretohull.oracle import (
    BuiltinOracle,
    OracleStatus,
    UnitBallOracle,
    UnsupportedProblem,
    WeightedSumOracle,
    ball_mock_problem,
    load_oracle,
    validate_weight,
)


def test_validate_weight_accepts_simplex_points():
    w = validate_weight([0.25, 0.75], 2)
    assert isinstance(w, np.ndarray)
    assert np.allclose(w, [0.25, 0.75])
    validate_weight([1.0, 0.0], 2)
    validate_weight([1 / 3, 1 / 3, 1 / 3], 3)


@pytest.mark.parametrize(
    "w, d",
    [
        ([0.5, 0.5, 0.0], 2),       # wrong length
        ([-0.1, 1.1], 2),           # negative component
        ([0.3, 0.3], 2),            # does not sum to one
    ],
)
def test_validate_weight_rejects(w, d):
    with pytest.raises(ValueError):
        validate_weight(w, d)


def test_builtin_lex_endpoints_on_lp(e1_problem):
    oracle = BuiltinOracle()
    res = oracle.solve_weighted_sum_lex(e1_problem, [1.0, 0.0])
    assert res.status is OracleStatus.OPTIMAL
    assert res.value == pytest.approx(0.0, abs=1e-8)
    assert np.allclose(res.point.y, [0.0, 1.0], atol=1e-8)
    res = oracle.solve_weighted_sum_lex(e1_problem, [0.0, 1.0])
    assert np.allclose(res.point.y, [1.0, 0.0], atol=1e-8)
    res = oracle.solve_weighted_sum(e1_problem, [0.5, 0.5])
    assert res.value == pytest.approx(0.5, abs=1e-8)


def test_builtin_lex_breaks_weighted_sum_ties():
    # min (x0, x1) over the unit box with w = (1, 0): every x1 ties at
    # weighted value 0; the lexicographic stage must pick the non-dominated one
    box = Problem(objectives=np.eye(2), lower=np.zeros(2), upper=np.ones(2))
    res = BuiltinOracle().solve_weighted_sum_lex(box, [1.0, 0.0])
    assert res.status is OracleStatus.OPTIMAL
    assert np.allclose(res.point.y, [0.0, 0.0], atol=1e-8)


def test_builtin_integer_path(e2_problem):
    oracle = BuiltinOracle()
    res = oracle.solve_weighted_sum_lex(e2_problem, [1.0, 0.0])
    assert res.status is OracleStatus.OPTIMAL
    assert np.allclose(res.point.y, [0.0, 2.0], atol=1e-8)
    assert np.allclose(res.point.x, [0.0, 1.0], atol=1e-8)
    assert oracle.stats.nodes >= 1


def test_builtin_reports_infeasible():
    p = Problem(
        objectives=np.eye(2),
        constraints=(Constraint(np.array([1.0, 0.0]), SENSE_GE, 3.0),),
        lower=np.zeros(2),
        upper=np.ones(2),
    )
    res = BuiltinOracle().solve_weighted_sum(p, [0.5, 0.5])
    assert res.status is OracleStatus.INFEASIBLE
    assert res.value is None
    assert res.point is None


def test_builtin_reports_unbounded():
    p = Problem(objectives=np.eye(2), lower=np.full(2, -np.inf), upper=np.full(2, np.inf))
    res = BuiltinOracle().solve_weighted_sum(p, [1.0, 0.0])
    assert res.status is OracleStatus.UNBOUNDED


def test_builtin_rejects_quadratics():
    quad = np.eye(2)
    p = Problem(objectives=np.eye(2), objective_quads=(quad, None),
                lower=np.zeros(2), upper=np.ones(2))
    with pytest.raises(UnsupportedProblem):
        BuiltinOracle().solve_weighted_sum(p, [0.5, 0.5])


def test_builtin_stats_accumulate(e1_problem):
    oracle = BuiltinOracle()
    assert oracle.stats.calls == 0
    oracle.solve_weighted_sum(e1_problem, [0.5, 0.5])
    oracle.solve_weighted_sum_lex(e1_problem, [1.0, 0.0])
    assert oracle.stats.calls == 2
    assert oracle.stats.lp_solves >= 2
    d = oracle.stats.as_dict()
    assert set(d) == {"calls", "lp_solves", "pivots", "nodes"}


def test_unit_ball_oracle_geometry():
    oracle = UnitBallOracle()
    problem = ball_mock_problem(3)
    w = np.array([0.2, 0.3, 0.5])
    res = oracle.solve_weighted_sum(problem, w)
    assert res.status is OracleStatus.OPTIMAL
    y = res.point.y
    assert np.linalg.norm(y) == pytest.approx(1.0, abs=1e-12)
    assert res.value == pytest.approx(float(w @ y), abs=1e-12)
    # the minimizer points against the weight direction
    assert np.allclose(y, -w / np.linalg.norm(w), atol=1e-12)


def test_unit_ball_oracle_shifted_and_scaled():
    oracle = UnitBallOracle(radius=2.0, center=[1.0, 1.0])
    res = oracle.solve_weighted_sum(ball_mock_problem(2), [1.0, 0.0])
    assert np.allclose(res.point.y, [-1.0, 1.0], atol=1e-12)


def test_load_oracle_builtin_kwargs():
    oracle = load_oracle("builtin", node_limit=123)
    assert isinstance(oracle, BuiltinOracle)
    assert oracle.node_limit == 123


def test_load_oracle_plugin_class_and_instance():
    oracle = load_oracle("paretohull.oracle:UnitBallOracle")
    assert isinstance(oracle, UnitBallOracle)
    module = types.ModuleType("fake_oracle_plugin")
    module.the_oracle = UnitBallOracle(radius=3.0)
    sys.modules["fake_oracle_plugin"] = module
    try:
        oracle = load_oracle("fake_oracle_plugin:the_oracle")
        assert oracle.radius == 3.0
    finally:
        del sys.modules["fake_oracle_plugin"]


def test_load_oracle_bad_specs():
    with pytest.raises(ValueError):
        load_oracle("not-a-real-oracle")
    with pytest.raises(ValueError):
        load_oracle("paretohull.oracle:LEX_CAP_SLACK")
    with pytest.raises(ImportError):
        load_oracle("definitely_missing_module:thing")
    with pytest.raises(AttributeError):
        load_oracle("paretohull.oracle:no_such_attr")


def test_default_lex_falls_back_to_plain():
    class Fixed(WeightedSumOracle):
        def __init__(self):
            self.stats = None

        def solve_weighted_sum(self, problem, w):
            return "sentinel"

    assert Fixed().solve_weighted_sum_lex(None, None) == "sentinel"
