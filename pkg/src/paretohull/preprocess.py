"""Ideal point and payoff-table range normalization.

One lexicographic unit-weight solve per objective yields the payoff table.
Its diagonal is the ideal point; the off-diagonal column maxima give each
objective's non-dominated range, whose reciprocal becomes the scale factor.
Objectives with (near) zero range keep scale 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dualbenson import InfeasibleProblem, NoIdealPoint
from .model import Problem
from .oracle import BuiltinOracle, OracleStatus, WeightedSumOracle

RANGE_TOL = 1e-9


@dataclass(frozen=True)
class Scaling:
    """Per-objective factors; offsets are kept for reporting only."""

    factors: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        f = np.array(self.factors, dtype=float)
        o = np.array(self.offsets, dtype=float)
        f.setflags(write=False)
        o.setflags(write=False)
        object.__setattr__(self, "factors", f)
        object.__setattr__(self, "offsets", o)

    def scale_values(self, y):
        return np.asarray(y, dtype=float) * self.factors

    def descale_values(self, y):
        return np.asarray(y, dtype=float) / self.factors

    @classmethod
    def identity(cls, num_objectives: int) -> "Scaling":
        return cls(np.ones(num_objectives), np.zeros(num_objectives))


def payoff_table(problem: Problem, oracle: WeightedSumOracle | None = None):
    """Outcome points of the d lexicographic unit-weight solves."""
    if oracle is None:
        oracle = BuiltinOracle()
    d = problem.num_objectives
    table = []
    for i in range(d):
        w = np.zeros(d)
        w[i] = 1.0
        res = oracle.solve_weighted_sum_lex(problem, w)
        if res.status is OracleStatus.INFEASIBLE:
            raise InfeasibleProblem("problem is infeasible")
        if res.status is OracleStatus.UNBOUNDED:
            raise NoIdealPoint(
                f"objective {problem.objective_names[i]} is unbounded below"
            )
        table.append(res.point)
    return table


def compute_ideal_point(problem: Problem, oracle: WeightedSumOracle | None = None) -> np.ndarray:
    return np.array([pt.y[i] for i, pt in enumerate(payoff_table(problem, oracle))])


def normalize(problem: Problem, oracle: WeightedSumOracle | None = None):
    """Scale objectives to unit payoff range; returns (problem, Scaling).

    Expects an all-min problem.  De-scaling then scaling is the identity up
    to float rounding.
    """
    if any(s != "min" for s in problem.senses):
        raise ValueError("normalize expects a minimization-form problem")
    table = payoff_table(problem, oracle)
    d = problem.num_objectives
    ideal = np.array([table[i].y[i] for i in range(d)])
    factors = np.ones(d)
    for i in range(d):
        worst = max(table[j].y[i] for j in range(d) if j != i)
        span = worst - ideal[i]
        if span > RANGE_TOL:
            factors[i] = 1.0 / span
    scaling = Scaling(factors, ideal)

    objectives = problem.objectives * factors[:, None]
    quads = tuple(
        None if q is None else q * factors[i]
        for i, q in enumerate(problem.objective_quads)
    )
    scaled = Problem(
        objectives=objectives,
        constraints=problem.constraints,
        lower=problem.lower,
        upper=problem.upper,
        integer=problem.integer,
        senses=problem.senses,
        objective_quads=quads,
        variable_names=problem.variable_names,
        objective_names=problem.objective_names,
        name=problem.name,
    )
    return scaled, scaling
