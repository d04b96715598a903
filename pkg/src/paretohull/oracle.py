"""Weighted-sum oracle: scalarize, solve, return an outcome point.

The built-in oracle handles linear problems with the bundled simplex and
branch-and-bound.  Quadratic problems are routed exclusively to plugin
oracles; the built-in one refuses them.  The lexicographic variant runs a
second stage that minimizes the sum of all objectives subject to the
stage-one optimum, so ties on weights with zero components never return a
dominated point.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum, unique
import importlib
import threading

import numpy as np

from . import branchbound, simplex
from .model import Constraint, OutcomePoint, Problem, SENSE_LE, evaluate
from .simplex import LinearProgram, SolveStatus

TOL_W = 1e-9          # weight simplex membership tolerance
TOL_EQ = 1e-6         # value vs. w'y consistency
# Relative slack when pinning the stage-one optimum.  The stage-two vertex
# can drift along near-parallel edges by (slack / edge angle), so the slack
# must sit far below the solver's confirmation tolerance; 1e-12 leaves the
# drift under 1e-8 even at edge-angle ratios of 1e4.
LEX_CAP_SLACK = 1e-12


class UnsupportedProblem(Exception):
    """The selected oracle cannot handle this problem class."""


@unique
class OracleStatus(Enum):
    OPTIMAL = 0
    INFEASIBLE = 1
    UNBOUNDED = 2


@dataclass(frozen=True)
class OracleResult:
    status: OracleStatus
    value: float | None = None
    point: OutcomePoint | None = None


@dataclass
class OracleStats:
    calls: int = 0
    lp_solves: int = 0
    pivots: int = 0
    nodes: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def bump(self, calls=0, lp_solves=0, pivots=0, nodes=0):
        with self._lock:
            self.calls += calls
            self.lp_solves += lp_solves
            self.pivots += pivots
            self.nodes += nodes

    def as_dict(self):
        return {
            "calls": self.calls,
            "lp_solves": self.lp_solves,
            "pivots": self.pivots,
            "nodes": self.nodes,
        }


def validate_weight(w, num_objectives: int) -> np.ndarray:
    """Check simplex membership within TOL_W; returns the weight as an array."""
    w = np.asarray(w, dtype=float)
    if w.shape != (num_objectives,):
        raise ValueError(f"weight has shape {w.shape}, expected ({num_objectives},)")
    if np.any(w < -TOL_W):
        raise ValueError(f"weight has negative component: {w}")
    if abs(float(w.sum()) - 1.0) > TOL_W:
        raise ValueError(f"weight components sum to {w.sum()}, expected 1")
    return w


class WeightedSumOracle(ABC):
    """Solves min w'f(x) over the feasible set for weights on the unit simplex.

    Implementations must be reentrant: concurrent calls with the same
    problem may run in parallel.  `stats` is observational only.
    """

    stats: OracleStats

    @abstractmethod
    def solve_weighted_sum(self, problem: Problem, w) -> OracleResult:
        ...

    def solve_weighted_sum_lex(self, problem: Problem, w) -> OracleResult:
        # adequate default when every weighted sum has a unique minimizer;
        # oracles over sets with ties must override
        return self.solve_weighted_sum(problem, w)


class BuiltinOracle(WeightedSumOracle):
    """Simplex / branch-and-bound backed oracle for linear problems."""

    def __init__(self, node_limit=branchbound.DEFAULT_NODE_LIMIT, max_pivots=None,
                 tol_int=branchbound.TOL_INT):
        self.node_limit = node_limit
        self.max_pivots = max_pivots
        self.tol_int = tol_int
        self.stats = OracleStats()

    def _require_linear(self, problem: Problem):
        if not problem.is_linear:
            raise UnsupportedProblem(
                "built-in oracle handles linear problems only; "
                "route quadratic problems to a plugin oracle"
            )

    def _solve_scalar(self, problem: Problem, objective, extra_rows=()):
        rows = problem.constraints + tuple(extra_rows)
        lp = LinearProgram(objective, rows, problem.lower, problem.upper)
        if problem.num_integer:
            res = branchbound.solve_milp(
                lp,
                problem.integer,
                node_limit=self.node_limit,
                tol_int=self.tol_int,
                max_pivots=self.max_pivots,
            )
            self.stats.bump(lp_solves=res.nodes, pivots=res.pivots, nodes=res.nodes)
        else:
            res = simplex.solve(lp, self.max_pivots)
            self.stats.bump(lp_solves=1, pivots=res.pivots)
        return res

    @staticmethod
    def _wrap(problem, w, res) -> OracleResult:
        if res.status is SolveStatus.INFEASIBLE:
            return OracleResult(OracleStatus.INFEASIBLE)
        if res.status is SolveStatus.UNBOUNDED:
            return OracleResult(OracleStatus.UNBOUNDED)
        y = evaluate(problem, res.x)
        return OracleResult(OracleStatus.OPTIMAL, float(w @ y), OutcomePoint(y, res.x))

    def solve_weighted_sum(self, problem: Problem, w) -> OracleResult:
        w = validate_weight(w, problem.num_objectives)
        self._require_linear(problem)
        self.stats.bump(calls=1)
        res = self._solve_scalar(problem, w @ problem.objectives)
        return self._wrap(problem, w, res)

    def solve_weighted_sum_lex(self, problem: Problem, w) -> OracleResult:
        w = validate_weight(w, problem.num_objectives)
        self._require_linear(problem)
        self.stats.bump(calls=1)
        scalarized = w @ problem.objectives
        stage1 = self._solve_scalar(problem, scalarized)
        if stage1.status is not SolveStatus.OPTIMAL:
            return self._wrap(problem, w, stage1)
        cap = Constraint(
            scalarized,
            SENSE_LE,
            stage1.value + LEX_CAP_SLACK * (1.0 + abs(stage1.value)),
            name="_lex_stage1",
        )
        stage2 = self._solve_scalar(problem, problem.objectives.sum(axis=0), (cap,))
        if stage2.status is SolveStatus.UNBOUNDED:
            return OracleResult(OracleStatus.UNBOUNDED)
        if stage2.status is not SolveStatus.OPTIMAL:
            # the stage-one point satisfies the cap, so this is numerical noise;
            # fall back to the stage-one witness
            return self._wrap(problem, w, stage1)
        return self._wrap(problem, w, stage2)


class UnitBallOracle(WeightedSumOracle):
    """Analytic oracle over a Euclidean ball in outcome space.

    Stands in for problem classes whose outcome sets have infinitely many
    extreme points: min w'y over ||y - center|| <= radius is attained at
    center - radius * w / ||w||.  Every weighted sum has a unique minimizer,
    so the lexicographic variant coincides with the plain one.
    """

    def __init__(self, radius: float = 1.0, center=None):
        self.radius = float(radius)
        self.center = center
        self.stats = OracleStats()

    def solve_weighted_sum(self, problem: Problem, w) -> OracleResult:
        w = validate_weight(w, problem.num_objectives)
        self.stats.bump(calls=1)
        center = np.zeros(len(w)) if self.center is None else np.asarray(self.center, float)
        norm = float(np.linalg.norm(w))
        y = center - self.radius * w / norm
        # the witness lives in outcome space: f is the identity on the mock model
        return OracleResult(OracleStatus.OPTIMAL, float(w @ y), OutcomePoint(y, y))


def ball_mock_problem(dim: int = 2) -> Problem:
    """Identity-objective shell model paired with UnitBallOracle."""
    return Problem(
        objectives=np.eye(dim),
        lower=np.full(dim, -np.inf),
        upper=np.full(dim, np.inf),
        name="unit-ball-mock",
    )


def load_oracle(spec: str, **kwargs) -> WeightedSumOracle:
    """Resolve an oracle by name: "builtin" or a "module:attr" plugin path."""
    if spec == "builtin":
        return BuiltinOracle(**kwargs)
    if ":" not in spec:
        raise ValueError(f"unknown oracle {spec!r}; expected 'builtin' or 'module:attr'")
    module_name, attr = spec.split(":", 1)
    module = importlib.import_module(module_name)
    obj = getattr(module, attr)
    if isinstance(obj, WeightedSumOracle):
        return obj
    if isinstance(obj, type) and issubclass(obj, WeightedSumOracle):
        return obj()
    raise ValueError(f"{spec!r} does not name a WeightedSumOracle")
