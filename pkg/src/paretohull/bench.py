"""Instance generators and a brute-force extreme-point oracle.

The generators are deterministic per seed so instance suites can be shared
by number alone.  The brute-force oracle is deliberately independent of the
dual solver: it enumerates every integer assignment, enumerates the vertices
of each continuous slice directly from tight-constraint systems, and keeps a
candidate outcome iff a weight on the unit simplex separates it from every
other candidate by a fixed margin.
"""

from __future__ import annotations

from dataclasses import dataclass
import itertools
import math

import numpy as np

from .dualbenson import ExtremePointSet
from .model import (
    Constraint,
    OutcomePoint,
    Problem,
    SENSE_EQ,
    SENSE_GE,
    SENSE_LE,
)
from .simplex import LinearProgram, SolveStatus, solve

FAMILIES = ("moilp_general", "momilp_mixed")
SEPARATION_MARGIN = 1e-7    # required weighted-sum gap to call a candidate extreme
CANDIDATE_MERGE_TOL = 1e-6  # candidates this close (inf-norm) are one outcome
SLICE_FEAS_TOL = 1e-7
RHS_FRACTION = 0.25         # knapsack rhs as a fraction of the row's box maximum


class CapsExceeded(Exception):
    """The instance is too large for exhaustive enumeration."""


@dataclass(frozen=True)
class GenSpec:
    """Deterministic generator parameters; same spec => byte-identical instance."""

    family: str
    num_objectives: int
    num_variables: int
    num_constraints: int
    seed: int
    objective_range: tuple[int, int] = (-10, 10)
    constraint_range: tuple[int, int] = (1, 10)
    var_upper: int = 10
    integer_ratio: float = 0.5

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.num_objectives < 2:
            raise ValueError("need at least 2 objectives")
        if self.num_variables < 1:
            raise ValueError("need at least one variable")
        if self.num_constraints < 1:
            raise ValueError("need at least one constraint")
        if self.var_upper < 1:
            raise ValueError("variable upper bound must be >= 1")
        if not 0.0 <= self.integer_ratio <= 1.0:
            raise ValueError("integer_ratio must lie in [0, 1]")


def generate(spec: GenSpec) -> Problem:
    """Box-bounded knapsack-style instance; always feasible by construction."""
    rng = np.random.default_rng(spec.seed)
    d, n, m = spec.num_objectives, spec.num_variables, spec.num_constraints
    lo_c, hi_c = spec.objective_range
    objectives = rng.integers(lo_c, hi_c + 1, size=(d, n)).astype(float)

    rows = []
    lo_a, hi_a = spec.constraint_range
    for k in range(m):
        coeffs = rng.integers(lo_a, hi_a + 1, size=n).astype(float)
        box_max = float(coeffs.sum()) * spec.var_upper
        rhs = max(1.0, float(math.floor(RHS_FRACTION * box_max)))
        rows.append(Constraint(coeffs, SENSE_GE, rhs, name=f"c{k}"))

    integer = np.zeros(n, dtype=bool)
    if spec.family == "moilp_general":
        integer[:] = True
    else:
        count = int(round(spec.integer_ratio * n))
        chosen = rng.choice(n, size=count, replace=False)
        integer[np.sort(chosen)] = True

    return Problem(
        objectives=objectives,
        constraints=tuple(rows),
        lower=np.zeros(n),
        upper=np.full(n, float(spec.var_upper)),
        integer=integer,
        name=f"{spec.family}-d{d}-n{n}-m{m}-s{spec.seed}",
    )


@dataclass(frozen=True)
class Caps:
    assignments: int = 200_000
    continuous: int = 4


def _integer_assignments(problem: Problem, caps: Caps):
    idx = [j for j in range(problem.num_variables) if problem.integer[j]]
    ranges = []
    total = 1
    for j in idx:
        lo, hi = problem.lower[j], problem.upper[j]
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise CapsExceeded(f"integer variable {problem.variable_names[j]} is unbounded")
        lo_i = math.ceil(lo - 1e-9)
        hi_i = math.floor(hi + 1e-9)
        ranges.append(range(lo_i, hi_i + 1))
        total *= max(0, hi_i - lo_i + 1)
        if total > caps.assignments:
            raise CapsExceeded(f"more than {caps.assignments} integer assignments")
    return idx, ranges


def _feasible_mask(problem: Problem, X, tol=SLICE_FEAS_TOL):
    """Row mask of feasible points; integrality is the caller's business."""
    if X.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    ok = np.all(X >= problem.lower - tol, axis=1) & np.all(X <= problem.upper + tol, axis=1)
    for row in problem.constraints:
        v = X @ row.coeffs
        if row.sense == SENSE_LE:
            ok &= v <= row.rhs + tol
        elif row.sense == SENSE_GE:
            ok &= v >= row.rhs - tol
        else:
            ok &= np.abs(v - row.rhs) <= tol
    return ok


def _candidate_points(problem: Problem, caps: Caps):
    """Feasible candidate solutions holding every extreme outcome.

    Any extreme point of the outcome hull is the image of a vertex of some
    integer slice, so candidates are integer assignments completed by the
    vertices of their continuous slice.  The tight-set pool over the
    continuous block is assignment-independent, which lets each ell-subset
    be solved for all assignments in one batched call.
    """
    int_idx, ranges = _integer_assignments(problem, caps)
    cont_idx = [j for j in range(problem.num_variables) if not problem.integer[j]]
    n = problem.num_variables
    if int_idx:
        assignments = np.array(list(itertools.product(*ranges)), dtype=float)
    else:
        assignments = np.zeros((1, 0))
    base = np.zeros((assignments.shape[0], n))
    for pos, j in enumerate(int_idx):
        base[:, j] = assignments[:, pos]

    ell = len(cont_idx)
    if ell == 0:
        X = base
    else:
        # pool: every constraint row plus each finite bound, as equalities
        pool = []
        for row in problem.constraints:
            pool.append((row.coeffs[cont_idx], row.coeffs, row.rhs))
        for pos, j in enumerate(cont_idx):
            for bound in (problem.lower[j], problem.upper[j]):
                if math.isfinite(bound):
                    a = np.zeros(ell)
                    a[pos] = 1.0
                    pool.append((a, None, float(bound)))
        chunks = []
        for chosen in itertools.combinations(range(len(pool)), ell):
            A = np.array([pool[k][0] for k in chosen])
            B = np.empty((ell, base.shape[0]))
            for r, k in enumerate(chosen):
                _, coeffs, rhs = pool[k]
                B[r] = rhs if coeffs is None else rhs - base @ coeffs
            try:
                S = np.linalg.solve(A, B)
            except np.linalg.LinAlgError:
                continue
            Xc = base.copy()
            Xc[:, cont_idx] = S.T
            chunks.append(Xc)
        X = np.vstack(chunks) if chunks else np.zeros((0, n))
        X = X[np.all(np.isfinite(X), axis=1)]
    return X[_feasible_mask(problem, X)]


def _separating_weight(y, others, margin=SEPARATION_MARGIN):
    """Weight on the unit simplex with w.y <= w.y' - margin for all y'; None if none.

    Solved as: maximize t subject to w.(y' - y) >= t, sum w = 1, w >= 0.
    """
    d = len(y)
    if len(others) == 0:
        return np.full(d, 1.0 / d)
    # variables: (w_1..w_d, t); minimize -t with t capped at 1 so the LP is
    # always bounded (any t above the margin certifies equally well)
    rows = []
    for other in others:
        coeffs = np.concatenate([other - y, [-1.0]])
        rows.append(Constraint(coeffs, SENSE_GE, 0.0))
    rows.append(Constraint(np.concatenate([np.ones(d), [0.0]]), SENSE_EQ, 1.0))
    objective = np.concatenate([np.zeros(d), [-1.0]])
    lower = np.concatenate([np.zeros(d), [-np.inf]])
    upper = np.concatenate([np.full(d, np.inf), [1.0]])
    res = solve(LinearProgram(objective, tuple(rows), lower, upper))
    if res.status is not SolveStatus.OPTIMAL:
        return None
    w = res.x[:d]
    t = res.x[d]
    if t < margin:
        return None
    return w / w.sum()


def brute_force_extreme_points(problem: Problem, caps: Caps = Caps()) -> ExtremePointSet:
    """Ground-truth extreme points by exhaustive enumeration.

    Requires a min-form linear problem whose integer variables are boxed and
    whose continuous block is at most `caps.continuous` wide.
    """
    if not problem.is_linear:
        raise CapsExceeded("brute force handles linear problems only")
    if any(s != "min" for s in problem.senses):
        raise ValueError("brute force expects a minimization-form problem")
    cont_idx = [j for j in range(problem.num_variables) if not problem.integer[j]]
    if len(cont_idx) > caps.continuous:
        raise CapsExceeded(f"more than {caps.continuous} continuous variables")
    for j in cont_idx:
        if not (math.isfinite(problem.lower[j]) and math.isfinite(problem.upper[j])):
            raise CapsExceeded(f"continuous variable {problem.variable_names[j]} is unbounded")

    X = _candidate_points(problem, caps)
    if X.shape[0] == 0:
        return ExtremePointSet(points=(), dual_facets=(), exact=True, note="infeasible")
    Y = X @ problem.objectives.T

    # dedup: exact unique rows first, then a tolerance sweep on the few left
    Y, first = np.unique(np.round(Y, 12), axis=0, return_index=True)
    X = X[first]
    keep: list[int] = []
    for i in range(Y.shape[0]):
        if not keep or float(np.min(np.max(np.abs(Y[keep] - Y[i]), axis=1))) > CANDIDATE_MERGE_TOL:
            keep.append(i)
    Y, X = Y[keep], X[keep]

    # a dominated candidate is never extreme, and for w >= 0 its separation
    # constraint is implied by the dominating point's, so both sides of the
    # weight search can be restricted to the non-dominated subset
    nd = _nondominated_mask(Y)
    Y, X = Y[nd], X[nd]

    extreme = []
    for i in range(Y.shape[0]):
        others = np.delete(Y, i, axis=0)
        # cheap containment test rejects the bulk; the separation LP then
        # certifies each survivor with an explicit weight
        if _in_hull_plus_cone(Y[i], others):
            continue
        w = _separating_weight(Y[i], others)
        if w is not None:
            extreme.append(OutcomePoint(Y[i], X[i], w))
    extreme.sort(key=lambda p: tuple(p.y))
    return ExtremePointSet(points=tuple(extreme), dual_facets=(), exact=True)


def match_point_sets(got, expected, tolerance):
    """Greedy nearest-pair matching between two outcome sets.

    Lexicographic pairing breaks down when coordinates tie up to solver noise,
    so compare sets by distance instead.  Returns (unmatched_got,
    unmatched_expected, worst) where worst is the largest inf-norm error over
    the matched pairs.  Greedy on the sorted pair list is exact here because
    genuine matches sit within `tolerance` while distinct extreme points are
    separated by far more.
    """
    got = [np.asarray(g, dtype=float) for g in got]
    expected = [np.asarray(e, dtype=float) for e in expected]
    pairs = sorted(
        (float(np.max(np.abs(g - e))), i, k)
        for i, g in enumerate(got)
        for k, e in enumerate(expected)
    )
    used_g, used_e = set(), set()
    worst = 0.0
    for dist, i, k in pairs:
        if dist > tolerance:
            break
        if i in used_g or k in used_e:
            continue
        used_g.add(i)
        used_e.add(k)
        worst = max(worst, dist)
    unmatched_got = [g for i, g in enumerate(got) if i not in used_g]
    unmatched_expected = [e for k, e in enumerate(expected) if k not in used_e]
    return unmatched_got, unmatched_expected, worst


def _nondominated_mask(Y):
    DOM_TOL = 1e-9  # discard only clearly dominated candidates
    n = Y.shape[0]
    keep = np.ones(n, dtype=bool)
    for i in range(n):
        dom = np.all(Y <= Y[i] + DOM_TOL, axis=1) & np.any(Y < Y[i] - DOM_TOL, axis=1)
        dom[i] = False
        if dom.any():
            keep[i] = False
    return keep


def _in_hull_plus_cone(y, others):
    """Whether y lies in conv(others) + the nonnegative orthant.

    Pure feasibility LP with d+1 rows, so it is far cheaper than the
    separation LP; a contained candidate can never be extreme.
    """
    mo = others.shape[0]
    if mo == 0:
        return False
    d = len(y)
    # vars: hull multipliers lam (mo) and slack s (d), both >= 0
    rows = []
    for idx in range(d):
        coeffs = np.concatenate([others[:, idx], np.eye(d)[idx]])
        rows.append(Constraint(coeffs, SENSE_EQ, float(y[idx])))
    rows.append(Constraint(np.concatenate([np.ones(mo), np.zeros(d)]), SENSE_EQ, 1.0))
    lp = LinearProgram(
        np.zeros(mo + d), tuple(rows), np.zeros(mo + d), np.full(mo + d, np.inf)
    )
    return solve(lp).status is SolveStatus.OPTIMAL
