"""Independent reference implementations used to cross-check the package.

Everything here leans on scipy or plain linear algebra on purpose: a bug in
the package's own simplex or vertex enumeration must not be able to hide
behind the same bug on the checking side.
"""

import itertools

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, linprog, milp

from paretohull.model import SENSE_EQ, SENSE_GE, SENSE_LE


def split_rows(rows):
    """(A_ub, b_ub, A_eq, b_eq) with GE rows negated into <= form."""
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for row in rows:
        if row.sense == SENSE_LE:
            a_ub.append(row.coeffs)
            b_ub.append(row.rhs)
        elif row.sense == SENSE_GE:
            a_ub.append(-row.coeffs)
            b_ub.append(-row.rhs)
        else:
            a_eq.append(row.coeffs)
            b_eq.append(row.rhs)
    return a_ub, b_ub, a_eq, b_eq


def scipy_lp(lp):
    """Solve a paretohull LinearProgram with scipy; returns (status, x, value).

    status is one of "optimal", "infeasible", "unbounded".
    """
    a_ub, b_ub, a_eq, b_eq = split_rows(lp.rows)
    bounds = [(lo if np.isfinite(lo) else None, hi if np.isfinite(hi) else None)
              for lo, hi in zip(lp.lower, lp.upper)]
    res = linprog(
        lp.objective,
        A_ub=np.array(a_ub) if a_ub else None,
        b_ub=np.array(b_ub) if b_ub else None,
        A_eq=np.array(a_eq) if a_eq else None,
        b_eq=np.array(b_eq) if b_eq else None,
        bounds=bounds,
        method="highs",
    )
    if res.status == 0:
        return "optimal", res.x, res.fun
    if res.status == 2:
        return "infeasible", None, None
    if res.status == 3:
        return "unbounded", None, None
    raise AssertionError(f"scipy linprog failed: {res.message}")


def scipy_milp(lp, integer_mask):
    """scipy.optimize.milp on the same data; returns (status, x, value)."""
    constraints = []
    for row in lp.rows:
        if row.sense == SENSE_LE:
            constraints.append(LinearConstraint(row.coeffs[None, :], -np.inf, row.rhs))
        elif row.sense == SENSE_GE:
            constraints.append(LinearConstraint(row.coeffs[None, :], row.rhs, np.inf))
        else:
            constraints.append(LinearConstraint(row.coeffs[None, :], row.rhs, row.rhs))
    # presolve in this HiGHS build mis-tightens rows mixing integer and
    # continuous variables (returns a suboptimal "optimum"), so keep it off
    res = milp(
        lp.objective,
        constraints=constraints,
        integrality=np.asarray(integer_mask, dtype=int),
        bounds=Bounds(lp.lower, lp.upper),
        options={"presolve": False},
    )
    if res.status == 0:
        return "optimal", res.x, res.fun
    if res.status == 2:
        return "infeasible", None, None
    if res.status == 3:
        return "unbounded", None, None
    raise AssertionError(f"scipy milp failed: {res.message}")


def scipy_separation_margin(y, others):
    """Best margin t of a simplex weight separating y from the other outcomes.

    max t  s.t.  w.(y' - y) >= t for all y',  sum w = 1,  w >= 0,  t <= 1.
    """
    y = np.asarray(y, dtype=float)
    others = np.asarray(others, dtype=float)
    d = len(y)
    if others.size == 0:
        return 1.0
    no = others.shape[0]
    a_ub = np.zeros((no, d + 1))
    a_ub[:, :d] = -(others - y)
    a_ub[:, d] = 1.0
    a_eq = np.zeros((1, d + 1))
    a_eq[0, :d] = 1.0
    c = np.zeros(d + 1)
    c[d] = -1.0
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(no), A_eq=a_eq, b_eq=[1.0],
                  bounds=[(0, None)] * d + [(None, 1.0)], method="highs")
    assert res.status == 0, res.message
    return -res.fun


def enumerate_dual_vertices(halfspaces, dim, tol=1e-7):
    """Offline vertex enumeration: every dim-subset of tight halfspaces.

    halfspaces are DualHalfspace objects over (w_1..w_{d-1}, a); a vertex is
    a subset's unique solution that satisfies every halfspace within tol.
    Returns an array of deduplicated vertex coordinates.
    """
    normals = np.array([np.concatenate([h.normal_w, [h.normal_a]]) for h in halfspaces])
    offsets = np.array([h.offset for h in halfspaces])
    found = []
    for subset in itertools.combinations(range(len(halfspaces)), dim):
        A = normals[list(subset)]
        b = offsets[list(subset)]
        try:
            x = np.linalg.solve(A, b)
        except np.linalg.LinAlgError:
            continue
        if not np.all(np.isfinite(x)):
            continue
        if np.all(normals @ x <= offsets + tol):
            if not any(np.max(np.abs(x - f)) <= 1e-6 for f in found):
                found.append(x)
    return np.array(found) if found else np.zeros((0, dim))


def random_linear_program(rng, allow_free=True, allow_eq=True):
    """Seeded LP with mixed senses and bound kinds for simplex cross-checks."""
    from paretohull.model import Constraint
    from paretohull.simplex import LinearProgram

    n = int(rng.integers(2, 6))
    m = int(rng.integers(1, 6))
    objective = rng.integers(-5, 6, size=n).astype(float)
    rows = []
    for _ in range(m):
        coeffs = rng.integers(-4, 5, size=n).astype(float)
        if not coeffs.any():
            coeffs[int(rng.integers(0, n))] = 1.0
        senses = [SENSE_LE, SENSE_GE] + ([SENSE_EQ] if allow_eq else [])
        sense = senses[int(rng.integers(0, len(senses)))]
        rhs = float(rng.integers(-10, 11))
        rows.append(Constraint(coeffs, sense, rhs))
    lower = np.zeros(n)
    upper = np.full(n, np.inf)
    for j in range(n):
        kind = int(rng.integers(0, 4 if allow_free else 3))
        if kind == 0:
            upper[j] = float(rng.integers(1, 8))
        elif kind == 1:
            lower[j] = float(rng.integers(-5, 1))
            upper[j] = lower[j] + float(rng.integers(1, 8))
        elif kind == 3:
            lower[j] = -np.inf
    return LinearProgram(objective, tuple(rows), lower, upper)
