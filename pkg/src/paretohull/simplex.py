"""Dense two-phase tableau simplex with Bland's rule.

Correctness-first at desk scale: no basis factorization, no pricing tricks.
Bland's entering/leaving rule is used throughout, which rules out cycling.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, unique

import numpy as np

from .model import Constraint, SENSE_EQ, SENSE_GE, SENSE_LE

PIVOT_TOL = 1e-9      # reduced cost / ratio denominator threshold
STABLE_PIVOT = 1e-7   # preferred minimum magnitude of a pivot element
FEAS_TOL = 1e-7       # phase-1 objective above this means infeasible
BOUND_CROSS_TOL = 1e-12
REFRESH_EVERY = 50    # pivots between refactorizations of the tableau


class NumericalError(RuntimeError):
    """Pivot budget exhausted or the tableau lost feasibility."""


@unique
class SolveStatus(Enum):
    OPTIMAL = 0
    INFEASIBLE = 1
    UNBOUNDED = 2


@dataclass(frozen=True)
class LinearProgram:
    """min objective.x subject to linear rows and variable bounds."""

    objective: np.ndarray
    rows: tuple[Constraint, ...]
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "objective", np.asarray(self.objective, dtype=float))
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "lower", np.asarray(self.lower, dtype=float))
        object.__setattr__(self, "upper", np.asarray(self.upper, dtype=float))
        for row in self.rows:
            if row.quad is not None:
                raise ValueError("simplex rows must be linear")


@dataclass
class SimplexResult:
    status: SolveStatus
    x: np.ndarray | None
    value: float | None
    pivots: int


def default_max_pivots(num_variables: int, num_rows: int) -> int:
    return 10 * (num_variables + num_rows) * 100


# Substitution kinds used to map model variables onto nonnegative columns.
_SHIFT_LO = 0   # x = lo + z
_SHIFT_HI = 1   # x = hi - z
_FREE = 2       # x = z_pos - z_neg


def _build_standard_form(lp: LinearProgram):
    """Rewrite as min c.z, A z = b, z >= 0 (slacks included, b >= 0)."""
    n = lp.objective.shape[0]
    subs = []        # (kind, column index of first z, shift)
    ncols = 0
    for j in range(n):
        lo, hi = lp.lower[j], lp.upper[j]
        if lo > hi + BOUND_CROSS_TOL:
            return None
        if lo == -np.inf and hi == np.inf:
            subs.append((_FREE, ncols, 0.0))
            ncols += 2
        elif lo > -np.inf:
            subs.append((_SHIFT_LO, ncols, lo))
            ncols += 1
        else:
            subs.append((_SHIFT_HI, ncols, hi))
            ncols += 1

    def to_z(coeffs):
        row = np.zeros(ncols)
        shift_sum = 0.0
        for j, (kind, col, shift) in enumerate(subs):
            c = coeffs[j]
            if c == 0.0:
                continue
            if kind == _SHIFT_LO:
                row[col] = c
                shift_sum += c * shift
            elif kind == _SHIFT_HI:
                row[col] = -c
                shift_sum += c * shift
            else:
                row[col] = c
                row[col + 1] = -c
        return row, shift_sum

    rows = []
    for row in lp.rows:
        z_row, shift = to_z(row.coeffs)
        rows.append((z_row, row.sense, row.rhs - shift))
    # two-sided bounds become explicit upper rows on the shifted column
    for j, (kind, col, shift) in enumerate(subs):
        lo, hi = lp.lower[j], lp.upper[j]
        if kind == _SHIFT_LO and hi < np.inf:
            z_row = np.zeros(ncols)
            z_row[col] = 1.0
            rows.append((z_row, SENSE_LE, hi - lo))

    m = len(rows)
    num_slacks = sum(1 for _, sense, _ in rows if sense != SENSE_EQ)
    A = np.zeros((m, ncols + num_slacks))
    b = np.zeros(m)
    slack_of_row = [-1] * m
    slack = ncols
    for i, (z_row, sense, rhs) in enumerate(rows):
        A[i, :ncols] = z_row
        b[i] = rhs
        if sense == SENSE_LE:
            A[i, slack] = 1.0
            slack_of_row[i] = slack
            slack += 1
        elif sense == SENSE_GE:
            A[i, slack] = -1.0
            slack_of_row[i] = slack
            slack += 1
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    c_z, _ = to_z(lp.objective)
    c_z = np.concatenate([c_z, np.zeros(num_slacks)])
    return A, b, c_z, subs, ncols, slack_of_row


def _pivot(T, rhs, obj_row, basis, row, col):
    piv = T[row, col]
    T[row] /= piv
    rhs[row] /= piv
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= np.outer(factors, T[row])
    rhs -= factors * rhs[row]
    obj_row -= obj_row[col] * T[row]
    basis[row] = col
    np.clip(rhs, 0.0, None, out=rhs)


def _refactor(T, rhs, obj_row, cost, basis, A_full, b0):
    """Rebuild the tableau from the original data for the current basis.

    Incremental pivoting drifts; everything downstream of a verdict must be
    judged against B^-1 [A | b] recomputed from scratch.
    """
    B = A_full[:, basis]
    try:
        sol = np.linalg.solve(B, np.column_stack([A_full, b0]))
    except np.linalg.LinAlgError:
        raise NumericalError("singular basis during refactorization") from None
    T[:] = sol[:, :-1]
    rhs[:] = sol[:, -1]
    scale = max(1.0, float(np.max(np.abs(b0))) if b0.size else 1.0)
    if rhs.size and float(np.min(rhs)) < -FEAS_TOL * scale:
        raise NumericalError("basis lost primal feasibility")
    np.clip(rhs, 0.0, None, out=rhs)
    obj_row[:] = cost - cost[basis] @ T


def _iterate(T, rhs, cost, obj_row, basis, allowed, budget, A_full, b0):
    """Bland's rule loop; returns (status, pivots_used).

    A verdict (optimal / unbounded) is only returned off a freshly
    refactorized tableau; stale incremental state never decides.
    """
    pivots = 0
    fresh = False
    while True:
        entering = -1
        for j in allowed:
            if obj_row[j] < -PIVOT_TOL:
                entering = j
                break
        if entering < 0:
            if fresh:
                return SolveStatus.OPTIMAL, pivots
            _refactor(T, rhs, obj_row, cost, basis, A_full, b0)
            fresh = True
            continue
        col = T[:, entering]
        eligible = [i for i in range(T.shape[0]) if col[i] > PIVOT_TOL]
        if not eligible:
            if fresh:
                return SolveStatus.UNBOUNDED, pivots
            _refactor(T, rhs, obj_row, cost, basis, A_full, b0)
            fresh = True
            continue
        ratios = [rhs[i] / col[i] for i in eligible]
        best_ratio = min(ratios)
        # Bland: among minimal ratios, leave the smallest basis index.  The
        # tie set must be exact: admitting near-ties pivots past the binding
        # row and walks the basis infeasible.  The ties that matter for
        # anti-cycling are degenerate zero ratios, which are exact here
        # because rhs is clipped at zero.  Among ties, rows with a healthy
        # pivot element come first; dividing by a near-zero entry trashes
        # the tableau faster than any refresh can repair.
        ties = [i for i, r in zip(eligible, ratios) if r == best_ratio]
        safe = [i for i in ties if col[i] >= STABLE_PIVOT]
        leave = min(safe if safe else ties, key=lambda i: basis[i])
        _pivot(T, rhs, obj_row, basis, leave, entering)
        fresh = False
        pivots += 1
        if pivots > budget:
            raise NumericalError(f"pivot limit {budget} exceeded")
        if pivots % REFRESH_EVERY == 0:
            _refactor(T, rhs, obj_row, cost, basis, A_full, b0)
            fresh = True


def solve(lp: LinearProgram, max_pivots: int | None = None) -> SimplexResult:
    """Two-phase solve.  Deterministic for identical inputs."""
    built = _build_standard_form(lp)
    if built is None:
        return SimplexResult(SolveStatus.INFEASIBLE, None, None, 0)
    A, b, c_z, subs, num_struct, slack_of_row = built
    m, ncols = A.shape
    num_arts = m
    if max_pivots is None:
        max_pivots = default_max_pivots(lp.objective.shape[0], len(lp.rows))

    # phase 1: crash basis.  A row whose slack survived the sign flip with a
    # +1 coefficient starts on that slack; only the rest need artificials.
    A_full = np.hstack([A, np.eye(m)])
    b0 = b.copy()
    T = A_full.copy()
    rhs = b0.copy()
    basis = []
    for i in range(m):
        j = slack_of_row[i]
        if j >= 0 and A[i, j] == 1.0:
            basis.append(j)
        else:
            basis.append(ncols + i)
    art_cost = np.concatenate([np.zeros(ncols), np.ones(num_arts)])
    obj_row = art_cost.copy()
    for i in range(m):
        obj_row -= art_cost[basis[i]] * T[i]
    allowed = np.arange(ncols)
    total_pivots = 0
    if any(basis[i] >= ncols for i in range(m)):
        status, used = _iterate(
            T, rhs, art_cost, obj_row, basis, allowed, max_pivots, A_full, b0
        )
        total_pivots += used
        if status is not SolveStatus.OPTIMAL:
            # the phase-1 objective is bounded below by zero
            raise NumericalError("phase-1 subproblem reported unbounded")
        phase1_value = float(art_cost[basis] @ rhs)
        if phase1_value > FEAS_TOL * max(1.0, float(np.max(np.abs(b))) if m else 1.0):
            return SimplexResult(SolveStatus.INFEASIBLE, None, None, total_pivots)
    # drive leftover artificials out on the largest real coefficient; a row
    # offering none is a linearly dependent row and is dropped outright
    drop = []
    for i in range(m):
        if basis[i] >= ncols:
            j = int(np.argmax(np.abs(T[i, :ncols])))
            if abs(T[i, j]) > FEAS_TOL:
                _pivot(T, rhs, obj_row, basis, i, j)
                total_pivots += 1
            else:
                drop.append(i)
    if drop:
        T = np.delete(T, drop, axis=0)
        rhs = np.delete(rhs, drop)
        A_full = np.delete(A_full, drop, axis=0)
        b0 = np.delete(b0, drop)
        basis = [bi for i, bi in enumerate(basis) if i not in set(drop)]
        m = T.shape[0]

    # phase 2 on the real objective; artificial columns may not re-enter
    cost = np.concatenate([c_z, np.zeros(num_arts)])
    obj_row = cost - cost[basis] @ T if m else cost.copy()
    status, used = _iterate(
        T, rhs, cost, obj_row, basis, allowed, max_pivots - total_pivots, A_full, b0
    )
    total_pivots += used
    if status is SolveStatus.UNBOUNDED:
        return SimplexResult(SolveStatus.UNBOUNDED, None, None, total_pivots)

    z = np.zeros(ncols + num_arts)
    for i in range(m):
        z[basis[i]] = rhs[i]
    x = np.zeros(lp.objective.shape[0])
    for j, (kind, col, shift) in enumerate(subs):
        if kind == _SHIFT_LO:
            x[j] = shift + z[col]
        elif kind == _SHIFT_HI:
            x[j] = shift - z[col]
        else:
            x[j] = z[col] - z[col + 1]
    value = float(lp.objective @ x)
    return SimplexResult(SolveStatus.OPTIMAL, x, value, total_pivots)
