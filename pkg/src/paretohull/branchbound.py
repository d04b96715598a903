"""Best-first branch and bound for small mixed-integer linear programs.

Nodes are ordered by their LP relaxation value; branching picks the most
fractional integer variable.  With box-bounded integer variables the tree
is finite; a node limit guards the rest.
"""

from __future__ import annotations

from dataclasses import dataclass
import heapq

import numpy as np

from .simplex import LinearProgram, SolveStatus, NumericalError, solve

TOL_INT = 1e-6
DEFAULT_NODE_LIMIT = 1_000_000
PRUNE_TOL = 1e-9


class NodeLimitExceeded(RuntimeError):
    """Raised when the node budget runs out; carries the best incumbent found."""

    def __init__(self, message, incumbent=None):
        super().__init__(message)
        self.incumbent = incumbent


@dataclass
class MilpResult:
    status: SolveStatus
    x: np.ndarray | None
    value: float | None
    nodes: int
    pivots: int


def _most_fractional(x, int_indices, tol_int):
    best_j = -1
    best_score = np.inf
    for j in int_indices:
        frac = x[j] - np.floor(x[j])
        dist = min(frac, 1.0 - frac)
        if dist <= tol_int:
            continue
        score = abs(frac - 0.5)
        if score < best_score - 1e-12:
            best_score = score
            best_j = j
    return best_j


def solve_milp(
    lp: LinearProgram,
    integer_mask,
    node_limit: int = DEFAULT_NODE_LIMIT,
    tol_int: float = TOL_INT,
    max_pivots: int | None = None,
) -> MilpResult:
    """Exact optimum of min objective.x over lp's rows/bounds with integrality."""
    integer_mask = np.asarray(integer_mask, dtype=bool)
    int_indices = [j for j in range(lp.objective.shape[0]) if integer_mask[j]]
    counters = {"nodes": 0, "pivots": 0}
    incumbent: list = [None]  # (x, value)

    def run_lp(lower, upper):
        if counters["nodes"] >= node_limit:
            best = incumbent[0]
            raise NodeLimitExceeded(
                f"node limit {node_limit} exceeded",
                incumbent=None if best is None else best[0],
            )
        res = solve(LinearProgram(lp.objective, lp.rows, lower, upper), max_pivots)
        counters["nodes"] += 1
        counters["pivots"] += res.pivots
        return res

    def polish(x, lower, upper):
        # re-solve with integers pinned to rounded values for a clean witness
        if all(abs(x[j] - round(x[j])) < 1e-12 for j in int_indices):
            return x, float(lp.objective @ x)
        lo = lower.copy()
        hi = upper.copy()
        for j in int_indices:
            lo[j] = hi[j] = round(x[j])
        res = run_lp(lo, hi)
        if res.status is SolveStatus.OPTIMAL:
            return res.x, res.value
        return x, float(lp.objective @ x)

    def record_if_integral(res, lower, upper):
        if _most_fractional(res.x, int_indices, tol_int) >= 0:
            return False
        x, value = polish(res.x, lower, upper)
        if incumbent[0] is None or value < incumbent[0][1]:
            incumbent[0] = (x, value)
        return True

    root = run_lp(lp.lower, lp.upper)
    if root.status is not SolveStatus.OPTIMAL:
        return MilpResult(root.status, None, None, counters["nodes"], counters["pivots"])
    if not int_indices:
        return MilpResult(
            SolveStatus.OPTIMAL, root.x, root.value, counters["nodes"], counters["pivots"]
        )

    tie = 0
    heap = []
    if not record_if_integral(root, lp.lower, lp.upper):
        heap.append((root.value, tie, root.x, lp.lower.copy(), lp.upper.copy()))

    while heap:
        bound, _, x, lower, upper = heapq.heappop(heap)
        if incumbent[0] is not None and bound >= incumbent[0][1] - PRUNE_TOL:
            break
        j = _most_fractional(x, int_indices, tol_int)
        floor_val = np.floor(x[j] + tol_int)
        for child_lo, child_hi in (
            (lower, _with(upper, j, floor_val)),
            (_with(lower, j, floor_val + 1.0), upper),
        ):
            if child_lo[j] > child_hi[j] + 1e-12:
                continue
            res = run_lp(child_lo, child_hi)
            if res.status is SolveStatus.INFEASIBLE:
                continue
            if res.status is SolveStatus.UNBOUNDED:
                raise NumericalError("bounded node relaxation reported unbounded")
            if incumbent[0] is not None and res.value >= incumbent[0][1] - PRUNE_TOL:
                continue
            if record_if_integral(res, child_lo, child_hi):
                continue
            tie += 1
            heapq.heappush(heap, (res.value, tie, res.x, child_lo, child_hi))

    if incumbent[0] is None:
        return MilpResult(
            SolveStatus.INFEASIBLE, None, None, counters["nodes"], counters["pivots"]
        )
    x, value = incumbent[0]
    return MilpResult(SolveStatus.OPTIMAL, x, value, counters["nodes"], counters["pivots"])


def _with(bounds, j, value):
    out = bounds.copy()
    out[j] = value
    return out
