"""Outer approximation of the dual (weight-space) image, driven by ray shooting.

Each unvisited vertex (w_1..w_{d-1}, a) of the current approximation asks the
weighted-sum oracle for the true support value at its weight.  A long ray
means the vertex floats above the dual image: the returned outcome point's
supporting inequality cuts it off.  A short ray confirms the vertex.  With
epsilon > 0, rays up to epsilon * max(1, |a|) also confirm, trading facets
for finite termination on problem classes with infinitely many extreme
points; any suppression beyond the confirm tolerance flips `exact` off.

At termination, supports tight at d or more final vertices (spanning the
full facet dimension) are exactly the facets of the dual image, and their
generating outcome points are the non-dominated extreme points.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .branchbound import NodeLimitExceeded
from .model import OutcomePoint, Problem
from .oracle import BuiltinOracle, OracleStatus, WeightedSumOracle
from .vertexenum import DualHalfspace, DualPolyhedron, init_polyhedron

TOL_CONFIRM = 1e-6        # rays at most this long confirm a vertex exactly
OUTCOME_MERGE_TOL = 1e-6  # outcome points closer than this (inf-norm) are one point
DEFAULT_MAX_ITERATIONS = 100_000


class InfeasibleProblem(Exception):
    """The feasible set is empty."""


class NoIdealPoint(Exception):
    """Some objective is unbounded below over the feasible set."""


class IterationLimitReached(Exception):
    """Carries the partial result assembled from the polyhedron so far."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class SolverConfig:
    epsilon: float = 0.0
    tol_confirm: float = TOL_CONFIRM
    tol_geom: float = 1e-7
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    node_limit: int = 1_000_000
    oracle: str = "builtin"
    normalize: bool = True
    speculative_batch: int = 1
    keep_polyhedron: bool = False


@dataclass(frozen=True)
class IterationRecord:
    vertex: np.ndarray
    weight: np.ndarray
    ray_length: float
    action: str   # "confirm" | "suppress" | "cut"


@dataclass(frozen=True)
class ExtremePointSet:
    points: tuple[OutcomePoint, ...]
    dual_facets: tuple[DualHalfspace, ...]
    exact: bool
    dual_vertices: tuple[np.ndarray, ...] = ()
    iterations: tuple[IterationRecord, ...] = ()
    note: str = ""
    polyhedron: DualPolyhedron | None = field(default=None, repr=False, compare=False)


def complete_weight(w_bar) -> np.ndarray:
    """Lift a truncated weight back onto the unit simplex, clamping roundoff."""
    w_bar = np.asarray(w_bar, dtype=float)
    w = np.concatenate([w_bar, [1.0 - float(w_bar.sum())]])
    if np.any(w < -1e-6):
        raise ValueError(f"truncated weight {w_bar} lies outside the simplex")
    np.clip(w, 0.0, None, out=w)
    return w / w.sum()


def supporting_inequality(point: OutcomePoint) -> DualHalfspace:
    """Halfspace of the dual image induced by an outcome point.

    a <= sum_i w_i y_i with w_d eliminated gives
    (y_d - y_i) . w_bar + a <= y_d, already in normalized support form.
    """
    y = point.y
    return DualHalfspace(y[-1] - y[:-1], 1.0, float(y[-1]), support_point=point)


def ray_shoot(vertex_coords, problem: Problem, oracle: WeightedSumOracle):
    """Oracle support value below a dual vertex; returns (outcome, ray length)."""
    coords = np.asarray(vertex_coords, dtype=float)
    w = complete_weight(coords[:-1])
    res = oracle.solve_weighted_sum_lex(problem, w)
    if res.status is OracleStatus.INFEASIBLE:
        raise InfeasibleProblem("weighted-sum oracle reports an empty feasible set")
    if res.status is OracleStatus.UNBOUNDED:
        raise NoIdealPoint(f"weighted sum with weight {w} is unbounded below")
    ray_length = float(coords[-1]) - float(w @ res.point.y)
    return res.point, ray_length


def solve(problem: Problem, config: SolverConfig = SolverConfig(),
          oracle: WeightedSumOracle | None = None) -> ExtremePointSet:
    """Compute all non-dominated extreme points of a validated min-form problem."""
    if oracle is None:
        oracle = BuiltinOracle(node_limit=config.node_limit)
    d = problem.num_objectives

    w0 = np.full(d, 1.0 / d)
    first = oracle.solve_weighted_sum(problem, w0)
    if first.status is OracleStatus.INFEASIBLE:
        raise InfeasibleProblem("problem is infeasible")
    if first.status is OracleStatus.UNBOUNDED:
        raise NoIdealPoint("uniform weighted sum is unbounded below")
    poly = init_polyhedron(d, supporting_inequality(first.point))

    iterations: list[IterationRecord] = []
    exact = True
    batch = max(1, config.speculative_batch)
    count = 0

    def shoot(vid):
        return vid, ray_shoot(poly.vertices[vid].coords, problem, oracle)

    while True:
        targets = poly.unvisited_ids()[:batch]
        if not targets:
            break
        if count >= config.max_iterations:
            raise IterationLimitReached(
                f"iteration limit {config.max_iterations} reached",
                partial=_assemble(problem, poly, False, iterations,
                                  "iteration limit", config),
            )
        try:
            if len(targets) == 1:
                results = [shoot(targets[0])]
            else:
                with ThreadPoolExecutor(max_workers=len(targets)) as pool:
                    results = list(pool.map(shoot, targets))
        except NodeLimitExceeded as exc:
            raise IterationLimitReached(
                str(exc),
                partial=_assemble(problem, poly, False, iterations, "node limit", config),
            ) from exc
        for vid, (point, ray_length) in results:
            if vid not in poly.vertices:
                continue  # an earlier cut in this batch removed it
            count += 1
            vertex = poly.vertices[vid]
            scale = max(1.0, abs(vertex.a))
            threshold = max(config.tol_confirm, config.epsilon * scale)
            weight = complete_weight(vertex.w_bar)
            if ray_length <= threshold:
                vertex.visited = True
                action = "confirm"
                if ray_length > config.tol_confirm:
                    exact = False
                    action = "suppress"
            else:
                poly.cut(supporting_inequality(point), config.tol_geom)
                action = "cut"
            iterations.append(IterationRecord(vertex.coords.copy(), weight, ray_length, action))

    return _assemble(problem, poly, exact, iterations, "", config)


def _facet_tight_sets(poly: DualPolyhedron, tol_geom: float):
    """Map support halfspace id -> ids of vertices it is tight at."""
    tight: dict[int, list[int]] = {}
    for hid, hs in enumerate(poly.halfspaces):
        if not hs.is_support:
            continue
        ids = [
            vid
            for vid, v in poly.vertices.items()
            if abs(hs.violation(v.coords)) <= tol_geom * max(1.0, abs(v.a))
        ]
        tight[hid] = ids
    return tight


def _affine_dimension(points: list[np.ndarray], tol: float = 1e-9) -> int:
    if len(points) <= 1:
        return 0
    mat = np.array(points[1:]) - points[0]
    sv = np.linalg.svd(mat, compute_uv=False)
    scale = max(1.0, float(sv[0]) if len(sv) else 1.0)
    return int(np.sum(sv > tol * scale))


def _assemble(problem, poly, exact, iterations, note, config) -> ExtremePointSet:
    d = problem.num_objectives
    facets = []
    for hid, tight_ids in _facet_tight_sets(poly, config.tol_geom).items():
        if len(tight_ids) < d:
            continue
        coords = [poly.vertices[vid].coords for vid in tight_ids]
        if _affine_dimension(coords) != d - 1:
            continue  # support touches a lower-dimensional face only
        anchor = min(tight_ids, key=lambda vid: tuple(poly.vertices[vid].coords))
        facets.append((hid, anchor))

    points: list[OutcomePoint] = []
    kept_facets: list[DualHalfspace] = []
    facets.sort(key=lambda item: tuple(poly.halfspaces[item[0]].support_point.y))
    for hid, anchor in facets:
        hs = poly.halfspaces[hid]
        y = hs.support_point.y
        if any(np.max(np.abs(existing.y - y)) <= OUTCOME_MERGE_TOL for existing in points):
            continue
        weight = complete_weight(poly.vertices[anchor].w_bar)
        points.append(OutcomePoint(y, hs.support_point.x, weight))
        kept_facets.append(hs)

    dual_vertices = tuple(
        poly.vertices[vid].coords.copy()
        for vid in sorted(poly.vertices, key=lambda vid: tuple(poly.vertices[vid].coords))
    )
    return ExtremePointSet(
        points=tuple(points),
        dual_facets=tuple(kept_facets),
        exact=exact,
        dual_vertices=dual_vertices,
        iterations=tuple(iterations),
        note=note,
        polyhedron=poly if config.keep_polyhedron else None,
    )


@dataclass(frozen=True)
class ReportedPoint:
    y: np.ndarray
    weight: np.ndarray
    x: np.ndarray


def dual_to_primal_report(result: ExtremePointSet, sign_record=None, scaling=None):
    """Un-apply normalization and min-form flips for user-facing reporting.

    Outcome values are de-scaled and flipped back to the user's orientation.
    Certifying weights are de-scaled and renormalized; they certify in the
    minimization orientation.
    """
    reported = []
    for point in result.points:
        y = np.array(point.y, dtype=float)
        weight = point.certifying_weight
        weight = np.array(weight, dtype=float) if weight is not None else None
        if scaling is not None:
            y = scaling.descale_values(y)
            if weight is not None:
                weight = weight * scaling.factors
                weight = weight / weight.sum()
        if sign_record is not None:
            y = sign_record.flip_values(y)
        reported.append(ReportedPoint(y, weight, np.array(point.x, dtype=float)))
    return reported
