"""Online vertex enumeration for the dual outer approximation.

The polyhedron lives in (w_1..w_{d-1}, a) space.  Its w-part is confined to
the unit simplex; the a-coordinate is unbounded below by construction and
only support halfspaces (normal_a = +1 after normalization) bound it from
above.  Consequences used throughout:

 * the recession cone is exactly the downward a-ray, so unbounded edges are
   vertical rays hanging below the d vertices pinned at simplex corners;
 * every cut has normal_a > 0, so cuts never remove a simplex corner, they
   only lower the corner vertex along its ray.

Vertices carry their incident halfspace ids, which drives the combinatorial
adjacency test (two vertices on the new facet are adjacent iff no third
vertex's incident set contains their common incidences).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import OutcomePoint

TOL_GEOM = 1e-7    # on-plane / violation classification
MERGE_TOL = 1e-9   # vertices closer than this (inf-norm) are one vertex


class CutIsRedundant(Exception):
    """No vertex strictly violates the cut; signals a caller logic error."""


class NumericalDegeneracy(Exception):
    """A new vertex failed certification against its incident halfspaces."""


@dataclass(frozen=True)
class DualHalfspace:
    """g.w + h*a <= r over (w_1..w_{d-1}, a)."""

    normal_w: np.ndarray
    normal_a: float
    offset: float
    support_point: OutcomePoint | None = None

    def __post_init__(self):
        g = np.array(self.normal_w, dtype=float)
        g.setflags(write=False)
        object.__setattr__(self, "normal_w", g)
        object.__setattr__(self, "normal_a", float(self.normal_a))
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def is_support(self) -> bool:
        return self.support_point is not None

    def violation(self, coords) -> float:
        return float(self.normal_w @ coords[:-1] + self.normal_a * coords[-1] - self.offset)

    def normalized(self) -> "DualHalfspace":
        h = self.normal_a
        if h <= TOL_GEOM:
            raise ValueError("only halfspaces bounding a from above can be normalized")
        if h == 1.0:
            return self
        return DualHalfspace(self.normal_w / h, 1.0, self.offset / h, self.support_point)


@dataclass
class DualVertex:
    coords: np.ndarray              # (d,) = (w_1..w_{d-1}, a)
    incident: set[int]
    visited: bool = False

    @property
    def w_bar(self) -> np.ndarray:
        return self.coords[:-1]

    @property
    def a(self) -> float:
        return float(self.coords[-1])


def _corner_point(dim: int, k: int) -> np.ndarray:
    """Simplex corner k in w-bar space: unit vectors for k < dim-1, origin for k = dim-1."""
    w = np.zeros(dim - 1)
    if k < dim - 1:
        w[k] = 1.0
    return w


def _corner_incident(dim: int, k: int) -> set[int]:
    # halfspace ids: 0..dim-2 are w_i >= 0, id dim-1 is sum(w) <= 1
    if k < dim - 1:
        return {i for i in range(dim - 1) if i != k} | {dim - 1}
    return set(range(dim - 1))


class DualPolyhedron:
    """Mutable V/H representation updated one cut at a time."""

    def __init__(self, dim: int):
        if dim < 2:
            raise ValueError("dual polyhedron needs dimension >= 2")
        self.dim = dim
        self.halfspaces: list[DualHalfspace] = []
        self.vertices: dict[int, DualVertex] = {}
        self.adjacency: dict[int, set[int]] = {}
        self.corner_vertex: dict[int, int] = {}   # simplex corner -> vertex id
        self.degeneracy_events = 0
        self._next_vertex_id = 0

    # -- construction ------------------------------------------------------

    @classmethod
    def initial(cls, dim: int, first_support: DualHalfspace) -> "DualPolyhedron":
        if not first_support.is_support:
            raise ValueError("initial halfspace must be a support")
        if abs(first_support.normal_a) <= TOL_GEOM:
            raise ValueError("degenerate first support: normal_a is zero")
        support = first_support.normalized()
        poly = cls(dim)
        for i in range(dim - 1):
            g = np.zeros(dim - 1)
            g[i] = -1.0
            poly.halfspaces.append(DualHalfspace(g, 0.0, 0.0))
        poly.halfspaces.append(DualHalfspace(np.ones(dim - 1), 0.0, 1.0))
        poly.halfspaces.append(support)
        support_id = dim
        for k in range(dim):
            w = _corner_point(dim, k)
            a = support.offset - float(support.normal_w @ w)
            vid = poly._add_vertex(
                np.concatenate([w, [a]]), _corner_incident(dim, k) | {support_id}
            )
            poly.corner_vertex[k] = vid
        ids = list(poly.vertices)
        for i, u in enumerate(ids):
            for v in ids[i + 1:]:
                poly._link(u, v)
        return poly

    def _add_vertex(self, coords, incident) -> int:
        vid = self._next_vertex_id
        self._next_vertex_id += 1
        self.vertices[vid] = DualVertex(np.asarray(coords, dtype=float), set(incident))
        self.adjacency[vid] = set()
        return vid

    def _link(self, u: int, v: int):
        self.adjacency[u].add(v)
        self.adjacency[v].add(u)

    def _drop_vertex(self, vid: int):
        for other in self.adjacency.pop(vid, ()):
            self.adjacency[other].discard(vid)
        del self.vertices[vid]

    # -- queries -----------------------------------------------------------

    def first_unvisited(self) -> int | None:
        """Unvisited vertex id with maximal a; ties go to lexicographically smaller w."""
        best = None
        best_key = None
        for vid, v in self.vertices.items():
            if v.visited:
                continue
            key = (-v.a, tuple(v.w_bar))
            if best_key is None or key < best_key:
                best_key = key
                best = vid
        return best

    def unvisited_ids(self) -> list[int]:
        order = sorted(
            (vid for vid, v in self.vertices.items() if not v.visited),
            key=lambda vid: (-self.vertices[vid].a, tuple(self.vertices[vid].w_bar)),
        )
        return order

    # -- cutting -----------------------------------------------------------

    def cut(self, halfspace: DualHalfspace, tol_geom: float = TOL_GEOM) -> list[int]:
        """Intersect with a new a-bounding halfspace; returns new vertex ids.

        Raises CutIsRedundant when nothing violates the cut, and
        NumericalDegeneracy when a new vertex cannot be certified.
        """
        hs = halfspace.normalized()
        hid = len(self.halfspaces)

        viol = {vid: hs.violation(v.coords) for vid, v in self.vertices.items()}
        out_ids = {vid for vid, s in viol.items() if s > tol_geom}
        on_ids = {vid for vid, s in viol.items() if -tol_geom <= s <= tol_geom}
        if not out_ids:
            raise CutIsRedundant("cut removes no vertex")
        self.halfspaces.append(hs)

        candidates = []  # dicts: coords, incident, neighbors (surviving side), corner
        for u in sorted(out_ids):
            vu = self.vertices[u]
            for v in sorted(self.adjacency[u]):
                if viol[v] < -tol_geom:
                    vv = self.vertices[v]
                    t = viol[u] / (viol[u] - viol[v])
                    candidates.append({
                        "coords": vu.coords + t * (vv.coords - vu.coords),
                        "incident": (vu.incident & vv.incident) | {hid},
                        "neighbors": [v],
                        "corner": None,
                    })
        for k, cid in self.corner_vertex.items():
            if cid in out_ids:
                w = _corner_point(self.dim, k)
                a = hs.offset - float(hs.normal_w @ w)
                candidates.append({
                    "coords": np.concatenate([w, [a]]),
                    "incident": _corner_incident(self.dim, k) | {hid},
                    "neighbors": [],
                    "corner": k,
                })

        for vid in on_ids:
            self.vertices[vid].incident.add(hid)

        merged: list[dict] = []
        for cand in candidates:
            target = None
            for kept in merged:
                if np.max(np.abs(kept["coords"] - cand["coords"])) <= MERGE_TOL:
                    target = kept
                    break
            if target is None:
                merged.append(cand)
            else:
                target["incident"] |= cand["incident"]
                target["neighbors"] += cand["neighbors"]
                if target["corner"] is None:
                    target["corner"] = cand["corner"]

        new_ids = []
        for cand in merged:
            coords, incident = cand["coords"], cand["incident"]
            absorbed = None
            for vid in on_ids:
                if np.max(np.abs(self.vertices[vid].coords - coords)) <= MERGE_TOL:
                    absorbed = vid
                    break
            if absorbed is not None:
                self.vertices[absorbed].incident |= incident
                if cand["corner"] is not None:
                    self.corner_vertex[cand["corner"]] = absorbed
                continue
            self._certify(coords, incident, tol_geom)
            vid = self._add_vertex(coords, incident)
            new_ids.append(vid)
            for neighbor in cand["neighbors"]:
                if neighbor in self.vertices:
                    self._link(vid, neighbor)
            if cand["corner"] is not None:
                self.corner_vertex[cand["corner"]] = vid

        for vid in out_ids:
            self._drop_vertex(vid)

        self._relink_on_facet(list(on_ids) + new_ids)
        return new_ids

    def _certify(self, coords, incident, tol_geom):
        """New vertices must sit on their incident planes and inside everything else."""
        scale = max(1.0, float(np.max(np.abs(coords))))
        budget = tol_geom * scale
        ok = all(abs(self.halfspaces[i].violation(coords)) <= budget for i in incident) and all(
            hs.violation(coords) <= budget for hs in self.halfspaces
        )
        if ok:
            return
        self.degeneracy_events += 1
        # refinement pass: re-solve the incident equality system
        rows = [np.concatenate([self.halfspaces[i].normal_w, [self.halfspaces[i].normal_a]])
                for i in incident]
        rhs = [self.halfspaces[i].offset for i in incident]
        refined, _, _, _ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
        if (
            np.max(np.abs(refined - coords)) <= 1e-5 * scale
            and all(abs(self.halfspaces[i].violation(refined)) <= budget for i in incident)
            and all(hs.violation(refined) <= budget for hs in self.halfspaces)
        ):
            coords[:] = refined
            return
        raise NumericalDegeneracy(
            f"vertex at {coords} not certifiable within {tol_geom}"
        )

    def _relink_on_facet(self, facet_ids: list[int]):
        """Combinatorial adjacency among vertices on the newest facet."""
        need = self.dim - 1
        for i, u in enumerate(facet_ids):
            inc_u = self.vertices[u].incident
            for v in facet_ids[i + 1:]:
                common = inc_u & self.vertices[v].incident
                if len(common) < need:
                    continue
                blocked = any(
                    t != u and t != v and common <= self.vertices[t].incident
                    for t in self.vertices
                )
                if not blocked:
                    self._link(u, v)

    # -- debugging ---------------------------------------------------------

    def dump(self) -> str:
        lines = [f"dual polyhedron dim={self.dim}"]
        for i, hs in enumerate(self.halfspaces):
            kind = "support" if hs.is_support else "simplex"
            tag = ""
            if hs.is_support:
                tag = " y=" + np.array2string(hs.support_point.y, precision=12)
            lines.append(
                f"H {i} {kind} g={np.array2string(hs.normal_w, precision=12)} "
                f"h={hs.normal_a:.12g} r={hs.offset:.12g}{tag}"
            )
        for vid in sorted(self.vertices):
            v = self.vertices[vid]
            flag = "visited" if v.visited else "open"
            lines.append(
                f"V {vid} coords={np.array2string(v.coords, precision=12)} {flag} "
                f"incident={sorted(v.incident)}"
            )
        for vid in sorted(self.adjacency):
            for other in sorted(self.adjacency[vid]):
                if vid < other:
                    lines.append(f"E {vid}-{other}")
        return "\n".join(lines) + "\n"


def init_polyhedron(dim: int, first_support: DualHalfspace) -> DualPolyhedron:
    """Simplex-box in w plus one support; exactly d vertices, all unvisited."""
    return DualPolyhedron.initial(dim, first_support)
