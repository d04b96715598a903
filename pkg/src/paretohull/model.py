"""In-memory model of multi-objective (mixed-integer, optionally quadratic) programs.

A problem holds d linear objective vectors (optionally with quadratic parts),
linear rows with optional quadratic parts, variable bounds and integrality
marks.  The canonical solver orientation is minimization; `to_minimization`
flips max objectives and records the flips so results can be reported the
way the user wrote the problem.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

SENSE_LE = "<="
SENSE_EQ = "="
SENSE_GE = ">="
ROW_SENSES = (SENSE_LE, SENSE_EQ, SENSE_GE)

MIN = "min"
MAX = "max"

TOL_EQ = 1e-6     # |y - f(x)| tolerance when checking stored witnesses
TOL_FEAS = 1e-6   # constraint violation tolerance for witness checks
TOL_INT = 1e-6    # integrality tolerance for witness checks


def _freeze(values, dtype=float):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Constraint:
    """One row ``a.x (+ x'Qx) <sense> rhs``."""

    coeffs: np.ndarray
    sense: str
    rhs: float
    quad: np.ndarray | None = None
    name: str = ""

    def __post_init__(self):
        coeffs = _freeze(self.coeffs)
        if coeffs.ndim != 1:
            raise ValueError("constraint coefficients must be a vector")
        if self.sense not in ROW_SENSES:
            raise ValueError(f"unknown row sense {self.sense!r}")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "rhs", float(self.rhs))
        if self.quad is not None:
            object.__setattr__(self, "quad", _freeze(self.quad))

    @property
    def is_linear(self) -> bool:
        return self.quad is None


@dataclass(frozen=True)
class Problem:
    """Multi-objective program in canonical array form.

    Fields left as None default to: bounds [0, +inf), all variables
    continuous, all objectives minimized, no quadratic parts, generated
    names ``x{j}`` / ``obj{i}``.
    """

    objectives: np.ndarray
    constraints: tuple[Constraint, ...] = ()
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None
    integer: np.ndarray | None = None
    senses: tuple[str, ...] | None = None
    objective_quads: tuple[np.ndarray | None, ...] | None = None
    variable_names: tuple[str, ...] | None = None
    objective_names: tuple[str, ...] | None = None
    name: str = ""

    def __post_init__(self):
        try:
            obj = np.array(self.objectives, dtype=float)
        except ValueError as exc:
            raise ValueError(f"objective rows have inconsistent dimensions: {exc}") from exc
        if obj.ndim != 2:
            raise ValueError("objectives must be a (num_objectives, num_variables) matrix")
        d, n = obj.shape
        obj.setflags(write=False)
        object.__setattr__(self, "objectives", obj)

        object.__setattr__(self, "constraints", tuple(self.constraints))

        lower = np.zeros(n) if self.lower is None else np.array(self.lower, dtype=float)
        upper = np.full(n, np.inf) if self.upper is None else np.array(self.upper, dtype=float)
        integer = (
            np.zeros(n, dtype=bool)
            if self.integer is None
            else np.array(self.integer, dtype=bool)
        )
        for arr, label in ((lower, "lower"), (upper, "upper"), (integer, "integer")):
            if arr.shape != (n,):
                raise ValueError(f"{label} must have length {n}")
        lower.setflags(write=False)
        upper.setflags(write=False)
        integer.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "integer", integer)

        senses = (MIN,) * d if self.senses is None else tuple(self.senses)
        object.__setattr__(self, "senses", senses)

        quads = (
            (None,) * d
            if self.objective_quads is None
            else tuple(None if q is None else _freeze(q) for q in self.objective_quads)
        )
        object.__setattr__(self, "objective_quads", quads)

        vnames = (
            tuple(f"x{j}" for j in range(n))
            if self.variable_names is None
            else tuple(self.variable_names)
        )
        onames = (
            tuple(f"obj{i}" for i in range(d))
            if self.objective_names is None
            else tuple(self.objective_names)
        )
        object.__setattr__(self, "variable_names", vnames)
        object.__setattr__(self, "objective_names", onames)

    @property
    def num_objectives(self) -> int:
        return self.objectives.shape[0]

    @property
    def num_variables(self) -> int:
        return self.objectives.shape[1]

    @property
    def num_integer(self) -> int:
        return int(self.integer.sum())

    @property
    def num_continuous(self) -> int:
        return self.num_variables - self.num_integer

    @property
    def is_linear(self) -> bool:
        if any(q is not None for q in self.objective_quads):
            return False
        return all(c.is_linear for c in self.constraints)


@dataclass(frozen=True)
class OutcomePoint:
    """Outcome vector together with the solution that attains it."""

    y: np.ndarray
    x: np.ndarray
    certifying_weight: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "y", _freeze(self.y))
        object.__setattr__(self, "x", _freeze(self.x))
        if self.certifying_weight is not None:
            object.__setattr__(self, "certifying_weight", _freeze(self.certifying_weight))


@dataclass(frozen=True)
class SignRecord:
    """Indices of objectives negated by `to_minimization`.

    Applying `flip_values` twice is the identity, so the same record maps
    solver outcomes back to the user's orientation.
    """

    flipped: tuple[int, ...] = ()

    def flip_values(self, y):
        y = np.array(y, dtype=float)
        for i in self.flipped:
            y[i] = -y[i]
        return y


def validate(problem: Problem) -> list[str]:
    """Collect human-readable diagnostics; an empty list means the model is usable."""
    diags = []
    d = problem.num_objectives
    n = problem.num_variables
    if d < 2:
        diags.append(f"problem needs >=2 objectives, got {d}")
    if n < 1:
        diags.append("problem has no variables")
    if not np.all(np.isfinite(problem.objectives)):
        diags.append("objective coefficients must be finite")

    if len(problem.senses) != d:
        diags.append(f"expected {d} objective senses, got {len(problem.senses)}")
    for i, sense in enumerate(problem.senses):
        if sense not in (MIN, MAX):
            diags.append(f"objective {i}: unknown sense {sense!r}")

    if len(problem.objective_quads) != d:
        diags.append(f"expected {d} objective quadratic blocks, got {len(problem.objective_quads)}")
    for i, quad in enumerate(problem.objective_quads):
        if quad is None:
            continue
        if quad.shape != (n, n):
            diags.append(f"objective {i}: quadratic block must be {n}x{n}, got {quad.shape}")
        elif not np.allclose(quad, quad.T, atol=1e-9):
            diags.append(f"objective {i}: quadratic block is not symmetric")

    for k, row in enumerate(problem.constraints):
        label = row.name or f"row {k}"
        if row.coeffs.shape != (n,):
            diags.append(f"{label}: coefficient vector has length {row.coeffs.shape[0]}, expected {n}")
        if not np.all(np.isfinite(row.coeffs)):
            diags.append(f"{label}: coefficients must be finite")
        if not math.isfinite(row.rhs):
            diags.append(f"{label}: right-hand side must be finite")
        if row.quad is not None:
            if row.quad.shape != (n, n):
                diags.append(f"{label}: quadratic block must be {n}x{n}, got {row.quad.shape}")
            elif not np.allclose(row.quad, row.quad.T, atol=1e-9):
                diags.append(f"{label}: quadratic block is not symmetric")

    for j in range(n):
        lo, hi = problem.lower[j], problem.upper[j]
        if math.isnan(lo) or math.isnan(hi):
            diags.append(f"variable {problem.variable_names[j]}: bound is NaN")
        elif lo > hi + 1e-12:
            diags.append(
                f"variable {problem.variable_names[j]}: lower bound {lo} exceeds upper bound {hi}"
            )

    if len(problem.variable_names) != n:
        diags.append(f"expected {n} variable names, got {len(problem.variable_names)}")
    elif len(set(problem.variable_names)) != n:
        diags.append("variable names are not unique")
    if len(problem.objective_names) != d:
        diags.append(f"expected {d} objective names, got {len(problem.objective_names)}")
    elif len(set(problem.objective_names)) != d:
        diags.append("objective names are not unique")

    return diags


def to_minimization(problem: Problem) -> tuple[Problem, SignRecord]:
    """Return an all-min copy plus the record of which objectives were negated."""
    flipped = tuple(i for i, s in enumerate(problem.senses) if s == MAX)
    if not flipped:
        return problem, SignRecord(())
    objectives = problem.objectives.copy()
    quads = list(problem.objective_quads)
    for i in flipped:
        objectives[i] = -objectives[i]
        if quads[i] is not None:
            quads[i] = -quads[i]
    flipped_problem = Problem(
        objectives=objectives,
        constraints=problem.constraints,
        lower=problem.lower,
        upper=problem.upper,
        integer=problem.integer,
        senses=(MIN,) * problem.num_objectives,
        objective_quads=tuple(quads),
        variable_names=problem.variable_names,
        objective_names=problem.objective_names,
        name=problem.name,
    )
    return flipped_problem, SignRecord(flipped)


def evaluate(problem: Problem, x) -> np.ndarray:
    """Objective vector f(x); quadratic parts contribute x'Px."""
    x = np.asarray(x, dtype=float)
    if x.shape != (problem.num_variables,):
        raise ValueError(f"point has dimension {x.shape}, expected ({problem.num_variables},)")
    y = problem.objectives @ x
    for i, quad in enumerate(problem.objective_quads):
        if quad is not None:
            y[i] += x @ quad @ x
    return y


def point_violations(problem, x, tol_feas=TOL_FEAS, tol_int=TOL_INT) -> list[str]:
    """Bound, row and integrality violations of x beyond the given tolerances."""
    x = np.asarray(x, dtype=float)
    out = []
    for j in range(problem.num_variables):
        if x[j] < problem.lower[j] - tol_feas or x[j] > problem.upper[j] + tol_feas:
            out.append(
                f"variable {problem.variable_names[j]}={x[j]} outside "
                f"[{problem.lower[j]}, {problem.upper[j]}]"
            )
        if problem.integer[j] and abs(x[j] - round(x[j])) > tol_int:
            out.append(f"variable {problem.variable_names[j]}={x[j]} is not integral")
    for k, row in enumerate(problem.constraints):
        lhs = float(row.coeffs @ x)
        if row.quad is not None:
            lhs += float(x @ row.quad @ x)
        label = row.name or f"row {k}"
        if row.sense == SENSE_LE and lhs > row.rhs + tol_feas:
            out.append(f"{label}: {lhs} > {row.rhs}")
        elif row.sense == SENSE_GE and lhs < row.rhs - tol_feas:
            out.append(f"{label}: {lhs} < {row.rhs}")
        elif row.sense == SENSE_EQ and abs(lhs - row.rhs) > tol_feas:
            out.append(f"{label}: {lhs} != {row.rhs}")
    return out


def problems_equal(a: Problem, b: Problem) -> bool:
    """Exact field-by-field equality, float-for-float."""
    if a.num_objectives != b.num_objectives or a.num_variables != b.num_variables:
        return False
    if not np.array_equal(a.objectives, b.objectives):
        return False
    if a.senses != b.senses or a.variable_names != b.variable_names:
        return False
    if a.objective_names != b.objective_names:
        return False
    if not (
        np.array_equal(a.lower, b.lower)
        and np.array_equal(a.upper, b.upper)
        and np.array_equal(a.integer, b.integer)
    ):
        return False
    for qa, qb in zip(a.objective_quads, b.objective_quads):
        if (qa is None) != (qb is None):
            return False
        if qa is not None and not np.array_equal(qa, qb):
            return False
    if len(a.constraints) != len(b.constraints):
        return False
    for ra, rb in zip(a.constraints, b.constraints):
        if ra.sense != rb.sense or ra.rhs != rb.rhs or ra.name != rb.name:
            return False
        if not np.array_equal(ra.coeffs, rb.coeffs):
            return False
        if (ra.quad is None) != (rb.quad is None):
            return False
        if ra.quad is not None and not np.array_equal(ra.quad, rb.quad):
            return False
    return True
