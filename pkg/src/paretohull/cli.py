"""Command-line front end.

``paretohull solve`` reads a model file, computes the non-dominated extreme
points and writes three files next to the input: ``<prefix>_sol`` (JSON
solution), ``<prefix>_log`` (run log) and ``<prefix>_oracle`` (oracle call
statistics).  Floats in the solution file carry 17 significant digits, so
reading them back reproduces the exact doubles the solver produced.

Exit codes:
  0  solved to completion
  1  unreadable or invalid input, or an unsupported model/oracle
  2  the feasible set is empty
  3  some weighted sum is unbounded below (no ideal point)
  4  an iteration or node limit stopped the run; a partial, inexact
     solution file is still written

Environment overrides, read once per ``solve``/``check`` invocation:
  PARETOHULL_TOL_CONFIRM  ray length below which a vertex counts as final
  PARETOHULL_TOL_GEOM     geometric tolerance of the vertex enumeration
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import os
import pathlib
import sys

import numpy as np

from . import __version__
from .bench import (
    Caps,
    CapsExceeded,
    FAMILIES,
    GenSpec,
    brute_force_extreme_points,
    generate,
    match_point_sets,
)
from .dualbenson import (
    ExtremePointSet,
    InfeasibleProblem,
    IterationLimitReached,
    NoIdealPoint,
    SolverConfig,
    dual_to_primal_report,
    solve,
)
from .model import to_minimization, validate
from .oracle import UnsupportedProblem, load_oracle
from .parsing import ParseError, parse_path, write_path
from .preprocess import normalize

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2
EXIT_NO_IDEAL = 3
EXIT_LIMIT = 4


# ---------------------------------------------------------------------------
# JSON with full float precision


def _emit_json(value, out):
    if value is None:
        out.append("null")
    elif isinstance(value, bool):
        out.append("true" if value else "false")
    elif isinstance(value, (int, np.integer)):
        out.append(str(int(value)))
    elif isinstance(value, (float, np.floating)):
        v = float(value)
        out.append(format(v, ".17g") if math.isfinite(v) else "null")
    elif isinstance(value, str):
        out.append(json.dumps(value))
    elif isinstance(value, dict):
        out.append("{")
        for k, item in enumerate(value.items()):
            if k:
                out.append(", ")
            out.append(json.dumps(str(item[0])))
            out.append(": ")
            _emit_json(item[1], out)
        out.append("}")
    elif isinstance(value, (list, tuple, np.ndarray)):
        out.append("[")
        for k, item in enumerate(value):
            if k:
                out.append(", ")
            _emit_json(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps_17g(value) -> str:
    """JSON text with every float at 17 significant digits."""
    out: list[str] = []
    _emit_json(value, out)
    return "".join(out)


# ---------------------------------------------------------------------------
# solve


def _env_float(name, default):
    raw = os.environ.get(name, "").strip()
    if not raw:
        return default
    try:
        return float(raw)
    except ValueError as exc:
        raise SystemExit(f"{name}: not a number: {raw!r}") from exc


class _RunLog:
    def __init__(self, verbose):
        self.lines: list[str] = []
        self.verbose = verbose

    def add(self, message):
        stamp = datetime.datetime.now().isoformat(timespec="seconds")
        line = f"[{stamp}] {message}"
        self.lines.append(line)
        if self.verbose:
            print(line, file=sys.stderr)

    def write(self, path):
        pathlib.Path(path).write_text("\n".join(self.lines) + "\n")


def _solution_payload(problem, status, epsilon, result, reported):
    points = []
    for rp in reported:
        points.append({
            "y": list(rp.y),
            "weight": list(rp.weight) if rp.weight is not None else [],
            "x": {name: float(v) for name, v in zip(problem.variable_names, rp.x)},
        })
    facets = []
    if result is not None:
        for hs in result.dual_facets:
            facets.append({
                "normal": list(hs.normal_w) + [hs.normal_a],
                "offset": hs.offset,
            })
    return {
        "solver": {"name": "paretohull", "version": __version__},
        "problem": problem.name or "",
        "status": status,
        "exact": bool(result.exact) if result is not None else status == "infeasible",
        "epsilon": epsilon,
        "objective_names": list(problem.objective_names),
        "points": points,
        "dual_facets": facets,
        "note": result.note if result is not None else "",
    }


def _write_outputs(prefix, payload, log, oracle, result, dump_dual):
    sol_path = f"{prefix}_sol"
    pathlib.Path(sol_path).write_text(dumps_17g(payload) + "\n")
    stats = oracle.stats.as_dict() if hasattr(oracle, "stats") else {}
    stats["iterations"] = len(result.iterations) if result is not None else 0
    pathlib.Path(f"{prefix}_oracle").write_text(dumps_17g(stats) + "\n")
    if dump_dual and result is not None and result.polyhedron is not None:
        pathlib.Path(f"{prefix}_dual").write_text(result.polyhedron.dump() + "\n")
    log.add(f"wrote {sol_path}")
    log.write(f"{prefix}_log")
    return sol_path


def cmd_solve(args) -> int:
    log = _RunLog(args.verbose)
    prefix = args.output_prefix or str(pathlib.Path(args.file).with_suffix(""))
    try:
        problem = parse_path(args.file)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    log.add(
        f"parsed {args.file}: {problem.num_objectives} objectives, "
        f"{problem.num_variables} variables, {len(problem.constraints)} rows"
    )
    diags = validate(problem)
    if diags:
        for diag in diags:
            print(f"invalid model: {diag}", file=sys.stderr)
        return EXIT_INPUT

    try:
        oracle = load_oracle(args.oracle, node_limit=args.node_limit)
    except (ValueError, ImportError, AttributeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    min_problem, signs = to_minimization(problem)
    if signs.flipped:
        log.add(f"flipped objectives {list(signs.flipped)} to minimization")

    config = SolverConfig(
        epsilon=args.eps,
        tol_confirm=_env_float("PARETOHULL_TOL_CONFIRM", SolverConfig.tol_confirm),
        tol_geom=_env_float("PARETOHULL_TOL_GEOM", SolverConfig.tol_geom),
        max_iterations=args.max_iter,
        node_limit=args.node_limit,
        oracle=args.oracle,
        normalize=not args.no_normalize,
        speculative_batch=args.batch,
        keep_polyhedron=args.dump_dual,
    )

    scaling = None
    work = min_problem
    status, code, result = "optimal", EXIT_OK, None
    try:
        if config.normalize:
            work, scaling = normalize(min_problem, oracle)
            log.add(f"normalized objective ranges, factors {list(scaling.factors)}")
        result = solve(work, config, oracle)
    except InfeasibleProblem:
        status, code = "infeasible", EXIT_INFEASIBLE
        log.add("the feasible set is empty")
    except NoIdealPoint as exc:
        status, code = "no_ideal_point", EXIT_NO_IDEAL
        log.add(str(exc))
    except UnsupportedProblem as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except IterationLimitReached as exc:
        status, code, result = "limit", EXIT_LIMIT, exc.partial
        log.add(f"stopped early: {exc}")

    if result is not None:
        for k, rec in enumerate(result.iterations, start=1):
            log.add(
                f"iter {k}: {rec.action}, ray={rec.ray_length:.6g}, "
                f"weight={[format(v, '.6g') for v in rec.weight]}"
            )
        log.add(
            f"done: status={status}, {len(result.points)} points, "
            f"{len(result.dual_facets)} facets, exact={result.exact}"
        )
    reported = dual_to_primal_report(result, signs, scaling) if result is not None else []
    payload = _solution_payload(problem, status, args.eps, result, reported)
    sol_path = _write_outputs(prefix, payload, log, oracle, result, args.dump_dual)
    print(f"{status}: {len(reported)} extreme points -> {sol_path}")
    return code


# ---------------------------------------------------------------------------
# gen / check


def cmd_gen(args) -> int:
    spec = GenSpec(
        family=args.family,
        num_objectives=args.objectives,
        num_variables=args.variables,
        num_constraints=args.constraints,
        seed=args.seed,
        var_upper=args.var_upper,
        integer_ratio=args.integer_ratio,
    )
    problem = generate(spec)
    write_path(problem, args.output)
    print(f"{problem.name} -> {args.output}")
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        problem = parse_path(args.file)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    diags = validate(problem)
    if diags:
        for diag in diags:
            print(f"invalid model: {diag}", file=sys.stderr)
        return EXIT_INPUT
    min_problem, _ = to_minimization(problem)
    try:
        reference = brute_force_extreme_points(min_problem, Caps())
    except CapsExceeded as exc:
        print(f"error: instance too large for the reference check ({exc})", file=sys.stderr)
        return EXIT_INPUT
    config = SolverConfig(
        tol_confirm=_env_float("PARETOHULL_TOL_CONFIRM", SolverConfig.tol_confirm),
        tol_geom=_env_float("PARETOHULL_TOL_GEOM", SolverConfig.tol_geom),
    )
    try:
        work, scaling = normalize(min_problem)
        result = solve(work, config)
        got = [scaling.descale_values(p.y) for p in result.points]
    except InfeasibleProblem:
        got = []
    except NoIdealPoint as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_IDEAL
    expected = [p.y for p in reference.points]
    spurious, missing, worst = match_point_sets(got, expected, args.tolerance)
    ok = not spurious and not missing
    label = "PASS" if ok else "FAIL"
    print(
        f"{label}: solver found {len(got)} extreme points, reference "
        f"{len(expected)}, worst matched error {worst:.3g}"
    )
    for a in spurious:
        print(f"  solver only:    {list(a)}")
    for b in missing:
        print(f"  reference only: {list(b)}")
    return EXIT_OK if ok else EXIT_INPUT


# ---------------------------------------------------------------------------
# argument wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paretohull",
        description="Non-dominated extreme points of multi-objective LPs and MILPs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve a model file")
    p_solve.add_argument("file", help="model file (.lp, .mps or .mop)")
    p_solve.add_argument("-o", "--output-prefix", default=None,
                         help="prefix for the _sol/_log/_oracle files (default: input stem)")
    p_solve.add_argument("--eps", type=float, default=0.0,
                         help="coarsening threshold; 0 computes the exact set")
    p_solve.add_argument("--no-normalize", action="store_true",
                         help="skip objective range normalization")
    p_solve.add_argument("--oracle", default="builtin",
                         help='"builtin" or a module:attr plugin path')
    p_solve.add_argument("--max-iter", type=int, default=SolverConfig.max_iterations,
                         help="vertex probe limit before stopping with a partial result")
    p_solve.add_argument("--node-limit", type=int, default=SolverConfig.node_limit,
                         help="branch-and-bound node budget per oracle call")
    p_solve.add_argument("--batch", type=int, default=1,
                         help="probe up to this many vertices per round")
    p_solve.add_argument("--dump-dual", action="store_true",
                         help="also write <prefix>_dual with the final weight-space polyhedron")
    p_solve.add_argument("-v", "--verbose", action="store_true",
                         help="echo the run log to stderr")
    p_solve.set_defaults(func=cmd_solve)

    p_gen = sub.add_parser("gen", help="generate a random instance file")
    p_gen.add_argument("--family", choices=FAMILIES, default="moilp_general")
    p_gen.add_argument("-d", "--objectives", type=int, default=3)
    p_gen.add_argument("-n", "--variables", type=int, default=6)
    p_gen.add_argument("-m", "--constraints", type=int, default=3)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--var-upper", type=int, default=10)
    p_gen.add_argument("--integer-ratio", type=float, default=0.5)
    p_gen.add_argument("-o", "--output", required=True, help="target file (.lp or .mps)")
    p_gen.set_defaults(func=cmd_gen)

    p_check = sub.add_parser("check", help="compare the solver against brute force")
    p_check.add_argument("file", help="model file small enough to enumerate")
    p_check.add_argument("--tolerance", type=float, default=1e-5)
    p_check.set_defaults(func=cmd_check)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
