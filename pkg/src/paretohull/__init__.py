"""Extreme points of multi-objective linear and mixed-integer programs.

The solver walks the weight-space image of the problem from the outside in:
every weighted-sum optimum contributes a supporting halfspace, every vertex
of the shrinking outer approximation is probed with another weighted-sum
solve, and the loop stops when no vertex can be pushed further.  What
remains is, in exact arithmetic, the full set of non-dominated extreme
points together with the facet description of the weight-space image.
"""

from .bench import Caps, CapsExceeded, GenSpec, brute_force_extreme_points, generate
from .dualbenson import (
    ExtremePointSet,
    InfeasibleProblem,
    IterationLimitReached,
    NoIdealPoint,
    SolverConfig,
    dual_to_primal_report,
    solve,
)
from .model import (
    Constraint,
    OutcomePoint,
    Problem,
    evaluate,
    point_violations,
    problems_equal,
    to_minimization,
    validate,
)
from .oracle import BuiltinOracle, UnitBallOracle, UnsupportedProblem, WeightedSumOracle, load_oracle
from .parsing import ParseError, parse_lp, parse_mps, parse_path, write_lp, write_mps
from .preprocess import Scaling, compute_ideal_point, normalize, payoff_table

__version__ = "0.1.0"

__all__ = [
    "BuiltinOracle",
    "Caps",
    "CapsExceeded",
    "Constraint",
    "ExtremePointSet",
    "GenSpec",
    "InfeasibleProblem",
    "IterationLimitReached",
    "NoIdealPoint",
    "OutcomePoint",
    "ParseError",
    "Problem",
    "Scaling",
    "SolverConfig",
    "UnitBallOracle",
    "UnsupportedProblem",
    "WeightedSumOracle",
    "brute_force_extreme_points",
    "compute_ideal_point",
    "dual_to_primal_report",
    "evaluate",
    "generate",
    "load_oracle",
    "normalize",
    "parse_lp",
    "parse_mps",
    "parse_path",
    "payoff_table",
    "point_violations",
    "problems_equal",
    "solve",
    "to_minimization",
    "validate",
    "write_lp",
    "write_mps",
    "__version__",
]
