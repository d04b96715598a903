import numpy as np
import pytest

from paretohull.model import Constraint, Problem, SENSE_GE


@pytest.fixture
def e1_problem():
    """Two-objective LP whose extreme points are (1,0) and (0,1).

    min (x1, x2)  s.t.  x1 + x2 >= 1,  0 <= x <= 1.
    """
    return Problem(
        objectives=np.eye(2),
        constraints=(Constraint(np.array([1.0, 1.0]), SENSE_GE, 1.0),),
        lower=np.zeros(2),
        upper=np.ones(2),
    )


@pytest.fixture
def e2_problem():
    """Integer sibling of e1 scaled by 2: extreme points (2,0) and (0,2).

    The fractional optimum (1,1) of the relaxation must never appear.
    """
    return Problem(
        objectives=2.0 * np.eye(2),
        constraints=(Constraint(np.array([1.0, 1.0]), SENSE_GE, 1.0),),
        lower=np.zeros(2),
        upper=np.ones(2),
        integer=np.array([True, True]),
    )
