__all__ = [
    "IDENTITY_TOL",
    "STEP_TOL",
    "GEOMETRIC_TOL",
    "SUPERADDITIVE_TOL",
    "SKOROHOD_CONSTANT",
    "LIPSCHITZ_CONSTANT",
    "MIN_ORDER",
    "STABILITY_BAND",
    "DERIVATIVE_STEP",
    "DERIVATIVE_TOL",
    "FULL_TABLE_LIMIT",
    "REMAINDER_DECAY",
    "EXPONENTIAL_ERROR",
]

IDENTITY_TOL = 1e-12
"""Exact algebraic identities (Chen, additivity, superadditivity) on desk-scale grids"""

STEP_TOL = 1e-14
"""Step identities that hold by construction"""

GEOMETRIC_TOL = 1e-12

SUPERADDITIVE_TOL = 1e-12

SKOROHOD_CONSTANT = 8.0
"""Measure bound: dm_st <= 8 * ||g||_{0,[s,t]}"""

LIPSCHITZ_CONSTANT = 2.0
"""Sup-norm Lipschitz constant of the one-dimensional Skorohod map"""

MIN_ORDER = 1.9

STABILITY_BAND = 0.2

DERIVATIVE_STEP = 1e-5

DERIVATIVE_TOL = 1e-6

FULL_TABLE_LIMIT = 512
"""Most grid intervals on which the experiment harness builds O(n^3) pair tables"""

REMAINDER_DECAY = 3.5
"""Least shrink factor of the two-step remainder per dyadic refinement on smooth data"""

EXPONENTIAL_ERROR = 1e-5
"""Largest |y(1) - e| accepted at 2^10 steps"""
