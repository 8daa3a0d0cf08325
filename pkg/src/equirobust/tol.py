"""Geometric tolerance policy.

All within-tolerance tests use a single absolute epsilon interpreted on
coordinates scaled to unit diameter, i.e. a length comparison on a body of
diameter D uses ``EPS_GEOM * D``.  The default can be overridden through the
``EQ_EPS`` environment variable (read once at import time).
"""

import os


def _eps_from_env() -> float:
    raw = os.environ.get("EQ_EPS")
    if raw is None:
        return 1e-9
    value = float(raw)
    if not value > 0.0:
        raise ValueError("EQ_EPS must be a positive number")
    return value


#: Absolute tolerance on unit-diameter coordinates.
EPS_GEOM: float = _eps_from_env()

#: Tolerance used for the closed inequalities of the strip-cover predicate.
EPS_COVER: float = 1e-12
