"""Exception types shared across the geometry and equilibrium modules."""


class GeometryError(Exception):
    """Base class for all domain errors raised by this package."""


class NonConvexInput(GeometryError):
    """Input vertices do not describe a convex body."""


class DegenerateInput(GeometryError):
    """Input collapses below the geometric tolerance (zero area/volume, collinear ring, ...)."""


class ReferenceOutside(GeometryError):
    """Reference point is not strictly interior to the body."""


class DegenerateConfiguration(GeometryError):
    """An equilibrium configuration sits within tolerance of a transition."""


class TooFewStable(GeometryError):
    """Operation needs at least three stable points."""


class DegeneratePresent(GeometryError):
    """A check that requires nondegenerate equilibria found a degenerate one."""


class FixtureError(GeometryError):
    """A construction assertion of a built-in fixture failed."""
