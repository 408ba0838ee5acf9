"""Exception hierarchy for lensfold.

Every error raised by the library derives from LensfoldError so callers can
catch at one level.  Names describe the geometric failure, not the code path.
"""


class LensfoldError(Exception):
    """Base class for all lensfold errors."""


class ConfigError(LensfoldError):
    """Malformed job configuration (bad flag/JSON value)."""


class InvalidProfile(LensfoldError):
    """Profile violates the lens requirements (endpoint zeros, positivity,
    strict concavity, single interior maximum)."""


class DegenerateCurve(LensfoldError):
    """Sampled curve has coincident points, non-increasing arclength, or
    fewer samples than an operation needs."""


class OutOfDomain(LensfoldError):
    """Query parameter outside the curve/profile domain."""


class FrameUndefined(LensfoldError):
    """Frenet frame requested where curvature is below the floor."""


class InvalidSurfaceNormal(LensfoldError):
    """Supplied surface normal is not unit length or not orthogonal to the
    curve tangent within tolerance."""


class InvalidPattern(LensfoldError):
    """Tessellation parameters produce overlapping or malformed creases."""


class InfeasiblePattern(LensfoldError):
    """The fold-depth limit expression is non-positive somewhere: no fold
    depth exists for this pattern."""


class TrapezoidInfeasible(LensfoldError):
    """Cross-section trapezoid violates 0 < v* < v <= 2*ell + 2*r."""


class FoldDepthInfeasible(LensfoldError):
    """Fold depth v* at or below the feasibility limit: the turning-angle
    integrand is imaginary at some parameter value."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class SingularHeight(LensfoldError):
    """Trapezoid height vanishes at some parameter value."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class QuadratureDiverged(LensfoldError):
    """Fixed-step quadrature failed its step-halving consistency check."""


class TilingInconsistent(LensfoldError):
    """Tiled module copies disagree along a shared seam."""


class MVInconsistent(LensfoldError):
    """Fold angle changes sign along a single crease."""


class MVRuleViolation(LensfoldError):
    """A ruling bends against the side rule relative to its crease."""


class TangentRuling(LensfoldError):
    """A ruling is tangent to its crease (invalid pattern/parameters)."""


class NotACrease(LensfoldError):
    """Fold angle is zero along the whole curve (flat, unfolded state)."""
