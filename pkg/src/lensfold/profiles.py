"""Convex lens profiles on [0, 1].

A profile is a C^2 function with zeros at both ends, positive inside, and
strictly negative second derivative (so the region between the profile and
its mirror image is a convex lens).  Profiles expose vectorized value and
first/second derivative evaluation plus the apex location.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import InvalidProfile

_CHECK_GRID_N = 2049
_END_TOL = 1e-12


class LensProfile:
    """Base class; subclasses fill in ell/dell/d2ell and params."""

    kind = "abstract"

    def ell(self, t):
        raise NotImplementedError

    def dell(self, t):
        raise NotImplementedError

    def d2ell(self, t):
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError

    def spec(self) -> dict:
        d = {"kind": self.kind}
        d.update(self.params())
        return d

    def __repr__(self):
        inner = ", ".join(f"{k}={v!r}" for k, v in self.params().items())
        return f"{type(self).__name__}({inner})"

    # -- validation ---------------------------------------------------------

    def validate(self) -> None:
        """Check endpoint zeros, interior positivity, strict concavity, and
        a unique interior apex.  Raises InvalidProfile."""
        for t_end in (0.0, 1.0):
            v = float(self.ell(np.asarray(t_end)))
            if abs(v) > _END_TOL:
                raise InvalidProfile(f"profile must vanish at t={t_end}: got {v:.3e}")
        grid = np.linspace(0.0, 1.0, _CHECK_GRID_N)
        interior = grid[1:-1]
        vals = np.asarray(self.ell(interior), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise InvalidProfile("profile evaluates to non-finite values")
        if np.any(vals <= 0.0):
            bad = float(interior[np.argmin(vals)])
            raise InvalidProfile(f"profile not positive inside (0,1), e.g. near t={bad:.4f}")
        curv = np.asarray(self.d2ell(interior), dtype=float)
        if not np.all(np.isfinite(curv)):
            raise InvalidProfile("second derivative evaluates to non-finite values")
        if np.any(curv >= 0.0):
            bad = float(interior[np.argmax(curv)])
            raise InvalidProfile(f"profile not strictly concave, e.g. near t={bad:.4f}")
        d0 = float(self.dell(np.asarray(0.0)))
        d1 = float(self.dell(np.asarray(1.0)))
        if not (d0 > 0.0 > d1):
            raise InvalidProfile("slope must be positive at t=0 and negative at t=1")

    @property
    def t_apex(self) -> float:
        """Location of the (unique) maximum, where the slope crosses zero."""
        if not hasattr(self, "_t_apex"):
            self._t_apex = float(brentq(
                lambda t: float(self.dell(np.asarray(t))), 0.0, 1.0,
                xtol=1e-15, rtol=8.881784197001252e-16))
        return self._t_apex

    @property
    def height(self) -> float:
        return float(self.ell(np.asarray(self.t_apex)))


class SineProfile(LensProfile):
    """amplitude * sin(pi t)."""

    kind = "sine"

    def __init__(self, amplitude: float):
        self.amplitude = float(amplitude)
        if self.amplitude <= 0.0:
            raise InvalidProfile("sine profile needs a positive amplitude")
        self.validate()

    def ell(self, t):
        return self.amplitude * np.sin(np.pi * np.asarray(t, dtype=float))

    def dell(self, t):
        return self.amplitude * np.pi * np.cos(np.pi * np.asarray(t, dtype=float))

    def d2ell(self, t):
        return -self.amplitude * np.pi ** 2 * np.sin(np.pi * np.asarray(t, dtype=float))

    def params(self):
        return {"amplitude": self.amplitude}


class CircularArcProfile(LensProfile):
    """Arc through (0,0), (1,0) with apex height a; needs 0 < a < 1/2 so the
    arc stays a graph over [0, 1]."""

    kind = "circular_arc"

    def __init__(self, height: float):
        a = float(height)
        if not 0.0 < a < 0.5:
            raise InvalidProfile("arc height must lie in (0,  1/2)")
        self.arc_height = a
        self.radius = (0.25 + a * a) / (2.0 * a)
        self._y0 = a - self.radius  # center height (negative)
        self.validate()

    def ell(self, t):
        x = np.asarray(t, dtype=float) - 0.5
        return np.sqrt(self.radius ** 2 - x * x) + self._y0

    def dell(self, t):
        x = np.asarray(t, dtype=float) - 0.5
        return -x / np.sqrt(self.radius ** 2 - x * x)

    def d2ell(self, t):
        x = np.asarray(t, dtype=float) - 0.5
        return -self.radius ** 2 / (self.radius ** 2 - x * x) ** 1.5

    def params(self):
        return {"height": self.arc_height}


class PolyProfile(LensProfile):
    """Polynomial sum(c_k t^k); the coefficients must already satisfy the
    lens constraints (validated on construction).  coefficients are in
    increasing-degree order."""

    kind = "poly"

    def __init__(self, coefficients):
        coeffs = [float(c) for c in np.atleast_1d(coefficients)]
        if len(coeffs) < 3:
            raise InvalidProfile("poly profile needs degree >= 2")
        self._poly = np.polynomial.Polynomial(coeffs)
        self._d1 = self._poly.deriv(1)
        self._d2 = self._poly.deriv(2)
        self.coefficients = coeffs
        self.validate()

    def ell(self, t):
        return self._poly(np.asarray(t, dtype=float))

    def dell(self, t):
        return self._d1(np.asarray(t, dtype=float))

    def d2ell(self, t):
        return self._d2(np.asarray(t, dtype=float))

    def params(self):
        return {"coefficients": list(self.coefficients)}


class TabulatedProfile(LensProfile):
    """Natural cubic spline through (t_k, y_k) knots.

    Endpoints must be (0, 0) and (1, 0).  Concavity is enforced at the
    interior knots of the fitted spline (the natural boundary condition
    pins the second derivative to zero at the end knots, so strict
    concavity is checked on the open interval).
    """

    kind = "tabulated"

    def __init__(self, knots_t, knots_y):
        t = np.asarray(knots_t, dtype=float)
        y = np.asarray(knots_y, dtype=float)
        if t.ndim != 1 or t.shape != y.shape or t.size < 4:
            raise InvalidProfile("tabulated profile needs >= 4 matching knots")
        if abs(t[0]) > _END_TOL or abs(t[-1] - 1.0) > _END_TOL:
            raise InvalidProfile("knots must span exactly [0, 1]")
        if np.any(np.diff(t) <= 0.0):
            raise InvalidProfile("knot abscissae must be strictly increasing")
        if abs(y[0]) > _END_TOL or abs(y[-1]) > _END_TOL:
            raise InvalidProfile("end knots must sit at height 0")
        self._spline = CubicSpline(t, y, bc_type="natural")
        self._dspline = self._spline.derivative(1)
        self._d2spline = self._spline.derivative(2)
        self.knots_t = t.tolist()
        self.knots_y = y.tolist()
        d2k = self._d2spline(t[1:-1])
        if np.any(d2k >= 0.0):
            raise InvalidProfile("spline is not concave at the interior knots")
        self.validate()

    def ell(self, t):
        return self._spline(np.asarray(t, dtype=float))

    def dell(self, t):
        return self._dspline(np.asarray(t, dtype=float))

    def d2ell(self, t):
        return self._d2spline(np.asarray(t, dtype=float))

    def params(self):
        return {"knots_t": list(self.knots_t), "knots_y": list(self.knots_y)}


_KINDS = {
    "sine": SineProfile,
    "circular_arc": CircularArcProfile,
    "poly": PolyProfile,
    "tabulated": TabulatedProfile,
}


def make_profile(kind: str, **params) -> LensProfile:
    """Factory used by the CLI / JSON configs."""
    try:
        cls = _KINDS[kind]
    except KeyError:
        raise InvalidProfile(
            f"unknown profile kind {kind!r}; choose from {sorted(_KINDS)}") from None
    try:
        return cls(**params)
    except TypeError as exc:
        raise InvalidProfile(f"bad parameters for {kind!r}: {exc}") from None


def profile_from_spec(spec: dict) -> LensProfile:
    spec = dict(spec)
    kind = spec.pop("kind", None)
    if kind is None:
        raise InvalidProfile("profile spec needs a 'kind' field")
    return make_profile(kind, **spec)
