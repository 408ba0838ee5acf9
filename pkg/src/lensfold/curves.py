"""Arc-length sampled curves in 2D/3D and their differential frames.

Curves are stored as monotone arc-length samples plus point arrays.  A curve
may optionally carry an *evaluator* (analytic point/velocity/acceleration as
functions of arc length); when present it is used for resampling and frames,
otherwise finite differences on the stored samples are used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline

from .config import DEFAULT_TOLERANCES, QUADRATURE_PANELS, Tolerances
from .errors import (DegenerateCurve, FrameUndefined, InvalidSurfaceNormal,
                     OutOfDomain)
from .numerics import (CumulativeIntegral, fd_first_uniform,
                       fd_second_uniform, unit_rows)


class CurveEvaluator:
    """Analytic curve: point / first / second derivative w.r.t. arc length."""

    def point(self, s):
        raise NotImplementedError

    def velocity(self, s):
        raise NotImplementedError

    def acceleration(self, s):
        raise NotImplementedError


class FunctionEvaluator(CurveEvaluator):
    def __init__(self, point: Callable, velocity: Callable,
                 acceleration: Callable):
        self._p, self._v, self._a = point, velocity, acceleration

    def point(self, s):
        return self._p(s)

    def velocity(self, s):
        return self._v(s)

    def acceleration(self, s):
        return self._a(s)


class PlaneGraphEvaluator(CurveEvaluator):
    """Arc-length parameterization of a graph curve x -> (x, f(x)).

    Needs f, f', f'' on [x0, x1].  Arc length is measured from x0.  Also
    exposes the x <-> s maps, which downstream code uses to pull crease
    samples back to the flat sheet.
    """

    def __init__(self, f, df, d2f, x0: float = 0.0, x1: float = 1.0,
                 panels: int = QUADRATURE_PANELS):
        self.f, self.df, self.d2f = f, df, d2f
        self.x0, self.x1 = float(x0), float(x1)
        self._arc = CumulativeIntegral(
            lambda x: np.sqrt(1.0 + self.df(x) ** 2), self.x0, self.x1, panels)
        self.length = self._arc.total

    def x_of_s(self, s):
        return self._arc.inverse(s)

    def s_of_x(self, x):
        return self._arc.value(x)

    def point(self, s):
        x = self.x_of_s(s)
        return np.stack([x, self.f(x)], axis=-1)

    def velocity(self, s):
        x = self.x_of_s(s)
        d = self.df(x)
        sp = np.sqrt(1.0 + d * d)
        return np.stack([1.0 / sp, d / sp], axis=-1)

    def acceleration(self, s):
        # d/ds of the unit tangent; magnitude is |f''| / (1 + f'^2)^(3/2)
        x = self.x_of_s(s)
        d, dd = self.df(x), self.d2f(x)
        sp4 = (1.0 + d * d) ** 2
        return np.stack([-d * dd / sp4, dd / sp4], axis=-1)


def _validate_samples(s: np.ndarray, points: np.ndarray, dim: int) -> None:
    if points.ndim != 2 or points.shape[1] != dim:
        raise DegenerateCurve(f"points must be (n, {dim}), got {points.shape}")
    if s.ndim != 1 or s.shape[0] != points.shape[0]:
        raise DegenerateCurve("arc-length array does not match point array")
    if s.shape[0] < 2:
        raise DegenerateCurve("a curve needs at least two samples")
    if not (np.all(np.isfinite(s)) and np.all(np.isfinite(points))):
        raise DegenerateCurve("non-finite curve data")
    ds = np.diff(s)
    if np.any(ds <= 0.0):
        raise DegenerateCurve("arc length must be strictly increasing")
    chord = np.linalg.norm(np.diff(points, axis=0), axis=1)
    if np.any(chord == 0.0):
        raise DegenerateCurve("repeated consecutive points")
    # a chord can never exceed the arc that subtends it
    if np.any(chord > ds * (1.0 + 1e-9) + 1e-15):
        raise DegenerateCurve("chord longer than claimed arc length")


@dataclass
class SampledCurve2D:
    s: np.ndarray
    points: np.ndarray
    evaluator: Optional[CurveEvaluator] = field(default=None, repr=False)

    def __post_init__(self):
        self.s = np.asarray(self.s, dtype=float)
        self.points = np.asarray(self.points, dtype=float)
        _validate_samples(self.s, self.points, 2)

    @property
    def n(self) -> int:
        return self.s.shape[0]

    @property
    def length(self) -> float:
        return float(self.s[-1] - self.s[0])


@dataclass
class SampledCurve3D:
    s: np.ndarray
    points: np.ndarray
    evaluator: Optional[CurveEvaluator] = field(default=None, repr=False)

    def __post_init__(self):
        self.s = np.asarray(self.s, dtype=float)
        self.points = np.asarray(self.points, dtype=float)
        _validate_samples(self.s, self.points, 3)

    @property
    def n(self) -> int:
        return self.s.shape[0]

    @property
    def length(self) -> float:
        return float(self.s[-1] - self.s[0])


@dataclass
class Frame3D:
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    curvature: float
    torsion: float


def curve_from_evaluator(ev: CurveEvaluator, length: float, n: int,
                         dim: int = 3):
    s = np.linspace(0.0, length, n)
    pts = np.atleast_2d(ev.point(s))
    cls = SampledCurve3D if dim == 3 else SampledCurve2D
    return cls(s=s, points=pts, evaluator=ev)


def resample_arclength(curve, n: int):
    """Resample a curve at n uniform arc-length stations.

    With an evaluator the points are exact; otherwise a cubic spline through
    the stored samples is evaluated.  Resampling an already-uniform curve at
    its own n reproduces the stored points (interpolation property), so the
    operation is idempotent.
    """
    if n < 2:
        raise DegenerateCurve("resample needs n >= 2")
    targets = np.linspace(curve.s[0], curve.s[-1], n)
    if curve.evaluator is not None:
        pts = np.atleast_2d(curve.evaluator.point(targets))
    else:
        spline = CubicSpline(curve.s, curve.points, axis=0)
        pts = spline(targets)
        # exact-by-construction at coincident stations, snap away fp fuzz
        if n == curve.n:
            keep = np.isclose(targets, curve.s, rtol=0.0, atol=1e-13 * max(1.0, curve.length))
            pts[keep] = curve.points[keep]
    return type(curve)(s=targets, points=pts, evaluator=curve.evaluator)


def _uniform_ds(curve) -> float:
    ds = np.diff(curve.s)
    if np.max(np.abs(ds - ds[0])) > 1e-9 * max(1.0, curve.length):
        raise DegenerateCurve("finite-difference frames need uniform arc-length samples")
    return float(ds[0])


def fd_velocity(curve) -> np.ndarray:
    """dX/ds at every sample via finite differences."""
    return fd_first_uniform(curve.points, _uniform_ds(curve))


def fd_acceleration(curve) -> np.ndarray:
    return fd_second_uniform(curve.points, _uniform_ds(curve))


def tangent_norm_defect(curve) -> float:
    """max | ||dX/ds|| - 1 | over the interior samples.

    Analytic curves use their closure (defect is then pure quadrature
    round-off); sampled-only curves fall back to finite differences, whose
    defect is 4th-order truncation error.  Endpoint samples use 2nd-order
    one-sided stencils and are excluded.
    """
    if curve.evaluator is not None:
        v = np.atleast_2d(curve.evaluator.velocity(curve.s))
    else:
        v = fd_velocity(curve)
    sp = np.linalg.norm(v, axis=1)
    return float(np.max(np.abs(sp[1:-1] - 1.0)))


def _query_index(curve, s: float) -> int:
    lo, hi = curve.s[0], curve.s[-1]
    if s < lo - 1e-12 or s > hi + 1e-12:
        raise OutOfDomain(f"s={s} outside [{lo}, {hi}]")
    i = int(round((s - lo) / (hi - lo) * (curve.n - 1)))
    return min(max(i, 0), curve.n - 1)


def frenet_2d(curve: SampledCurve2D, s: float,
              tol: Tolerances = DEFAULT_TOLERANCES):
    """(tangent, normal, curvature) at arc length s.

    k = ||dt/ds|| >= 0 and n = (dt/ds)/k points toward the center of
    curvature; on a straight stretch (k < k_min) n is None.
    """
    if s < curve.s[0] - 1e-12 or s > curve.s[-1] + 1e-12:
        raise OutOfDomain(f"s={s} outside [{curve.s[0]}, {curve.s[-1]}]")
    if curve.evaluator is not None:
        sq = np.asarray([s], dtype=float)
        v = np.atleast_2d(curve.evaluator.velocity(sq))[0]
        a = np.atleast_2d(curve.evaluator.acceleration(sq))[0]
    else:
        i = _query_index(curve, s)
        v = fd_velocity(curve)[i]
        a = fd_acceleration(curve)[i]
    t = v / np.linalg.norm(v)
    a_perp = a - (a @ t) * t
    k = float(np.linalg.norm(a_perp))
    n = a_perp / k if k >= tol.k_min else None
    return t, n, k


def signed_curvature_2d(curve: SampledCurve2D) -> np.ndarray:
    """Signed curvature at every sample (positive = bending toward the
    left-hand normal)."""
    if curve.evaluator is not None:
        v = np.atleast_2d(curve.evaluator.velocity(curve.s))
        a = np.atleast_2d(curve.evaluator.acceleration(curve.s))
    else:
        v = fd_velocity(curve)
        a = fd_acceleration(curve)
    v = unit_rows(v)
    return v[:, 0] * a[:, 1] - v[:, 1] * a[:, 0]


@dataclass
class FrameField:
    """Frenet data at every sample of a 3D curve.

    ``defined`` flags samples whose curvature clears k_min; N/B/torsion rows
    are NaN where it does not.
    """
    s: np.ndarray
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    curvature: np.ndarray
    torsion: np.ndarray
    defined: np.ndarray


def frenet_frames_3d(curve: SampledCurve3D,
                     tol: Tolerances = DEFAULT_TOLERANCES,
                     use_evaluator: bool = True) -> FrameField:
    """Frenet frames at every sample.

    T from dX/ds; N from the tangent-orthogonal part of d2X/ds2 (explicitly
    re-orthogonalized against T); B = T x N.  Torsion comes from a finite
    difference of B even on analytic curves; it is reported, not certified.
    """
    if use_evaluator and curve.evaluator is not None:
        v = np.atleast_2d(curve.evaluator.velocity(curve.s))
        a = np.atleast_2d(curve.evaluator.acceleration(curve.s))
    else:
        v = fd_velocity(curve)
        a = fd_acceleration(curve)
    T = unit_rows(v)
    # remove any tangential leak before measuring curvature
    a_perp = a - (np.sum(a * T, axis=1, keepdims=True)) * T
    K = np.linalg.norm(a_perp, axis=1)
    defined = K >= tol.k_min
    N = np.full_like(T, np.nan)
    N[defined] = a_perp[defined] / K[defined, None]
    B = np.full_like(T, np.nan)
    B[defined] = np.cross(T[defined], N[defined])
    B[defined] = unit_rows(B[defined])
    torsion = np.full(curve.n, np.nan)
    if np.all(defined):
        dB = fd_first_uniform(B, _uniform_ds(curve))
        torsion = -np.sum(dB * N, axis=1)
    return FrameField(s=curve.s.copy(), T=T, N=N, B=B, curvature=K,
                      torsion=torsion, defined=defined)


def frenet_3d(curve: SampledCurve3D, s: float,
              tol: Tolerances = DEFAULT_TOLERANCES) -> Frame3D:
    """Frenet frame at a single arc-length station (FD queries snap to the
    nearest stored sample).  Raises FrameUndefined below the curvature floor.
    """
    if s < curve.s[0] - 1e-12 or s > curve.s[-1] + 1e-12:
        raise OutOfDomain(f"s={s} outside [{curve.s[0]}, {curve.s[-1]}]")
    frames = frenet_frames_3d(curve, tol=tol)
    if curve.evaluator is not None:
        sq = np.asarray([s], dtype=float)
        v = np.atleast_2d(curve.evaluator.velocity(sq))[0]
        a = np.atleast_2d(curve.evaluator.acceleration(sq))[0]
        T = v / np.linalg.norm(v)
        a_perp = a - (a @ T) * T
        K = float(np.linalg.norm(a_perp))
        if K < tol.k_min:
            raise FrameUndefined(f"curvature {K:.3e} below floor at s={s}")
        N = a_perp / K
        B = np.cross(T, N)
        i = _query_index(curve, s)
        tau = float(frames.torsion[i]) if frames.defined[i] else float("nan")
        return Frame3D(T=T, N=N, B=B, curvature=K, torsion=tau)
    i = _query_index(curve, s)
    if not frames.defined[i]:
        raise FrameUndefined(
            f"curvature {frames.curvature[i]:.3e} below floor at s={s}")
    return Frame3D(T=frames.T[i], N=frames.N[i], B=frames.B[i],
                   curvature=float(frames.curvature[i]),
                   torsion=float(frames.torsion[i]))


def geodesic_curvature(curve: SampledCurve3D, normals: np.ndarray,
                       tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Geodesic curvature of a surface curve given the surface unit normal
    at every sample: k_g = d2X/ds2 . (P x T).

    Uses finite differences of the stored points so the result is
    independent of how the surface was generated.  P must be unit and
    orthogonal to the curve tangent.
    """
    normals = np.asarray(normals, dtype=float)
    if normals.shape != curve.points.shape:
        raise InvalidSurfaceNormal("normal array must match curve samples")
    v = unit_rows(fd_velocity(curve))
    nrm = np.abs(np.linalg.norm(normals, axis=1) - 1.0)
    if np.max(nrm) > tol.tau_unit:
        raise InvalidSurfaceNormal(f"normals not unit (defect {np.max(nrm):.3e})")
    # endpoint tangents are 2nd-order; check orthogonality on the interior
    dots = np.abs(np.sum(normals[1:-1] * v[1:-1], axis=1))
    if np.max(dots) > tol.tau_orth:
        raise InvalidSurfaceNormal(
            f"normals not orthogonal to tangent (defect {np.max(dots):.3e})")
    a = fd_acceleration(curve)
    side = np.cross(normals, v)
    return np.sum(a * side, axis=1)
