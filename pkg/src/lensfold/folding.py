"""Folded 3D state of a lens tessellation.

One "kite module" covers the quadrilateral between a lens and the vertices
above/below it.  For a folded row period v* < v, every cross-section at
parameter t is an isosceles trapezoid (base v*, top 2*ell(t), legs r(t));
stacking the trapezoid heights h(t) along a planar curve with turning rate
theta'(t) = sqrt(1 - h'(t)^2)/h(t) produces the folded creases.  The module
is an upper cone U (apex above), a cylindrical lens part M (rulings parallel
to y), and a lower cone L; copies tile space by point inversion through
boundary-edge midpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .config import (DEFAULT_SAMPLES, QUADRATURE_PANELS,
                     SWEEP_MARGIN_FRACTION, Tolerances, DEFAULT_TOLERANCES)
from .curves import CurveEvaluator, SampledCurve3D
from .errors import (FoldDepthInfeasible, InfeasiblePattern, QuadratureDiverged,
                     SingularHeight, TilingInconsistent, TrapezoidInfeasible)
from .numerics import CumulativeIntegral
from .pattern import LensTessellation

_H2_FLOOR = 1e-12


@dataclass
class TrapezoidSection:
    """Isosceles trapezoid swept out by the fold at parameter t."""
    t: float
    r: float        # leg length: flat distance from the crease point to V_{0,1}
    h: float        # trapezoid height
    two_ell: float  # top length
    vstar: float    # base length


def _resolve_visible(tess: LensTessellation, visible_n: Optional[int]) -> int:
    if visible_n is not None:
        return int(visible_n)
    res = tess.visibility_check()
    if res.visible_vertex is None:
        raise InfeasiblePattern("no vertex is visible from the reference crease")
    return res.visible_vertex


class _FoldCore:
    """Closed-form section quantities for one (pattern, v*) pair."""

    def __init__(self, tess: LensTessellation, vstar: float, u_eff: float):
        if not 0.0 < vstar < tess.v:
            raise TrapezoidInfeasible(
                f"folded period v*={vstar} outside (0, v={tess.v})")
        self.tess = tess
        self.vstar = float(vstar)
        self.u_eff = float(u_eff)
        self.dv = tess.v - self.vstar

    def ell(self, t):
        return self.tess.profile.ell(t)

    def dell(self, t):
        return self.tess.profile.dell(t)

    def r_leg(self, t):
        t = np.asarray(t, dtype=float)
        return np.sqrt((self.u_eff - t) ** 2
                       + (self.tess.v / 2.0 - self.ell(t)) ** 2)

    def h2(self, t):
        t = np.asarray(t, dtype=float)
        return (self.dv * ((self.tess.v + self.vstar) / 4.0 - self.ell(t))
                + (t - self.u_eff) ** 2)

    def h(self, t):
        return np.sqrt(self.h2(t))

    def h_num(self, t):
        """h * dh/dt in closed form."""
        t = np.asarray(t, dtype=float)
        return (t - self.u_eff) - self.dv * self.dell(t) / 2.0

    def dh(self, t):
        return self.h_num(t) / self.h(t)

    def margin(self, t):
        """h^2 - (h h')^2/h^2 * h^2 = h^2 (1 - h'^2): positive exactly when
        the turning-rate integrand is real."""
        return self.h2(t) - self.h_num(t) ** 2

    def theta_rate(self, t):
        m = self.margin(t)
        return np.sqrt(np.maximum(m, 0.0)) / self.h2(t)

    def check_feasible(self, n_scan: int) -> None:
        ts = np.linspace(0.0, 1.0, n_scan)
        m = self.margin(ts)
        if np.any(m <= 0.0):
            k = int(np.argmin(m))
            raise FoldDepthInfeasible(
                f"fold depth v*={self.vstar} infeasible: |dh/dt| >= 1 "
                f"at t={ts[k]:.6f}", t=float(ts[k]))
        h2 = self.h2(ts)
        if np.any(h2 <= _H2_FLOOR):
            k = int(np.argmin(h2))
            raise SingularHeight(
                f"trapezoid height vanishes at t={ts[k]:.6f}", t=float(ts[k]))

    def _feature_scales(self):
        """(spike/dip width, boundary-shutoff width) of the turning rate.

        Three ways theta' localizes: a spike of width ~ min h near the flat
        limit, a parabolic dip where the margin bottoms out near the depth
        limit (width sqrt(2 m_min / m'')), and a one-sided square-root
        shutoff when the margin minimum sits at an interval end and drops
        linearly into it (width m_min / |m'|).
        """
        ts = np.linspace(0.0, 1.0, 4097)
        dt = ts[1] - ts[0]
        hmin = math.sqrt(float(np.min(self.h2(ts))))
        w = max(hmin, 1e-9)
        w_edge = 1.0
        m = self.margin(ts)
        k = int(np.argmin(m))
        kk = min(max(k, 1), ts.size - 2)   # stencil shifted inward at the ends
        if m[k] > 0.0:
            d2m = (m[kk + 1] - 2.0 * m[kk] + m[kk - 1]) / dt ** 2
            if d2m > 0.0:
                w = min(w, math.sqrt(2.0 * m[k] / d2m))
            dm = (m[kk + 1] - m[kk - 1]) / (2.0 * dt)
            if k in (0, ts.size - 1) and abs(dm) > 0.0:
                w_edge = max(min(w_edge, m[k] / abs(dm)), 1e-12)
        return w, w_edge

    def feature_width(self) -> float:
        w, w_edge = self._feature_scales()
        return min(w, w_edge)

    def suggest_panels(self, n: int) -> int:
        """Fixed panel count resolving the sharpest turning-rate feature.

        Interior features need ~128 panels per width; a boundary shutoff is
        an integrable cusp, where midpoint quadrature converges at order
        1.5 and 64 * w^(-2/3) panels push the Richardson gap below 1e-8.
        Capped: builds closer to the flat state than v* ~ v - 1e-8 are out
        of supported range and fail the Richardson check loudly.
        """
        w, w_edge = self._feature_scales()
        want = max(128.0 / w, 64.0 * w_edge ** (-2.0 / 3.0))
        return min(max(n - 1, 512, int(math.ceil(want))), 1 << 18)

    def theta_integral(self, panels: int) -> CumulativeIntegral:
        ci = CumulativeIntegral(self.theta_rate, 0.0, 1.0, panels)
        check = CumulativeIntegral(self.theta_rate, 0.0, 1.0, 2 * panels)
        scale = max(abs(ci.total), 1e-12)
        if abs(ci.total - check.total) > 1e-8 * scale:
            raise QuadratureDiverged(
                f"theta quadrature Richardson check failed: "
                f"{ci.total!r} vs {check.total!r} at {panels} panels")
        return ci


def section(tess: LensTessellation, vstar: float, t: float,
            u_eff: Optional[float] = None) -> TrapezoidSection:
    """Trapezoid cross-section at parameter t.

    u_eff is the offset of the visible vertex (u + n); defaults to u.
    """
    core = _FoldCore(tess, vstar, tess.u if u_eff is None else u_eff)
    tt = float(t)
    ell = float(core.ell(tt))
    r = float(core.r_leg(tt))
    if not tess.v <= 2.0 * ell + 2.0 * r + 1e-12:
        raise TrapezoidInfeasible(
            f"no trapezoid at t={tt}: v={tess.v} > 2*ell+2*r={2*ell+2*r}")
    h2 = float(core.h2(tt))
    if h2 < 0.0:
        raise TrapezoidInfeasible(f"negative squared height at t={tt}: {h2}")
    return TrapezoidSection(t=tt, r=r, h=math.sqrt(h2), two_ell=2.0 * ell,
                            vstar=core.vstar)


def integrate_theta(tess: LensTessellation, vstar: float,
                    n: int = DEFAULT_SAMPLES,
                    u_eff: Optional[float] = None) -> np.ndarray:
    """theta(t) at n uniform t-nodes; theta(0) = 0, strictly increasing."""
    core = _FoldCore(tess, vstar, tess.u if u_eff is None else u_eff)
    panels = core.suggest_panels(n)
    core.check_feasible(2 * panels + 1)
    ci = core.theta_integral(panels)
    return ci.value(np.linspace(0.0, 1.0, n))


class _FoldedCreaseEvaluator(CurveEvaluator):
    """Analytic arc-length evaluator of a folded lens crease.

    Derivatives in t come from the closed forms; conversion to arc length
    divides by the flat crease speed sqrt(1 + ell'^2) (the fold preserves
    the crease parameterization speed).
    """

    def __init__(self, module: "KiteModule", sign: int):
        self.module = module
        self.sign = sign

    def _t_of_s(self, s):
        return self.module.arc.inverse(np.asarray(s, dtype=float))

    def point(self, s):
        return self.module.crease_point_3d(self.sign, self._t_of_s(s))

    def velocity(self, s):
        t = self._t_of_s(s)
        d = self.module.crease_velocity_t(self.sign, t)
        sp = np.sqrt(1.0 + self.module.core.dell(t) ** 2)
        return d / sp[..., None]

    def acceleration(self, s):
        t = self._t_of_s(s)
        d1 = self.module.crease_velocity_t(self.sign, t)
        d2 = self.module.crease_acceleration_t(self.sign, t)
        dl = self.module.core.dell(t)
        d2l = self.module.core.tess.profile.d2ell(t)
        sp2 = 1.0 + dl * dl
        # X_ss = (X_tt - X_t * (d/dt sqrt(1+l'^2))/sqrt(1+l'^2)) / (1+l'^2)
        corr = dl * d2l / sp2
        return (d2 - d1 * corr[..., None]) / sp2[..., None]


@dataclass
class Patch:
    """One developable piece of the module, stored ruling-wise.

    Rulings run from a2->b2 in the flat sheet and a3->b3 folded; both are
    straight and of equal length, so the fraction along a ruling is a
    shared coordinate.  `normals` holds the top-side unit normal at each
    sampled ruling (constant along the ruling for a developable patch).
    """
    name: str
    kind: str                  # "cone" | "cylinder"
    t: np.ndarray
    a2: np.ndarray
    b2: np.ndarray
    a3: np.ndarray
    b3: np.ndarray
    normals: np.ndarray
    module: "KiteModule" = field(repr=False)

    def triangles(self) -> Tuple[np.ndarray, np.ndarray]:
        """(m, 3, 3) folded triangles and matching (m, 3, 2) flat ones.

        Cones triangulate as apex fans, the cylinder as split quads.
        """
        a2, b2, a3, b3 = self.a2, self.b2, self.a3, self.b3
        if self.kind == "cone":
            tri3 = np.stack([np.broadcast_to(a3[0], b3[:-1].shape),
                             b3[:-1], b3[1:]], axis=1)
            tri2 = np.stack([np.broadcast_to(a2[0], b2[:-1].shape),
                             b2[:-1], b2[1:]], axis=1)
        else:
            up0, up1 = a3[:-1], a3[1:]
            dn0, dn1 = b3[:-1], b3[1:]
            tri3 = np.concatenate([
                np.stack([up0, dn0, dn1], axis=1),
                np.stack([up0, dn1, up1], axis=1)], axis=0)
            u20, u21 = a2[:-1], a2[1:]
            d20, d21 = b2[:-1], b2[1:]
            tri2 = np.concatenate([
                np.stack([u20, d20, d21], axis=1),
                np.stack([u20, d21, u21], axis=1)], axis=0)
        return tri3, tri2

    # -- flat <-> folded correspondence ------------------------------------

    def locate(self, points2d: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Map flat points inside the patch to (t, ruling fraction)."""
        p = np.atleast_2d(np.asarray(points2d, dtype=float))
        core = self.module.core
        if self.kind == "cylinder":
            t = p[:, 0]
            ell = core.ell(t)
            frac = (ell - p[:, 1]) / (2.0 * ell)
            return t, frac
        apex = self.a2[0]
        sign = 1.0 if self.name == "U" else -1.0
        dx = p[:, 0] - apex[0]
        dy = p[:, 1] - apex[1]

        def f(t):
            return (t - apex[0]) * dy - (sign * core.ell(t) - apex[1]) * dx

        # bracket the ruling parameter on a grid, bisect, then polish
        grid = np.linspace(0.0, 1.0, 129)
        vals = np.stack([f(g * np.ones_like(dx)) for g in grid], axis=0)
        sgn = np.sign(vals)
        flip = np.argmax((sgn[:-1] * sgn[1:] <= 0.0), axis=0)
        lo = grid[flip].copy()
        hi = grid[flip + 1].copy()
        flo = f(lo)
        for _ in range(30):
            mid = 0.5 * (lo + hi)
            fm = f(mid)
            pick = (flo * fm) <= 0.0
            hi = np.where(pick, mid, hi)
            lo = np.where(pick, lo, mid)
            flo = np.where(pick, flo, fm)
        t = 0.5 * (lo + hi)
        for _ in range(3):
            df = dy - sign * core.dell(t) * dx
            step = np.where(df != 0.0, f(t) / np.where(df == 0.0, 1.0, df), 0.0)
            t = np.clip(t - step, 0.0, 1.0)
        frac = np.hypot(dx, dy) / core.r_leg(t)
        return t, frac

    def surface_point(self, t: np.ndarray, frac: np.ndarray) -> np.ndarray:
        """Folded position of the point at (t, fraction along ruling)."""
        t = np.asarray(t, dtype=float)
        frac = np.asarray(frac, dtype=float)[..., None]
        m = self.module
        if self.kind == "cylinder":
            a = m.crease_point_3d(1, t)
            b = m.crease_point_3d(-1, t)
        else:
            sign = 1 if self.name == "U" else -1
            a = np.broadcast_to(self.a3[0], t.shape + (3,))
            b = m.crease_point_3d(sign, t)
        return a + frac * (b - a)

    def flat_point(self, t: np.ndarray, frac: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        frac = np.asarray(frac, dtype=float)[..., None]
        core = self.module.core
        if self.kind == "cylinder":
            a = np.stack([t, core.ell(t)], axis=-1)
            b = np.stack([t, -core.ell(t)], axis=-1)
        else:
            sign = 1.0 if self.name == "U" else -1.0
            a = np.broadcast_to(self.a2[0], t.shape + (2,))
            b = np.stack([t, sign * core.ell(t)], axis=-1)
        return a + frac * (b - a)


def _orient_sign(cross2: np.ndarray) -> np.ndarray:
    return np.where(cross2 >= 0.0, 1.0, -1.0)


class KiteModule:
    """Folded state of one kite of the tessellation.

    Built by `build_kite_module`.  Coordinates: f(V00) at the origin,
    f(V10) on +x, the module mirror-symmetric in the y=0 plane, cone apices
    at y = +-v*/2.
    """

    def __init__(self, tess: LensTessellation, vstar: float, n: int,
                 visible_n: int):
        self.tess = tess
        self.vstar = float(vstar)
        self.visible_n = int(visible_n)
        self.u_eff = tess.u + visible_n
        self.n = int(n)
        core = _FoldCore(tess, vstar, self.u_eff)
        self.core = core

        panels = core.suggest_panels(n)
        core.check_feasible(2 * panels + 1)
        self.theta_integral = core.theta_integral(panels)

        t = np.linspace(0.0, 1.0, n)
        self.t = t
        self.theta = self.theta_integral.value(t)
        self.h = core.h(t)
        self.r = core.r_leg(t)

        # clockwise polar trace in the xz-plane about the apex projection
        g0 = self._polar_xz(0.0)
        g1 = self._polar_xz(1.0)
        d = g1 - g0
        self.chord = float(np.hypot(d[0], d[1]))
        e = d / self.chord
        self._rot = np.array([[e[0], e[1]], [-e[1], e[0]]])
        self._shift = g0
        self.center2 = self._align_xz(np.zeros((1, 2)))[0]

        self.arc = CumulativeIntegral(
            lambda x: np.sqrt(1.0 + core.dell(x) ** 2), 0.0, 1.0,
            QUADRATURE_PANELS)

        self.corners = {
            "V00": np.array([0.0, 0.0, 0.0]),
            "V10": np.array([self.chord, 0.0, 0.0]),
            "Vup": np.array([self.center2[0], +vstar / 2.0, self.center2[1]]),
            "Vdn": np.array([self.center2[0], -vstar / 2.0, self.center2[1]]),
        }
        self.flat_corners = {
            "V00": np.array([0.0, 0.0]),
            "V10": np.array([1.0, 0.0]),
            "Vup": np.array([self.u_eff, tess.v / 2.0]),
            "Vdn": np.array([self.u_eff, -tess.v / 2.0]),
        }

        s = self.arc.value(t)
        xp = self.crease_point_3d(1, t)
        xm = self.crease_point_3d(-1, t)
        self.crease_plus = SampledCurve3D(
            s=s, points=xp, evaluator=_FoldedCreaseEvaluator(self, 1))
        self.crease_minus = SampledCurve3D(
            s=s, points=xm, evaluator=_FoldedCreaseEvaluator(self, -1))

        self.patches = self._build_patches(t, xp, xm)

    # -- analytic crease geometry ------------------------------------------

    def _polar_xz(self, t):
        t = np.asarray(t, dtype=float)
        h = self.core.h(t)
        th = self.theta_integral.value(t)
        return np.stack([h * np.cos(th), -h * np.sin(th)], axis=-1)

    def _align_xz(self, p):
        return (p - self._shift) @ self._rot.T

    def crease_point_3d(self, sign: int, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        xz = self._align_xz(self._polar_xz(t))
        y = sign * self.core.ell(t)
        return np.stack([xz[..., 0], y, xz[..., 1]], axis=-1)

    def crease_velocity_t(self, sign: int, t) -> np.ndarray:
        """dX/dt from the closed forms (|dX/dt| = sqrt(1 + ell'^2))."""
        t = np.asarray(t, dtype=float)
        h = self.core.h(t)
        dh = self.core.dh(t)
        thr = self.core.theta_rate(t)
        th = self.theta_integral.value(t)
        c, s = np.cos(th), np.sin(th)
        dxz = np.stack([dh * c - h * thr * s, -dh * s - h * thr * c], axis=-1)
        dxz = dxz @ self._rot.T
        dy = sign * self.core.dell(t)
        return np.stack([dxz[..., 0], dy, dxz[..., 1]], axis=-1)

    def crease_acceleration_t(self, sign: int, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        core = self.core
        h = core.h(t)
        h2 = core.h2(t)
        num = core.h_num(t)
        dh = num / h
        dnum = 1.0 - core.dv * core.tess.profile.d2ell(t) / 2.0
        d2h = (dnum - dh * dh) / h
        m = core.margin(t)
        rt = np.sqrt(np.maximum(m, 0.0))
        thr = rt / h2
        # d/dt of sqrt(m)/h^2 with m' = 2 h h' - 2 num num'
        dm = 2.0 * (h * dh - num * dnum)
        dthr = np.where(rt > 0.0,
                        dm / (2.0 * np.where(rt > 0.0, rt, 1.0) * h2)
                        - 2.0 * rt * dh / (h2 * h), 0.0)
        th = self.theta_integral.value(t)
        c, s = np.cos(th), np.sin(th)
        ax = d2h * c - 2.0 * dh * thr * s - h * dthr * s - h * thr * thr * c
        az = -d2h * s - 2.0 * dh * thr * c - h * dthr * c + h * thr * thr * s
        dxz = np.stack([ax, az], axis=-1) @ self._rot.T
        d2y = sign * core.tess.profile.d2ell(t)
        return np.stack([dxz[..., 0], d2y, dxz[..., 1]], axis=-1)

    # -- patches -------------------------------------------------------------

    def _top_side_normal(self, tang3, w3, cross2_flat):
        n = np.cross(tang3, w3)
        n /= np.linalg.norm(n, axis=-1, keepdims=True)
        return _orient_sign(cross2_flat)[..., None] * n

    def _build_patches(self, t, xp, xm) -> Dict[str, Patch]:
        core = self.core
        ell = core.ell(t)
        dell = core.dell(t)
        up3, dn3 = self.corners["Vup"], self.corners["Vdn"]
        up2, dn2 = self.flat_corners["Vup"], self.flat_corners["Vdn"]
        tp = self.crease_velocity_t(1, t)
        tm = self.crease_velocity_t(-1, t)
        q = core.tess.depth_gap(t, u_eff=self.u_eff)

        # U cone: rulings apex -> upper crease; the flat side of the patch
        # lies left of the crease (positive 2D cross with the tangent)
        w_up3 = up3[None, :] - xp
        n_up = self._top_side_normal(tp, w_up3, q)
        patch_u = Patch(name="U", kind="cone", t=t,
                        a2=np.broadcast_to(up2, (t.size, 2)).copy(),
                        b2=np.stack([t, ell], axis=1),
                        a3=np.broadcast_to(up3, (t.size, 3)).copy(),
                        b3=xp, normals=n_up, module=self)

        # M cylinder: rulings upper crease -> lower crease.  The ruling
        # direction is constantly -y (degenerate in length at the lens
        # tips, so use the unit direction).
        w_m3 = np.broadcast_to(np.array([0.0, -1.0, 0.0]), xp.shape)
        n_m = self._top_side_normal(tp, w_m3, -np.ones_like(ell))
        patch_m = Patch(name="M", kind="cylinder", t=t,
                        a2=np.stack([t, ell], axis=1),
                        b2=np.stack([t, -ell], axis=1),
                        a3=xp, b3=xm, normals=n_m, module=self)

        # L cone: rulings apex -> lower crease; flat side right of the
        # lower crease traversed in +t
        w_dn3 = dn3[None, :] - xm
        n_dn = self._top_side_normal(tm, w_dn3, -q)
        patch_l = Patch(name="L", kind="cone", t=t,
                        a2=np.broadcast_to(dn2, (t.size, 2)).copy(),
                        b2=np.stack([t, -ell], axis=1),
                        a3=np.broadcast_to(dn3, (t.size, 3)).copy(),
                        b3=xm, normals=n_dn, module=self)
        return {"U": patch_u, "M": patch_m, "L": patch_l}

    def section(self, t: float) -> TrapezoidSection:
        return section(self.tess, self.vstar, t, u_eff=self.u_eff)

    def theta_total(self) -> float:
        return float(self.theta_integral.total)

    def all_triangles(self):
        """Concatenated folded mesh with (patch name, triangles)."""
        return {name: patch.triangles()[0]
                for name, patch in self.patches.items()}


def build_kite_module(tess: LensTessellation, vstar: float,
                      n: int = DEFAULT_SAMPLES,
                      visible_n: Optional[int] = None) -> KiteModule:
    """Construct the folded kite module at folded row period v*."""
    tess.require_valid()
    vis = _resolve_visible(tess, visible_n)
    return KiteModule(tess, vstar, n, vis)


# ------------------------------------------------------------------ tiling

@dataclass
class ModulePlacement:
    """Rigid placement of a module copy: p -> flip * p + offset.

    flip = -1 encodes point inversion (odd rows); inverting also turns the
    sheet over, so stored top-side normals transform as n -> n (the two
    sign flips cancel).
    """
    i: int
    j: int
    flip: int
    offset: np.ndarray

    def apply(self, pts: np.ndarray) -> np.ndarray:
        return self.flip * np.asarray(pts, dtype=float) + self.offset

    def apply_normal(self, nrm: np.ndarray) -> np.ndarray:
        return np.asarray(nrm, dtype=float)


@dataclass
class Seam:
    a: Tuple[int, int]
    b: Tuple[int, int]
    endpoints: np.ndarray  # (2, 3)


_EDGE_CORNERS = [("V00", "Vup"), ("Vup", "V10"), ("V10", "Vdn"), ("Vdn", "V00")]


class TiledFolding:
    """Copies of one module placed on the kite lattice."""

    def __init__(self, module: KiteModule, placements: Dict[Tuple[int, int],
                                                            ModulePlacement],
                 tol: Tolerances = DEFAULT_TOLERANCES):
        self.module = module
        self.placements = placements
        self.seams = self._find_seams(tol.seam_point_tol)

    def _edges(self, placement: ModulePlacement) -> List[np.ndarray]:
        c = self.module.corners
        return [placement.apply(np.stack([c[a], c[b]]))
                for a, b in _EDGE_CORNERS]

    def _lattice_neighbors(self, key):
        i, j = key
        di = 1 if j % 2 == 0 else -1
        return {(i, j + 1), (i, j - 1), (i + di, j + 1), (i + di, j - 1)}

    def _find_seams(self, tol: float) -> List[Seam]:
        keys = sorted(self.placements)
        edges = {k: self._edges(self.placements[k]) for k in keys}
        seams: List[Seam] = []
        for ai, ka in enumerate(keys):
            for kb in keys[ai + 1:]:
                found = None
                for ea in edges[ka]:
                    for eb in edges[kb]:
                        same = (np.linalg.norm(ea - eb) < tol
                                or np.linalg.norm(ea - eb[::-1]) < tol)
                        if same:
                            found = Seam(a=ka, b=kb, endpoints=ea.copy())
                            break
                    if found:
                        break
                expected = kb in self._lattice_neighbors(ka)
                if found and not expected:
                    raise TilingInconsistent(
                        f"unexpected shared edge between {ka} and {kb}")
                if expected and not found:
                    raise TilingInconsistent(
                        f"modules {ka} and {kb} should share an edge")
                if found:
                    seams.append(found)
        return seams

    def transformed_triangles(self):
        """[(module key, patch name, (m,3,3) triangles)] for every copy."""
        out = []
        base = {name: p.triangles()[0] for name, p in self.module.patches.items()}
        for key, placement in sorted(self.placements.items()):
            for name, tris in base.items():
                moved = placement.apply(tris.reshape(-1, 3)).reshape(tris.shape)
                out.append((key, name, moved))
        return out


def tile(module: KiteModule, rows: int, cols: int) -> TiledFolding:
    """Tile rows x cols copies.

    Columns zigzag horizontally (alternating upright / inverted copies), so
    consecutive columns share a kite edge; each row is one vertical period
    v* up.  Copy (i, j) of the lattice: even j translates by
    (i*chord, (j/2) v*, 0); odd j first inverts through the midpoint of the
    lower-left kite edge.
    """
    if rows < 1 or cols < 1:
        raise TilingInconsistent("tiling needs rows >= 1 and cols >= 1")
    c = module.chord
    vstar = module.vstar
    m1 = 0.5 * (module.corners["V00"] + module.corners["Vup"])
    placements = {}
    for r in range(rows):
        for qcol in range(cols):
            j = 2 * r + (qcol % 2)
            i = (qcol + 1) // 2
            if j % 2 == 0:
                off = np.array([i * c, (j // 2) * vstar, 0.0])
                placements[(i, j)] = ModulePlacement(i=i, j=j, flip=1, offset=off)
            else:
                off = 2.0 * m1 + np.array([i * c, (j // 2) * vstar, 0.0])
                placements[(i, j)] = ModulePlacement(i=i, j=j, flip=-1, offset=off)
    return TiledFolding(module, placements)


# ------------------------------------------------------------------- sweeps

@dataclass
class SweepResult:
    vstars: np.ndarray
    modules: List[KiteModule]
    theta_totals: np.ndarray
    max_step_displacement: np.ndarray
    theta_decreasing_toward_flat: bool


def sweep_vstar(tess: LensTessellation, k_frames: int,
                n: int = DEFAULT_SAMPLES,
                visible_n: Optional[int] = None) -> SweepResult:
    """Folded states over the feasible interval (v*_lim, v).

    Frames step monotonically from the deep end toward the flat end, with a
    relative margin at both endpoints where the construction degenerates.
    theta_decreasing_toward_flat reports whether the total turning angle
    decreases as v* grows; it is reported, not asserted.
    """
    if k_frames < 2:
        raise InfeasiblePattern("sweep needs at least 2 frames")
    vis = _resolve_visible(tess, visible_n)
    lim = tess.vstar_limit(visible_n=vis)
    lo_base = max(lim, 0.0)
    span = tess.v - lo_base
    lo = lo_base + SWEEP_MARGIN_FRACTION * span
    hi = tess.v - SWEEP_MARGIN_FRACTION * span
    vstars = np.linspace(lo, hi, k_frames)
    modules = [KiteModule(tess, float(vs), n, vis) for vs in vstars]
    thetas = np.array([m.theta_total() for m in modules])
    disp = np.zeros(max(k_frames - 1, 0))
    for k in range(k_frames - 1):
        a, b = modules[k], modules[k + 1]
        d = np.linalg.norm(a.crease_plus.points - b.crease_plus.points, axis=1)
        dc = [np.linalg.norm(a.corners[c_] - b.corners[c_]) for c_ in a.corners]
        disp[k] = max(float(np.max(d)), max(dc))
    return SweepResult(vstars=vstars, modules=modules, theta_totals=thetas,
                       max_step_displacement=disp,
                       theta_decreasing_toward_flat=bool(
                           np.all(np.diff(thetas) < 0.0)))
