"""Structural checks on folded modules.

Every check measures a property the construction should satisfy exactly in
the continuum — osculating-plane bisection of the surface normals, the
fold-angle/curvature identity, mountain/valley consistency, isometry of the
flat-to-folded map, developability, seam agreement — using finite
differences and resampled points rather than the construction's own
analytic derivatives, so residuals reflect genuine discretization error.

Conventions (pinned here, used everywhere):
  * top-side normals: the orientation stored by the patches; walking along
    a crease with tangent T and top normal P, the left side is P x T.
  * fold angle rho = atan2((P_L x P_R) . T, P_L . P_R); rho > 0 is a
    mountain crease (the top normals lean away across a ridge).
  * a patch bends valley where the offset-curve acceleration has positive
    component along the top normal (the surface cups toward the top side).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .config import Tolerances, DEFAULT_TOLERANCES
from .curves import SampledCurve3D, frenet_frames_3d, resample_arclength
from .errors import (LensfoldError, MVInconsistent, MVRuleViolation,
                     NotACrease, TangentRuling)
from .folding import (KiteModule, ModulePlacement, TiledFolding,
                      _EDGE_CORNERS)
from ._kernels import tri_tri_overlap
from .numerics import fd_second_uniform, unit_rows


# --------------------------------------------------------------- report types

@dataclass
class CheckRecord:
    """One check outcome; passed iff max_residual <= tolerance."""
    name: str
    max_residual: float
    tolerance: float
    passed: bool
    worst_sample: Optional[float] = None
    extra: dict = field(default_factory=dict)
    samples: Optional[np.ndarray] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "worst_sample": self.worst_sample,
            "extra": self.extra,
        }


@dataclass
class FoldReport:
    records: List[CheckRecord]
    metadata: dict

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def record(self, name: str) -> CheckRecord:
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "metadata": self.metadata,
            "passed": self.passed,
            "checks": [r.to_dict() for r in self.records],
        }


def pattern_hash(tess) -> str:
    blob = json.dumps(
        {"profile": tess.profile.spec(), "u": tess.u, "v": tess.v},
        sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


# --------------------------------------------------------------- crease sides

@dataclass
class CreaseSides:
    """A folded crease with its two adjacent surface strips.

    P_L, P_R are top-side unit normals sampled along the crease; W_L, W_R
    unit ruling directions leaving the crease into each side.  theta_L and
    theta_R are the ruling-to-tangent angles, strictly inside (0, pi).
    """
    label: str
    crease3d: SampledCurve3D
    t: np.ndarray
    T: np.ndarray
    P_L: np.ndarray
    P_R: np.ndarray
    W_L: np.ndarray
    W_R: np.ndarray
    theta_L: np.ndarray
    theta_R: np.ndarray
    k2d: np.ndarray
    mv_expected: str

    def __post_init__(self):
        tol = DEFAULT_TOLERANCES
        for nm, arr in (("P_L", self.P_L), ("P_R", self.P_R)):
            if np.max(np.abs(np.linalg.norm(arr, axis=1) - 1.0)) > tol.tau_unit:
                raise NotACrease(f"{nm} not unit length")
            if np.max(np.abs(np.sum(arr * self.T, axis=1))) > 1e-6:
                raise NotACrease(f"{nm} not orthogonal to the crease tangent")
        for nm, th in (("theta_L", self.theta_L), ("theta_R", self.theta_R)):
            if np.any(th <= 0.0) or np.any(th >= math.pi):
                raise NotACrease(f"{nm} leaves (0, pi)")


def _side_fields(module: KiteModule, sign: int, t: np.ndarray):
    """Top-side normals and ruling directions on both sides of a lens crease."""
    core = module.core
    x = module.crease_point_3d(sign, t)
    T = module.crease_velocity_t(sign, t)
    T = unit_rows(T)
    q = core.tess.depth_gap(t, u_eff=module.u_eff)
    apex = module.corners["Vup"] if sign > 0 else module.corners["Vdn"]
    w_cone = unit_rows(apex[None, :] - x)
    n_cone = unit_rows(np.cross(T, w_cone))
    n_cone *= np.where(sign * q >= 0.0, 1.0, -1.0)[:, None]
    w_cyl = np.broadcast_to(np.array([0.0, -float(sign), 0.0]), x.shape)
    n_cyl = unit_rows(np.cross(T, w_cyl)) * (-float(sign))
    if sign > 0:
        # left of the upper crease is the cone, right is the lens cylinder
        return T, n_cone, n_cyl, w_cone, w_cyl
    # left of the lower crease is the lens cylinder, right is the cone
    return T, n_cyl, n_cone, w_cyl, w_cone


def crease_sides(module: KiteModule, sign: int, n: Optional[int] = None,
                 placement: Optional[ModulePlacement] = None) -> CreaseSides:
    """Sample a lens crease with its side data at n uniform arclength stations.

    With a placement, all points and direction fields transform with the
    copy: positions and tangents/rulings pick up the inversion sign, stored
    top normals do not (the sheet is re-oriented), so odd copies come out
    valley.
    """
    n = n or module.n
    base = module.crease_plus if sign > 0 else module.crease_minus
    cr = resample_arclength(base, n)
    t = module.arc.inverse(cr.s)
    T, P_L, P_R, W_L, W_R = _side_fields(module, sign, t)
    pts = cr.points
    if placement is not None:
        pts = placement.apply(pts)
        T = placement.flip * T
        W_L = placement.flip * W_L
        W_R = placement.flip * W_R
        P_L = placement.apply_normal(P_L)
        P_R = placement.apply_normal(P_R)
    cr = SampledCurve3D(s=cr.s, points=pts)
    dl = module.core.dell(t)
    d2l = module.core.tess.profile.d2ell(t)
    k2d = np.abs(d2l) / (1.0 + dl * dl) ** 1.5
    th_l = np.arccos(np.clip(np.sum(W_L * T, axis=1), -1.0, 1.0))
    th_r = np.arccos(np.clip(np.sum(W_R * T, axis=1), -1.0, 1.0))
    parity = 1 if placement is None else placement.flip
    return CreaseSides(label=("plus" if sign > 0 else "minus"),
                       crease3d=cr, t=t, T=T, P_L=P_L, P_R=P_R,
                       W_L=W_L, W_R=W_R, theta_L=th_l, theta_R=th_r,
                       k2d=k2d,
                       mv_expected=("mountain" if parity > 0 else "valley"))


def fd_samples_hint(module: KiteModule) -> int:
    """Crease sampling that resolves the sharpest fold feature.

    Near the depth limit the fold angle dips toward zero over a window of
    width ~ sqrt(v* - limit): finite-difference frames need several
    stations inside that window or the binormal direction is mush.
    """
    want = int(math.ceil(64.0 / module.core.feature_width()))
    return min(max(module.n, want), 1 << 14)


def _frames(cs: CreaseSides, tol: Tolerances):
    ff = frenet_frames_3d(cs.crease3d, tol=tol, use_evaluator=False)
    mask = ff.defined & (ff.curvature > tol.frame_k_floor)
    if int(mask.sum()) < 3:
        raise NotACrease(f"crease {cs.label}: too few curved samples for frames")
    return ff, mask


# -------------------------------------------------------------------- checks

def check_bisection(cs: CreaseSides,
                    tol: Tolerances = DEFAULT_TOLERANCES) -> CheckRecord:
    """Binormal of the folded crease bisects the two side normals.

    Residual: max over curved samples of | angle(P_L, B) - angle(B, P_R) |,
    with B signed so that B.P_L = B.P_R > 0.
    """
    ff, mask = _frames(cs, tol)
    B = ff.B.copy()
    B *= np.sign(np.sum(B * (cs.P_L + cs.P_R), axis=1))[:, None]
    a_l = np.arccos(np.clip(np.sum(B * cs.P_L, axis=1), -1.0, 1.0))
    a_r = np.arccos(np.clip(np.sum(B * cs.P_R, axis=1), -1.0, 1.0))
    res = np.where(mask, np.abs(a_l - a_r), 0.0)
    k = int(np.argmax(res))
    dots = np.sum(B * cs.P_L, axis=1)[mask]
    return CheckRecord(
        name=f"bisection_{cs.label}",
        max_residual=float(res[k]),
        tolerance=tol.angle_tol,
        passed=bool(res[k] <= tol.angle_tol),
        worst_sample=float(cs.t[k]),
        extra={"samples_used": int(mask.sum()),
               "binormal_dot_positive": bool(np.all(dots > 0.0))},
        samples=np.stack([cs.t, res], axis=1))


def fold_angle(cs: CreaseSides) -> np.ndarray:
    """Signed fold angle along the crease; positive = mountain."""
    sin_r = np.sum(np.cross(cs.P_L, cs.P_R) * cs.T, axis=1)
    cos_r = np.sum(cs.P_L * cs.P_R, axis=1)
    return np.arctan2(sin_r, cos_r)


def check_fold_angle_and_mv(cs: CreaseSides,
                            tol: Tolerances = DEFAULT_TOLERANCES
                            ) -> Tuple[np.ndarray, str, CheckRecord]:
    """Fold angle well-defined, single-signed, and matching the 2D label."""
    rho = fold_angle(cs)
    amax = float(np.max(np.abs(rho)))
    if amax < tol.rho_floor:
        raise NotACrease(f"crease {cs.label}: fold angle ~ 0 everywhere")
    live = np.abs(rho) > tol.rho_floor
    signs = np.sign(rho[live])
    if signs.min() != signs.max():
        k = int(np.nonzero(np.diff(np.sign(rho)) != 0)[0][0])
        raise MVInconsistent(
            f"crease {cs.label}: fold angle changes sign near t={cs.t[k]:.4f}")
    mv = "mountain" if signs[0] > 0 else "valley"
    amin = float(np.min(np.abs(rho[live])))
    ok = mv == cs.mv_expected and amin >= tol.kink_floor
    return rho, mv, CheckRecord(
        name=f"fold_angle_mv_{cs.label}",
        max_residual=0.0 if ok else max(tol.kink_floor - amin, 1.0 * (mv != cs.mv_expected)),
        tolerance=0.0,
        passed=ok,
        worst_sample=float(cs.t[int(np.argmin(np.abs(rho)))]),
        extra={"mv": mv, "expected": cs.mv_expected,
               "rho_min_abs": amin, "rho_max_abs": amax},
        samples=np.stack([cs.t, rho], axis=1))


def check_curvature_relation(cs: CreaseSides,
                             tol: Tolerances = DEFAULT_TOLERANCES
                             ) -> CheckRecord:
    """Folded curvature K, flat curvature k, fold angle rho satisfy
    K cos(rho/2) = k; folding strictly increases curvature at every sample."""
    ff = frenet_frames_3d(cs.crease3d, tol=tol, use_evaluator=False)
    rho = fold_angle(cs)
    K = ff.curvature
    k2 = cs.k2d
    scale = float(np.max(k2))
    res = np.abs(K * np.cos(rho / 2.0) - k2) / scale
    k = int(np.argmax(res))
    increases = bool(np.all(K > k2))
    passed = bool(res[k] <= tol.curvature_rel_tol) and increases
    return CheckRecord(
        name=f"curvature_relation_{cs.label}",
        max_residual=float(res[k]),
        tolerance=tol.curvature_rel_tol,
        passed=passed,
        worst_sample=float(cs.t[k]),
        extra={"curvature_strictly_increased": increases,
               "min_K_minus_k": float(np.min(K - k2))},
        samples=np.stack([cs.t, res], axis=1))


def _bend_dots(module: KiteModule, name: str, frac: float = 0.5) -> np.ndarray:
    """Normal component of the offset-curve acceleration on one patch.

    Positive = the patch cups toward its top side (valley bending).
    """
    patch = module.patches[name]
    t = module.t
    c = patch.surface_point(t, np.full_like(t, frac))
    acc = fd_second_uniform(c, float(t[1] - t[0]))
    return np.sum(acc * patch.normals, axis=1)


def check_ruling_mv_rules(module: KiteModule,
                          tol: Tolerances = DEFAULT_TOLERANCES,
                          n: Optional[int] = None) -> CheckRecord:
    """Bending direction of every ruled strip obeys the side rules.

    The cones (convex side of each lens crease) must bend like the crease
    (mountain); the lens cylinder (concave side of both) bends opposite
    (valley).  Cross-checked against the principal-normal rule: a side
    bends valley exactly where N . P_side > 0 along the crease.
    """
    expected = {"U": "mountain", "M": "valley", "L": "mountain"}
    sl = slice(2, -2)  # one-sided FD endpoints excluded
    got: Dict[str, str] = {}
    for name in ("U", "M", "L"):
        dots = _bend_dots(module, name)[sl]
        if np.any(dots == 0.0) or np.sign(dots).min() != np.sign(dots).max():
            k = int(np.argmin(np.abs(dots)))
            raise MVRuleViolation(
                f"patch {name}: bending direction flips near t={module.t[sl][k]:.4f}")
        got[name] = "valley" if dots[0] > 0 else "mountain"
        if got[name] != expected[name]:
            k = int(np.argmax(np.abs(dots)))
            raise MVRuleViolation(
                f"patch {name} bends {got[name]}, expected {expected[name]} "
                f"(t={module.t[sl][k]:.4f})")
    # principal-normal prediction on both creases
    agree = True
    n = n or fd_samples_hint(module)
    for sign, cone in ((1, "U"), (-1, "L")):
        cs = crease_sides(module, sign, n=n)
        ff, mask = _frames(cs, tol)
        p_cone = cs.P_L if sign > 0 else cs.P_R
        p_cyl = cs.P_R if sign > 0 else cs.P_L
        n_dot_cone = np.sum(ff.N[mask] * p_cone[mask], axis=1)
        n_dot_cyl = np.sum(ff.N[mask] * p_cyl[mask], axis=1)
        # valley side <=> N . P > 0: the cylinder side only
        agree &= bool(np.all(n_dot_cone < 0.0) and np.all(n_dot_cyl > 0.0))
    return CheckRecord(
        name="ruling_mv_rules",
        max_residual=0.0 if agree else 1.0,
        tolerance=0.0,
        passed=agree,
        extra={"bending": got, "expected": expected,
               "normal_rule_agrees": agree})


def check_kinks_at_vertices(module: KiteModule,
                            tol: Tolerances = DEFAULT_TOLERANCES
                            ) -> CheckRecord:
    """Folded creases kink at every tile vertex.

    At each module corner the flat pattern's crease chain continues
    tangent-continuously (upper arc into the next lens's lower arc, and the
    inverted copies at the apices); the folded continuation must turn by a
    strictly smaller interior angle — the corner is a cone point.
    """
    t0 = np.array([0.0])
    t1 = np.array([1.0])
    Tp0 = unit_rows(module.crease_velocity_t(1, t0))[0]
    Tp1 = unit_rows(module.crease_velocity_t(1, t1))[0]
    Tm0 = unit_rows(module.crease_velocity_t(-1, t0))[0]
    Tm1 = unit_rows(module.crease_velocity_t(-1, t1))[0]
    dl0 = float(module.core.dell(0.0))
    dl1 = float(module.core.dell(1.0))
    e_in_10 = np.array([1.0, dl1]) / math.hypot(1.0, dl1)
    e_out_10 = np.array([1.0, -dl0]) / math.hypot(1.0, dl0)
    flat_10 = math.acos(np.clip(-np.dot(e_in_10, e_out_10), -1, 1))
    e_in_00 = np.array([1.0, -dl1]) / math.hypot(1.0, dl1)
    e_out_00 = np.array([1.0, dl0]) / math.hypot(1.0, dl0)
    flat_00 = math.acos(np.clip(-np.dot(e_in_00, e_out_00), -1, 1))

    def interior(a, b):
        return math.acos(float(np.clip(-np.dot(a, b), -1.0, 1.0)))

    angles = {
        # row vertices: upper arc continues into the next lens's lower arc
        "V10": (interior(Tp1, Tm0), flat_10),
        "V00": (interior(Tm1, Tp0), flat_00),
        # apices: creases of the two inverted neighbor copies meet
        "Vup": (interior(-Tp1, -Tm0), flat_10),
        "Vdn": (interior(-Tm1, -Tp0), flat_00),
    }
    # the folded chain must turn strictly more than the flat one: the
    # interior angle drops by at least the kink floor
    res = max(a3 - (a2 - tol.kink_floor) for a3, a2 in angles.values())
    worst = max(angles, key=lambda k: angles[k][0] - angles[k][1])
    return CheckRecord(
        name="vertex_kinks",
        max_residual=float(res),
        tolerance=0.0,
        passed=bool(res <= 0.0),
        worst_sample=worst,
        extra={k: {"folded": a3, "flat": a2} for k, (a3, a2) in angles.items()})


def _polyline_length(p: np.ndarray) -> np.ndarray:
    return np.sum(np.linalg.norm(np.diff(p, axis=-2), axis=-1), axis=-1)


def check_isometry(module: KiteModule, n: Optional[int] = None,
                   chords: int = 100, seed: int = 0,
                   tol: Tolerances = DEFAULT_TOLERANCES) -> CheckRecord:
    """Lengths are preserved by the flat-to-folded map.

    Compares rulings (construction-exact), crease arclengths, random curves
    in ruling coordinates, and true 2D chords located by root-finding, at n
    sample points per curve.
    """
    n = n or module.n
    rng = np.random.default_rng(seed)
    sub: Dict[str, float] = {}
    worst_val, worst_where = -1.0, None

    def note(kind, val):
        nonlocal worst_val, worst_where
        sub[kind] = float(val)
        if val > worst_val:
            worst_val, worst_where = float(val), kind

    # rulings
    r_err = 0.0
    for name, p in module.patches.items():
        l2 = np.linalg.norm(p.b2 - p.a2, axis=1)
        l3 = np.linalg.norm(p.b3 - p.a3, axis=1)
        good = l2 > 1e-12
        r_err = max(r_err, float(np.max(np.abs(l3 - l2)[good] / l2[good])))
    note("rulings", r_err)

    # crease arclength: flat lens boundary vs folded curve, same stations
    c_err = 0.0
    for sign in (1, -1):
        base = module.crease_plus if sign > 0 else module.crease_minus
        cr = resample_arclength(base, n)
        tj = module.arc.inverse(cr.s)
        p2 = np.stack([tj, sign * module.core.ell(tj)], axis=1)
        c_err = max(c_err, abs(_polyline_length(cr.points) - _polyline_length(p2))
                    / _polyline_length(p2))
    note("creases", c_err)

    # random curves in (t, fraction) coordinates, all patches
    frac_lo, frac_hi = 0.05, 0.95
    for name, p in module.patches.items():
        ab = rng.uniform(size=(chords, 2, 2))
        ab[:, :, 1] = frac_lo + (frac_hi - frac_lo) * ab[:, :, 1]
        w = np.linspace(0.0, 1.0, n)[None, :, None]
        path = ab[:, None, 0, :] * (1 - w) + ab[:, None, 1, :] * w
        tq, fq = path[..., 0].ravel(), path[..., 1].ravel()
        p2 = p.flat_point(tq, fq).reshape(chords, n, 2)
        p3 = p.surface_point(tq, fq).reshape(chords, n, 3)
        l2 = _polyline_length(p2)
        l3 = _polyline_length(p3)
        note(f"param_curves_{name}", np.max(np.abs(l3 - l2) / l2))

    # true 2D chords: rejection-sampled inside each patch, mapped via locate.
    # Every polyline vertex must itself lie in the patch (segments may cut
    # under the concave crease between vertices; those chords are rejected
    # by checking the margin at exactly the vertices that get mapped).
    w = np.linspace(0.0, 1.0, n)[:, None]
    for name, p in module.patches.items():
        sgn = 0.0 if name == "M" else (1.0 if name == "U" else -1.0)
        paths, tries = [], 0
        while len(paths) < chords and tries < 400 * chords:
            tries += 1
            q = rng.uniform(size=(2, 2))
            if name == "M":
                x = 0.02 + 0.96 * q[:, 0]
                y = 0.98 * (2.0 * q[:, 1] - 1.0) * module.core.ell(x)
                pts = np.stack([x, y], axis=1)
                # the lens region is convex: the whole chord stays inside
                paths.append(pts[0] * (1 - w) + pts[1] * w)
                continue
            tt, ff_ = q[:, 0], frac_lo + (frac_hi - frac_lo) * q[:, 1]
            pts = p.flat_point(tt, ff_)
            path = pts[0] * (1 - w) + pts[1] * w
            margin = sgn * (path[:, 1]
                            - sgn * module.core.ell(np.clip(path[:, 0], 0, 1)))
            if np.all(margin >= 0.0) and np.all((path[:, 0] >= 0.0)
                                                & (path[:, 0] <= 1.0)):
                paths.append(path)
        path2 = np.array(paths)
        tq, fq = p.locate(path2.reshape(-1, 2))
        p3 = p.surface_point(tq, fq).reshape(len(paths), n, 3)
        l2 = _polyline_length(path2)
        l3 = _polyline_length(p3)
        note(f"chords_{name}", np.max(np.abs(l3 - l2) / l2))

    return CheckRecord(
        name="isometry",
        max_residual=worst_val,
        tolerance=tol.isometry_tol,
        passed=bool(worst_val <= tol.isometry_tol),
        worst_sample=worst_where,
        extra={"sub_residuals": sub, "n": n, "chords": chords, "seed": seed})


def check_no_tangent_rulings(module: KiteModule,
                             tol: Tolerances = DEFAULT_TOLERANCES
                             ) -> CheckRecord:
    """No flat ruling is tangent to a crease: min angle stays above floor."""
    t = np.linspace(0.0, 1.0, 4097)
    ell = module.core.ell(t)
    dl = module.core.dell(t)
    worst = math.inf
    worst_t = None
    for sign, apex_key in ((1, "Vup"), (-1, "Vdn")):
        tau = np.stack([np.ones_like(t), sign * dl], axis=1)
        apex = module.flat_corners[apex_key]
        w = apex[None, :] - np.stack([t, sign * ell], axis=1)
        cross = tau[:, 0] * w[:, 1] - tau[:, 1] * w[:, 0]
        sin_a = np.abs(cross) / (np.linalg.norm(tau, axis=1)
                                 * np.linalg.norm(w, axis=1))
        ang = np.arcsin(np.clip(sin_a, 0.0, 1.0))
        k = int(np.argmin(ang))
        if ang[k] < worst:
            worst, worst_t = float(ang[k]), float(t[k])
        # vertical lens rulings against the same crease
        ang_cyl = np.arcsin(1.0 / np.sqrt(1.0 + dl * dl))
        k = int(np.argmin(ang_cyl))
        if ang_cyl[k] < worst:
            worst, worst_t = float(ang_cyl[k]), float(t[k])
    if worst <= tol.ruling_angle_floor:
        raise TangentRuling(
            f"ruling within {worst:.2e} rad of crease tangent at t={worst_t}")
    return CheckRecord(
        name="no_tangent_rulings",
        max_residual=tol.ruling_angle_floor - worst,
        tolerance=0.0,
        passed=True,
        worst_sample=worst_t,
        extra={"min_angle": worst})


def check_developability(module: KiteModule, n: Optional[int] = None,
                         tol: Tolerances = DEFAULT_TOLERANCES) -> CheckRecord:
    """Tangent plane constant along rulings, from FD normals off the crease."""
    n = n or module.n
    t = np.linspace(0.0, 1.0, n)
    dt = float(t[1] - t[0])
    worst, worst_t, worst_patch = 0.0, None, None
    for name, p in module.patches.items():
        if p.kind == "cone":
            w = (p.surface_point(t, np.ones_like(t))
                 - p.surface_point(t, np.zeros_like(t)))
        else:
            w = np.broadcast_to(np.array([0.0, -1.0, 0.0]), (t.size, 3))
        normals = []
        for frac in (0.15, 0.5, 0.85):
            c = p.surface_point(t, np.full_like(t, frac))
            dc = np.gradient(c, dt, axis=0)
            normals.append(unit_rows(np.cross(dc, w)))
        for a in range(len(normals)):
            for b in range(a + 1, len(normals)):
                dots = np.abs(np.sum(normals[a] * normals[b], axis=1))
                ang = np.arccos(np.clip(dots, -1.0, 1.0))[2:-2]
                k = int(np.argmax(ang))
                if ang[k] > worst:
                    worst, worst_t, worst_patch = float(ang[k]), float(t[2 + k]), name
    return CheckRecord(
        name="developability",
        max_residual=worst,
        tolerance=tol.developability_tol,
        passed=bool(worst <= tol.developability_tol),
        worst_sample=worst_t,
        extra={"worst_patch": worst_patch})


def check_semikink(module: KiteModule, n: Optional[int] = None,
                   tol: Tolerances = DEFAULT_TOLERANCES) -> CheckRecord:
    """No one-sided kink inside a crease: second-derivative jumps converge.

    A genuine jump in the second derivative keeps the max consecutive FD
    difference constant as sampling doubles; for a smooth crease it decays
    O(ds).  Pass when the jump at 2n drops to at most 0.75x the jump at n
    (or is at roundoff).
    """
    n = n or module.n

    def max_jump(m):
        cr = resample_arclength(module.crease_plus, m)
        d2 = fd_second_uniform(cr.points, float(cr.s[1] - cr.s[0]))
        return float(np.max(np.linalg.norm(np.diff(d2[1:-1], axis=0), axis=1)))

    j1, j2 = max_jump(n), max_jump(2 * n)
    ratio = j2 / j1 if j1 > 0 else 0.0
    ok = j2 < 1e-10 or ratio <= 0.75
    return CheckRecord(
        name="semikink_absence",
        max_residual=max(0.0, ratio - 0.75) if not ok else 0.0,
        tolerance=0.0,
        passed=ok,
        extra={"jump_n": j1, "jump_2n": j2, "ratio": ratio})


# --------------------------------------------------------------- tiling checks

_EDGE_TO_PATCH = {0: ("U", 0), 1: ("U", -1), 2: ("L", -1), 3: ("L", 0)}


def _match_edge(tiling: TiledFolding, key, seg: np.ndarray,
                tol: float) -> Optional[int]:
    c = tiling.module.corners
    pl = tiling.placements[key]
    for idx, (a, b) in enumerate(_EDGE_CORNERS):
        e = pl.apply(np.stack([c[a], c[b]]))
        if (np.linalg.norm(e - seg) < tol
                or np.linalg.norm(e - seg[::-1]) < tol):
            return idx
    return None


def check_seams(tiling: TiledFolding,
                tol: Tolerances = DEFAULT_TOLERANCES
                ) -> Tuple[CheckRecord, CheckRecord]:
    """Seam coincidence (pointwise) and top-normal agreement across seams."""
    mod = tiling.module
    max_gap, max_ang = 0.0, 0.0
    worst_pair = None
    c = mod.corners
    fr = np.linspace(0.0, 1.0, 9)[:, None]
    for seam in tiling.seams:
        ia = _match_edge(tiling, seam.a, seam.endpoints, tol.seam_point_tol)
        ib = _match_edge(tiling, seam.b, seam.endpoints, tol.seam_point_tol)
        ea = _EDGE_CORNERS[ia]
        eb = _EDGE_CORNERS[ib]
        pa = tiling.placements[seam.a].apply(
            c[ea[0]] * (1 - fr) + c[ea[1]] * fr)
        pb = tiling.placements[seam.b].apply(
            c[eb[0]] * (1 - fr) + c[eb[1]] * fr)
        if np.linalg.norm(pa[0] - pb[0]) > np.linalg.norm(pa[0] - pb[-1]):
            pb = pb[::-1]
        gap = float(np.max(np.linalg.norm(pa - pb, axis=1)))
        patch_a, idx_a = _EDGE_TO_PATCH[ia]
        patch_b, idx_b = _EDGE_TO_PATCH[ib]
        na = tiling.placements[seam.a].apply_normal(
            mod.patches[patch_a].normals[idx_a])
        nb = tiling.placements[seam.b].apply_normal(
            mod.patches[patch_b].normals[idx_b])
        ang = math.acos(float(np.clip(np.dot(na, nb), -1.0, 1.0)))
        if gap > max_gap:
            max_gap, worst_pair = gap, (seam.a, seam.b)
        max_ang = max(max_ang, ang)
    rec_pts = CheckRecord(
        name="seam_coincidence", max_residual=max_gap,
        tolerance=tol.seam_point_tol,
        passed=bool(max_gap <= tol.seam_point_tol),
        worst_sample=str(worst_pair),
        extra={"seams": len(tiling.seams)})
    rec_nrm = CheckRecord(
        name="seam_normals", max_residual=max_ang,
        tolerance=tol.seam_normal_tol,
        passed=bool(max_ang <= tol.seam_normal_tol),
        extra={"seams": len(tiling.seams)})
    return rec_pts, rec_nrm


def _aabb(tris: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    return tris.min(axis=1), tris.max(axis=1)


def check_collisions(tiling: TiledFolding,
                     tol: Tolerances = DEFAULT_TOLERANCES) -> CheckRecord:
    """No triangle overlap between non-adjacent module copies."""
    items = tiling.transformed_triangles()
    by_key: Dict[Tuple[int, int], np.ndarray] = {}
    for key, _name, tris in items:
        by_key.setdefault(key, [])
        by_key[key].append(tris)

    def live(tris):
        # drop exactly-degenerate slivers (quad split at the lens tips):
        # zero area, no surface, and no face normal for the axis test
        a2 = np.linalg.norm(np.cross(tris[:, 1] - tris[:, 0],
                                     tris[:, 2] - tris[:, 0]), axis=1)
        return tris[a2 > 1e-14]

    meshes = {k: live(np.concatenate(v)) for k, v in by_key.items()}
    boxes = {k: (m.reshape(-1, 3).min(axis=0), m.reshape(-1, 3).max(axis=0))
             for k, m in meshes.items()}
    pad = 10.0 * tol.collision_shrink
    hits = 0
    worst = None
    keys = sorted(meshes)
    checked_pairs = 0
    for i, ka in enumerate(keys):
        for kb in keys[i + 1:]:
            if kb in tiling._lattice_neighbors(ka):
                continue
            lo_a, hi_a = boxes[ka]
            lo_b, hi_b = boxes[kb]
            if np.any(lo_a > hi_b + pad) or np.any(lo_b > hi_a + pad):
                continue
            ta, tb = meshes[ka], meshes[kb]
            lo1, hi1 = _aabb(ta)
            lo2, hi2 = _aabb(tb)
            ok1 = ~(np.any(lo1 > hi_b[None] + pad, axis=1)
                    | np.any(hi1 < lo_b[None] - pad, axis=1))
            ok2 = ~(np.any(lo2 > hi_a[None] + pad, axis=1)
                    | np.any(hi2 < lo_a[None] - pad, axis=1))
            ta, tb = ta[ok1], tb[ok2]
            lo1, hi1 = lo1[ok1], hi1[ok1]
            lo2, hi2 = lo2[ok2], hi2[ok2]
            if ta.size == 0 or tb.size == 0:
                continue
            sep = (np.any(lo1[:, None] > hi2[None] + pad, axis=2)
                   | np.any(hi1[:, None] < lo2[None] - pad, axis=2))
            ia, ib = np.nonzero(~sep)
            checked_pairs += ia.size
            if ia.size == 0:
                continue
            flags = tri_tri_overlap(ta[ia].reshape(-1, 9),
                                    tb[ib].reshape(-1, 9),
                                    tol.collision_shrink)
            cnt = int(np.sum(flags))
            if cnt and worst is None:
                worst = (ka, kb)
            hits += cnt
    return CheckRecord(
        name="collisions", max_residual=float(hits), tolerance=0.0,
        passed=(hits == 0), worst_sample=str(worst) if worst else None,
        extra={"candidate_pairs": checked_pairs})


# ------------------------------------------------------------------ assembly

def run_all_checks(module: KiteModule, tiling: Optional[TiledFolding] = None,
                   tol: Tolerances = DEFAULT_TOLERANCES, seed: int = 0,
                   n: Optional[int] = None) -> FoldReport:
    """Every enabled check, catching per-check errors into failed records."""
    records: List[CheckRecord] = []
    n_fd = n or fd_samples_hint(module)
    n_iso = n or max(module.n, min(n_fd, 2048))

    def guard(name, fn):
        try:
            out = fn()
        except LensfoldError as exc:
            records.append(CheckRecord(
                name=name, max_residual=math.inf, tolerance=0.0, passed=False,
                extra={"error": type(exc).__name__, "message": str(exc)}))
            return None
        return out

    for sign in (1, -1):
        label = "plus" if sign > 0 else "minus"
        cs = guard(f"crease_sides_{label}",
                   lambda s=sign: crease_sides(module, s, n=n_fd))
        if cs is None:
            continue
        rec = guard(f"bisection_{label}", lambda c=cs: check_bisection(c, tol))
        if rec is not None:
            records.append(rec)
        out = guard(f"fold_angle_mv_{label}",
                    lambda c=cs: check_fold_angle_and_mv(c, tol))
        if out is not None:
            records.append(out[2])
        rec = guard(f"curvature_relation_{label}",
                    lambda c=cs: check_curvature_relation(c, tol))
        if rec is not None:
            records.append(rec)

    for name, fn in (
            ("ruling_mv_rules", lambda: check_ruling_mv_rules(module, tol,
                                                              n=n_fd)),
            ("vertex_kinks", lambda: check_kinks_at_vertices(module, tol)),
            ("isometry", lambda: check_isometry(module, n=n_iso, seed=seed,
                                                tol=tol)),
            ("no_tangent_rulings", lambda: check_no_tangent_rulings(module, tol)),
            ("developability", lambda: check_developability(module, n=n_iso,
                                                            tol=tol)),
            ("semikink_absence", lambda: check_semikink(module, n=n_fd, tol=tol))):
        rec = guard(name, fn)
        if rec is not None:
            records.append(rec)

    if tiling is not None:
        out = guard("seams", lambda: check_seams(tiling, tol))
        if out is not None:
            records.extend(out)
        rec = guard("collisions", lambda: check_collisions(tiling, tol))
        if rec is not None:
            records.append(rec)

    metadata = {
        "pattern_hash": pattern_hash(module.tess),
        "profile": module.tess.profile.spec(),
        "u": module.tess.u,
        "v": module.tess.v,
        "vstar": module.vstar,
        "n": module.n,
        "visible_vertex": module.visible_n,
        "seed": seed,
    }
    return FoldReport(records=records, metadata=metadata)
