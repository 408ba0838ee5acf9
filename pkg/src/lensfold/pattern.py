"""Flat crease pattern of a lens tessellation.

Rows of congruent lenses (profile graph + its mirror image) tile the plane:
even rows sit at integer x-offsets, odd rows are shifted by (u, v/2).  Even
rows fold as mountains, odd rows as valleys.  The key pattern-level
predicates live here: row separation, vertex visibility from the reference
crease, and the fold-depth feasibility bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import _kernels
from .config import (DEFAULT_TOLERANCES, VISIBILITY_POLYLINE_SAMPLES,
                     VISIBILITY_T_SAMPLES, VISIBILITY_WINDOW,
                     VSTAR_SCAN_SAMPLES, Tolerances)
from .errors import InfeasiblePattern, InvalidPattern
from .numerics import golden_minimize
from .profiles import LensProfile

_GAP_SCAN = 4096


@dataclass
class VisibilityResult:
    """Outcome of the vertex-visibility test.

    visible_vertex is the integer n with V_{n,1} visible from the whole
    reference crease, or None; witness_failures hold (t, description) pairs
    for every sampled blocking found along the way."""
    visible_vertex: Optional[int]
    witness_failures: List[Tuple[float, str]] = field(default_factory=list)
    candidates: List[int] = field(default_factory=list)


class LensTessellation:
    """Crease pattern defined by (profile, u, v).

    u is the horizontal offset of odd rows in [0,1); v the vertical period.
    Construction checks parameter ranges only; geometric validity (adjacent
    rows keep a positive gap) is exposed as `row_gap`/`is_valid` and
    enforced by the operations that require it, so invalid inputs can still
    be drawn and reported.
    """

    def __init__(self, profile: LensProfile, u: float, v: float):
        if not 0.0 <= u < 1.0:
            raise InvalidPattern(f"offset u must lie in [0,1), got {u}")
        if not v > 0.0:
            raise InvalidPattern(f"row period v must be positive, got {v}")
        self.profile = profile
        self.u = float(u)
        self.v = float(v)
        self.row_gap, self.row_gap_argmin = self._min_row_gap()

    # -- pattern geometry -----------------------------------------------

    def _ell_periodic(self, x):
        return self.profile.ell(np.mod(x, 1.0))

    def _min_row_gap(self):
        """min over x of v/2 - ell(x mod 1) - ell((x-u) mod 1): the vertical
        clearance between the top crease of an even row and the bottom
        crease of the odd row above it."""
        def gap(x):
            return float(self.v / 2.0 - self._ell_periodic(np.asarray(x))
                         - self._ell_periodic(np.asarray(x) - self.u))
        xs = np.linspace(0.0, 1.0, _GAP_SCAN, endpoint=False)
        g = (self.v / 2.0 - self._ell_periodic(xs)
             - self._ell_periodic(xs - self.u))
        i = int(np.argmin(g))
        lo = xs[i] - 1.5 / _GAP_SCAN
        hi = xs[i] + 1.5 / _GAP_SCAN
        xm = golden_minimize(gap, lo, hi)
        return min(float(g[i]), gap(xm)), float(xm)

    @property
    def is_valid(self) -> bool:
        return self.row_gap > 0.0

    def require_valid(self) -> None:
        if not self.is_valid:
            raise InvalidPattern(
                f"adjacent crease rows touch or overlap: min gap "
                f"{self.row_gap:.6g} at x={self.row_gap_argmin:.6f}")

    def vertex(self, i: int, j: int) -> np.ndarray:
        """Crease-pattern vertex: (i, (j/2) v) on even rows, shifted by
        (u, v/2) on odd rows."""
        if j % 2 == 0:
            return np.array([float(i), (j // 2) * self.v])
        return np.array([i + self.u, (j // 2 + 0.5) * self.v])

    def crease_point(self, i: int, j: int, sign: int, t):
        """Point(s) of crease gamma^sign_{i,j} at parameter t in [0,1].

        Even rows: (t + i, sign*ell(t) + (j/2) v).  Odd rows run reversed:
        (1 - t + i + u, sign*ell(1-t) + (j/2 + 1/2) v)."""
        t = np.asarray(t, dtype=float)
        if sign not in (1, -1):
            raise InvalidPattern("crease sign must be +1 or -1")
        if j % 2 == 0:
            x = t + i
            y = sign * self.profile.ell(t) + (j // 2) * self.v
        else:
            x = 1.0 - t + i + self.u
            y = sign * self.profile.ell(1.0 - t) + (j // 2 + 0.5) * self.v
        return np.stack([x, y], axis=-1)

    def crease_polyline(self, i: int, j: int, sign: int,
                        n: int = VISIBILITY_POLYLINE_SAMPLES) -> np.ndarray:
        return self.crease_point(i, j, sign, np.linspace(0.0, 1.0, n))

    def crease_is_mountain(self, j: int) -> bool:
        """Even rows fold as mountains, odd rows as valleys."""
        return j % 2 == 0

    def apex(self) -> np.ndarray:
        """Apex of the reference crease gamma^+_{0,0}."""
        ts = self.profile.t_apex
        return np.array([ts, self.profile.height])

    # -- fold-depth expression --------------------------------------------

    def depth_gap(self, t, u_eff: Optional[float] = None):
        """q(t) = v/2 - ell(t) - ell'(t) (u_eff - t).

        Positivity of q along the reference crease is simultaneously the
        convex-side condition of the visibility test (it is the dot product
        of the segment to V_{n,1} with the outward crease normal) and the
        premise of the fold-depth bound."""
        t = np.asarray(t, dtype=float)
        ue = self.u if u_eff is None else float(u_eff)
        return (self.v / 2.0 - self.profile.ell(t)
                - self.profile.dell(t) * (ue - t))

    # -- visibility --------------------------------------------------------

    def _window_polylines(self, n: int, poly_samples: int):
        """Crease polylines that could block a segment from the reference
        crease to V_{n,1}: rows 0 and 1, columns covering the x-span."""
        xmin = min(0.0, self.u + n) - 1.0
        xmax = max(1.0, self.u + n) + 1.0
        polys = []
        for j in (0, 1):
            off = self.u if j == 1 else 0.0
            for i in range(math.floor(xmin - off) - 1, math.ceil(xmax - off) + 1):
                for sign in (1, -1):
                    polys.append(((i, j, sign),
                                  self.crease_polyline(i, j, sign, poly_samples)))
        return polys

    def vertex_is_visible(self, n: int,
                          n_samples: int = VISIBILITY_T_SAMPLES,
                          poly_samples: int = VISIBILITY_POLYLINE_SAMPLES,
                          tol: Tolerances = DEFAULT_TOLERANCES):
        """Test visibility of V_{n,1} from every sampled point of the
        reference crease.  Returns (ok, failures)."""
        if n_samples < 2:
            raise InvalidPattern("visibility needs n_samples >= 2")
        t = np.linspace(0.0, 1.0, n_samples)
        src = self.crease_point(0, 0, 1, t)
        target = self.vertex(n, 1)
        failures: List[Tuple[float, str]] = []

        # (a) leave on the convex side: dot((V - p), (-ell', 1)) = q(t) > 0
        dots = self.depth_gap(t, u_eff=self.u + n)
        for k in np.where(dots <= 0.0)[0]:
            failures.append((float(t[k]),
                             f"V_{n},1: segment leaves on the concave side"))

        # (b) no crease may cut a segment away from its endpoints; tested
        # for the sight lines that did leave on the convex side
        keep = np.where(dots > 0.0)[0]
        if keep.size:
            segs = np.concatenate(
                [src[keep], np.broadcast_to(target, (keep.size, 2))], axis=1)
            blocked = np.zeros(keep.size, dtype=bool)
            for (ci, cj, csign), poly in self._window_polylines(n, poly_samples):
                hits = _kernels.segments_cross_polyline(segs, poly, tol.contact_tol)
                new = (hits != 0) & ~blocked
                for k in np.where(new)[0]:
                    sgn = "+" if csign == 1 else "-"
                    failures.append((float(t[keep[k]]),
                                     f"V_{n},1: blocked by crease {sgn}({ci},{cj})"))
                blocked |= hits != 0
        return not failures, failures

    def visibility_check(self, n_samples: int = VISIBILITY_T_SAMPLES,
                         poly_samples: int = VISIBILITY_POLYLINE_SAMPLES,
                         tol: Tolerances = DEFAULT_TOLERANCES) -> VisibilityResult:
        """Find a vertex V_{n,1} visible from the whole reference crease.

        Candidates n with |n| <= window are ordered by how central the
        vertex sits over the lens apex (|u + n - t_apex|, then n); the
        first passing candidate wins.  With no passing candidate the result
        carries every sampled blocking witness.
        """
        self.require_valid()
        t_star = self.profile.t_apex
        candidates = sorted(range(-VISIBILITY_WINDOW, VISIBILITY_WINDOW + 1),
                            key=lambda n: (abs(self.u + n - t_star), n))
        all_failures: List[Tuple[float, str]] = []
        for n in candidates:
            ok, failures = self.vertex_is_visible(
                n, n_samples=n_samples, poly_samples=poly_samples, tol=tol)
            if ok:
                return VisibilityResult(visible_vertex=n,
                                        witness_failures=all_failures,
                                        candidates=candidates)
            all_failures.extend(failures)
        return VisibilityResult(visible_vertex=None,
                                witness_failures=all_failures,
                                candidates=candidates)

    # -- fold-depth feasibility bound ---------------------------------------

    def vstar_limit(self, n_samples: int = VSTAR_SCAN_SAMPLES,
                    visible_n: Optional[int] = None) -> float:
        """Lower bound v*_lim < v of the feasible folded row period:
        v*_lim = v - min_t 4 q(t) / (1 + ell'(t)^2).

        visible_n shifts u by an integer so that V_{0,1} is the visible
        vertex; when omitted the visibility test chooses it.
        """
        self.require_valid()
        if visible_n is None:
            res = self.visibility_check()
            if res.visible_vertex is None:
                raise InfeasiblePattern(
                    "no vertex is visible from the reference crease")
            visible_n = res.visible_vertex
        ue = self.u + visible_n

        ts = np.linspace(0.0, 1.0, n_samples)
        q = self.depth_gap(ts, u_eff=ue)
        if np.any(q <= 0.0):
            k = int(np.argmin(q))
            raise InfeasiblePattern(
                f"fold-depth expression non-positive at t={ts[k]:.6f} "
                f"(q={q[k]:.6g})")

        def g(t):
            d = self.profile.dell(np.asarray(t))
            return float(4.0 * self.depth_gap(t, u_eff=ue) / (1.0 + d * d))

        gv = 4.0 * q / (1.0 + self.profile.dell(ts) ** 2)
        i = int(np.argmin(gv))
        lo = max(0.0, ts[i] - 1.5 / n_samples)
        hi = min(1.0, ts[i] + 1.5 / n_samples)
        tm = golden_minimize(g, lo, hi)
        gmin = min(float(gv[i]), g(tm))
        if gmin <= 0.0:
            raise InfeasiblePattern(
                f"fold-depth expression non-positive near t={tm:.6f}")
        return self.v - gmin

    # -- congruence identity -------------------------------------------------

    def rotation_identity_residual(self, n: int, n_samples: int = 256) -> float:
        """Half-turn congruence between rows.

        For a left-right symmetric profile, the 180-degree rotation taking
        V_{n,1} to V_{2,0} carries the odd-row crease gamma^-_{n,1} onto
        gamma^+_{1,0} with matching parameterization; returns the max
        pointwise distance.  (Asymmetric profiles break this identity: odd
        rows are translates, not rotations, of even rows.)
        """
        t = np.linspace(0.0, 1.0, n_samples)
        lower = self.crease_point(n, 1, -1, t)
        center2 = self.vertex(n, 1) + self.vertex(2, 0)
        rotated = center2[None, :] - lower
        upper = self.crease_point(1, 0, 1, t)
        return float(np.max(np.linalg.norm(rotated - upper, axis=1)))


# functional aliases mirroring the operation names
def crease_point(tess: LensTessellation, i: int, j: int, sign: int, t):
    return tess.crease_point(i, j, sign, t)


def vertices(tess: LensTessellation, i: int, j: int) -> np.ndarray:
    return tess.vertex(i, j)


def visibility_check(tess: LensTessellation,
                     n_samples: int = VISIBILITY_T_SAMPLES) -> VisibilityResult:
    return tess.visibility_check(n_samples=n_samples)


def vstar_limit(tess: LensTessellation,
                n_samples: int = VSTAR_SCAN_SAMPLES) -> float:
    return tess.vstar_limit(n_samples=n_samples)
