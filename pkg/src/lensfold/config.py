"""Shared numeric tolerances and defaults.

All geometric checks read their thresholds from a Tolerances instance so the
CLI can override the user-facing ones (angle/length) in one place.
"""
from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    # curve/frame construction
    tau_arc: float = 1e-9        # |numerical tangent norm - 1| at interior samples
    tau_unit: float = 1e-8       # unit-length defect of frame vectors
    tau_orth: float = 1e-8       # orthogonality defect of frame vectors
    tau_geo: float = 1e-4        # geodesic-curvature match, relative to curvature scale
    k_min: float = 1e-7          # curvature floor below which frames are undefined

    # verification thresholds (user-overridable via CLI)
    angle_tol: float = 1e-4      # radians: bisection residual and friends
    length_tol: float = 1e-6     # relative: crease arclength comparison
    isometry_tol: float = 1e-5   # relative: aggregate isometry over sampled curves
    curvature_rel_tol: float = 1e-3  # relative: fold-angle/curvature identity
    frame_k_floor: float = 1e-4  # curvature below this: FD frame direction unreliable

    # structural floors
    ruling_angle_floor: float = 1e-3  # rad: min crease-to-ruling angle
    kink_floor: float = 1e-3          # rad: min deviation from straight at vertices
    rho_floor: float = 1e-6           # rad: |fold angle| below this = not a crease
    seam_point_tol: float = 1e-9      # absolute: seam coincidence in tilings
    seam_normal_tol: float = 1e-6     # rad: seam normal agreement in tilings
    developability_tol: float = 1e-5  # rad: normal constancy along rulings

    # 2D pattern machinery
    contact_tol: float = 1e-9    # endpoint-contact tolerance in visibility tests
    collision_shrink: float = 1e-7  # absolute triangle shrink before collision tests

    def with_overrides(self, angle_tol: float | None = None,
                       length_tol: float | None = None) -> "Tolerances":
        kw = {}
        if angle_tol is not None:
            kw["angle_tol"] = angle_tol
        if length_tol is not None:
            kw["length_tol"] = length_tol
        return replace(self, **kw) if kw else self


DEFAULT_TOLERANCES = Tolerances()

# default sampling resolutions
DEFAULT_SAMPLES = 512            # crease samples per module
MIN_SAMPLES = 64
QUADRATURE_PANELS = 4096         # fixed-step panels for cumulative integrals
VISIBILITY_T_SAMPLES = 1024      # query points along the lens crease
VISIBILITY_POLYLINE_SAMPLES = 2048  # samples per blocking-crease polyline
VISIBILITY_WINDOW = 3            # candidate vertex window half-width
VSTAR_SCAN_SAMPLES = 10_000      # coarse scan before golden-section refinement
SWEEP_MARGIN_FRACTION = 1e-4     # of (v - vstar_lim), kept off both sweep ends
