"""Deterministic writers: SVG crease patterns, OBJ meshes, JSON, CSV.

All floats go through one fixed format so identical inputs produce
byte-identical files; no timestamps, hostnames, or dict-order dependence.
"""

from __future__ import annotations

import json
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .folding import KiteModule, TiledFolding
from .pattern import LensTessellation

_F = "%.9g"


def _f(x: float) -> str:
    return _F % float(x)


def _fmt_row(prefix: str, vals: Iterable[float]) -> str:
    return prefix + " " + " ".join(_f(v) for v in vals)


# ------------------------------------------------------------------ SVG

_SVG_STYLE = (
    "polyline.mountain{fill:none;stroke:#c62828;stroke-width:0.01}"
    "polyline.valley{fill:none;stroke:#1565c0;stroke-width:0.01;"
    "stroke-dasharray:0.04 0.025}"
    "line.frame{stroke:#999;stroke-width:0.004}")


def svg_pattern(tess: LensTessellation, rows: int = 2, cols: int = 3,
                samples: int = 257) -> str:
    """Flat crease pattern: `rows` lens rows by `cols` lenses.

    Even rows fold mountain (solid), odd rows valley (dashed).  Row k sits
    at height (k/2) * v, odd rows shifted right by u.
    """
    t = np.linspace(0.0, 1.0, samples)
    ell = tess.profile.ell(t)
    parts: List[str] = []
    x_max = cols + tess.u
    y_min = -float(np.max(ell)) - 0.1 * tess.v
    y_max = (rows - 1) / 2.0 * tess.v - y_min
    parts.append('<?xml version="1.0" encoding="UTF-8"?>')
    parts.append(_fmt_row("<!-- lens tessellation  u =", [tess.u])
                 + _fmt_row("  v =", [tess.v]) + " -->")
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_f(-0.1)} {_f(y_min)} {_f(x_max + 0.2)} {_f(y_max)}">')
    parts.append(f"<style>{_SVG_STYLE}</style>")
    # y flipped so +y points up on screen
    parts.append(f'<g transform="scale(1,-1)">')
    for k in range(rows):
        cls = "mountain" if k % 2 == 0 else "valley"
        x0 = 0.0 if k % 2 == 0 else tess.u
        y0 = 0.5 * k * tess.v
        for i in range(cols):
            for sgn in (1.0, -1.0):
                pts = " ".join(
                    f"{_f(x0 + i + tj)},{_f(y0 + sgn * lj)}"
                    for tj, lj in zip(t, ell))
                parts.append(f'<polyline class="{cls}" points="{pts}"/>')
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ------------------------------------------------------------------ OBJ

def _obj_axes(pts: np.ndarray) -> np.ndarray:
    """Model frame (x, y lateral, z fold height) -> OBJ y-up frame."""
    out = np.empty_like(pts)
    out[..., 0] = pts[..., 0]
    out[..., 1] = pts[..., 2]
    out[..., 2] = -pts[..., 1]
    return out


def _emit_patch(lines: List[str], a3: np.ndarray, b3: np.ndarray,
                kind: str, base: int) -> int:
    """Vertices + faces of one ruled patch; returns the new vertex base."""
    a = _obj_axes(a3)
    b = _obj_axes(b3)
    m = a.shape[0]
    if kind == "cone":
        lines.append(_fmt_row("v", a[0]))
        for row in b:
            lines.append(_fmt_row("v", row))
        apex = base + 1
        first_b = base + 2
        for k in range(m - 1):
            lines.append(f"f {apex} {first_b + k} {first_b + k + 1}")
        return base + 1 + m
    for row in a:
        lines.append(_fmt_row("v", row))
    for row in b:
        lines.append(_fmt_row("v", row))
    up = base + 1
    dn = base + 1 + m
    for k in range(m - 1):
        lines.append(f"f {up + k} {dn + k} {dn + k + 1}")
        lines.append(f"f {up + k} {dn + k + 1} {up + k + 1}")
    return base + 2 * m


def obj_module(module: KiteModule) -> str:
    """Single folded module: one OBJ object per patch."""
    lines = ["# folded lens module", _fmt_row("# vstar =", [module.vstar])]
    base = 0
    for name in ("U", "M", "L"):
        p = module.patches[name]
        lines.append(f"o patch_{name}")
        lines.append(f"g patch_{name}")
        base = _emit_patch(lines, p.a3, p.b3, p.kind, base)
    return "\n".join(lines) + "\n"


def obj_tiling(tiling: TiledFolding) -> str:
    """Tiled folding: one OBJ group per module copy, patches inside."""
    lines = ["# folded lens tessellation",
             _fmt_row("# vstar =", [tiling.module.vstar])]
    base = 0
    for key in sorted(tiling.placements):
        pl = tiling.placements[key]
        tag = f"module_{key[0]}_{key[1]}"
        lines.append(f"o {tag}")
        lines.append(f"g {tag}")
        for name in ("U", "M", "L"):
            p = tiling.module.patches[name]
            # point inversion preserves winding (cross products are even)
            a3 = pl.apply(p.a3)
            b3 = pl.apply(p.b3)
            lines.append(f"# patch_{name}")
            base = _emit_patch(lines, a3, b3, p.kind, base)
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ JSON

def dumps_sorted(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def pattern_json(tess: LensTessellation, extra: Optional[dict] = None) -> str:
    out = {"profile": tess.profile.spec(), "u": tess.u, "v": tess.v}
    if extra:
        out.update(extra)
    return dumps_sorted(out)


# ------------------------------------------------------------------ CSV

def sweep_manifest_csv(rows: Sequence[Tuple[int, float, float, float]]) -> str:
    lines = ["frame,vstar,theta_total,max_residual"]
    for frame, vstar, theta, res in rows:
        lines.append(f"{frame:d},{_f(vstar)},{_f(theta)},{_f(res)}")
    return "\n".join(lines) + "\n"


def residual_csv(report) -> str:
    """Per-sample residuals for every check that kept its samples."""
    lines = ["check,t,residual"]
    for rec in report.records:
        if rec.samples is None:
            continue
        for tj, rj in rec.samples:
            lines.append(f"{rec.name},{_f(tj)},{_f(rj)}")
    return "\n".join(lines) + "\n"
