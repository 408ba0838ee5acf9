"""Command line front end.

Subcommands:
  pattern   flat crease pattern (SVG + JSON)
  limits    visibility + fold-depth limit (JSON)
  fold      one folded state (OBJ + check report)
  sweep     family of folded states (OBJs + CSV manifest)

Exit codes: 0 ok, 1 verification failure, 2 bad configuration,
3 pattern not foldable (no visible vertex), 4 fold depth infeasible.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import export
from .config import DEFAULT_TOLERANCES
from .errors import (ConfigError, FoldDepthInfeasible, InfeasiblePattern,
                     InvalidPattern, InvalidProfile, LensfoldError,
                     SingularHeight, TrapezoidInfeasible)
from .folding import build_kite_module, sweep_vstar, tile
from .pattern import LensTessellation
from .profiles import LensProfile, make_profile, profile_from_spec
from .verify import run_all_checks

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_UNFOLDABLE = 3
EXIT_DEPTH_INFEASIBLE = 4


@dataclass
class JobConfig:
    """Validated inputs for one command; built from JSON + flags."""
    profile: LensProfile
    u: float
    v: float
    vstar: Optional[float] = None
    samples: int = 512
    rows: int = 1
    cols: int = 1
    frames: int = 16
    out_dir: Path = field(default_factory=lambda: Path("out"))
    report: Optional[Path] = None
    no_verify: bool = False
    tol_angle: Optional[float] = None
    tol_length: Optional[float] = None

    def __post_init__(self):
        if not 0.0 <= self.u < 1.0:
            raise ConfigError(f"u must lie in [0, 1), got {self.u}")
        if self.v <= 0.0:
            raise ConfigError(f"v must be positive, got {self.v}")
        if self.samples < 64:
            raise ConfigError(f"samples must be >= 64, got {self.samples}")
        if self.rows < 1 or self.cols < 1:
            raise ConfigError("rows and cols must be >= 1")
        if self.frames < 2:
            raise ConfigError("frames must be >= 2")

    @property
    def tess(self) -> LensTessellation:
        return LensTessellation(self.profile, u=self.u, v=self.v)

    def tolerances(self):
        return DEFAULT_TOLERANCES.with_overrides(
            angle_tol=self.tol_angle, length_tol=self.tol_length)


def _profile_from_args(merged: dict) -> LensProfile:
    spec = merged.get("profile")
    if isinstance(spec, dict):
        return profile_from_spec(spec)
    kind = spec
    if kind is None:
        raise ConfigError("no profile given (use --profile or a config file)")
    if kind == "sine":
        if merged.get("amp") is None:
            raise ConfigError("sine profile needs --amp")
        return make_profile("sine", amplitude=merged["amp"])
    if kind in ("arc", "circular_arc"):
        if merged.get("height") is None:
            raise ConfigError("arc profile needs --height")
        return make_profile("circular_arc", height=merged["height"])
    if kind == "poly":
        if not merged.get("coeffs"):
            raise ConfigError("poly profile needs --coeffs c0,c1,...")
        coeffs = [float(c) for c in str(merged["coeffs"]).split(",")]
        return make_profile("poly", coefficients=coeffs)
    if kind in ("table", "tabulated"):
        path = merged.get("table")
        if not path:
            raise ConfigError("tabulated profile needs --table FILE")
        try:
            knots = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
        except OSError as exc:
            raise ConfigError(f"cannot read knot table: {exc}") from None
        if knots.ndim != 2 or knots.shape[1] != 2:
            raise ConfigError("knot table must have two columns: t,y")
        return make_profile("tabulated",
                            knots_t=knots[:, 0], knots_y=knots[:, 1])
    raise ConfigError(f"unknown profile kind {kind!r}")


_DEFAULTS = dict(u=0.0, v=2.0, vstar=None, samples=512, rows=1, cols=1,
                 frames=16, out_dir="out", report=None, no_verify=False,
                 tol_angle=None, tol_length=None)


def load_job(args: argparse.Namespace) -> JobConfig:
    """Merge config-file values with flags (flags win), then validate."""
    merged = dict(_DEFAULTS)
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot load config: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        merged.update(data)
    for key in ("profile", "amp", "height", "coeffs", "table", "u", "v",
                "vstar", "samples", "rows", "cols", "frames", "out_dir",
                "report", "tol_angle", "tol_length"):
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    if getattr(args, "no_verify", False):
        merged["no_verify"] = True
    profile = _profile_from_args(merged)
    try:
        return JobConfig(
            profile=profile,
            u=float(merged["u"]),
            v=float(merged["v"]),
            vstar=None if merged["vstar"] is None else float(merged["vstar"]),
            samples=int(merged["samples"]),
            rows=int(merged["rows"]),
            cols=int(merged["cols"]),
            frames=int(merged["frames"]),
            out_dir=Path(merged["out_dir"]),
            report=None if merged["report"] is None else Path(merged["report"]),
            no_verify=bool(merged["no_verify"]),
            tol_angle=merged["tol_angle"],
            tol_length=merged["tol_length"],
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad configuration value: {exc}") from None


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
    print(f"wrote {path}")


# ------------------------------------------------------------------ commands

def cmd_pattern(cfg: JobConfig) -> int:
    tess = cfg.tess
    tess.require_valid()
    rows = max(cfg.rows, 2)
    cols = max(cfg.cols, 3)
    _write(cfg.out_dir / "pattern.svg",
           export.svg_pattern(tess, rows=rows, cols=cols))
    _write(cfg.out_dir / "pattern.json", export.pattern_json(tess))
    return EXIT_OK


def cmd_limits(cfg: JobConfig) -> int:
    tess = cfg.tess
    tess.require_valid()
    vis = tess.visibility_check()
    out = {"visible_vertex": vis.visible_vertex, "vstar_limit": None}
    if vis.visible_vertex is None:
        out["witness_failures"] = [
            {"t": t, "reason": why} for t, why in vis.witness_failures[:8]]
        _write(cfg.out_dir / "limits.json", export.dumps_sorted(out))
        print("no visible vertex: pattern is not foldable by this family")
        return EXIT_UNFOLDABLE
    out["vstar_limit"] = tess.vstar_limit(visible_n=vis.visible_vertex)
    _write(cfg.out_dir / "limits.json", export.dumps_sorted(out))
    return EXIT_OK


def cmd_fold(cfg: JobConfig) -> int:
    tess = cfg.tess
    if cfg.vstar is None:
        raise ConfigError("fold needs --vstar")
    module = build_kite_module(tess, cfg.vstar, n=cfg.samples)
    tiling = None
    if cfg.rows * cfg.cols > 1:
        tiling = tile(module, cfg.rows, cfg.cols)
        _write(cfg.out_dir / "fold.obj", export.obj_tiling(tiling))
    else:
        _write(cfg.out_dir / "fold.obj", export.obj_module(module))
    if cfg.no_verify:
        return EXIT_OK
    report = run_all_checks(module, tiling=tiling, tol=cfg.tolerances())
    report_path = cfg.report or (cfg.out_dir / "report.json")
    _write(report_path, export.dumps_sorted(report.to_dict()))
    _write(cfg.out_dir / "residuals.csv", export.residual_csv(report))
    if not report.passed:
        bad = [r.name for r in report.records if not r.passed]
        print(f"verification FAILED: {', '.join(bad)}")
        return EXIT_CHECK_FAILED
    print("verification passed")
    return EXIT_OK


def cmd_sweep(cfg: JobConfig) -> int:
    tess = cfg.tess
    result = sweep_vstar(tess, cfg.frames, n=cfg.samples)
    rows = []
    for idx, (vstar, module) in enumerate(zip(result.vstars, result.modules)):
        _write(cfg.out_dir / f"fold_{idx:03d}.obj", export.obj_module(module))
        res = float("nan")
        if not cfg.no_verify:
            report = run_all_checks(module, tol=cfg.tolerances())
            res = max(r.max_residual for r in report.records)
            if not report.passed:
                bad = [r.name for r in report.records if not r.passed]
                print(f"frame {idx} (vstar={vstar:.6g}) FAILED: {', '.join(bad)}")
                return EXIT_CHECK_FAILED
        rows.append((idx, vstar, result.theta_totals[idx], res))
    _write(cfg.out_dir / "sweep.csv", export.sweep_manifest_csv(rows))
    return EXIT_OK


# ------------------------------------------------------------------ parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("pattern definition")
    g.add_argument("--config", help="JSON config file (flags override it)")
    g.add_argument("--profile",
                   choices=["sine", "arc", "circular_arc", "poly", "table",
                            "tabulated"],
                   help="lens profile family")
    g.add_argument("--amp", type=float, help="sine amplitude")
    g.add_argument("--height", type=float, help="arc apex height")
    g.add_argument("--coeffs", help="poly coefficients c0,c1,... ")
    g.add_argument("--table", help="CSV knot table for tabulated profiles")
    g.add_argument("--u", type=float, help="row shear in [0, 1)")
    g.add_argument("--v", type=float, help="row spacing > 0")
    o = common.add_argument_group("job")
    o.add_argument("--vstar", type=float, help="fold depth (0, v)")
    o.add_argument("--samples", type=int, help="samples per crease (>= 64)")
    o.add_argument("--rows", type=int, help="tiling rows")
    o.add_argument("--cols", type=int, help="tiling columns")
    o.add_argument("--frames", type=int, help="sweep frame count (>= 2)")
    o.add_argument("--out-dir", dest="out_dir", help="output directory")
    o.add_argument("--report", help="check report path (fold)")
    o.add_argument("--no-verify", dest="no_verify", action="store_true",
                   help="skip the check suite")
    o.add_argument("--tol-angle", dest="tol_angle", type=float,
                   help="override angular tolerance [rad]")
    o.add_argument("--tol-length", dest="tol_length", type=float,
                   help="override relative length tolerance")

    parser = argparse.ArgumentParser(
        prog="lensfold",
        description="Fold lens tessellations and verify the result.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("pattern", parents=[common],
                   help="write the flat crease pattern (SVG + JSON)")
    sub.add_parser("limits", parents=[common],
                   help="report visibility and the fold-depth limit")
    sub.add_parser("fold", parents=[common],
                   help="construct one folded state and verify it")
    sub.add_parser("sweep", parents=[common],
                   help="construct a family of folded states")
    return parser


_COMMANDS = {
    "pattern": cmd_pattern,
    "limits": cmd_limits,
    "fold": cmd_fold,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = load_job(args)
        return _COMMANDS[args.command](cfg)
    except (ConfigError, InvalidProfile, InvalidPattern) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasiblePattern as exc:
        print(f"pattern not foldable: {exc}", file=sys.stderr)
        return EXIT_UNFOLDABLE
    except (FoldDepthInfeasible, TrapezoidInfeasible, SingularHeight) as exc:
        t = getattr(exc, "t", None)
        where = "" if t is None else f" (worst parameter t={t:.6g})"
        print(f"fold depth infeasible: {exc}{where}", file=sys.stderr)
        return EXIT_DEPTH_INFEASIBLE
    except LensfoldError as exc:
        print(f"verification error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
