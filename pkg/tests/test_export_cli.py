import json

import numpy as np
import pytest

from lensfold import cli, export
from lensfold.folding import build_kite_module, tile
from lensfold.pattern import LensTessellation
from lensfold.profiles import SineProfile

VSTAR_LIM_REF = 0.8799002871543276  # sine amp 0.3, u=0.5, v=2


def ref_module(n=128):
    return build_kite_module(LensTessellation(SineProfile(0.3), 0.5, 2.0),
                             1.6, n=n)


# ------------------------------------------------------------------ export

def test_obj_module_structure():
    text = export.obj_module(ref_module())
    assert text.count("o patch_") == 3
    for name in ("patch_U", "patch_M", "patch_L"):
        assert f"o {name}\n" in text
    lines = text.splitlines()
    nv = sum(1 for l in lines if l.startswith("v "))
    nf = sum(1 for l in lines if l.startswith("f "))
    assert nv > 300 and nf > 300
    # faces must reference valid 1-based vertex indices
    idx = [int(p) for l in lines if l.startswith("f ") for p in l.split()[1:]]
    assert min(idx) == 1 and max(idx) == nv


def test_obj_tiling_structure():
    til = tile(ref_module(), 3, 3)
    text = export.obj_tiling(til)
    assert text.count("o module_") == 9


def test_obj_vertices_are_finite():
    text = export.obj_module(ref_module())
    vals = [float(p) for l in text.splitlines() if l.startswith("v ")
            for p in l.split()[1:]]
    assert np.all(np.isfinite(vals))


def test_svg_pattern_classes():
    tess = LensTessellation(SineProfile(0.3), 0.5, 2.0)
    svg = export.svg_pattern(tess)
    assert svg.startswith("<?xml")
    assert ".mountain" in svg and ".valley" in svg
    assert svg.count("<polyline") >= 12  # 2 rows x 3 cols x 2 arcs each


def test_pattern_json_roundtrip():
    tess = LensTessellation(SineProfile(0.3), 0.5, 2.0)
    d = json.loads(export.pattern_json(tess))
    assert d["profile"]["kind"] == "sine"
    assert d["u"] == 0.5 and d["v"] == 2.0


def test_sweep_manifest_csv_shape():
    rows = [(0, 1.0, 2.0, 1e-8), (1, 1.5, 1.5, 2e-8)]
    text = export.sweep_manifest_csv(rows)
    lines = text.strip().splitlines()
    assert lines[0] == "frame,vstar,theta_total,max_residual"
    assert len(lines) == 3


# ------------------------------------------------------------ cli: fold

def run_cli(*argv):
    return cli.main(list(argv))


def test_fold_writes_obj_and_report(tmp_path):
    out = tmp_path / "f"
    code = run_cli("fold", "--profile", "sine", "--amp", "0.3", "--u", "0.5",
                   "--v", "2.0", "--vstar", "1.6", "--samples", "128",
                   "--out-dir", str(out))
    assert code == 0
    assert (out / "fold.obj").exists()
    rep = json.loads((out / "report.json").read_text())
    assert rep["passed"] is True
    assert (out / "residuals.csv").read_text().startswith("check,t,residual")


def test_fold_is_byte_identical_across_runs(tmp_path):
    args = ("fold", "--profile", "sine", "--amp", "0.3", "--u", "0.5",
            "--v", "2.0", "--vstar", "1.6", "--samples", "128")
    a, b = tmp_path / "a", tmp_path / "b"
    assert run_cli(*args, "--out-dir", str(a)) == 0
    assert run_cli(*args, "--out-dir", str(b)) == 0
    for name in ("fold.obj", "report.json", "residuals.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_fold_tiling_emits_module_groups(tmp_path):
    out = tmp_path / "t"
    code = run_cli("fold", "--profile", "sine", "--amp", "0.3", "--u", "0.5",
                   "--v", "2.0", "--vstar", "1.6", "--samples", "128",
                   "--rows", "3", "--cols", "3", "--out-dir", str(out))
    assert code == 0
    assert (out / "fold.obj").read_text().count("o module_") == 9


def test_fold_no_verify_skips_report(tmp_path):
    out = tmp_path / "nv"
    code = run_cli("fold", "--profile", "sine", "--amp", "0.3", "--u", "0.5",
                   "--v", "2.0", "--vstar", "1.6", "--samples", "128",
                   "--no-verify", "--out-dir", str(out))
    assert code == 0
    assert (out / "fold.obj").exists()
    assert not (out / "report.json").exists()


def test_fold_overtight_tolerance_fails_checks(tmp_path, capsys):
    code = run_cli("fold", "--profile", "sine", "--amp", "0.3", "--u", "0.5",
                   "--v", "2.0", "--vstar", "1.6", "--samples", "128",
                   "--tol-angle", "1e-16", "--out-dir", str(tmp_path / "x"))
    assert code == cli.EXIT_CHECK_FAILED
    assert "bisection" in capsys.readouterr().out


def test_fold_below_depth_limit_exits_4(tmp_path, capsys):
    code = run_cli("fold", "--profile", "sine", "--amp", "0.3", "--u", "0.5",
                   "--v", "2.0", "--vstar", "0.44", "--samples", "128",
                   "--out-dir", str(tmp_path / "x"))
    assert code == cli.EXIT_DEPTH_INFEASIBLE
    assert "t=" in capsys.readouterr().err


def test_fold_blocked_pattern_exits_3(tmp_path):
    # deep lens: the neighboring lens occludes every candidate vertex
    code = run_cli("fold", "--profile", "sine", "--amp", "0.4", "--u", "0.5",
                   "--v", "1.2", "--vstar", "0.9", "--samples", "128",
                   "--out-dir", str(tmp_path / "x"))
    assert code == cli.EXIT_UNFOLDABLE


def test_overlapping_rows_exit_2(tmp_path):
    code = run_cli("fold", "--profile", "sine", "--amp", "0.45", "--u", "0.5",
                   "--v", "1.0", "--vstar", "0.8", "--samples", "128",
                   "--out-dir", str(tmp_path / "x"))
    assert code == cli.EXIT_CONFIG


def test_bad_flag_values_exit_2(tmp_path):
    assert run_cli("fold", "--profile", "sine", "--amp", "0.3", "--u", "1.5",
                   "--v", "2.0", "--vstar", "1.6") == cli.EXIT_CONFIG
    assert run_cli("fold", "--profile", "nosuch") == cli.EXIT_CONFIG
    assert run_cli("fold", "--profile", "sine", "--amp", "0.3", "--u", "0.5",
                   "--v", "2.0") == cli.EXIT_CONFIG  # fold needs --vstar


# ------------------------------------------------------- cli: other commands

def test_pattern_command_writes_svg_and_json(tmp_path):
    out = tmp_path / "p"
    code = run_cli("pattern", "--profile", "sine", "--amp", "0.3", "--u",
                   "0.5", "--v", "2.0", "--out-dir", str(out))
    assert code == 0
    svg = (out / "pattern.svg").read_text()
    assert ".mountain" in svg
    d = json.loads((out / "pattern.json").read_text())
    assert d["v"] == 2.0


def test_limits_command_matches_frozen_value(tmp_path):
    out = tmp_path / "l"
    code = run_cli("limits", "--profile", "sine", "--amp", "0.3", "--u",
                   "0.5", "--v", "2.0", "--out-dir", str(out))
    assert code == 0
    d = json.loads((out / "limits.json").read_text())
    assert d["visible_vertex"] == 0
    assert d["vstar_limit"] == pytest.approx(VSTAR_LIM_REF, abs=1e-12)


def test_limits_blocked_pattern_reports_witnesses(tmp_path):
    out = tmp_path / "lb"
    code = run_cli("limits", "--profile", "sine", "--amp", "0.4", "--u",
                   "0.5", "--v", "1.2", "--out-dir", str(out))
    assert code == cli.EXIT_UNFOLDABLE
    d = json.loads((out / "limits.json").read_text())
    assert d["visible_vertex"] is None
    assert len(d["witness_failures"]) > 0


def test_sweep_command_writes_frames_and_manifest(tmp_path):
    out = tmp_path / "s"
    code = run_cli("sweep", "--profile", "sine", "--amp", "0.3", "--u", "0.5",
                   "--v", "2.0", "--frames", "3", "--samples", "128",
                   "--out-dir", str(out))
    assert code == 0
    for k in range(3):
        assert (out / f"fold_{k:03d}.obj").exists()
    lines = (out / "sweep.csv").read_text().strip().splitlines()
    assert lines[0] == "frame,vstar,theta_total,max_residual"
    assert len(lines) == 4
    vstars = [float(l.split(",")[1]) for l in lines[1:]]
    assert vstars == sorted(vstars)


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "job.json"
    cfg.write_text(json.dumps({
        "profile": {"kind": "sine", "amplitude": 0.3},
        "u": 0.5, "v": 2.0, "vstar": 1.6, "samples": 128,
        "no_verify": True}))
    out = tmp_path / "c"
    code = run_cli("fold", "--config", str(cfg), "--vstar", "1.0",
                   "--out-dir", str(out))
    assert code == 0
    text = (out / "fold.obj").read_text()
    # flag wins: v* = 1.0 puts the apex corners at +-0.5, not +-0.8
    # (writer emits x z -y, so the fold axis is the third column)
    ys = [float(l.split()[3]) for l in text.splitlines()
          if l.startswith("v ")]
    assert max(ys) == pytest.approx(0.5, abs=1e-6)


def test_missing_config_file_exits_2(tmp_path):
    assert run_cli("fold", "--config", str(tmp_path / "nope.json"),
                   "--vstar", "1.6") == cli.EXIT_CONFIG
