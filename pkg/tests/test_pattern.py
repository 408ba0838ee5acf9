import numpy as np
import pytest

from lensfold.errors import InfeasiblePattern, InvalidPattern
from lensfold.pattern import LensTessellation, visibility_check, vstar_limit
from lensfold.profiles import CircularArcProfile, PolyProfile, SineProfile

from oracles import segment_hits_polyline_brute

# frozen from a 10^6-sample scan of the closed-form expressions
SINE03_VSTAR_LIM = 0.8799002871543276
ARC025_VSTAR_LIM = 1.52  # exact: min at t=0, q=1/3, slope 4/3
GAP_SINE045_V10 = -0.1363961030678928
GAP_SINE02_V085 = 0.14215728752538095
GAP_SINE04_V12 = 0.03431457505076191


def sine_tess(amp=0.3, u=0.5, v=2.0):
    return LensTessellation(SineProfile(amp), u, v)


# ------------------------------------------------------------ crease formulas

def test_crease_point_examples():
    tess = sine_tess()
    np.testing.assert_allclose(tess.crease_point(0, 0, 1, 0.0), [0.0, 0.0],
                               atol=1e-15)
    ts = tess.profile.t_apex
    np.testing.assert_allclose(tess.crease_point(0, 0, 1, ts),
                               [ts, tess.profile.height], atol=1e-15)
    # odd row runs reversed and shifted: gamma^-_{0,1}(0) = V_{1,1}
    np.testing.assert_allclose(tess.crease_point(0, 1, -1, 0.0), [1.5, 1.0],
                               atol=1e-15)


def test_vertices_examples():
    tess = sine_tess()
    np.testing.assert_allclose(tess.vertex(0, 0), [0.0, 0.0], atol=0)
    np.testing.assert_allclose(tess.vertex(0, 1), [0.5, 1.0], atol=0)
    tess2 = LensTessellation(SineProfile(0.3), 0.25, 1.5)
    np.testing.assert_allclose(tess2.vertex(2, 3), [2.25, 2.25], atol=0)


@pytest.mark.parametrize("j", [0, 1, 2, 3])
def test_crease_endpoints_land_on_vertices(j):
    tess = LensTessellation(PolyProfile([0.0, 1.0, -0.7, -0.3]), 0.3, 1.7)
    for i in (-2, 0, 5):
        for sign in (1, -1):
            p0 = tess.crease_point(i, j, sign, 0.0)
            p1 = tess.crease_point(i, j, sign, 1.0)
            if j % 2 == 0:
                np.testing.assert_allclose(p0, tess.vertex(i, j), atol=1e-12)
                np.testing.assert_allclose(p1, tess.vertex(i + 1, j), atol=1e-12)
            else:
                # odd creases run from V_{i+1,j} back to V_{i,j}
                np.testing.assert_allclose(p0, tess.vertex(i + 1, j), atol=1e-12)
                np.testing.assert_allclose(p1, tess.vertex(i, j), atol=1e-12)


def test_mv_assignment_by_row():
    tess = sine_tess()
    assert tess.crease_is_mountain(0) and tess.crease_is_mountain(2)
    assert not tess.crease_is_mountain(1) and not tess.crease_is_mountain(-1)


def test_constructor_rejects_bad_parameters():
    with pytest.raises(InvalidPattern):
        LensTessellation(SineProfile(0.3), 1.0, 2.0)
    with pytest.raises(InvalidPattern):
        LensTessellation(SineProfile(0.3), -0.1, 2.0)
    with pytest.raises(InvalidPattern):
        LensTessellation(SineProfile(0.3), 0.5, 0.0)
    with pytest.raises(InvalidPattern):
        sine_tess().crease_point(0, 0, 2, 0.5)


# ---------------------------------------------------------------- row gaps

def test_row_gap_values_match_scan_oracle():
    assert sine_tess(0.45, 0.5, 1.0).row_gap == pytest.approx(
        GAP_SINE045_V10, abs=1e-9)
    assert sine_tess(0.2, 0.5, 0.85).row_gap == pytest.approx(
        GAP_SINE02_V085, abs=1e-9)
    assert sine_tess(0.4, 0.5, 1.2).row_gap == pytest.approx(
        GAP_SINE04_V12, abs=1e-9)


def test_overlapping_rows_flagged_invalid():
    tess = sine_tess(0.45, 0.5, 1.0)
    assert not tess.is_valid
    with pytest.raises(InvalidPattern):
        tess.visibility_check()
    with pytest.raises(InvalidPattern):
        tess.vstar_limit()
    # formula-level queries still work for reporting/diagnostics
    assert np.isfinite(tess.crease_point(0, 1, -1, 0.3)).all()


def test_near_touching_rows_still_valid():
    tess = sine_tess(0.2, 0.5, 0.85)
    assert tess.is_valid
    res = tess.visibility_check(n_samples=256)
    assert res.visible_vertex == 0


# ---------------------------------------------------------------- visibility

def test_visibility_sine_reference_case():
    res = visibility_check(sine_tess())
    assert res.visible_vertex == 0
    assert res.witness_failures == []
    # doubled sampling agrees
    res2 = sine_tess().visibility_check(n_samples=2048)
    assert res2.visible_vertex == 0


def test_visibility_brute_force_cross_check():
    # independent dense probing of sampled sight segments
    tess = sine_tess()
    target = tess.vertex(0, 1)
    polys = [p for _, p in tess._window_polylines(0, 512)]
    rng = np.random.default_rng(11)
    for t in rng.uniform(0.02, 0.98, 12):
        p = tess.crease_point(0, 0, 1, float(t))
        seg = np.array([p[0], p[1], target[0], target[1]])
        assert not any(
            segment_hits_polyline_brute(seg, poly, 1e-9, n_probe=4001)
            for poly in polys)


def test_far_vertex_is_blocked():
    tess = sine_tess()
    ok, failures = tess.vertex_is_visible(3, n_samples=256)
    assert not ok and failures
    ok5, failures5 = tess.vertex_is_visible(5, n_samples=128)
    assert not ok5
    # blocked by a crease, not by the convex-side condition
    assert any("blocked by crease" in msg for _, msg in failures5)
    # cross-check one reported witness against the brute-force oracle
    t_bad = failures5[0][0]
    p = tess.crease_point(0, 0, 1, t_bad)
    seg = np.array([p[0], p[1], *tess.vertex(5, 1)])
    assert any(
        segment_hits_polyline_brute(seg, poly, 1e-9, n_probe=8001)
        for _, poly in tess._window_polylines(5, 1024))


def test_blocked_but_valid_pattern_has_no_visible_vertex():
    # rows clear each other (gap 0.034) yet every candidate fails the
    # convex-side condition near an endpoint
    tess = sine_tess(0.4, 0.5, 1.2)
    assert tess.is_valid
    res = tess.visibility_check(n_samples=512)
    assert res.visible_vertex is None
    assert set(res.candidates) == set(range(-3, 4))
    # the central candidate fails both ways: sight lines near the lens ends
    # leave on the concave side, and mid-lens ones cross a row-1 crease
    _, f0 = tess.vertex_is_visible(0, n_samples=512)
    assert any("concave side" in msg for _, msg in f0)
    assert any("blocked by crease" in msg for _, msg in f0)
    with pytest.raises(InfeasiblePattern):
        tess.vstar_limit()


# ----------------------------------------------------------- fold-depth bound

def test_vstar_limit_sine_matches_oracle():
    got = vstar_limit(sine_tess())
    assert got == pytest.approx(SINE03_VSTAR_LIM, abs=1e-9)


def test_vstar_limit_circular_arc_golden():
    tess = LensTessellation(CircularArcProfile(0.25), 0.5, 2.0)
    assert tess.vstar_limit() == pytest.approx(ARC025_VSTAR_LIM, abs=1e-12)


def test_vstar_limit_positive_and_below_v():
    for profile, u, v in [
        (SineProfile(0.3), 0.5, 2.0),
        (CircularArcProfile(0.25), 0.5, 2.0),
        (PolyProfile([0.0, 1.0, -0.7, -0.3]), 0.5, 2.0),
    ]:
        tess = LensTessellation(profile, u, v)
        lim = tess.vstar_limit()
        assert lim < v


def test_vstar_limit_uses_effective_offset():
    # v - min 4q/(1+l'^2) with u_eff = u + n, checked by independent scan
    tess = sine_tess()
    for n in (-1, 0, 1):
        ts = np.linspace(0.0, 1.0, 200_001)
        q = tess.depth_gap(ts, u_eff=tess.u + n)
        if np.any(q <= 0):
            with pytest.raises(InfeasiblePattern):
                tess.vstar_limit(visible_n=n)
            continue
        expect = tess.v - np.min(4.0 * q / (1.0 + tess.profile.dell(ts) ** 2))
        assert tess.vstar_limit(visible_n=n) == pytest.approx(expect, abs=1e-8)


def test_flat_state_height_identity():
    # at v* = v the squared cone-edge length reduces to (t-u)^2, so the
    # fold-depth expression never constrains the flat state
    tess = sine_tess()
    ts = np.linspace(0.0, 1.0, 101)
    h2_flat = ((tess.v - tess.v) * ((tess.v + tess.v) / 4.0
               - tess.profile.ell(ts)) + (ts - tess.u) ** 2)
    np.testing.assert_allclose(np.sqrt(h2_flat), np.abs(ts - tess.u), atol=0)


# ------------------------------------------------------- rotation congruence

def test_rotation_identity_symmetric_profiles():
    for tess in (sine_tess(), LensTessellation(CircularArcProfile(0.25), 0.5, 2.0)):
        n = tess.visibility_check(n_samples=128).visible_vertex
        assert tess.rotation_identity_residual(n) < 1e-10
        # the residual is independent of which vertex anchors the rotation
        assert tess.rotation_identity_residual(n + 1) < 1e-10


def test_rotation_identity_fails_for_asymmetric_profile():
    tess = LensTessellation(PolyProfile([0.0, 1.0, -0.7, -0.3]), 0.5, 2.0)
    assert tess.rotation_identity_residual(0) > 1e-3
