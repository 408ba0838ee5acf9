"""Brute-force reference computations used to pin expected test values.

Everything here is deliberately independent of the library's own numerics:
plain chord sums, dense grids, and exhaustive scans.  Slow is fine.
"""

import numpy as np


def chord_arclength_graph(f, x0=0.0, x1=1.0, n=1_000_000):
    """Total arclength of the graph of f over [x0, x1] by chord summation."""
    x = np.linspace(x0, x1, n + 1)
    p = np.stack([x, f(x)], axis=1)
    return float(np.sum(np.linalg.norm(np.diff(p, axis=0), axis=1)))


def chord_stations_graph(f, x0=0.0, x1=1.0, n=1_000_000):
    """(x grid, cumulative chord length at each grid point)."""
    x = np.linspace(x0, x1, n + 1)
    p = np.stack([x, f(x)], axis=1)
    seg = np.linalg.norm(np.diff(p, axis=0), axis=1)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    return x, s


def polyline_length(points):
    points = np.asarray(points, dtype=float)
    return float(np.sum(np.linalg.norm(np.diff(points, axis=0), axis=1)))


def segment_hits_polyline_brute(seg, poly, tol, n_probe=20_001):
    """Does the segment meet the polyline away from its own endpoints?

    Dense point sampling of the segment vs dense min-distance to the
    polyline; counts a hit when some probe point farther than `tol` from
    both endpoints comes within ~tol of the polyline.  Used only to
    cross-check the exact kernel on generic (non-tangential) cases.
    """
    a = np.asarray(seg[:2], dtype=float)
    b = np.asarray(seg[2:], dtype=float)
    ts = np.linspace(0.0, 1.0, n_probe)
    pts = a[None, :] + ts[:, None] * (b - a)[None, :]
    p = np.asarray(poly, dtype=float)
    e0, e1 = p[:-1], p[1:]
    d = e1 - e0
    dd = np.einsum("ij,ij->i", d, d)
    best = np.full(n_probe, np.inf)
    for j in range(e0.shape[0]):
        if dd[j] == 0.0:
            continue
        u = np.clip(((pts - e0[j]) @ d[j]) / dd[j], 0.0, 1.0)
        proj = e0[j][None, :] + u[:, None] * d[j][None, :]
        best = np.minimum(best, np.linalg.norm(pts - proj, axis=1))
    seg_len = np.linalg.norm(b - a)
    probe_gap = seg_len / (n_probe - 1)
    away = (np.linalg.norm(pts - a, axis=1) > tol + probe_gap) & (
        np.linalg.norm(pts - b, axis=1) > tol + probe_gap)
    return bool(np.any(away & (best < 0.5 * probe_gap)))


def tri_tri_overlap_brute(ta, tb, n=60):
    """Barycentric point sampling of triangle A against the plane/interior
    of triangle B and vice versa, plus edge-pair closest distances.  Only a
    *positive* witness is trustworthy: returns True when a sampled point of
    one triangle lies (numerically) inside the other."""
    ta = np.asarray(ta, dtype=float).reshape(3, 3)
    tb = np.asarray(tb, dtype=float).reshape(3, 3)

    def sample(tri):
        pts = []
        for i in range(n + 1):
            for j in range(n + 1 - i):
                w = (i / n, j / n, (n - i - j) / n)
                pts.append(w[0] * tri[0] + w[1] * tri[1] + w[2] * tri[2])
        return np.asarray(pts)

    def inside(pts, tri, tol=1e-9):
        nrm = np.cross(tri[1] - tri[0], tri[2] - tri[0])
        nn = np.linalg.norm(nrm)
        if nn == 0.0:
            return np.zeros(len(pts), dtype=bool)
        nrm = nrm / nn
        dist = (pts - tri[0]) @ nrm
        close = np.abs(dist) <= tol
        proj = pts - dist[:, None] * nrm[None, :]
        ok = close.copy()
        for k in range(3):
            e = tri[(k + 1) % 3] - tri[k]
            side = np.cross(np.broadcast_to(e, (len(pts), 3)), proj - tri[k]) @ nrm
            ok &= side >= -tol
        return ok

    return bool(np.any(inside(sample(ta), tb)) or np.any(inside(sample(tb), ta)))
