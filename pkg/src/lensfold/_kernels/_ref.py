"""Reference (pure numpy) implementations of the geometric kernels.

Contracts:

segments_cross_polyline(segs, poly, tol)
    segs: (m, 4) float, rows (x1, y1, x2, y2); poly: (k, 2) float vertices
    of an open polyline.  Returns uint8 (m,): 1 where the segment meets the
    polyline anywhere except within `tol` of the segment's own endpoints
    (segments are clipped inward by tol before testing, so endpoint
    contacts never count).

tri_tri_overlap(tri_a, tri_b, shrink)
    tri_a/tri_b: (m, 9) float, each row one triangle (three xyz vertices).
    Returns uint8 (m,): 1 where the pair overlaps after both triangles are
    shrunk toward their centroids by the relative factor `shrink` (so
    shared edges / vertices of adjacent triangles don't register).
"""

from __future__ import annotations

import numpy as np

_COLLINEAR_EPS = 1e-12


def _cross2(ax, ay, bx, by):
    return ax * by - ay * bx


def segments_cross_polyline(segs: np.ndarray, poly: np.ndarray,
                            tol: float) -> np.ndarray:
    segs = np.asarray(segs, dtype=float)
    poly = np.asarray(poly, dtype=float)
    m = segs.shape[0]
    out = np.zeros(m, dtype=np.uint8)
    if poly.shape[0] < 2 or m == 0:
        return out

    px, py = poly[:-1, 0], poly[:-1, 1]
    qx, qy = poly[1:, 0], poly[1:, 1]
    exlo, exhi = np.minimum(px, qx), np.maximum(px, qx)
    eylo, eyhi = np.minimum(py, qy), np.maximum(py, qy)
    scale = max(1.0, float(np.max(np.abs(poly))), float(np.max(np.abs(segs))))
    eps = _COLLINEAR_EPS * scale * scale

    for i in range(m):
        ax, ay, bx, by = segs[i]
        ux, uy = bx - ax, by - ay
        ln = np.hypot(ux, uy)
        if ln <= 2.0 * tol:
            continue
        # clip the query segment so its own endpoint contacts are ignored
        f = tol / ln
        ax2, ay2 = ax + f * ux, ay + f * uy
        bx2, by2 = bx - f * ux, by - f * uy
        rx, ry = bx2 - ax2, by2 - ay2

        cand = ((np.minimum(ax2, bx2) <= exhi) & (exlo <= np.maximum(ax2, bx2))
                & (np.minimum(ay2, by2) <= eyhi) & (eylo <= np.maximum(ay2, by2)))
        if not np.any(cand):
            continue
        cpx, cpy, cqx, cqy = px[cand], py[cand], qx[cand], qy[cand]
        svx, svy = cqx - cpx, cqy - cpy

        d1 = _cross2(rx, ry, cpx - ax2, cpy - ay2)
        d2 = _cross2(rx, ry, cqx - ax2, cqy - ay2)
        d3 = _cross2(svx, svy, ax2 - cpx, ay2 - cpy)
        d4 = _cross2(svx, svy, bx2 - cpx, by2 - cpy)

        collinear = (np.abs(d1) <= eps) & (np.abs(d2) <= eps)
        hit = (~collinear) & (d1 * d2 <= 0.0) & (d3 * d4 <= 0.0)
        if np.any(hit):
            out[i] = 1
            continue
        if np.any(collinear):
            # project collinear edges onto the segment direction
            t0 = ((cpx - ax2) * rx + (cpy - ay2) * ry) / (rx * rx + ry * ry)
            t1 = ((cqx - ax2) * rx + (cqy - ay2) * ry) / (rx * rx + ry * ry)
            tlo, thi = np.minimum(t0, t1), np.maximum(t0, t1)
            overlap = collinear & (thi >= 0.0) & (tlo <= 1.0)
            if np.any(overlap):
                out[i] = 1
    return out


_TRI_EDGES = ((0, 1), (1, 2), (2, 0))


def tri_tri_overlap(tri_a: np.ndarray, tri_b: np.ndarray,
                    shrink: float) -> np.ndarray:
    a = np.asarray(tri_a, dtype=float).reshape(-1, 3, 3).copy()
    b = np.asarray(tri_b, dtype=float).reshape(-1, 3, 3).copy()
    if a.shape[0] != b.shape[0]:
        raise ValueError("triangle arrays must pair up")
    m = a.shape[0]
    if m == 0:
        return np.zeros(0, dtype=np.uint8)
    ca = a.mean(axis=1, keepdims=True)
    cb = b.mean(axis=1, keepdims=True)
    a = ca + (1.0 - shrink) * (a - ca)
    b = cb + (1.0 - shrink) * (b - cb)

    ea = [a[:, j] - a[:, i] for i, j in _TRI_EDGES]
    eb = [b[:, j] - b[:, i] for i, j in _TRI_EDGES]
    na = np.cross(ea[0], ea[1])
    nb = np.cross(eb[0], eb[1])

    axes = [na, nb]
    axes += [np.cross(x, y) for x in ea for y in eb]
    axes += [np.cross(na, x) for x in ea]
    axes += [np.cross(nb, x) for x in eb]

    sep = np.zeros(m, dtype=bool)
    for ax in axes:
        n2 = np.einsum("ij,ij->i", ax, ax)
        usable = n2 > 1e-20
        if not np.any(usable):
            continue
        pa = np.einsum("itk,ik->it", a, ax)
        pb = np.einsum("itk,ik->it", b, ax)
        # disjoint iff one projection interval ends before the other starts
        gap = ((pa.max(axis=1) < pb.min(axis=1))
               | (pb.max(axis=1) < pa.min(axis=1)))
        sep |= usable & gap
    return (~sep).astype(np.uint8)
