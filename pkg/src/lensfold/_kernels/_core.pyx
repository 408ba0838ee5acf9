# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see _ref.py for the contracts.

Semantics must match the reference implementation bit-for-bit on the same
inputs (the parity tests enforce agreement of the boolean outputs)."""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, fmax, fmin, sqrt

cnp.import_array()

cdef double COLLINEAR_EPS = 1e-12


cdef inline double _cross2(double ax, double ay, double bx, double by) noexcept nogil:
    return ax * by - ay * bx


def segments_cross_polyline(segs, poly, double tol):
    cdef double[:, ::1] S = np.ascontiguousarray(segs, dtype=np.float64)
    cdef double[:, ::1] P = np.ascontiguousarray(poly, dtype=np.float64)
    cdef Py_ssize_t m = S.shape[0]
    cdef Py_ssize_t k = P.shape[0]
    out_arr = np.zeros(m, dtype=np.uint8)
    cdef unsigned char[::1] out = out_arr
    if k < 2 or m == 0:
        return out_arr
    if S.shape[1] != 4 or P.shape[1] != 2:
        raise ValueError("segments must be (m,4) and polyline (k,2)")

    cdef double scale = 1.0
    cdef Py_ssize_t i, j
    cdef double ax, ay, bx, by, ux, uy, ln, f
    cdef double ax2, ay2, bx2, by2, rx, ry
    cdef double px, py, qx, qy, svx, svy
    cdef double d1, d2, d3, d4, eps
    cdef double sxlo, sxhi, sylo, syhi
    cdef double exlo, exhi, eylo, eyhi
    cdef double t0, t1, rr, tlo, thi
    cdef bint hit

    with nogil:
        for i in range(m):
            for j in range(4):
                scale = fmax(scale, fabs(S[i, j]))
        for i in range(k):
            scale = fmax(scale, fabs(P[i, 0]))
            scale = fmax(scale, fabs(P[i, 1]))
        eps = COLLINEAR_EPS * scale * scale

        for i in range(m):
            ax = S[i, 0]; ay = S[i, 1]; bx = S[i, 2]; by = S[i, 3]
            ux = bx - ax; uy = by - ay
            ln = sqrt(ux * ux + uy * uy)
            if ln <= 2.0 * tol:
                continue
            f = tol / ln
            ax2 = ax + f * ux; ay2 = ay + f * uy
            bx2 = bx - f * ux; by2 = by - f * uy
            rx = bx2 - ax2; ry = by2 - ay2
            sxlo = fmin(ax2, bx2); sxhi = fmax(ax2, bx2)
            sylo = fmin(ay2, by2); syhi = fmax(ay2, by2)
            hit = False
            for j in range(k - 1):
                px = P[j, 0]; py = P[j, 1]
                qx = P[j + 1, 0]; qy = P[j + 1, 1]
                exlo = fmin(px, qx); exhi = fmax(px, qx)
                eylo = fmin(py, qy); eyhi = fmax(py, qy)
                if sxlo > exhi or exlo > sxhi or sylo > eyhi or eylo > syhi:
                    continue
                d1 = _cross2(rx, ry, px - ax2, py - ay2)
                d2 = _cross2(rx, ry, qx - ax2, qy - ay2)
                if fabs(d1) <= eps and fabs(d2) <= eps:
                    # collinear: overlap test along the segment direction
                    rr = rx * rx + ry * ry
                    t0 = ((px - ax2) * rx + (py - ay2) * ry) / rr
                    t1 = ((qx - ax2) * rx + (qy - ay2) * ry) / rr
                    tlo = fmin(t0, t1); thi = fmax(t0, t1)
                    if thi >= 0.0 and tlo <= 1.0:
                        hit = True
                        break
                    continue
                svx = qx - px; svy = qy - py
                d3 = _cross2(svx, svy, ax2 - px, ay2 - py)
                d4 = _cross2(svx, svy, bx2 - px, by2 - py)
                if d1 * d2 <= 0.0 and d3 * d4 <= 0.0:
                    hit = True
                    break
            if hit:
                out[i] = 1
    return out_arr


cdef inline void _axis_minmax(double* v, double axx, double axy, double axz,
                              double* lo, double* hi) noexcept nogil:
    cdef double p
    cdef Py_ssize_t t
    lo[0] = 1e300
    hi[0] = -1e300
    for t in range(3):
        p = v[3 * t] * axx + v[3 * t + 1] * axy + v[3 * t + 2] * axz
        if p < lo[0]:
            lo[0] = p
        if p > hi[0]:
            hi[0] = p


cdef inline bint _separated(double* a, double* b, double axx, double axy,
                            double axz) noexcept nogil:
    cdef double n2 = axx * axx + axy * axy + axz * axz
    if n2 <= 1e-20:
        return False
    cdef double alo, ahi, blo, bhi
    _axis_minmax(a, axx, axy, axz, &alo, &ahi)
    _axis_minmax(b, axx, axy, axz, &blo, &bhi)
    return ahi < blo or bhi < alo


def tri_tri_overlap(tri_a, tri_b, double shrink):
    cdef double[:, ::1] A = np.ascontiguousarray(
        np.asarray(tri_a, dtype=np.float64).reshape(-1, 9))
    cdef double[:, ::1] B = np.ascontiguousarray(
        np.asarray(tri_b, dtype=np.float64).reshape(-1, 9))
    cdef Py_ssize_t m = A.shape[0]
    if B.shape[0] != m:
        raise ValueError("triangle arrays must pair up")
    out_arr = np.zeros(m, dtype=np.uint8)
    cdef unsigned char[::1] out = out_arr
    if m == 0:
        return out_arr

    cdef double a[9]
    cdef double b[9]
    cdef double ca[3]
    cdef double cb[3]
    cdef double ea[9]
    cdef double eb[9]
    cdef double na[3]
    cdef double nb[3]
    cdef double cx, cy, cz
    cdef Py_ssize_t i, t, c, ia, ib
    cdef bint sep

    with nogil:
        for i in range(m):
            for t in range(9):
                a[t] = A[i, t]
                b[t] = B[i, t]
            for c in range(3):
                ca[c] = (a[c] + a[3 + c] + a[6 + c]) / 3.0
                cb[c] = (b[c] + b[3 + c] + b[6 + c]) / 3.0
            for t in range(3):
                for c in range(3):
                    a[3 * t + c] = ca[c] + (1.0 - shrink) * (a[3 * t + c] - ca[c])
                    b[3 * t + c] = cb[c] + (1.0 - shrink) * (b[3 * t + c] - cb[c])
            # edges: v1-v0, v2-v1, v0-v2
            for c in range(3):
                ea[c] = a[3 + c] - a[c]
                ea[3 + c] = a[6 + c] - a[3 + c]
                ea[6 + c] = a[c] - a[6 + c]
                eb[c] = b[3 + c] - b[c]
                eb[3 + c] = b[6 + c] - b[3 + c]
                eb[6 + c] = b[c] - b[6 + c]
            na[0] = ea[1] * ea[5] - ea[2] * ea[4]
            na[1] = ea[2] * ea[3] - ea[0] * ea[5]
            na[2] = ea[0] * ea[4] - ea[1] * ea[3]
            nb[0] = eb[1] * eb[5] - eb[2] * eb[4]
            nb[1] = eb[2] * eb[3] - eb[0] * eb[5]
            nb[2] = eb[0] * eb[4] - eb[1] * eb[3]

            sep = _separated(a, b, na[0], na[1], na[2])
            if not sep:
                sep = _separated(a, b, nb[0], nb[1], nb[2])
            if not sep:
                for ia in range(3):
                    for ib in range(3):
                        cx = ea[3 * ia + 1] * eb[3 * ib + 2] - ea[3 * ia + 2] * eb[3 * ib + 1]
                        cy = ea[3 * ia + 2] * eb[3 * ib] - ea[3 * ia] * eb[3 * ib + 2]
                        cz = ea[3 * ia] * eb[3 * ib + 1] - ea[3 * ia + 1] * eb[3 * ib]
                        if _separated(a, b, cx, cy, cz):
                            sep = True
                            break
                    if sep:
                        break
            if not sep:
                for ia in range(3):
                    cx = na[1] * ea[3 * ia + 2] - na[2] * ea[3 * ia + 1]
                    cy = na[2] * ea[3 * ia] - na[0] * ea[3 * ia + 2]
                    cz = na[0] * ea[3 * ia + 1] - na[1] * ea[3 * ia]
                    if _separated(a, b, cx, cy, cz):
                        sep = True
                        break
            if not sep:
                for ib in range(3):
                    cx = nb[1] * eb[3 * ib + 2] - nb[2] * eb[3 * ib + 1]
                    cy = nb[2] * eb[3 * ib] - nb[0] * eb[3 * ib + 2]
                    cz = nb[0] * eb[3 * ib + 1] - nb[1] * eb[3 * ib]
                    if _separated(a, b, cx, cy, cz):
                        sep = True
                        break
            if not sep:
                out[i] = 1
    return out_arr
