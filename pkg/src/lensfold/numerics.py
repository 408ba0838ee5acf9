"""Small numeric building blocks: fixed-step cumulative quadrature with
off-node evaluation, monotone inversion, golden-section minimization, and
finite-difference stencils on uniform grids.

Everything here is deterministic for fixed inputs: fixed panel counts, fixed
node layouts, no adaptivity.
"""
from __future__ import annotations

import numpy as np

# 5-point Gauss-Legendre rule on [-1, 1]
_GL5_X = np.array([
    -0.906179845938664, -0.5384693101056831, 0.0,
    0.5384693101056831, 0.906179845938664,
])
_GL5_W = np.array([
    0.23692688505618908, 0.47862867049936647, 0.5688888888888889,
    0.47862867049936647, 0.23692688505618908,
])


class CumulativeIntegral:
    """Cumulative antiderivative F(x) = integral_a^x f(t) dt on [a, b].

    Node values come from composite Simpson on `panels` equal panels (each
    panel uses its midpoint, so the rule is 4th order).  Queries between
    nodes add a 5-point Gauss-Legendre integral over the partial panel, so
    off-node values do not rely on interpolation of F.

    f must be vectorized over numpy arrays.
    """

    def __init__(self, f, a: float, b: float, panels: int):
        if panels < 1:
            raise ValueError("panels must be >= 1")
        self.f = f
        self.a = float(a)
        self.b = float(b)
        self.panels = int(panels)
        self.dx = (self.b - self.a) / self.panels
        x = np.linspace(self.a, self.b, self.panels + 1)
        mid = 0.5 * (x[:-1] + x[1:])
        f_nodes = np.asarray(f(x), dtype=float)
        f_mid = np.asarray(f(mid), dtype=float)
        panel = (self.dx / 6.0) * (f_nodes[:-1] + 4.0 * f_mid + f_nodes[1:])
        F = np.empty(self.panels + 1)
        F[0] = 0.0
        np.cumsum(panel, out=F[1:])
        self.x_nodes = x
        self.F_nodes = F

    @property
    def total(self) -> float:
        return float(self.F_nodes[-1])

    def value(self, x):
        """F(x), vectorized.  x clamped to [a, b] within 1e-12 slack."""
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        lo, hi = self.a - 1e-12, self.b + 1e-12
        if np.any(x < lo) or np.any(x > hi):
            raise ValueError("query outside integration domain")
        xc = np.clip(x, self.a, self.b)
        k = np.clip(((xc - self.a) / self.dx).astype(int), 0, self.panels - 1)
        x0 = self.x_nodes[k]
        half = 0.5 * (xc - x0)
        # GL5 on [x0, x]; evaluate all query points' nodes in one call
        pts = x0[:, None] + half[:, None] * (1.0 + _GL5_X[None, :])
        fv = np.asarray(self.f(pts.ravel()), dtype=float).reshape(pts.shape)
        partial = half * (fv @ _GL5_W)
        out = self.F_nodes[k] + partial
        return float(out[0]) if scalar else out

    def inverse(self, y):
        """Solve F(x) = y for x, assuming f > 0 (F strictly increasing)."""
        y = np.asarray(y, dtype=float)
        scalar = y.ndim == 0
        y = np.atleast_1d(y)
        if np.any(y < -1e-12) or np.any(y > self.total + 1e-12):
            raise ValueError("inverse query outside range")
        yc = np.clip(y, 0.0, self.total)
        x = np.interp(yc, self.F_nodes, self.x_nodes)
        for _ in range(3):
            fx = np.asarray(self.f(x), dtype=float)
            step = (self.value(x) - yc) / np.maximum(fx, 1e-300)
            x = np.clip(x - step, self.a, self.b)
        return float(x[0]) if scalar else x


def golden_minimize(f, lo: float, hi: float, xtol: float = 1e-12) -> float:
    """Golden-section search for the minimizer of a unimodal scalar f."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def fd_first_uniform(y: np.ndarray, dx: float) -> np.ndarray:
    """First derivative on a uniform grid.

    4th-order stencils at every interior sample (central where the stencil
    fits, skewed one sample in from each end); 2nd-order one-sided at the
    two endpoint samples.  y may be (n,) or (n, d).
    """
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    if n < 6:
        raise ValueError("need at least 6 samples for derivative stencils")
    out = np.empty_like(y)
    out[2:-2] = (-y[4:] + 8.0 * y[3:-1] - 8.0 * y[1:-3] + y[:-4]) / (12.0 * dx)
    out[1] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / (12.0 * dx)
    out[-2] = (3.0 * y[-1] + 10.0 * y[-2] - 18.0 * y[-3] + 6.0 * y[-4] - y[-5]) / (12.0 * dx)
    out[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * dx)
    out[-1] = (3.0 * y[-1] - 4.0 * y[-2] + y[-3]) / (2.0 * dx)
    return out


def fd_second_uniform(y: np.ndarray, dx: float) -> np.ndarray:
    """Second derivative on a uniform grid (4th-order at interior samples,
    2nd-order one-sided at the two endpoint samples)."""
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    if n < 6:
        raise ValueError("need at least 6 samples for derivative stencils")
    dx2 = dx * dx
    out = np.empty_like(y)
    out[2:-2] = (-y[4:] + 16.0 * y[3:-1] - 30.0 * y[2:-2]
                 + 16.0 * y[1:-3] - y[:-4]) / (12.0 * dx2)
    out[1] = (10.0 * y[0] - 15.0 * y[1] - 4.0 * y[2] + 14.0 * y[3]
              - 6.0 * y[4] + y[5]) / (12.0 * dx2)
    out[-2] = (10.0 * y[-1] - 15.0 * y[-2] - 4.0 * y[-3] + 14.0 * y[-4]
               - 6.0 * y[-5] + y[-6]) / (12.0 * dx2)
    out[0] = (2.0 * y[0] - 5.0 * y[1] + 4.0 * y[2] - y[3]) / dx2
    out[-1] = (2.0 * y[-1] - 5.0 * y[-2] + 4.0 * y[-3] - y[-4]) / dx2
    return out


def unit_rows(a: np.ndarray, floor: float = 0.0) -> np.ndarray:
    """Normalize rows of (n, d); raises on rows shorter than floor."""
    a = np.asarray(a, dtype=float)
    norms = np.linalg.norm(a, axis=-1, keepdims=True)
    if floor > 0.0 and np.any(norms <= floor):
        raise ValueError("vector too short to normalize")
    return a / norms
