"""Numerical kernels shared by several modules.

Vectorized Gauss-Legendre quadrature, the closed-form conformal time
separation on Minkowski models with a time-only factor, and a small
Richardson extrapolation helper.
"""

import numpy as np

_GL_CACHE = {}


def gauss_legendre(n):
    """Nodes and weights on [0, 1]."""
    if n not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(n)
        _GL_CACHE[n] = (0.5 * (x + 1.0), 0.5 * w)
    return _GL_CACHE[n]


def gl_nodes(a, b, n=16, panels=4):
    """Composite Gauss-Legendre nodes for each interval [a_i, b_i].

    Returns ``t`` of shape ``(m, panels*n)`` and weights of the same shape,
    already scaled by the panel widths.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    x, w = gauss_legendre(n)
    edges = np.linspace(0.0, 1.0, panels + 1)
    u = (edges[:-1, None] + (edges[1:] - edges[:-1])[:, None] * x[None, :]).ravel()
    wu = ((edges[1:] - edges[:-1])[:, None] * w[None, :]).ravel()
    span = (b - a)[:, None]
    t = a[:, None] + span * u[None, :]
    return t, span * wu[None, :]


def gl_integrate(f, a, b, n=16, panels=4):
    """Vectorized integral of ``f`` over each [a_i, b_i]."""
    t, w = gl_nodes(a, b, n, panels)
    return np.sum(f(t) * w, axis=1)


def minkowski_tau_omega(t_func, p, q, n=16, panels=4, return_speed=False):
    """Conformal time separation on 2D Minkowski for a factor Omega(t).

    Maximizes the weighted proper time  int Omega(t) sqrt(1 - v^2) dt  over
    causal graphs x(t) joining p to q.  The functional is concave in v and
    the endpoint constraint  int v dt = dx  is linear, so the stationary
    point is the global maximum.  Stationarity gives  v = c / sqrt(Omega^2 + c^2)
    for a constant c fixed by the endpoint condition, and the value is
    int Omega^2 / sqrt(Omega^2 + c^2) dt.  Vertical pairs have c = 0.

    Parameters
    ----------
    t_func : callable
        Omega as a function of time, vectorized.
    p, q : array_like, shape (..., 2)
        Points as (t, x).

    Returns
    -------
    value : ndarray
        tau_Omega(p, q); zero when p is not causally below q.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    p, q = np.broadcast_arrays(p, q)
    shape = p.shape[:-1]
    p = p.reshape(-1, 2)
    q = q.reshape(-1, 2)
    dt = q[:, 0] - p[:, 0]
    dx = np.abs(q[:, 1] - p[:, 1])
    out = np.zeros(dt.shape)
    cs = np.zeros(dt.shape)
    timelike = dt > dx
    if np.any(timelike):
        idx = np.nonzero(timelike)[0]
        t, w = gl_nodes(p[idx, 0], q[idx, 0], n, panels)
        om = np.asarray(t_func(t), dtype=float)
        if np.any(~np.isfinite(om)) or np.any(om <= 0):
            raise ValueError("conformal factor must be finite and positive along the diamond")
        om2 = om * om
        c = _solve_speed_constant(om, om2, w, dt[idx], dx[idx])
        out[idx] = np.sum(om2 / np.sqrt(om2 + (c * c)[:, None]) * w, axis=1)
        cs[idx] = c
    out = out.reshape(shape)
    if return_speed:
        return out, cs.reshape(shape)
    return out


def _solve_speed_constant(om, om2, w, dt, dx):
    """Find c >= 0 with  int c / sqrt(Omega^2 + c^2) dt = dx  (vectorized)."""
    c = np.zeros(dt.shape)
    moving = dx > 0
    if not np.any(moving):
        return c
    om_m, om2_m, w_m = om[moving], om2[moving], w[moving]
    dt_m, dx_m = dt[moving], dx[moving]
    v = dx_m / dt_m
    gam = v / np.sqrt((1.0 - v) * (1.0 + v))
    lo = np.min(om_m, axis=1) * gam * (1 - 1e-12)
    hi = np.max(om_m, axis=1) * gam * (1 + 1e-12)
    cc = np.sqrt(lo * hi)
    for _ in range(100):
        s = np.sqrt(om2_m + (cc * cc)[:, None])
        g = np.sum(cc[:, None] / s * w_m, axis=1) - dx_m
        dg = np.sum(om2_m / s ** 3 * w_m, axis=1)
        lo = np.where(g < 0, cc, lo)
        hi = np.where(g > 0, cc, hi)
        if np.all(np.abs(g) <= 1e-15 * dt_m + 1e-300):
            break
        step = cc - g / dg
        bad = ~np.isfinite(step) | (step <= lo) | (step >= hi)
        cc = np.where(bad, 0.5 * (lo + hi), step)
    c[moving] = cc
    return c


def minkowski_witness(t_func, p, q, n_points=129):
    """Waypoints of the maximizing curve for :func:`minkowski_tau_omega`."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    _, c = minkowski_tau_omega(t_func, p[None], q[None], return_speed=True)
    c = float(c[0])
    ts = np.linspace(p[0], q[0], n_points)
    sign = 1.0 if q[1] >= p[1] else -1.0
    if c == 0.0:
        xs = np.full(n_points, p[1])
    else:
        speed = lambda t: c / np.sqrt(np.asarray(t_func(t)) ** 2 + c * c)
        steps = gl_integrate(speed, ts[:-1], ts[1:], n=8, panels=1)
        xs = p[1] + sign * np.concatenate([[0.0], np.cumsum(steps)])
        xs[-1] = q[1]
    return np.column_stack([ts, xs])


def richardson(values, steps):
    """Extrapolate the last three entries of a sequence to step -> 0.

    Fits  v(h) = v0 + C h^k  through the last three points when the steps
    shrink geometrically.  Returns (estimate, error_bound).  Falls back to the
    last value when the differences are negligible or not contracting.
    """
    values = np.asarray(values, dtype=float)
    if values.size < 3:
        v = float(values[-1])
        err = abs(float(values[-1] - values[-2])) if values.size == 2 else float("inf")
        return v, err
    v1, v2, v3 = values[-3:]
    d1, d2 = v2 - v1, v3 - v2
    scale = max(abs(v3), 1e-300)
    if abs(d2) <= 1e-13 * scale:
        return float(v3), abs(float(d2))
    if d1 == 0 or not np.isfinite(d1 / d2):
        return float(v3), abs(float(d2))
    r = d2 / d1
    if not (0 < r < 1):
        return float(v3), abs(float(d2))
    est = v3 + d2 * r / (1 - r)
    return float(est), abs(float(est - v3))
