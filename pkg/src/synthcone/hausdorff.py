"""Lorentzian Hausdorff pre-measures on 2D Minkowski models by diamond covers.

In light-cone coordinates u = t + x, v = t - x a causal diamond is a
rectangle [u0, u1] x [v0, v1], with tau = sqrt(du dv), coordinate area
du dv / 2 and Euclidean diameter sqrt((du^2 + dv^2) / 2).  Covers are
rectangular tilings of the region's (u, v) bounding box at several aspect
ratios and offsets; the pre-measure is the best sum found, an upper bound
on the true infimum.
"""

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as gamma_fn

from .extended import fmt
from .solvers import minkowski_tau_omega, richardson
from .spaces import DomainError, Minkowski2, StrategyError


def omega_s(s):
    """Normalization pi^((s-1)/2) / (s Gamma((s+1)/2) 2^(s-1)).

    Examples
    --------
    >>> omega_s(2)
    0.5
    """
    s = float(s)
    if not s > 0:
        raise ValueError("omega_s needs s > 0")
    return float(math.pi ** ((s - 1) / 2) / (s * gamma_fn((s + 1) / 2) * 2 ** (s - 1)))


@dataclass(frozen=True)
class Region:
    """Region of the (t, x) plane: a causal diamond, a coordinate box, or empty."""

    kind: str
    lo: tuple = ()
    hi: tuple = ()

    @classmethod
    def diamond(cls, p, q):
        p = tuple(map(float, p))
        q = tuple(map(float, q))
        if not (q[0] - p[0] >= abs(q[1] - p[1])):
            raise DomainError("diamond region needs p <= q")
        return cls("diamond", p, q)

    @classmethod
    def box(cls, lo, hi):
        lo = tuple(map(float, lo))
        hi = tuple(map(float, hi))
        if not all(a < b for a, b in zip(lo, hi)):
            raise DomainError("box region needs lo < hi")
        return cls("box", lo, hi)

    @classmethod
    def empty(cls):
        return cls("empty")

    @classmethod
    def from_config(cls, cfg):
        kind = cfg.get("type")
        if kind == "diamond":
            return cls.diamond(cfg["p"], cfg["q"])
        if kind == "box":
            return cls.box(cfg["lo"], cfg["hi"])
        if kind == "empty":
            return cls.empty()
        raise DomainError(f"unknown region type {kind!r}")

    @property
    def is_empty(self):
        return self.kind == "empty" or (self.kind == "diamond" and self.uv_area == 0)

    @property
    def uv_box(self):
        if self.kind == "diamond":
            (t0, x0), (t1, x1) = self.lo, self.hi
            return (t0 + x0, t0 - x0), (t1 + x1, t1 - x1)
        if self.kind == "box":
            (t0, x0), (t1, x1) = self.lo, self.hi
            return (t0 + x0, t0 - x1), (t1 + x1, t1 - x0)
        raise DomainError("empty region has no bounding box")

    @property
    def uv_area(self):
        (u0, v0), (u1, v1) = self.uv_box
        return (u1 - u0) * (v1 - v0)

    def contains(self, pts):
        pts = np.asarray(pts, dtype=float)
        t, x = pts[..., 0], pts[..., 1]
        if self.kind == "empty":
            return np.zeros(t.shape, dtype=bool)
        if self.kind == "box":
            return (t >= self.lo[0]) & (t <= self.hi[0]) & (x >= self.lo[1]) & (x <= self.hi[1])
        (u0, v0), (u1, v1) = self.uv_box
        u, v = t + x, t - x
        return (u >= u0) & (u <= u1) & (v >= v0) & (v <= v1)

    def corners(self):
        if self.kind == "box":
            (t0, x0), (t1, x1) = self.lo, self.hi
            return np.array([[t0, x0], [t0, x1], [t1, x0], [t1, x1]])
        (u0, v0), (u1, v1) = self.uv_box
        uv = np.array([[u0, v0], [u0, v1], [u1, v0], [u1, v1]])
        return np.column_stack([(uv[:, 0] + uv[:, 1]) / 2, (uv[:, 0] - uv[:, 1]) / 2])

    def sample(self, rng, n):
        if self.kind == "box":
            lo, hi = np.asarray(self.lo), np.asarray(self.hi)
            return lo + (hi - lo) * rng.random((n, 2))
        (u0, v0), (u1, v1) = self.uv_box
        u = rng.uniform(u0, u1, n)
        v = rng.uniform(v0, v1, n)
        return np.column_stack([(u + v) / 2, (u - v) / 2])


@dataclass
class DiamondCover:
    """Diamonds (p_i, q_i) as (n, 2) arrays of tips, all of diameter < delta."""

    p: np.ndarray
    q: np.ndarray
    delta: float
    label: str = ""

    def __post_init__(self):
        if self.p.shape[0] and np.max(self.diameters()) >= self.delta:
            raise ValueError("a diamond of the cover has diameter >= delta")

    def __len__(self):
        return self.p.shape[0]

    def diameters(self):
        du = (self.q[:, 0] + self.q[:, 1]) - (self.p[:, 0] + self.p[:, 1])
        dv = (self.q[:, 0] - self.q[:, 1]) - (self.p[:, 0] - self.p[:, 1])
        return np.sqrt((du * du + dv * dv) / 2)

    def covers(self, pts):
        """True when every point lies in some diamond."""
        pts = np.asarray(pts, dtype=float)
        u, v = pts[:, 0] + pts[:, 1], pts[:, 0] - pts[:, 1]
        up, vp = self.p[:, 0] + self.p[:, 1], self.p[:, 0] - self.p[:, 1]
        uq, vq = self.q[:, 0] + self.q[:, 1], self.q[:, 0] - self.q[:, 1]
        hit = np.zeros(pts.shape[0], dtype=bool)
        for k0 in range(0, len(self), 4096):
            sl = slice(k0, k0 + 4096)
            inside = (u[:, None] >= up[None, sl] - 1e-12) & (u[:, None] <= uq[None, sl] + 1e-12) & \
                (v[:, None] >= vp[None, sl] - 1e-12) & (v[:, None] <= vq[None, sl] + 1e-12)
            hit |= np.any(inside, axis=1)
        return bool(np.all(hit))


def _tiling(region, nu, nv, offset=(0.0, 0.0)):
    """Cells of an nu x nv uv-grid (shifted by ``offset`` cells) meeting the region."""
    (u0, v0), (u1, v1) = region.uv_box
    du, dv = (u1 - u0) / nu, (v1 - v0) / nv
    ou, ov = offset
    extra_u = 1 if ou else 0
    extra_v = 1 if ov else 0
    ue = u0 - ou * du + du * np.arange(nu + extra_u + 1)
    ve = v0 - ov * dv + dv * np.arange(nv + extra_v + 1)
    ua, va = np.meshgrid(ue[:-1], ve[:-1], indexing="ij")
    ub, vb = np.meshgrid(ue[1:], ve[1:], indexing="ij")
    ua, va, ub, vb = (a.ravel() for a in (ua, va, ub, vb))
    if region.kind == "box":
        (t0, x0), (t1, x1) = region.lo, region.hi
        # separating axes of the two rectangles: t, x, u, v
        keep = ((ub + vb) / 2 >= t0) & ((ua + va) / 2 <= t1) & \
            ((ub - va) / 2 >= x0) & ((ua - vb) / 2 <= x1) & \
            (ub >= t0 + x0) & (ua <= t1 + x1) & (vb >= t0 - x1) & (va <= t1 - x0)
    else:
        keep = (ub > u0) & (ua < u1) & (vb > v0) & (va < v1)
    ua, va, ub, vb = ua[keep], va[keep], ub[keep], vb[keep]
    p = np.column_stack([(ua + va) / 2, (ua - va) / 2])
    q = np.column_stack([(ub + vb) / 2, (ub - vb) / 2])
    return p, q, (du, dv)


ASPECTS = (1.0, 2.0, 0.5, 4.0, 0.25)


def candidate_covers(region, delta, n_offsets=2, seed=0):
    """Tilings of diameter < delta at several aspect ratios plus shifted grids."""
    if region.is_empty:
        return []
    (u0, v0), (u1, v1) = region.uv_box
    U, V = u1 - u0, v1 - v0
    rng = np.random.default_rng(seed)
    out = []
    for aspect in ASPECTS:
        # cell sides du, dv = aspect * du, diameter sqrt((du^2 + dv^2)/2) < delta
        du_max = delta * math.sqrt(2.0 / (1.0 + aspect * aspect)) * (1 - 1e-9)
        nu = max(1, math.ceil(U / du_max))
        nv = max(1, math.ceil(V / (aspect * du_max)))
        offsets = [(0.0, 0.0)] + [tuple(rng.uniform(0.05, 0.95, 2)) for _ in range(n_offsets)]
        for off in offsets:
            p, q, (du, dv) = _tiling(region, nu, nv, off)
            if math.sqrt((du * du + dv * dv) / 2) >= delta:
                continue
            out.append(DiamondCover(p, q, delta, f"aspect={aspect:g} offset=({off[0]:.3f},{off[1]:.3f})"))
    return out


def _check_region(space, region):
    if not isinstance(space, Minkowski2):
        raise StrategyError("diamond covers are implemented on the Minkowski models")
    if region.is_empty:
        return
    corners = region.corners()
    if not np.all(space.contains(corners)):
        raise DomainError("region touches the boundary of the space; no small diamonds exist there")


def _cover_value(cover, s, tau_fn):
    if not len(cover):
        return 0.0
    taus = np.asarray(tau_fn(cover.p, cover.q), dtype=float)
    return omega_s(s) * math.fsum((taus ** s).tolist())


def _tau_fn(space, omega=None):
    if omega is None:
        return lambda p, q: np.asarray(space.tau(p, q), dtype=float)
    if not omega.t_only:
        raise StrategyError("tau_Omega on diamond tips needs a factor of the time coordinate")
    return lambda p, q: minkowski_tau_omega(omega.t_func, p, q)


def hausdorff_premeasure(space, region, s, delta, omega=None, n_offsets=2, seed=0, extra_covers=()):
    """Best sum of omega_s * tau(p_i, q_i)^s over candidate delta-covers.

    Returns ``(value, cover)``.  The value is an upper bound on the
    pre-measure.  With ``omega`` the sides use tau_Omega.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    _check_region(space, region)
    if region.is_empty:
        return 0.0, DiamondCover(np.zeros((0, 2)), np.zeros((0, 2)), delta, "empty")
    tau_fn = _tau_fn(space, omega)
    covers = candidate_covers(region, delta, n_offsets, seed) + [c for c in extra_covers if c.delta <= delta]
    if not covers:
        raise DomainError("no valid cover within budget")
    values = [_cover_value(c, s, tau_fn) for c in covers]
    k = int(np.argmin(values))
    return float(values[k]), covers[k]


@dataclass
class HausdorffEstimate:
    s: float
    delta_schedule: list
    premeasures: list
    value: float
    error_bound: float
    quality: bool
    note: str = "pre-measures are upper bounds from a finite family of covers"
    covers: list = field(default_factory=list, repr=False)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "delta", "value"])
        for d, v in zip(self.delta_schedule, self.premeasures):
            w.writerow([fmt(self.s), fmt(d), fmt(v)])
        w.writerow([fmt(self.s), "extrapolated", fmt(self.value)])
        return buf.getvalue()


def hausdorff_measure(space, region, s, schedule, omega=None, n_offsets=2, seed=0, pool_finer=False):
    """Pre-measures along a strictly decreasing delta schedule, extrapolated.

    Each delta uses the tilings generated at its own scale.  A cover
    admissible for a small delta is admissible for every larger one;
    ``pool_finer=True`` lets each delta also try the finer covers, which
    makes the sequence monotone by construction.  ``quality`` is False if
    the sequence is not nondecreasing, which signals that the cover family
    is far from the infimum (for instance for s above the dimension).
    """
    schedule = [float(d) for d in schedule]
    if len(schedule) < 1 or any(b >= a for a, b in zip(schedule[:-1], schedule[1:])):
        raise ValueError("schedule must be strictly decreasing")
    _check_region(space, region)
    if region.is_empty:
        return HausdorffEstimate(float(s), schedule, [0.0] * len(schedule), 0.0, 0.0, True)
    tau_fn = _tau_fn(space, omega)
    per = {}
    pool = []
    for i in sorted(range(len(schedule)), key=lambda k: schedule[k]):
        d = schedule[i]
        covers = candidate_covers(region, d, n_offsets, seed + i)
        scored = [(c, _cover_value(c, s, tau_fn)) for c in covers]
        pool = pool + scored if pool_finer else scored
        best = min(pool, key=lambda cv_: cv_[1])
        per[i] = best
    vals = [per[i][1] for i in range(len(schedule))]
    quality = all(b >= a - 1e-12 * max(1.0, abs(a)) for a, b in zip(vals[:-1], vals[1:]))
    est, err = richardson(vals, schedule) if len(vals) >= 2 else (vals[-1], float("inf"))
    return HausdorffEstimate(float(s), schedule, vals, est, err, quality,
                             covers=[per[i][0] for i in range(len(schedule))])


@dataclass
class MeasureCheck:
    lhs: float
    rhs: float
    gap: float


def conformal_measure_check(space, omega, region, s, schedule, quad_n=200, seed=0):
    """Compare H^s of tau_Omega with the integral of Omega^s against H^s of tau.

    ``rhs`` sums Omega(cell centre)^s * omega_s tau(cell)^s over a
    quad_n x quad_n uv-tiling of the region; ``gap`` is relative.
    """
    _check_region(space, region)
    if region.is_empty:
        return MeasureCheck(0.0, 0.0, 0.0)
    lhs = hausdorff_measure(space, region, s, schedule, omega=omega, seed=seed).value
    p, q, _ = _tiling(region, quad_n, quad_n)
    centres = 0.5 * (p + q)
    if region.kind == "box":
        inside = region.contains(centres)
        p, q, centres = p[inside], q[inside], centres[inside]
    taus = np.asarray(space.tau(p, q), dtype=float)
    cell = omega_s(s) * taus ** s
    rhs = math.fsum((np.asarray(omega(centres)) ** s * cell).tolist())
    gap = abs(lhs - rhs) / max(abs(rhs), 1e-300)
    return MeasureCheck(float(lhs), float(rhs), float(gap))
