"""Parametric curves, partitions and the partition-refinement engine.

Lengths in this package are infima (Lorentzian) or suprema (metric) of
partition sums.  :func:`refine` computes them by bisecting partition
segments: every refinement contains the previous partition, so the sums are
monotone, and we stop once bisecting every remaining segment changes the sum
by less than ``tol``.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .extended import INF, ext_sum


class CurveError(ValueError):
    pass


class NonCausalCurveError(CurveError):
    pass


@dataclass(frozen=True)
class Curve:
    """Closed-form curve gamma: [a, b] -> R^dim.

    ``func`` maps a 1D array of parameters to an array of points of shape
    ``(k, dim)``.  ``kind`` declares the causal character.
    """

    func: Callable
    a: float
    b: float
    kind: str = "causal"
    sampling_hint: int = 16
    label: str = "curve"
    lipschitz: Optional[float] = None
    split_points: tuple = field(default=())

    def __post_init__(self):
        if not self.a < self.b:
            raise CurveError(f"curve domain must satisfy a < b, got [{self.a}, {self.b}]")
        if self.kind not in ("causal", "timelike", "plain"):
            raise CurveError(f"unknown curve kind {self.kind!r}")

    @property
    def domain(self):
        return (self.a, self.b)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        scalar = s.ndim == 0
        pts = np.asarray(self.func(np.atleast_1d(s)), dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        return pts[0] if scalar else pts

    def restrict(self, c, d):
        if not (self.a <= c < d <= self.b):
            raise CurveError(f"[{c}, {d}] is not a subinterval of [{self.a}, {self.b}]")
        splits = tuple(s for s in self.split_points if c < s < d)
        return Curve(self.func, float(c), float(d), self.kind, self.sampling_hint,
                     self.label, self.lipschitz, splits)


@dataclass(frozen=True)
class Partition:
    """Strictly increasing parameters with fixed endpoints."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise CurveError("a partition needs at least two points")
        if np.any(np.diff(pts) <= 0):
            raise CurveError("partition points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @classmethod
    def uniform(cls, a, b, n_segments):
        return cls(np.linspace(a, b, int(n_segments) + 1))

    @property
    def modulus(self):
        return float(np.max(np.diff(self.points)))

    def refine(self, extra=()):
        """Dyadic refinement: all midpoints plus any forced points."""
        mids = 0.5 * (self.points[:-1] + self.points[1:])
        return self.union(np.concatenate([mids, np.asarray(extra, dtype=float)]))

    def union(self, extra):
        extra = np.asarray(extra, dtype=float)
        extra = extra[(extra > self.points[0]) & (extra < self.points[-1])]
        return Partition(np.unique(np.concatenate([self.points, extra])))

    def __len__(self):
        return self.points.size

    def matches(self, curve):
        return self.points[0] == curve.a and self.points[-1] == curve.b


def _as_partition(partition, curve):
    if not isinstance(partition, Partition):
        partition = Partition(np.asarray(partition, dtype=float))
    if not partition.matches(curve):
        raise CurveError("partition endpoints must equal the curve's domain endpoints")
    return partition


# ---------------------------------------------------------------------------
# constructors

def line(p, q, kind="causal", label="line"):
    """Affine curve from p to q on [0, 1]."""
    p = np.asarray(p, dtype=float).ravel()
    q = np.asarray(q, dtype=float).ravel()
    return Curve(lambda s: p[None, :] + s[:, None] * (q - p)[None, :], 0.0, 1.0, kind,
                 label=label, lipschitz=float(np.linalg.norm(q - p)))


def vertical(t0, t1, x=0.0, kind="timelike"):
    """s -> (s, x) on [t0, t1]."""
    x = float(x)
    return Curve(lambda s: np.column_stack([s, np.full_like(s, x)]), float(t0), float(t1), kind,
                 label="vertical", lipschitz=1.0)


def sloped(slope, t0=0.0, t1=1.0, x0=0.0, kind=None):
    """s -> (s, x0 + slope*(s - t0)) on [t0, t1]."""
    slope = float(slope)
    if kind is None:
        kind = "timelike" if abs(slope) < 1 else ("causal" if abs(slope) == 1 else "plain")
    return Curve(lambda s: np.column_stack([s, x0 + slope * (s - t0)]), float(t0), float(t1), kind,
                 label=f"sloped({slope:g})", lipschitz=float(np.hypot(1.0, slope)))


def null(t0=0.0, t1=1.0, x0=0.0, direction=1):
    return sloped(1.0 if direction >= 0 else -1.0, t0, t1, x0, kind="causal")


def spiral(s0=-1.0 / (2 * np.pi), s1=-1e-4):
    """s -> (s, s sin(1/s)), the oscillating arm of the imprisoning space."""
    if not (s0 < s1 < 0 or (s0 < s1 and s1 <= 0)):
        raise CurveError("spiral domain must lie in the negative half line")

    def f(s):
        with np.errstate(invalid="ignore", divide="ignore"):
            x = np.where(s == 0, 0.0, s * np.sin(1.0 / np.where(s == 0, 1.0, s)))
        return np.column_stack([s, x])

    return Curve(f, float(s0), float(s1), "causal", sampling_hint=64, label="imprison_spiral")


def circle_arc(radius=1.0, s0=0.0, s1=np.pi, center=(0.0, 0.0)):
    r = float(radius)
    cx, cy = map(float, center)
    return Curve(lambda s: np.column_stack([cx + r * np.cos(s), cy + r * np.sin(s)]),
                 float(s0), float(s1), "plain", label="arc", lipschitz=abs(r))


def scalar_path(s0, s1, kind="causal"):
    """Identity curve s -> s on a one-dimensional space."""
    return Curve(lambda s: s[:, None], float(s0), float(s1), kind, label="identity", lipschitz=1.0)


def waypoints(points, kind="causal", label="waypoints"):
    """Piecewise-linear curve through ``points`` on [0, 1], uniform in the index."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.shape[0] < 2:
        raise CurveError("need at least two waypoints")
    k = pts.shape[0] - 1
    knots = np.linspace(0.0, 1.0, k + 1)

    def f(s):
        u = np.clip(s, 0.0, 1.0) * k
        i = np.minimum(np.floor(u).astype(int), k - 1)
        frac = (u - i)[:, None]
        return pts[i] * (1 - frac) + pts[i + 1] * frac

    lip = float(k * np.max(np.linalg.norm(np.diff(pts, axis=0), axis=1)))
    return Curve(f, 0.0, 1.0, kind, sampling_hint=max(16, k), label=label, lipschitz=lip,
                 split_points=tuple(knots[1:-1]))


NAMED_CURVES = {
    "vertical": lambda p: vertical(p.get("t0", 0.0), p.get("t1", 1.0), p.get("x", 0.0), p.get("kind", "timelike")),
    "sloped": lambda p: sloped(p["slope"], p.get("t0", 0.0), p.get("t1", 1.0), p.get("x0", 0.0), p.get("kind")),
    "null": lambda p: null(p.get("t0", 0.0), p.get("t1", 1.0), p.get("x0", 0.0), p.get("direction", 1)),
    "imprison_spiral": lambda p: spiral(p.get("s0", -1.0 / (2 * np.pi)), p.get("s1", -1e-4)),
    "identity": lambda p: scalar_path(p.get("s0", 0.0), p.get("s1", 1.0), p.get("kind", "causal")),
}


def curve_from_config(cfg):
    """Curve from its JSON form {"type": "waypoints"|"named", ...}."""
    if not isinstance(cfg, dict) or "type" not in cfg:
        raise CurveError("curve config must be an object with a 'type' key")
    if cfg["type"] == "waypoints":
        return waypoints(cfg["points"], cfg.get("kind", "causal"))
    if cfg["type"] == "named":
        name = cfg.get("name")
        if name not in NAMED_CURVES:
            raise CurveError(f"unknown named curve {name!r}")
        return NAMED_CURVES[name](cfg.get("params", {}))
    raise CurveError(f"unknown curve type {cfg['type']!r}")


def reparametrize(curve, phi, c, d, kind=None):
    """Compose ``curve`` with an increasing map phi: [c, d] -> [curve.a, curve.b]."""
    probe = np.linspace(c, d, 257)
    vals = np.asarray(phi(probe), dtype=float)
    if np.any(np.diff(vals) <= 0):
        raise CurveError("reparametrization must be strictly increasing")
    if not (np.isclose(vals[0], curve.a, atol=1e-12) and np.isclose(vals[-1], curve.b, atol=1e-12)):
        raise CurveError("reparametrization must map [c, d] onto the curve's domain")
    a, b = curve.a, curve.b

    def f(u):
        return curve.func(np.clip(np.asarray(phi(u), dtype=float), a, b))

    return Curve(f, float(c), float(d), kind or curve.kind, curve.sampling_hint,
                 curve.label + "∘phi", None, ())


# ---------------------------------------------------------------------------
# causal character

def is_causal(space, curve, n_samples=50, timelike=False):
    """Sampled causality certificate.

    Returns ``(ok, pair)`` where ``pair`` is the first violating parameter
    pair (s, t) with s < t, or ``None``.
    """
    if n_samples < 2:
        raise CurveError("n_samples must be at least 2")
    s = np.linspace(curve.a, curve.b, int(n_samples))
    pts = curve(s)
    rel = space.chron if timelike else space.causal
    i, j = np.triu_indices(len(s), k=1)
    ok = np.asarray(rel(pts[i], pts[j]), dtype=bool)
    if np.all(ok):
        return True, None
    k = int(np.argmin(ok))
    return False, (float(s[i[k]]), float(s[j[k]]))


def _require_causal(space, curve):
    if curve.kind == "plain":
        raise NonCausalCurveError("curve is declared plain, a causal curve is required")
    ok, pair = is_causal(space, curve, 24)
    if not ok:
        raise NonCausalCurveError(f"curve is not causal: violation at parameters {pair}")


# ---------------------------------------------------------------------------
# plain variations

def tau_variation(space, curve, partition):
    """Sum of tau over consecutive partition points."""
    _require_causal(space, curve)
    sigma = _as_partition(partition, curve)
    pts = curve(sigma.points)
    return ext_sum(space.tau(pts[:-1], pts[1:]))


def d_variation(space, curve, partition):
    """Sum of the background distance over consecutive partition points."""
    sigma = _as_partition(partition, curve)
    pts = curve(sigma.points)
    return ext_sum(space.distance(pts[:-1], pts[1:]))


@dataclass
class RefinementResult:
    value: float
    converged: bool
    levels: list
    partition: Optional[np.ndarray] = None

    def __iter__(self):
        # allows  value, converged = tau_length(...)
        yield self.value
        yield self.converged


def refine(segment_values, a, b, *, mode, tol, max_depth=40, initial=16, forced=(),
           max_points=2 ** 21, ceiling=None, min_levels=2):
    """Inf/sup of a partition sum by adaptive dyadic refinement.

    ``segment_values(l, r)`` returns the per-segment terms for arrays of
    left and right parameters.  ``mode`` is ``"inf"`` (sums decrease under
    refinement) or ``"sup"`` (sums increase).

    At each level every segment is bisected tentatively.  Segments whose
    term changes by more than ``tol * width / (b - a)`` are split; the
    others are kept.  When the total change of a full bisection is below
    ``tol`` the fully bisected sum is returned as converged.  Every recorded
    level is an actual partition containing the previous one.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if mode not in ("inf", "sup"):
        raise ValueError("mode must be 'inf' or 'sup'")
    pts = np.linspace(a, b, int(initial) + 1)
    forced = np.asarray([f for f in forced if a < f < b], dtype=float)
    if forced.size:
        pts = np.unique(np.concatenate([pts, forced]))
    vals = np.asarray(segment_values(pts[:-1], pts[1:]), dtype=float)
    value = ext_sum(vals)
    levels = [(int(pts.size), value)]
    width = b - a
    for depth in range(max_depth):
        left, right = pts[:-1], pts[1:]
        mid = 0.5 * (left + right)
        vl = np.asarray(segment_values(left, mid), dtype=float)
        vr = np.asarray(segment_values(mid, right), dtype=float)
        child = vl + vr
        full = ext_sum(child)
        if np.isinf(value) and np.isinf(full):
            levels.append((int(2 * pts.size - 1), INF))
            return RefinementResult(INF, True, levels, pts)
        with np.errstate(invalid="ignore"):
            change = np.where(np.isinf(vals) & np.isinf(child), 0.0, np.abs(child - vals))
        change = np.where(np.isinf(vals) != np.isinf(child), INF, change)
        total_change = float(np.sum(change))
        if total_change < tol and depth >= min_levels - 1:
            all_pts = np.empty(2 * pts.size - 1)
            all_pts[0::2] = pts
            all_pts[1::2] = mid
            levels.append((int(all_pts.size), full))
            return RefinementResult(float(full), True, levels, all_pts)
        active = change > tol * (right - left) / width
        if depth < min_levels - 1:
            active[:] = True
        if not np.any(active):
            active = change >= np.max(change)
        counts = 1 + active.astype(int)
        start = np.cumsum(counts) - counts
        new_vals = np.empty(int(counts.sum()))
        new_vals[start[~active]] = vals[~active]
        new_vals[start[active]] = vl[active]
        new_vals[start[active] + 1] = vr[active]
        new_pts = np.empty(new_vals.size + 1)
        new_pts[start] = left
        new_pts[start[active] + 1] = mid[active]
        new_pts[-1] = right[-1]
        pts, vals = new_pts, new_vals
        value = ext_sum(vals)
        levels.append((int(pts.size), value))
        if mode == "sup" and ceiling is not None and value > ceiling:
            return RefinementResult(value, False, levels, pts)
        if pts.size > max_points:
            return RefinementResult(value, False, levels, pts)
    return RefinementResult(value, False, levels, pts)


def tau_length(space, curve, tol=1e-6, max_depth=40):
    """tau-length as an infimum of variations.

    Returns a :class:`RefinementResult`; unpacks as ``(value, converged)``.
    """
    _require_causal(space, curve)

    def seg(l, r):
        return space.tau(curve(l), curve(r))

    return refine(seg, curve.a, curve.b, mode="inf", tol=tol, max_depth=max_depth,
                  initial=curve.sampling_hint, forced=curve.split_points)


def d_length(space, curve, tol=1e-6, max_depth=40, ceiling=1e6, max_points=2 ** 21):
    """Background-metric length as a supremum of variations.

    Exceeding ``ceiling`` stops the refinement and returns the current value
    as a lower bound with ``converged=False``.
    """
    def seg(l, r):
        return space.distance(curve(l), curve(r))

    return refine(seg, curve.a, curve.b, mode="sup", tol=tol, max_depth=max_depth,
                  initial=curve.sampling_hint, forced=curve.split_points, ceiling=ceiling,
                  max_points=max_points)
