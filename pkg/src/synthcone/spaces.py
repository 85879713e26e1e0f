"""Lorentzian pre-length spaces and the catalog of example spaces.

Every evaluator is vectorized: points are coordinate arrays of shape
``(..., dim)`` and relations/time separations broadcast over the leading
axes.  Single points give Python scalars back.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import curves as cv
from .extended import INF
from .solvers import gl_integrate, gl_nodes, minkowski_tau_omega


class SpaceError(ValueError):
    pass


class DomainError(SpaceError):
    """Point or parameter outside the space's domain."""


class StrategyError(ValueError):
    """A solver strategy does not apply to the given space or factor."""


@dataclass(frozen=True)
class MetricStructure:
    distance: Callable


@dataclass(frozen=True)
class CausalStructure:
    chron: Callable
    causal: Callable


@dataclass(frozen=True)
class TimeSeparation:
    tau: Callable


CONDITIONS = (
    "chronological",
    "causal",
    "non_totally_imprisoning",
    "distinguishing",
    "strongly_causal",
    "stably_causal",
    "causally_continuous",
    "causally_simple",
    "globally_hyperbolic",
    "forward_complete",
)


def _scalarize(x):
    x = np.asarray(x)
    if x.ndim == 0:
        return x.item()
    return x


def euclidean(p, q):
    return np.sqrt(np.sum((np.asarray(q, dtype=float) - np.asarray(p, dtype=float)) ** 2, axis=-1))


class LorentzianPreLengthSpace:
    """A set with background distance, relations << and <=, and tau.

    Parameters
    ----------
    metric, causal_structure, time_separation
        Evaluator bundles.  Each evaluator takes two coordinate arrays.
    dimension : int
        Length of the coordinate tuples.
    flags : dict
        Declared properties: intrinsic, quasi_strongly_causal,
        causally_path_connected, locally_causally_closed, tau_finite,
        nonempty_past.
    facts : dict
        Hand-certified causality verdicts (True, False or None) used by the
        ladder probe; see :mod:`synthcone.causality`.
    """

    name = "custom"

    def __init__(self, metric, causal_structure, time_separation, dimension, flags=None,
                 facts=None, contains=None, name=None, params=None):
        self.metric = metric
        self.causal_structure = causal_structure
        self.time_separation = time_separation
        self.dimension = int(dimension)
        self.flags = dict(flags or {})
        self.facts = dict(facts or {})
        self._contains = contains
        if name is not None:
            self.name = name
        self.params = dict(params or {})

    # -- coordinate handling -------------------------------------------------
    def as_points(self, x):
        x = np.asarray(x, dtype=float)
        if self.dimension == 1:
            if x.ndim == 0 or x.shape[-1] != 1:
                x = x[..., None]
        elif x.ndim == 0 or x.shape[-1] != self.dimension:
            raise DomainError(f"{self.name}: points need {self.dimension} coordinates, got shape {x.shape}")
        return x

    def point(self, *coords):
        """Validated single point."""
        if len(coords) == 1:
            coords = np.ravel(coords[0])
        pt = self.as_points(np.asarray(coords, dtype=float))
        if not bool(np.all(self.contains(pt))):
            raise DomainError(f"{self.name}: {tuple(np.ravel(pt))} is not a point of the space")
        return pt

    def contains(self, x):
        x = self.as_points(x)
        if self._contains is None:
            return _scalarize(np.all(np.isfinite(x), axis=-1))
        return _scalarize(self._contains(x))

    # -- structure -----------------------------------------------------------
    def distance(self, p, q):
        return _scalarize(self.metric.distance(self.as_points(p), self.as_points(q)))

    def chron(self, p, q):
        return _scalarize(np.asarray(self.causal_structure.chron(self.as_points(p), self.as_points(q)), dtype=bool))

    def causal(self, p, q):
        return _scalarize(np.asarray(self.causal_structure.causal(self.as_points(p), self.as_points(q)), dtype=bool))

    def tau(self, p, q):
        return _scalarize(np.asarray(self.time_separation.tau(self.as_points(p), self.as_points(q)), dtype=float))

    # -- hooks overridden by catalog spaces ---------------------------------
    def tau_omega_exact(self, omega, p, q):
        """Closed-form conformal time separation, where the space admits one."""
        raise StrategyError(f"{self.name}: no closed-form conformal time separation")

    def sample(self, rng, n):
        raise SpaceError(f"{self.name}: no sampler")

    def curve_battery(self):
        return []

    def witness(self, condition):
        return None

    def diamond_points(self, p, q, n, rng):
        """Points of J(p, q): rejection from the space sampler."""
        p = self.as_points(p)
        q = self.as_points(q)
        pts = self.sample(rng, 20 * n)
        keep = np.asarray(self.causal(np.broadcast_to(p, pts.shape), pts), bool) & \
            np.asarray(self.causal(pts, np.broadcast_to(q, pts.shape)), bool)
        pts = pts[keep][:n]
        return np.vstack([p[None], pts, q[None]])

    def sample_causal_pairs(self, rng, n, pool=200, strict=True):
        """n pairs (p, q) with p <= q drawn from a sampled pool."""
        pts = self.sample(rng, pool)
        i, j = np.meshgrid(np.arange(pool), np.arange(pool), indexing="ij")
        i, j = i.ravel(), j.ravel()
        rel = np.asarray(self.causal(pts[i], pts[j]), bool)
        if strict:
            rel &= i != j
        idx = np.nonzero(rel)[0]
        if idx.size == 0:
            raise SpaceError(f"{self.name}: no causal pairs in the sample pool")
        pick = rng.choice(idx, size=n, replace=idx.size < n)
        return pts[i[pick]], pts[j[pick]]

    def sample_causal_triples(self, rng, n, pool=120):
        """n triples x <= y <= z from a sampled pool."""
        pts = self.sample(rng, pool)
        i, j = np.meshgrid(np.arange(pool), np.arange(pool), indexing="ij")
        rel = np.asarray(self.causal(pts[i.ravel()], pts[j.ravel()]), bool).reshape(pool, pool)
        out = []
        tries = 0
        while len(out) < n and tries < 50 * n:
            tries += 1
            a = int(rng.integers(pool))
            fut = np.nonzero(rel[a])[0]
            if fut.size == 0:
                continue
            b = int(rng.choice(fut))
            fut2 = np.nonzero(rel[b])[0]
            if fut2.size == 0:
                continue
            c = int(rng.choice(fut2))
            out.append((a, b, c))
        if not out:
            raise SpaceError(f"{self.name}: no causal triples in the sample pool")
        idx = np.asarray(out)
        return pts[idx[:, 0]], pts[idx[:, 1]], pts[idx[:, 2]]

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} {self.params}>"


# ---------------------------------------------------------------------------
# Minkowski models

def _minkowski_tau(p, q):
    dt = q[..., 0] - p[..., 0]
    dx = q[..., 1] - p[..., 1]
    dtp = np.maximum(dt, 0.0)
    return np.sqrt(np.maximum(dtp * dtp - dx * dx, 0.0))


def _minkowski_causal(p, q):
    dt = q[..., 0] - p[..., 0]
    return dt >= np.abs(q[..., 1] - p[..., 1])


def _minkowski_chron(p, q):
    dt = q[..., 0] - p[..., 0]
    return dt > np.abs(q[..., 1] - p[..., 1])


_GH_FACTS = {
    "chronological": True,
    "causal": True,
    "non_totally_imprisoning": True,
    "distinguishing": True,
    "strongly_causal": True,
    "stably_causal": None,
    "causally_continuous": True,
    "causally_simple": True,
    "globally_hyperbolic": True,
    "forward_complete": True,
}


class Minkowski2(LorentzianPreLengthSpace):
    """The Minkowski plane, coordinates (t, x), Euclidean background distance."""

    name = "minkowski2"

    def __init__(self, box=1.0):
        super().__init__(
            MetricStructure(euclidean),
            CausalStructure(_minkowski_chron, _minkowski_causal),
            TimeSeparation(_minkowski_tau),
            2,
            flags=dict(intrinsic=True, quasi_strongly_causal=True, causally_path_connected=True,
                       locally_causally_closed=True, tau_finite=True, nonempty_past=True),
            facts=dict(_GH_FACTS),
            params={"box": box},
        )
        self.box = float(box)

    def tau_omega_exact(self, omega, p, q):
        if not omega.t_only:
            raise StrategyError("closed form needs a factor depending on the time coordinate only")
        return _scalarize(minkowski_tau_omega(omega.t_func, self.as_points(p), self.as_points(q)))

    def sample(self, rng, n):
        return rng.uniform(-self.box, self.box, size=(n, 2))

    def diamond_points(self, p, q, n, rng):
        return _minkowski_diamond_points(self.as_points(p), self.as_points(q), n, rng)

    def curve_battery(self):
        return [
            cv.vertical(-0.5, 0.5),
            cv.sloped(0.5, 0.0, 1.0),
            cv.null(0.0, 1.0),
            cv.waypoints([[-0.8, 0.0], [-0.3, 0.3], [0.2, 0.1], [0.9, -0.4]], kind="timelike"),
        ]


class MinkowskiStrip(Minkowski2):
    """(lo, hi) x R with the Minkowski structure (default the unit strip)."""

    name = "minkowski_strip"

    def __init__(self, lo=0.0, hi=1.0, width=0.5):
        lo, hi = float(lo), float(hi)
        if not lo < hi:
            raise DomainError("minkowski_strip needs lo < hi")
        super().__init__()
        self.lo, self.hi, self.width = lo, hi, float(width)
        self.params = {"lo": lo, "hi": hi}
        self._contains = lambda x: (x[..., 0] > lo) & (x[..., 0] < hi) & np.all(np.isfinite(x), axis=-1)

    def sample(self, rng, n):
        t = rng.uniform(self.lo, self.hi, size=n)
        x = rng.uniform(-self.width, self.width, size=n)
        return np.column_stack([t, x])

    def curve_battery(self):
        a, b = self.lo, self.hi
        span = b - a
        return [
            cv.vertical(a + 0.1 * span, b - 0.1 * span),
            cv.vertical(a + 0.25 * span, a + 0.75 * span, x=0.2),
            cv.sloped(0.3, a + 0.2 * span, a + 0.8 * span),
            cv.null(a + 0.3 * span, a + 0.6 * span),
        ]


def _minkowski_diamond_points(p, q, n, rng):
    """Uniform points of J(p, q) via light-cone coordinates u = t + x, v = t - x."""
    up, vp = p[0] + p[1], p[0] - p[1]
    uq, vq = q[0] + q[1], q[0] - q[1]
    k = max(int(n), 4)
    u = rng.uniform(up, uq, size=k)
    v = rng.uniform(vp, vq, size=k)
    corners = np.array([[up, vp], [uq, vq], [up, vq], [uq, vp]])
    uv = np.vstack([corners, np.column_stack([u, v])])
    # the time axis through the tips carries the extreme t values
    s = np.linspace(0.0, 1.0, 33)
    axis = np.column_stack([up + s * (uq - up), vp + s * (vq - vp)])
    uv = np.vstack([uv, axis])
    return np.column_stack([0.5 * (uv[:, 0] + uv[:, 1]), 0.5 * (uv[:, 0] - uv[:, 1])])


# ---------------------------------------------------------------------------
# one-dimensional spaces

def _line_distance(p, q):
    return np.abs(q[..., 0] - p[..., 0])


class InfinityLine(LorentzianPreLengthSpace):
    """The real line with tau = +inf on every strictly ordered pair."""

    name = "infinity_line"

    def __init__(self, span=2.0):
        super().__init__(
            MetricStructure(_line_distance),
            CausalStructure(lambda p, q: q[..., 0] > p[..., 0], lambda p, q: q[..., 0] >= p[..., 0]),
            TimeSeparation(lambda p, q: np.where(q[..., 0] > p[..., 0], INF, 0.0)),
            1,
            flags=dict(intrinsic=True, quasi_strongly_causal=True, causally_path_connected=True,
                       locally_causally_closed=True, tau_finite=False, nonempty_past=True),
            facts=dict(_GH_FACTS),
            params={"span": span},
        )
        self.span = float(span)

    def tau_omega_exact(self, omega, p, q):
        p, q = self.as_points(p), self.as_points(q)
        omega(np.concatenate([p.reshape(-1, 1), q.reshape(-1, 1)]))  # positivity check
        return _scalarize(np.where(q[..., 0] > p[..., 0], INF, 0.0))

    def sample(self, rng, n):
        return rng.uniform(-self.span, self.span, size=(n, 1))

    def curve_battery(self):
        return [cv.scalar_path(-1.0, 1.0), cv.scalar_path(0.2, 0.7)]


def _log_tau(p, q):
    x, y = p[..., 0], q[..., 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        pos = np.log(np.abs(y) / np.abs(x))
        neg = np.log(np.abs(x) / np.abs(y))
    out = np.where(x >= y, 0.0,
                   np.where(x > 0, pos, np.where(y < 0, neg, INF)))
    return out


class TauLogLine(LorentzianPreLengthSpace):
    """The real line with tau(x, y) = int_x^y dt/|t| for x < y."""

    name = "tau_log_line"

    def __init__(self, span=2.0):
        super().__init__(
            MetricStructure(_line_distance),
            CausalStructure(lambda p, q: q[..., 0] > p[..., 0], lambda p, q: q[..., 0] >= p[..., 0]),
            TimeSeparation(_log_tau),
            1,
            flags=dict(intrinsic=True, quasi_strongly_causal=True, causally_path_connected=True,
                       locally_causally_closed=True, tau_finite=False, nonempty_past=True),
            facts=dict(_GH_FACTS),
            params={"span": span},
        )
        self.span = float(span)

    def tau_omega_exact(self, omega, p, q):
        """int_x^y Omega(t)/|t| dt, computed in the variable u = log|t|."""
        p, q = np.broadcast_arrays(self.as_points(p), self.as_points(q))
        shape = p.shape[:-1]
        x = p[..., 0].ravel()
        y = q[..., 0].ravel()
        out = np.zeros(x.shape)
        straddle = (x < y) & (x <= 0) & (y >= 0)
        out[straddle] = INF
        pos = (x < y) & (x > 0)
        neg = (x < y) & (y < 0)
        f = lambda s: lambda u: np.asarray(omega.func((s * np.exp(u))[..., None]), dtype=float)
        if np.any(pos):
            out[pos] = _checked_integral(omega, f(1.0), np.log(x[pos]), np.log(y[pos]))
        if np.any(neg):
            out[neg] = _checked_integral(omega, f(-1.0), np.log(-y[neg]), np.log(-x[neg]))
        return _scalarize(out.reshape(shape))

    def sample(self, rng, n):
        return rng.uniform(-self.span, self.span, size=(n, 1))

    def curve_battery(self):
        return [cv.scalar_path(0.5, 2.0), cv.scalar_path(-2.0, -0.25), cv.scalar_path(-1.0, 1.0)]


def _checked_integral(omega, f, a, b, n=16, panels=8):
    t, w = gl_nodes(a, b, n, panels)
    vals = f(t)
    if np.any(~np.isfinite(vals)) or np.any(vals <= 0):
        raise ValueError(f"conformal factor {omega.label!r} must be finite and positive")
    return np.sum(vals * w, axis=1)


# ---------------------------------------------------------------------------
# funnel spaces

_TOL = 1e-9
LAMBDA_LEFT, LAMBDA_RIGHT, BRANCH, SEGMENT, OUTSIDE = 0, 1, 2, 3, -1


def funnel_pieces(pts, with_segment=False):
    """Classify funnel points.

    Returns ``(piece, branch)``: the piece code per point and the branch
    index n (0 when not on a branch).  Junction points where a branch meets
    the outer arms belong to the arms.
    """
    pts = np.asarray(pts, dtype=float)
    t = pts[..., 0]
    x = pts[..., 1]
    at = np.abs(t)
    piece = np.full(t.shape, OUTSIDE, dtype=int)
    branch = np.zeros(t.shape, dtype=int)
    on_lambda = (np.abs(x - (1.0 - at)) <= _TOL) & (at <= 1.0 + _TOL) & (at > _TOL)
    piece = np.where(on_lambda & (t < 0), LAMBDA_LEFT, piece)
    piece = np.where(on_lambda & (t > 0), LAMBDA_RIGHT, piece)
    gap = 1.0 - (x - at)  # equals 1/n on branch n
    with np.errstate(divide="ignore", invalid="ignore"):
        n_real = np.where(gap > _TOL, 1.0 / gap, 0.0)
    n_int = np.rint(n_real).astype(np.int64)
    on_branch = (~on_lambda) & (n_int >= 1) & (np.abs(gap - 1.0 / np.maximum(n_int, 1)) <= _TOL) \
        & (at < 1.0 / (2.0 * np.maximum(n_int, 1)) - _TOL * 0)
    on_branch &= at < 1.0 / (2.0 * np.maximum(n_int, 1))
    piece = np.where(on_branch, BRANCH, piece)
    branch = np.where(on_branch, n_int, 0)
    if with_segment:
        seg = (np.abs(x) <= _TOL) & (t > -2.0) & (t < -1.0)
        piece = np.where(seg & (piece == OUTSIDE), SEGMENT, piece)
    return piece, branch


def _funnel_causal(p, q, with_segment=False):
    p, q = np.broadcast_arrays(np.asarray(p, float), np.asarray(q, float))
    pp, pb = funnel_pieces(p, with_segment)
    qp, qb = funnel_pieces(q, with_segment)
    tp, tq = p[..., 0], q[..., 0]
    same = np.all(np.abs(p - q) <= _TOL, axis=-1) & (pp != OUTSIDE)
    later = tq >= tp - _TOL
    half = 1.0 / (2.0 * np.maximum(qb, 1))
    half_p = 1.0 / (2.0 * np.maximum(pb, 1))
    r = np.zeros(tp.shape, dtype=bool)
    # outer left arm
    r |= (pp == LAMBDA_LEFT) & (qp == LAMBDA_LEFT) & later
    r |= (pp == LAMBDA_LEFT) & (qp == LAMBDA_RIGHT)
    r |= (pp == LAMBDA_LEFT) & (qp == BRANCH) & (tp <= -half + _TOL)
    # outer right arm
    r |= (pp == LAMBDA_RIGHT) & (qp == LAMBDA_RIGHT) & later
    # branches
    r |= (pp == BRANCH) & (qp == BRANCH) & (pb == qb) & later
    r |= (pp == BRANCH) & (qp == LAMBDA_RIGHT) & (tq >= half_p - _TOL)
    if with_segment:
        r |= (pp == SEGMENT) & (qp == SEGMENT) & later
        r |= (pp == SEGMENT) & (qp != SEGMENT) & (qp != OUTSIDE)
    return r | same


def _funnel_witnesses(name, n_terms=40):
    tips = [[0.0, 1.0 - 1.0 / n] for n in range(2, n_terms + 2)]
    arm = [[-1.0 / k, 1.0 - 1.0 / k] for k in range(2, n_terms + 2)]
    diamond = {"type": "noncompact_diamond", "p": [-1.0, 0.0], "q": [1.0, 0.0],
               "sequence": tips, "limit": [0.0, 1.0],
               "note": "J((-1,0),(1,0)) is the whole space; branch tips accumulate at the missing apex"}
    return {
        "globally_hyperbolic": diamond,
        "distinguishing": {"type": "indistinguishable_pair", "x": [-0.5, 0.5], "y": [0.5, 0.5],
                           "note": "points of the funnel have empty chronological future"},
        "forward_complete": {"type": "unbounded_monotone_sequence", "sequence": arm, "bound": [1.0, 0.0],
                             "limit": [0.0, 1.0]},
    }


class FunnelX(LorentzianPreLengthSpace):
    """Null outer arms x = 1 - |t| and branches x = |t| + 1 - 1/n, |t| < 1/(2n).

    p <= q iff a causal Minkowski curve inside the set joins them, decided by
    case analysis on the pieces.  << is empty and tau vanishes.
    """

    name = "funnel_X"
    with_segment = False

    def __init__(self, sample_branches=12):
        ws = self.with_segment
        super().__init__(
            MetricStructure(euclidean),
            CausalStructure(self._chron, lambda p, q: _funnel_causal(p, q, ws)),
            TimeSeparation(self._tau),
            2,
            flags=dict(intrinsic=True, quasi_strongly_causal=True, causally_path_connected=not ws,
                       locally_causally_closed=True, tau_finite=True, nonempty_past=ws),
            facts={
                "chronological": True,
                "causal": True,
                "non_totally_imprisoning": True,
                "distinguishing": False,
                "strongly_causal": True,
                "stably_causal": None,
                "causally_continuous": False,
                "causally_simple": None,
                "globally_hyperbolic": False,
                "forward_complete": False,
            },
            contains=lambda x: funnel_pieces(x, ws)[0] != OUTSIDE,
            params={"sample_branches": sample_branches},
        )
        self.sample_branches = int(sample_branches)
        self._witness = _funnel_witnesses(self.name)

    def _chron(self, p, q):
        return np.zeros(np.broadcast_shapes(np.shape(p)[:-1], np.shape(q)[:-1]), dtype=bool)

    def _tau(self, p, q):
        return np.zeros(np.broadcast_shapes(np.shape(p)[:-1], np.shape(q)[:-1]))

    def witness(self, condition):
        if condition == "causally_continuous":
            return self._witness["distinguishing"]
        return self._witness.get(condition)

    def tau_omega_exact(self, omega, p, q):
        p, q = self.as_points(p), self.as_points(q)
        return _scalarize(np.zeros(np.broadcast_shapes(p.shape[:-1], q.shape[:-1])))

    def sample(self, rng, n):
        kinds = rng.integers(0, 3, size=n)
        t_arm = rng.uniform(-1.0, 1.0, size=n)
        t_arm = np.where(t_arm == 0.0, 0.5, t_arm)
        nb = rng.integers(1, self.sample_branches + 1, size=n)
        t_br = rng.uniform(-1.0, 1.0, size=n) * (0.5 / nb) * 0.999
        t = np.where(kinds < 2, t_arm, t_br)
        x = np.where(kinds < 2, 1.0 - np.abs(t_arm), np.abs(t_br) + 1.0 - 1.0 / nb)
        return np.column_stack([t, x])

    def curve_battery(self):
        return [
            cv.waypoints([[-1.0, 0.0], [-0.3, 0.7]], kind="causal", label="left arm"),
            _branch_path(3),
            cv.waypoints([[0.2, 0.8], [0.9, 0.1]], kind="causal", label="right arm"),
        ]


def _branch_path(n):
    """Left arm, then branch n from its left junction to its right one, then the right arm."""
    h = 1.0 / (2 * n)
    pts = [[-1.0, 0.0], [-h, 1.0 - h], [0.0, 1.0 - 1.0 / n], [h, 1.0 - h], [1.0, 0.0]]
    return cv.waypoints(pts, kind="causal", label=f"through branch {n}")


class FunnelY(FunnelX):
    """The funnel with the timelike segment {(t, 0) : -2 < t < -1} added below."""

    name = "funnel_Y"
    with_segment = True

    def _chron(self, p, q):
        piece, _ = funnel_pieces(np.broadcast_arrays(np.asarray(p, float), np.asarray(q, float))[0], True)
        distinct = np.any(np.abs(np.asarray(p, float) - np.asarray(q, float)) > _TOL, axis=-1)
        return _funnel_causal(p, q, True) & distinct & (piece == SEGMENT)

    def _tau(self, p, q):
        p, q = np.broadcast_arrays(np.asarray(p, float), np.asarray(q, float))
        top = np.minimum(q[..., 0], -1.0)
        return np.where(self._chron(p, q), np.maximum(top - p[..., 0], 0.0), 0.0)

    def tau_omega_exact(self, omega, p, q):
        p, q = np.broadcast_arrays(self.as_points(p), self.as_points(q))
        shape = p.shape[:-1]
        p, q = p.reshape(-1, 2), q.reshape(-1, 2)
        out = np.zeros(p.shape[0])
        ok = np.asarray(self._chron(p, q), bool)
        if np.any(ok):
            a = p[ok, 0]
            b = np.minimum(q[ok, 0], -1.0)
            f = lambda t: np.asarray(omega.func(np.stack([t, np.zeros_like(t)], axis=-1)), dtype=float)
            out[ok] = _checked_integral(omega, f, a, b)
        return _scalarize(out.reshape(shape))

    def sample(self, rng, n):
        base = super().sample(rng, n)
        seg = rng.random(n) < 0.25
        t = rng.uniform(-2.0, -1.0, size=n)
        t = np.where(t <= -2.0, -1.5, t)
        base[seg] = np.column_stack([t[seg], np.zeros(int(seg.sum()))])
        return base

    def curve_battery(self):
        return [
            cv.vertical(-1.9, -1.1, kind="timelike"),
            cv.waypoints([[-1.8, 0.0], [-1.0, 0.0], [-0.4, 0.6]], kind="causal", label="segment then arm"),
            cv.waypoints([[0.2, 0.8], [0.9, 0.1]], kind="causal", label="right arm"),
        ]


# ---------------------------------------------------------------------------
# the imprisoning space

def _w_profile(t):
    t = np.asarray(t, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        osc = t * np.sin(1.0 / np.where(t == 0, 1.0, t))
    return np.where(t < 0, osc, 0.0)


def imprison_partition(k_max, s0=-1.0 / (2 * np.pi)):
    """Parameters of the spiral hitting its extremes, t_k = -1/(pi/2 + k pi)."""
    ks = np.arange(2, int(k_max) + 1)
    tk = -1.0 / (np.pi / 2 + ks * np.pi)
    return np.concatenate([[s0], tk])


class ImprisonW(LorentzianPreLengthSpace):
    """Flat half {(t, 0) : 0 <= t < 1/pi} joined to {(t, t sin(1/t)) : -1/pi < t <= 0}.

    tau = max(t2 - t1, 0), <= is t2 >= t1, << is t2 > t1, Euclidean distance.
    """

    name = "imprison_W"

    def __init__(self):
        lim = 1.0 / np.pi
        super().__init__(
            MetricStructure(euclidean),
            CausalStructure(lambda p, q: q[..., 0] > p[..., 0], lambda p, q: q[..., 0] >= p[..., 0]),
            TimeSeparation(lambda p, q: np.maximum(q[..., 0] - p[..., 0], 0.0)),
            2,
            flags=dict(intrinsic=True, quasi_strongly_causal=True, causally_path_connected=True,
                       locally_causally_closed=True, tau_finite=True, nonempty_past=True),
            facts={
                "chronological": True,
                "causal": True,
                "non_totally_imprisoning": False,
                "distinguishing": True,
                "strongly_causal": True,
                "stably_causal": None,
                "causally_continuous": True,
                "causally_simple": True,
                "globally_hyperbolic": False,
                "forward_complete": True,
            },
            contains=lambda x: (np.abs(x[..., 0]) < lim) & (np.abs(x[..., 1] - _w_profile(x[..., 0])) <= _TOL),
        )
        self.limit = lim

    def lift(self, t):
        """Point of W with time coordinate t."""
        t = np.asarray(t, dtype=float)
        return np.stack([t, _w_profile(t)], axis=-1)

    def witness(self, condition):
        if condition in ("non_totally_imprisoning", "globally_hyperbolic"):
            return {"type": "imprisoned_curve", "curve": {"type": "named", "name": "imprison_spiral",
                                                          "params": {"s0": -1.0 / (2 * np.pi), "s1": 0.0}},
                    "box": [[-1.0 / np.pi, -1.0 / np.pi], [0.0, 1.0 / np.pi]],
                    "k_schedule": [10, 100, 1000, 10000, 100000]}
        return None

    def tau_omega_exact(self, omega, p, q):
        p, q = np.broadcast_arrays(self.as_points(p), self.as_points(q))
        shape = p.shape[:-1]
        a = p[..., 0].ravel()
        b = q[..., 0].ravel()
        out = np.zeros(a.shape)
        ok = b > a
        if np.any(ok):
            f = lambda t: np.asarray(omega.func(self.lift(t)), dtype=float)
            out[ok] = _checked_integral(omega, f, a[ok], b[ok], n=16, panels=64)
        return _scalarize(out.reshape(shape))

    def sample(self, rng, n):
        t = rng.uniform(-self.limit, self.limit, size=n) * 0.999
        return self.lift(t)

    def curve_battery(self):
        lift = self.lift
        return [
            cv.Curve(lambda s: lift(s), -0.3, -0.05, "timelike", sampling_hint=32, label="oscillating arm"),
            cv.Curve(lambda s: lift(s), 0.0, 0.3, "timelike", label="flat arm"),
        ]


CATALOG = {
    "minkowski2": Minkowski2,
    "minkowski_strip": MinkowskiStrip,
    "infinity_line": InfinityLine,
    "tau_log_line": TauLogLine,
    "funnel_X": FunnelX,
    "funnel_Y": FunnelY,
    "imprison_W": ImprisonW,
}


def catalog_space(name, params=None):
    """Build a catalog space by name.

    Examples
    --------
    >>> catalog_space("minkowski_strip").tau([0.1, 0.0], [0.9, 0.0])
    0.8
    """
    if name not in CATALOG:
        raise SpaceError(f"unknown space {name!r}; known: {sorted(CATALOG)}")
    params = dict(params or {})
    try:
        return CATALOG[name](**params)
    except TypeError as exc:
        raise SpaceError(f"invalid parameters for {name}: {exc}") from None


def space_from_config(cfg):
    """Space from {"space": {"name": ..., "params": {...}}} or the inner object."""
    if isinstance(cfg, dict) and "space" in cfg:
        cfg = cfg["space"]
    if not isinstance(cfg, dict) or "name" not in cfg:
        raise SpaceError("space config needs a 'name'")
    return catalog_space(cfg["name"], cfg.get("params"))


class ConformalSpace(LorentzianPreLengthSpace):
    """(X, d, <<_Omega, <=_Omega, tau_Omega) built from a catalog space.

    tau_Omega comes from the base space's closed form; <<_Omega is defined
    as tau_Omega > 0 and <=_Omega as <=, so relation checks against the
    base space are genuine comparisons.
    """

    def __init__(self, base, omega):
        self.base = base
        self.omega = omega

        def tau(p, q):
            return np.asarray(base.tau_omega_exact(omega, p, q), dtype=float)

        super().__init__(
            base.metric,
            CausalStructure(lambda p, q: tau(p, q) > 0, base.causal_structure.causal),
            TimeSeparation(tau),
            base.dimension,
            flags=dict(base.flags),
            facts={},
            contains=base._contains,
            name=f"{base.name}[{omega.label}]",
            params=dict(base.params),
        )

    def sample(self, rng, n):
        return self.base.sample(rng, n)

    def diamond_points(self, p, q, n, rng):
        return self.base.diamond_points(p, q, n, rng)

    def curve_battery(self):
        return self.base.curve_battery()

    def witness(self, condition):
        return self.base.witness(condition)


def conformal_space(space, omega):
    return ConformalSpace(space, omega)


def push_up_check(space, samples):
    """Check x <= y << z => x << z and x << y <= z => x << z on triples.

    Returns a dict with the violation list; each entry records the triple
    and which half of the property failed.
    """
    x, y, z = (space.as_points(np.asarray(s, dtype=float)) for s in samples)
    le_xy = np.atleast_1d(space.causal(x, y))
    ll_xy = np.atleast_1d(space.chron(x, y))
    le_yz = np.atleast_1d(space.causal(y, z))
    ll_yz = np.atleast_1d(space.chron(y, z))
    ll_xz = np.atleast_1d(space.chron(x, z))
    first = le_xy & ll_yz & ~ll_xz
    second = ll_xy & le_yz & ~ll_xz
    xs, ys, zs = (np.atleast_2d(a) for a in (x, y, z))
    violations = []
    for k in np.nonzero(first | second)[0]:
        violations.append({
            "triple": [xs[k].tolist(), ys[k].tolist(), zs[k].tolist()],
            "rule": "x<=y<<z" if first[k] else "x<<y<=z",
        })
    return {"checked": int(le_xy.size), "violations": violations}
