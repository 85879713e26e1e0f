"""Conformal variation and length, conformal time separation, and angles.

The conformal variation of a causal curve weights each increment
tau(gamma(t_i), gamma(t_{i+1})) by the maximum of Omega along the segment;
the conformal length is the infimum over partitions.  The conformal time
separation tau_Omega(p, q) is the supremum of conformal lengths of causal
curves from p to q.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from . import curves as cv
from .extended import INF, ext_sum
from .spaces import ConformalSpace, DomainError, Minkowski2, ImprisonW, StrategyError
from .solvers import minkowski_witness

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def _omega_on_curve(omega, curve, s):
    """Omega(gamma(s)) for a parameter array of any shape."""
    s = np.asarray(s, dtype=float)
    pts = curve(s.ravel())
    return np.asarray(omega(pts), dtype=float).reshape(s.shape)


def segment_extremum(omega, curve, left, right, samples=33, mode="max", polish=True):
    """Approximate max (or min) of Omega o gamma over each [left_i, right_i].

    Uniform sampling with ``samples`` points per segment, then a
    golden-section search on the bracket around the best sample.  The
    result is never worse than the best sample.
    """
    if samples < 2:
        raise ValueError("seg_samples must be at least 2")
    left = np.atleast_1d(np.asarray(left, dtype=float))
    right = np.atleast_1d(np.asarray(right, dtype=float))
    u = np.linspace(0.0, 1.0, int(samples))
    width = (right - left)[:, None]
    s = left[:, None] + width * u[None, :]
    vals = _omega_on_curve(omega, curve, s)
    sign = 1.0 if mode == "max" else -1.0
    k = np.argmax(sign * vals, axis=1)
    rows = np.arange(left.size)
    best = vals[rows, k]
    if not polish or left.size == 0:
        return best
    lo = s[rows, np.maximum(k - 1, 0)]
    hi = s[rows, np.minimum(k + 1, samples - 1)]
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1 = sign * _omega_on_curve(omega, curve, x1)
    f2 = sign * _omega_on_curve(omega, curve, x2)
    for _ in range(25):
        right_side = f2 > f1
        lo = np.where(right_side, x1, lo)
        hi = np.where(right_side, hi, x2)
        new_x = np.where(right_side, lo + _GOLDEN * (hi - lo), hi - _GOLDEN * (hi - lo))
        new_f = sign * _omega_on_curve(omega, curve, new_x)
        x1, x2, f1, f2 = (np.where(right_side, x2, new_x), np.where(right_side, new_x, x1),
                          np.where(right_side, f2, new_f), np.where(right_side, new_f, f1))
    polished = np.maximum(f1, f2)
    return sign * np.maximum(sign * best, polished)


def _weighted_terms(weights, taus):
    weights = np.asarray(weights, dtype=float)
    taus = np.asarray(taus, dtype=float)
    # weights are finite and positive, so weight * inf is inf and never 0 * inf
    return weights * taus


def conformal_variation(space, omega, curve, partition, seg_samples=33):
    """Sum over the partition of (max of Omega o gamma on the segment) * tau.

    Examples
    --------
    >>> from synthcone import catalog_space, factors, curves
    >>> m = catalog_space("minkowski2")
    >>> conformal_variation(m, factors.t_poly([0, 1, -1]), curves.vertical(0.25, 0.75),
    ...                     [0.25, 0.5, 0.75])
    0.125
    """
    cv._require_causal(space, curve)
    sigma = cv._as_partition(partition, curve)
    pts = sigma.points
    weights = segment_extremum(omega, curve, pts[:-1], pts[1:], seg_samples, "max")
    cpts = curve(pts)
    taus = space.tau(cpts[:-1], cpts[1:])
    return ext_sum(_weighted_terms(weights, taus))


@dataclass
class ConformalLengthResult:
    """Conformal length with its refinement trace and checks.

    ``levels`` lists (partition size, variation) per refinement level.
    ``sandwich`` holds the sampled bounds (min Omega * L, max Omega * L).
    ``error_bound`` is a bound on the segment-max sampling error when both
    the factor and the curve declare Lipschitz constants, else ``None``
    (the segment maxima are then heuristic).
    """

    value: float
    levels: list
    converged: bool
    tau_length: float = float("nan")
    sandwich: tuple = (float("nan"), float("nan"))
    sandwich_ok: bool = True
    error_bound: Optional[float] = None
    partition: Optional[np.ndarray] = field(default=None, repr=False)

    def __iter__(self):
        yield self.value
        yield self.converged

    def to_record(self):
        from .extended import to_json_number
        return {
            "value": to_json_number(self.value),
            "converged": bool(self.converged),
            "levels": [[int(n), to_json_number(v)] for n, v in self.levels],
            "tau_length": to_json_number(self.tau_length),
            "sandwich": [to_json_number(x) for x in self.sandwich],
            "sandwich_ok": bool(self.sandwich_ok),
            "error_bound": None if self.error_bound is None else to_json_number(self.error_bound),
        }


def conformal_length(space, omega, curve, tol=1e-6, max_depth=40, seg_samples=33,
                     check_sandwich=True, max_points=2 ** 21):
    """Conformal tau-length as the infimum of conformal variations.

    Parameters
    ----------
    space : LorentzianPreLengthSpace
    omega : ConformalFactor
    curve : Curve
        Declared causal or timelike.
    tol : float
        Stop when bisecting every segment changes the variation by < tol.

    Returns
    -------
    ConformalLengthResult
    """
    cv._require_causal(space, curve)

    def seg(left, right):
        weights = segment_extremum(omega, curve, left, right, seg_samples, "max")
        taus = space.tau(curve(left), curve(right))
        return _weighted_terms(weights, np.atleast_1d(taus))

    res = cv.refine(seg, curve.a, curve.b, mode="inf", tol=tol, max_depth=max_depth,
                    initial=curve.sampling_hint, forced=curve.split_points, max_points=max_points)
    out = ConformalLengthResult(res.value, res.levels, res.converged, partition=res.partition)
    pts = res.partition
    if omega.lipschitz is not None and curve.lipschitz is not None:
        cpts = curve(pts)
        taus = np.atleast_1d(space.tau(cpts[:-1], cpts[1:]))
        spacing = np.diff(pts) / (seg_samples - 1)
        lip = omega.lipschitz * curve.lipschitz
        # a zero constant means exact segment maxima, even where tau is infinite
        out.error_bound = 0.0 if lip == 0 else float(ext_sum(lip * spacing * taus))
    if check_sandwich:
        base = cv.tau_length(space, curve, tol=tol, max_depth=max_depth)
        lo, hi = omega_range(omega, curve, pts)
        out.tau_length = base.value
        if np.isinf(base.value):
            out.sandwich = (INF, INF)
            out.sandwich_ok = bool(np.isinf(res.value))
        else:
            out.sandwich = (lo * base.value, hi * base.value)
            slack = 4 * tol + 1e-12 * max(1.0, abs(res.value))
            out.sandwich_ok = bool(out.sandwich[0] - slack <= res.value <= out.sandwich[1] + slack)
    return out


def omega_range(omega, curve, partition=None, samples=2049):
    """Sampled (min, max) of Omega o gamma, including polished segment maxima."""
    s = np.linspace(curve.a, curve.b, samples)
    vals = _omega_on_curve(omega, curve, s)
    lo, hi = float(np.min(vals)), float(np.max(vals))
    if partition is not None and len(partition) < 5000:
        p = np.asarray(partition)
        hi = max(hi, float(np.max(segment_extremum(omega, curve, p[:-1], p[1:], 9, "max"))))
        lo = min(lo, float(np.min(segment_extremum(omega, curve, p[:-1], p[1:], 9, "min"))))
    return lo, hi


# ---------------------------------------------------------------------------
# the prior (product-weighted) definition, kept only for replication

@dataclass
class PriorLengthResult:
    value: float
    partition: np.ndarray


def prior_conformal_length(space, omega, curve, grid_n=64, return_partition=False):
    """Infimum over partitions drawn from a uniform grid of grid_n parameters of

        sum Omega(gamma(t_i)) Omega(gamma(t_{i+1})) tau(gamma(t_i), gamma(t_{i+1})).

    The infimum over all sub-partitions of the grid is computed exactly by
    a shortest-path recursion over grid indices.  This product-weighted
    functional is not additive and does not give a time separation; it is
    here to reproduce that failure.
    """
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    cv._require_causal(space, curve)
    s = np.linspace(curve.a, curve.b, int(grid_n))
    pts = curve(s)
    om = np.asarray(omega(pts), dtype=float)
    n = s.size
    i, j = np.triu_indices(n, k=1)
    w = np.full((n, n), INF)
    w[i, j] = om[i] * om[j] * np.asarray(space.tau(pts[i], pts[j]), dtype=float)
    cost = np.full(n, INF)
    prev = np.zeros(n, dtype=int)
    cost[0] = 0.0
    for k in range(1, n):
        cand = cost[:k] + w[:k, k]
        m = int(np.argmin(cand))
        cost[k] = cand[m]
        prev[k] = m
    path = [n - 1]
    while path[-1] != 0:
        path.append(int(prev[path[-1]]))
    partition = s[np.asarray(path[::-1])]
    value = float(cost[-1])
    if return_partition:
        return PriorLengthResult(value, partition)
    return value


@dataclass
class PriorBracket:
    """Bounds on the supremum of the product-weighted length over causal curves.

    ``upper`` = Omega(p) Omega(q) tau(p, q) bounds every causal curve (its
    trivial partition).  ``lower`` = (min Omega on the segment)^2 * tau-length
    of the straight segment, a bound for that one curve.  ``estimate`` is
    the grid infimum along the segment.
    """

    lower: float
    upper: float
    estimate: float


def prior_tau_omega(space, omega, p, q, grid_n=64):
    p = space.as_points(p)
    q = space.as_points(q)
    if not bool(space.causal(p, q)) or np.allclose(p, q):
        return PriorBracket(0.0, 0.0, 0.0)
    upper = float(omega(p)) * float(omega(q)) * float(space.tau(p, q))
    seg = cv.line(p, q, kind="causal")
    lo, _ = omega_range(omega, seg)
    base = cv.tau_length(space, seg, tol=1e-9).value
    lower = lo * lo * base
    est = prior_conformal_length(space, omega, seg, grid_n)
    return PriorBracket(min(lower, upper), upper, est)


# ---------------------------------------------------------------------------
# conformal time separation

@dataclass
class TauOmegaResult:
    """tau_Omega(p, q) with the curve or path realizing it.

    ``kind`` is "exact" for closed forms and "lower_bound" for searches over
    a restricted class of curves or a discretization.
    """

    value: float
    witness: object
    kind: str
    strategy: str

    def __iter__(self):
        yield self.value
        yield self.witness


def _minkowski_base(space):
    base = space.base if isinstance(space, ConformalSpace) else space
    return isinstance(base, Minkowski2)


def tau_omega(space, omega, p, q, strategy="closed_form", tol=1e-6, **options):
    """Conformal time separation between two points.

    Parameters
    ----------
    strategy : {"closed_form", "curve_family", "dag"}
        ``closed_form`` uses the space's solved case (time-only factors on
        the Minkowski models, explicit integrals on the one-dimensional and
        funnel/imprisoning spaces).  ``curve_family`` maximizes the
        conformal length over piecewise-linear causal curves with
        ``options["waypoints"]`` interior nodes (default 3).  ``dag``
        solves the discrete problem on ``options["graph"]`` between node
        indices ``options["p_idx"]``, ``options["q_idx"]``.

    Returns
    -------
    TauOmegaResult
    """
    if strategy == "dag":
        from .discretize import dag_tau_omega
        graph = options.get("graph")
        if graph is None:
            raise StrategyError("dag strategy needs a graph")
        g = graph.with_omega(omega)
        value, path = dag_tau_omega(g, options["p_idx"], options["q_idx"])
        return TauOmegaResult(value, path, "lower_bound", "dag")
    p = space.as_points(p)
    q = space.as_points(q)
    if not bool(space.causal(p, q)):
        return TauOmegaResult(0.0, None, "exact", strategy)
    if strategy == "closed_form":
        value = float(space.tau_omega_exact(omega, p, q))
        witness = None
        if isinstance(space, Minkowski2) and value > 0 and np.isfinite(value):
            witness = cv.waypoints(minkowski_witness(omega.t_func, p, q), kind="causal", label="maximizer")
        elif space.dimension == 1:
            witness = cv.scalar_path(float(p[0]), float(q[0])) if float(q[0]) > float(p[0]) else None
        return TauOmegaResult(value, witness, "exact", "closed_form")
    if strategy == "curve_family":
        return _curve_family(space, omega, p, q, tol, **options)
    raise StrategyError(f"unknown strategy {strategy!r}")


def _curve_family(space, omega, p, q, tol, waypoints=3, seg_per_piece=64, maxiter=400):
    if space.dimension == 1:
        if float(q[0]) <= float(p[0]):
            return TauOmegaResult(0.0, None, "lower_bound", "curve_family")
        curve = cv.scalar_path(float(p[0]), float(q[0]))
        res = conformal_length(space, omega, curve, tol=tol, check_sandwich=False)
        return TauOmegaResult(res.value, curve, "lower_bound", "curve_family")
    base = space.base if isinstance(space, ConformalSpace) else space
    if isinstance(base, ImprisonW):
        if float(q[0]) <= float(p[0]):
            return TauOmegaResult(0.0, None, "lower_bound", "curve_family")
        curve = cv.Curve(lambda s: base.lift(s), float(p[0]), float(q[0]), "causal", 32, "arc")
        res = conformal_length(space, omega, curve, tol=tol, check_sandwich=False)
        return TauOmegaResult(res.value, curve, "lower_bound", "curve_family")
    if not _minkowski_base(space):
        raise StrategyError(f"{space.name}: curve_family needs a Minkowski model or a one-dimensional space")
    p = np.ravel(p)
    q = np.ravel(q)
    if not (q[0] - p[0] > abs(q[1] - p[1])):
        # null or degenerate pair: the only causal curve is the null segment
        return TauOmegaResult(0.0, cv.line(p, q), "lower_bound", "curve_family")
    k = int(waypoints)
    ts = np.linspace(p[0], q[0], k + 2)
    straight = p[1] + (q[1] - p[1]) * (ts - p[0]) / (q[0] - p[0])

    def build(offsets):
        xs = straight.copy()
        xs[1:-1] += offsets
        return np.column_stack([ts, xs])

    def feasible(pts):
        d = np.diff(pts, axis=0)
        excess = np.abs(d[:, 1]) - d[:, 0] * (1 - 1e-9)
        return float(np.max(excess))

    def objective(offsets):
        pts = build(offsets)
        bad = feasible(pts)
        if bad > 0:
            return 1e3 * (1.0 + bad)
        curve = cv.waypoints(pts, kind="causal")
        knots = np.linspace(0.0, 1.0, (k + 1) * seg_per_piece + 1)
        return -conformal_variation(space, omega, curve, knots, seg_samples=5)

    x0 = np.zeros(k)
    scale = 0.2 * (q[0] - p[0]) / (k + 1)
    simplex = np.vstack([x0] + [x0 + scale * e for e in np.eye(k)])
    opt = minimize(objective, x0, method="Nelder-Mead",
                   options={"initial_simplex": simplex, "xatol": 1e-7, "fatol": 1e-10, "maxiter": maxiter})
    best = opt.x if opt.fun <= objective(x0) else x0
    curve = cv.waypoints(build(best), kind="causal", label="curve_family maximizer")
    res = conformal_length(space, omega, curve, tol=tol, check_sandwich=False)
    return TauOmegaResult(res.value, curve, "lower_bound", "curve_family")


def check_reverse_triangle(space, tau_like, triples, tol=1e-9):
    """Report triples with tau(x, z) < tau(x, y) + tau(y, z) - tol.

    ``tau_like`` maps two point arrays to values; it is called on the whole
    batch at once.  Triples must be causally ordered in ``space``.
    """
    x, y, z = (np.atleast_2d(space.as_points(np.asarray(a, dtype=float))) for a in triples)
    if space.dimension == 1:
        x, y, z = (a.reshape(-1, 1) for a in (x, y, z))
    ordered = np.atleast_1d(space.causal(x, y)) & np.atleast_1d(space.causal(y, z))
    if not np.all(ordered):
        raise DomainError("check_reverse_triangle needs causally ordered triples x <= y <= z")
    lhs = np.atleast_1d(np.asarray(tau_like(x, z), dtype=float))
    rhs = np.atleast_1d(np.asarray(tau_like(x, y), dtype=float)) + np.atleast_1d(np.asarray(tau_like(y, z), dtype=float))
    with np.errstate(invalid="ignore"):
        bad = np.where(np.isinf(lhs), False, lhs < rhs - tol)
    violations = [{"triple": [x[k].tolist(), y[k].tolist(), z[k].tolist()],
                   "lhs": float(lhs[k]), "rhs": float(rhs[k])} for k in np.nonzero(bad)[0]]
    return {"checked": int(lhs.size), "violations": violations}


@dataclass
class LocalRatioResult:
    ns: list
    ratios: list
    target: float

    @property
    def final_gap(self):
        return abs(self.ratios[-1] - self.target)


def local_ratio(space, omega, p, approach, n_terms, ns=None, strategy="closed_form"):
    """Ratios tau_Omega(p, p_n) / tau(p, p_n) along an approaching sequence.

    ``approach(n)`` returns p_n.  ``ns`` overrides the default indices
    1..n_terms (for instance powers of two).
    """
    p = space.as_points(p)
    ns = list(range(1, int(n_terms) + 1)) if ns is None else [int(n) for n in ns]
    ratios = []
    for n in ns:
        pn = space.as_points(approach(n))
        if not bool(np.all(space.contains(pn))):
            raise DomainError(f"approach term {n} leaves the space")
        t = float(space.tau(p, pn))
        if not (0 < t < INF):
            raise DomainError(f"tau(p, p_{n}) = {t}; the ratio needs a finite positive value")
        ratios.append(tau_omega(space, omega, p, pn, strategy).value / t)
    return LocalRatioResult(ns, ratios, float(omega(p)))


@dataclass
class ComposedLengths:
    lhs: float
    rhs: float
    gap: float


def conformal_length_composed(space, omega, omega_prime, curve, tol=1e-6):
    """Conformal length of ``curve`` for Omega' over tau_Omega, against Omega*Omega' over tau."""
    lifted = ConformalSpace(space, omega)
    lhs = conformal_length(lifted, omega_prime, curve, tol=tol, check_sandwich=False).value
    rhs = conformal_length(space, omega * omega_prime, curve, tol=tol, check_sandwich=False).value
    gap = 0.0 if (np.isinf(lhs) and np.isinf(rhs)) else abs(lhs - rhs)
    return ComposedLengths(lhs, rhs, gap)


# ---------------------------------------------------------------------------
# angles

@dataclass
class AngleComputation:
    """Comparison angle of a timelike triangle with sides a, b and opposite side c.

    ``cosh_value`` is (a^2 + b^2 - c^2) / (2ab); the angle is arccosh of its
    absolute value, and ``sign`` records the time-orientation sign.
    """

    a: float
    b: float
    c: float
    sign: int
    comparison_angle: float
    cosh_value: float
    convention: str = "angle = arccosh(|(a^2+b^2-c^2)/(2ab)|), sign kept as metadata"


def comparison_angle(a, b, c, sign=-1):
    a, b, c = float(a), float(b), float(c)
    if not (a > 0 and b > 0 and np.isfinite(a) and np.isfinite(b)):
        raise ValueError("comparison angle needs finite positive sides a, b")
    if c < 0:
        raise ValueError("side c must be nonnegative")
    if sign not in (-1, 1):
        raise ValueError("sign must be -1 or +1")
    value = (a * a + b * b - c * c) / (2 * a * b)
    mag = abs(value)
    if mag < 1.0:
        if mag < 1.0 - 1e-9:
            raise ValueError(f"|(a^2+b^2-c^2)/(2ab)| = {mag} < 1: not a timelike comparison triangle")
        mag = 1.0
    return AngleComputation(a, b, c, int(sign), float(np.arccosh(mag)), float(value))


@dataclass
class AngleLimitResult:
    estimate: float
    sequence: list
    convention: str = "angle = arccosh(|(a^2+b^2-c^2)/(2ab)|) along null-related pairs"


def angle_limit(space, omega, alpha, beta, schedule, bisection_steps=80):
    """Angle at the common start of two timelike curves via null-related pairs.

    For each parameter s_k of ``alpha`` in ``schedule`` the parameter t_k of
    ``beta`` with alpha(s_k) and beta(t_k) null related is found by bisection
    on the chronological relation.  The comparison angle of the triangle
    (p, alpha(s_k), beta(t_k)) has c = 0.  With ``omega`` given, every side
    uses tau_Omega (closed form) and the chronological relation is
    tau_Omega > 0.

    Returns
    -------
    AngleLimitResult
        ``estimate`` is the last term; ``sequence`` lists
        (s, t, a, b, c, angle) per schedule entry.
    """
    work = space if omega is None else ConformalSpace(space, omega)
    start_a = np.ravel(alpha(alpha.a))
    start_b = np.ravel(beta(beta.a))
    if not np.allclose(start_a, start_b, atol=1e-12):
        raise ValueError("alpha and beta must start at the same point")
    for c in (alpha, beta):
        ok, pair = cv.is_causal(space, c, 24, timelike=True)
        if not ok:
            raise cv.NonCausalCurveError(f"curve {c.label} is not timelike (pair {pair})")
    p = start_a
    seq = []
    for s in schedule:
        s = float(s)
        if not (alpha.a < s <= alpha.b):
            raise ValueError(f"schedule value {s} outside alpha's domain")
        xa = np.ravel(alpha(s))
        lo, hi = beta.a, beta.b
        if bool(work.chron(xa, np.ravel(beta(lo)))) or not bool(work.chron(xa, np.ravel(beta(hi)))):
            raise ValueError(f"no null-related pair on beta for s = {s}")
        for _ in range(bisection_steps):
            mid = 0.5 * (lo + hi)
            if bool(work.chron(xa, np.ravel(beta(mid)))):
                hi = mid
            else:
                lo = mid
        t = hi
        xb = np.ravel(beta(t))
        a = float(work.tau(p, xa))
        b = float(work.tau(p, xb))
        c = float(work.tau(xa, xb))
        ang = comparison_angle(a, b, c).comparison_angle
        seq.append((s, t, a, b, c, ang))
    return AngleLimitResult(seq[-1][5], seq)
