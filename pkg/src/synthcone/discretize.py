"""Finite causal graphs and metric graphs, with exact discrete solvers.

A causal path v_0 -> ... -> v_k in a graph has discrete conformal length
sum max(Omega(v_i), Omega(v_{i+1})) tau(v_i, v_{i+1}): with the reverse
triangle inequality, the finest partition of a finite path gives the
smallest variation.  The discrete tau_Omega is the longest such path; the
discrete d_Omega is the shortest path with min-weighted edges.
"""

import heapq
import itertools
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra
from scipy.spatial import cKDTree

from .extended import INF, from_json_number, to_json_number
from .spaces import DomainError


class GraphError(ValueError):
    pass


class CycleError(GraphError):
    pass


@dataclass(frozen=True)
class CausalGraph:
    """Point cloud with DAG edges, tau on pairs and Omega per node.

    Parameters
    ----------
    nodes : ndarray, shape (n, dim)
    edges : list of (u, v)
        Directed edges, u <= v in the ambient space.
    tau : ndarray, shape (n, n)
        tau between every pair of nodes (zero when not causally related).
    omega : ndarray, shape (n,)
        Positive factor values; ones by default.
    causal : ndarray of bool, shape (n, n), optional
        Ambient causal relation between nodes, used for diamond extraction.
    """

    nodes: np.ndarray
    edges: tuple
    tau: np.ndarray
    omega: np.ndarray
    causal: np.ndarray = field(default=None, repr=False)
    labels: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim == 1:
            nodes = nodes[:, None]
        object.__setattr__(self, "nodes", nodes)
        n = nodes.shape[0]
        edges = tuple(sorted((int(u), int(v)) for u, v in self.edges))
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise GraphError(f"bad edge ({u}, {v})")
        object.__setattr__(self, "edges", edges)
        tau = np.asarray(self.tau, dtype=float)
        if tau.shape != (n, n):
            raise GraphError("tau table must be n x n")
        object.__setattr__(self, "tau", tau)
        omega = np.ones(n) if self.omega is None else np.asarray(self.omega, dtype=float)
        if omega.shape != (n,) or np.any(~np.isfinite(omega)) or np.any(omega <= 0):
            raise GraphError("omega values must be finite and positive, one per node")
        object.__setattr__(self, "omega", omega)
        succ = [[] for _ in range(n)]
        for u, v in edges:
            succ[u].append(v)
        object.__setattr__(self, "_succ", tuple(tuple(s) for s in succ))

    @property
    def n(self):
        return self.nodes.shape[0]

    def successors(self, u):
        return self._succ[u]

    def with_omega(self, omega):
        """Copy with node values of a factor (a ConformalFactor or an array)."""
        vals = omega(self.nodes) if callable(omega) else omega
        return replace(self, omega=np.asarray(vals, dtype=float))

    def topological_order(self):
        """Kahn's algorithm, ties broken by the smallest node index."""
        indeg = np.zeros(self.n, dtype=int)
        for _, v in self.edges:
            indeg[v] += 1
        heap = [i for i in range(self.n) if indeg[i] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            u = heapq.heappop(heap)
            order.append(u)
            for v in self._succ[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    heapq.heappush(heap, v)
        if len(order) != self.n:
            raise CycleError("graph has a directed cycle")
        return order

    def reachable(self, src):
        seen = {src}
        stack = [src]
        while stack:
            u = stack.pop()
            for v in self._succ[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    def reaches(self, dst):
        pred = [[] for _ in range(self.n)]
        for u, v in self.edges:
            pred[v].append(u)
        seen = {dst}
        stack = [dst]
        while stack:
            u = stack.pop()
            for v in pred[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    def diamond(self, p, q):
        """Node indices of J(p, q): reachable from p and reaching q."""
        if self.causal is not None:
            return sorted(int(i) for i in np.nonzero(self.causal[p] & self.causal[:, q])[0])
        return sorted(self.reachable(p) & self.reaches(q))

    def to_json(self):
        return {
            "nodes": self.nodes.tolist(),
            "edges": [list(e) for e in self.edges],
            "tau": [to_json_number(self.tau[u, v]) for u, v in self.edges],
            "omega": self.omega.tolist(),
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, doc):
        if isinstance(doc, str):
            doc = json.loads(doc)
        nodes = np.asarray(doc["nodes"], dtype=float)
        if nodes.ndim == 1:
            nodes = nodes[:, None]
        n = nodes.shape[0]
        edges = [tuple(e) for e in doc["edges"]]
        taus = doc.get("tau", [])
        if len(taus) != len(edges):
            raise GraphError("tau list must match the edge list")
        tau = np.zeros((n, n))
        for (u, v), t in zip(edges, taus):
            tau[u, v] = from_json_number(t)
        omega = np.asarray(doc.get("omega", np.ones(n)), dtype=float)
        return cls(nodes, tuple(edges), tau, omega)


def _edge_weight(graph, u, v):
    t = graph.tau[u, v]
    if t == 0.0:
        return 0.0
    return max(graph.omega[u], graph.omega[v]) * t


def _path_value(graph, path):
    terms = [_edge_weight(graph, u, v) for u, v in zip(path[:-1], path[1:])]
    if any(math.isinf(t) for t in terms):
        return INF
    return math.fsum(terms)


def dag_tau_omega(graph, p_idx, q_idx):
    """Longest causal path from p to q with max-weighted edges.

    Dynamic programming in topological order.  Returns ``(value, path)``;
    ``(0.0, [])`` when q is not reachable from p.  The returned value is the
    correctly rounded sum of the edge terms along the path.
    """
    n = graph.n
    if not (0 <= p_idx < n and 0 <= q_idx < n):
        raise GraphError("node index out of range")
    if p_idx == q_idx:
        return 0.0, [p_idx]
    order = graph.topological_order()
    best = np.full(n, -INF)
    prev = np.full(n, -1, dtype=int)
    best[p_idx] = 0.0
    for u in order:
        if best[u] == -INF:
            continue
        for v in graph.successors(u):
            cand = best[u] + _edge_weight(graph, u, v)
            if cand > best[v]:
                best[v] = cand
                prev[v] = u
    if best[q_idx] == -INF:
        return 0.0, []
    path = [q_idx]
    while path[-1] != p_idx:
        path.append(int(prev[path[-1]]))
    path.reverse()
    return _path_value(graph, path), path


def brute_force_tau_omega(graph, p_idx, q_idx, cap=14):
    """Exhaustive oracle: every directed path, every partition of each path.

    The discrete conformal variation of a path for a vertex subset S
    (containing both ends) weights tau between consecutive members of S by
    the largest Omega among the path vertices they enclose.  The path's
    length is the minimum over S, and the result is the maximum over paths.
    """
    if p_idx == q_idx:
        return 0.0
    live = graph.reachable(p_idx) & graph.reaches(q_idx)
    if not live:
        return 0.0
    if len(live) > cap:
        raise GraphError(f"{len(live)} relevant nodes exceed the oracle cap {cap}")
    best = 0.0
    for path in _all_paths(graph, p_idx, q_idx, live):
        value = _min_over_partitions(graph, path)
        if value > best:
            best = value
    return best


def _all_paths(graph, src, dst, live):
    stack = [(src, [src])]
    while stack:
        u, path = stack.pop()
        if u == dst:
            yield path
            continue
        for v in graph.successors(u):
            if v in live:
                stack.append((v, path + [v]))


def _min_over_partitions(graph, path):
    k = len(path)
    interior = k - 2
    om = graph.omega[path]
    best = INF
    for mask in itertools.product((False, True), repeat=interior):
        keep = [0] + [i + 1 for i, m in enumerate(mask) if m] + [k - 1]
        terms = []
        for a, b in zip(keep[:-1], keep[1:]):
            t = graph.tau[path[a], path[b]]
            terms.append(0.0 if t == 0.0 else float(np.max(om[a:b + 1])) * t)
        value = INF if any(math.isinf(t) for t in terms) else math.fsum(terms)
        if value < best:
            best = value
    return best


# ---------------------------------------------------------------------------
# building graphs

def _region_bounds(region):
    if isinstance(region, dict):
        lo, hi = region["lo"], region["hi"]
    else:
        lo, hi = region
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    if lo.shape != hi.shape or np.any(hi <= lo):
        raise DomainError("region must be a box with lo < hi in every coordinate")
    return lo, hi


def graph_from_points(space, pts, omega=None, link_rule="all", labels=None, max_edge=None):
    """Causal graph on given points, edges by the space's causal relation.

    ``max_edge`` drops edges longer than that background distance.  Every
    edge of a path carries the largest Omega of its two ends, so long edges
    overweight the path; with all causal pairs linked the longest path
    converges to a coarse variation rather than to tau_Omega.  A cutoff a
    few times the point spacing removes that bias.
    """
    pts = space.as_points(np.asarray(pts, dtype=float))
    n = pts.shape[0]
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    rel = np.asarray(space.causal(pts[i], pts[j]), dtype=bool) & (i != j)
    tau = np.asarray(space.tau(pts[i], pts[j]), dtype=float)
    tau = np.where(rel, tau, 0.0)
    links = rel
    if max_edge is not None:
        if not max_edge > 0:
            raise GraphError("max_edge must be positive")
        links = rel & (np.asarray(space.distance(pts[i], pts[j]), dtype=float) < max_edge)
    if link_rule == "reduction":
        # float product goes through BLAS; counts stay exact well below 2**24
        r = rel.astype(np.float32)
        links = links & ~((r @ r) > 0)
    elif link_rule != "all":
        raise GraphError(f"unknown link rule {link_rule!r}")
    edges = tuple(zip(*np.nonzero(links)))
    vals = np.ones(n) if omega is None else np.asarray(omega(pts), dtype=float)
    return CausalGraph(pts, edges, tau, vals, causal=rel | np.eye(n, dtype=bool), labels=dict(labels or {}))


def sprinkle(space, region, n, seed, link_rule="all", omega=None, max_edge=None):
    """Uniform random points in a coordinate box, joined by causal relations.

    Nodes are sorted by the first coordinate.  ``link_rule`` is "all"
    (every causal pair) or "reduction" (transitive reduction); ``max_edge``
    is passed to :func:`graph_from_points`.
    """
    if n < 2:
        raise GraphError("sprinkle needs n >= 2")
    lo, hi = _region_bounds(region)
    if lo.size != space.dimension:
        raise DomainError("region dimension does not match the space")
    corners = np.array(list(itertools.product(*zip(lo, hi))))
    if not np.all(space.contains(corners)):
        raise DomainError(f"region {lo.tolist()}..{hi.tolist()} is not inside {space.name}")
    rng = np.random.default_rng(seed)
    pts = lo + (hi - lo) * rng.random((int(n), lo.size))
    pts = pts[np.lexsort(pts.T[::-1])]
    return graph_from_points(space, pts, omega, link_rule, max_edge=max_edge)


def diamond_sprinkle(p, q, n, rng):
    """n uniform points of the Minkowski diamond J(p, q), sorted by time."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    up, vp = p[0] + p[1], p[0] - p[1]
    uq, vq = q[0] + q[1], q[0] - q[1]
    u = rng.uniform(up, uq, size=n)
    v = rng.uniform(vp, vq, size=n)
    pts = np.column_stack([0.5 * (u + v), 0.5 * (u - v)])
    return pts[np.argsort(pts[:, 0], kind="stable")]


def random_dag(seed, n_min=5, n_max=12, omega_range=(0.5, 3.0)):
    """Causal graph of a random Minkowski sprinkling with bottom and top tips.

    Returns ``(graph, p_idx, q_idx)``: node 0 is (0, 0), the last node is
    (1, 0), interior nodes are uniform in the diamond between them, and
    Omega values are uniform in ``omega_range``.
    """
    from .spaces import Minkowski2
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_min, n_max + 1))
    inner = diamond_sprinkle([0.0, 0.0], [1.0, 0.0], n - 2, rng)
    pts = np.vstack([[0.0, 0.0], inner, [1.0, 0.0]])
    graph = graph_from_points(Minkowski2(), pts)
    graph = graph.with_omega(rng.uniform(*omega_range, size=n))
    return graph, 0, n - 1


# ---------------------------------------------------------------------------
# funnel discretizations

def funnel_tips(n_tips=8):
    """Branch tips (0, 1 - 1/n), n = 1..n_tips: an escaping sequence of J((-1,0),(1,0))."""
    return np.array([[0.0, 1.0 - 1.0 / n] for n in range(1, n_tips + 1)])


def separation_radii(points):
    """r(n) = min over m != n of d(p_n, p_m)."""
    pts = np.asarray(points, dtype=float)
    d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
    np.fill_diagonal(d, np.inf)
    return d.min(axis=1)


def funnel_graph(n_nodes=400, seed=0, sample_branches=12):
    """Literal discretization of the funnel: points of the set, its own relations.

    Contains (-1, 0), (1, 0) and the branch tips.  tau vanishes identically
    there, so no node has a chronological past.
    """
    from .spaces import FunnelX
    space = FunnelX(sample_branches=sample_branches)
    rng = np.random.default_rng(seed)
    fixed = np.vstack([[[-1.0, 0.0], [1.0, 0.0]], funnel_tips(8)[1:]])
    pts = np.vstack([fixed, space.sample(rng, n_nodes - fixed.shape[0])])
    labels = {"p": 0, "q": 1, "tips": list(range(2, fixed.shape[0]))}
    return graph_from_points(space, pts, labels=labels)


def funnel_hull_graph(n_nodes=400, n_tips=8, seed=0):
    """Minkowski causal graph on the funnel's bounding diamond |t| + |x| <= 1.

    Nodes: a past point p- = (-1.25, 0), the diamond tips p = (-1, 0) and
    q = (1, 0), the branch tips p_n = (0, 1 - 1/n), a witness point
    s_n = p_n - (r(n)/8, 0) below each tip, points of the outer arms and
    branches, and a uniform fill of the diamond.  Edges are all causal
    pairs with Minkowski tau.

    ``labels`` records "past", "p", "q", "tips", "witnesses".
    """
    from .spaces import FunnelX, Minkowski2
    tips = funnel_tips(n_tips)
    radii = separation_radii(tips)
    witnesses = tips - np.column_stack([radii / 8.0, np.zeros(n_tips)])
    fixed = np.vstack([[[-1.25, 0.0], [-1.0, 0.0], [1.0, 0.0]], tips, witnesses])
    rng = np.random.default_rng(seed)
    remaining = n_nodes - fixed.shape[0]
    if remaining < 0:
        raise GraphError("n_nodes too small for the fixed funnel nodes")
    on_set = FunnelX().sample(rng, remaining // 3)
    fill = diamond_sprinkle([-1.0, 0.0], [1.0, 0.0], remaining - on_set.shape[0], rng)
    pts = np.vstack([fixed, on_set, fill])
    k = n_tips
    labels = {"past": 0, "p": 1, "q": 2, "tips": list(range(3, 3 + k)),
              "witnesses": list(range(3 + k, 3 + 2 * k))}
    return graph_from_points(Minkowski2(), pts, labels=labels)


# ---------------------------------------------------------------------------
# metric graphs

@dataclass(frozen=True)
class MetricGraph:
    """Undirected graph with distance weights and Omega per node."""

    nodes: np.ndarray
    edges: tuple
    weights: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim == 1:
            nodes = nodes[:, None]
        object.__setattr__(self, "nodes", nodes)
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (len(self.edges),) or np.any(w < 0) or np.any(~np.isfinite(w)):
            raise GraphError("edge weights must be finite, nonnegative, one per edge")
        object.__setattr__(self, "weights", w)
        om = np.ones(nodes.shape[0]) if self.omega is None else np.asarray(self.omega, dtype=float)
        if om.shape != (nodes.shape[0],) or np.any(om <= 0) or np.any(~np.isfinite(om)):
            raise GraphError("omega values must be finite and positive, one per node")
        object.__setattr__(self, "omega", om)

    @property
    def n(self):
        return self.nodes.shape[0]

    def with_omega(self, omega):
        vals = omega(self.nodes) if callable(omega) else omega
        return replace(self, omega=np.asarray(vals, dtype=float))

    def components(self):
        """Component label per node."""
        e = np.asarray(self.edges, dtype=int).reshape(-1, 2)
        m = csr_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(self.n, self.n))
        _, lab = connected_components(m, directed=False)
        return lab

    def conformal_matrix(self):
        e = np.asarray(self.edges, dtype=int).reshape(-1, 2)
        w = np.minimum(self.omega[e[:, 0]], self.omega[e[:, 1]]) * self.weights
        assert np.all(w >= 0)
        # zero-weight edges would vanish from a sparse matrix; keep them tiny
        w = np.where(w == 0, np.finfo(float).tiny, w)
        return csr_matrix((w, (e[:, 0], e[:, 1])), shape=(self.n, self.n))

    def find(self, point):
        """Index of the node closest to ``point``."""
        d = np.linalg.norm(self.nodes - np.atleast_1d(np.asarray(point, dtype=float)), axis=1)
        return int(np.argmin(d))


def graph_d_omega(mgraph, p_idx, q_idx):
    """Shortest path with edge weight min(Omega(u), Omega(v)) * d(u, v).

    Returns ``(value, path)``; ``(inf, [])`` across components.
    """
    dist, pred = dijkstra(mgraph.conformal_matrix(), directed=False, indices=p_idx,
                          return_predecessors=True)
    value = float(dist[q_idx])
    if math.isinf(value):
        return INF, []
    path = [q_idx]
    while path[-1] != p_idx:
        path.append(int(pred[path[-1]]))
    path.reverse()
    e = {}
    for (u, v), w in zip(mgraph.edges, mgraph.weights):
        e[(u, v)] = e[(v, u)] = w
    terms = [min(mgraph.omega[u], mgraph.omega[v]) * e[(u, v)] for u, v in zip(path[:-1], path[1:])]
    return math.fsum(terms), path


def epsilon_net(lo, hi, step, radius=None, include=(), contains=None, distance=None):
    """Grid net of a box, neighbours joined within ``radius``.

    Parameters
    ----------
    lo, hi : array_like
        Box corners (scalars for an interval).
    step : float
        Grid spacing; the default radius joins axis and diagonal neighbours.
    include : sequence
        Extra points inserted exactly (for instance query points).
    contains : callable, optional
        Membership predicate; points outside are dropped.
    distance : callable, optional
        Background distance for edge weights (Euclidean by default).
    """
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    axes = []
    for a, b in zip(lo, hi):
        k = int(math.floor((b - a) / step + 1e-9))
        axes.append(a + step * np.arange(k + 1))
    grid = np.array(list(itertools.product(*axes))) if len(axes) > 1 else axes[0][:, None]
    extra = np.atleast_2d(np.asarray(include, dtype=float)).reshape(-1, lo.size)
    pts = np.vstack([grid, extra]) if extra.size else grid
    if contains is not None:
        pts = pts[np.asarray(contains(pts), dtype=bool)]
    pts = np.unique(np.round(pts, 12), axis=0)
    if radius is None:
        radius = step * math.sqrt(lo.size) * (1 + 1e-6)
    pairs = np.array(sorted(cKDTree(pts).query_pairs(radius)), dtype=int).reshape(-1, 2)
    if distance is None:
        w = np.linalg.norm(pts[pairs[:, 1]] - pts[pairs[:, 0]], axis=1)
    else:
        w = np.asarray(distance(pts[pairs[:, 0]], pts[pairs[:, 1]]), dtype=float)
    return MetricGraph(pts, tuple(map(tuple, pairs)), w, None)
