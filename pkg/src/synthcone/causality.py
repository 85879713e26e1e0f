"""Causality-ladder probes, conformal invariance of the ladder, and the blow-up factor.

Continuum catalog spaces combine hand-certified verdicts (``space.facts``)
with sampled checks that can only refute them, plus replayable witnesses
for every violated condition.  Finite causal graphs are decided exactly.
"""

from dataclasses import dataclass, field

import numpy as np

from . import curves as cv
from .discretize import CausalGraph, GraphError, dag_tau_omega, separation_radii
from .extended import INF, to_json_number
from .factors import ConformalFactor, constant
from .spaces import CONDITIONS, ConformalSpace

HOLDS, VIOLATED, INCONCLUSIVE = "holds", "violated", "inconclusive"

DEFAULT_BUDGET = {"points": 200, "pairs": 300, "curve_samples": 129, "ceiling": 5.0,
                  "k_schedule": [10, 100, 1000, 10000, 100000]}


class PreconditionError(ValueError):
    pass


@dataclass
class Verdict:
    status: str
    witness: dict = None
    source: str = "analytic"
    note: str = ""

    def to_json(self):
        return {"status": self.status, "source": self.source, "note": self.note,
                "witness": _jsonable(self.witness)}


@dataclass
class LadderReport:
    """Per-condition verdicts for one space or graph.

    ``flags`` carries the declared assumptions of the finiteness theorem
    (tau_finite, nonempty_past, causally_path_connected) and
    ``observations`` any sampled evidence about them.
    """

    target: str
    verdicts: dict
    flags: dict = field(default_factory=dict)
    observations: dict = field(default_factory=dict)
    seed: int = 0

    def status(self, condition):
        return self.verdicts[condition].status

    def to_json(self):
        return {"target": self.target, "seed": int(self.seed),
                "verdicts": {k: self.verdicts[k].to_json() for k in CONDITIONS},
                "flags": _jsonable(self.flags), "observations": _jsonable(self.observations)}


def _jsonable(obj):
    if obj is None or isinstance(obj, (bool, str, int)):
        return obj
    if isinstance(obj, float):
        return to_json_number(obj)
    if isinstance(obj, np.generic):
        return _jsonable(obj.item())
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return str(obj)


# ---------------------------------------------------------------------------
# witness replay

def replay_witness(space, witness, budget=None):
    """Re-run the check a witness encodes.  True when the failure reproduces."""
    budget = {**DEFAULT_BUDGET, **(budget or {})}
    kind = witness["type"]
    if kind == "noncompact_diamond":
        p, q = np.asarray(witness["p"]), np.asarray(witness["q"])
        seq = np.asarray(witness["sequence"])
        limit = np.asarray(witness["limit"])
        inside = np.atleast_1d(space.causal(np.broadcast_to(p, seq.shape), seq)) & \
            np.atleast_1d(space.causal(seq, np.broadcast_to(q, seq.shape)))
        gaps = np.linalg.norm(seq - limit, axis=1)
        return bool(np.all(inside) and not bool(space.contains(limit))
                    and np.all(np.diff(gaps) < 0) and gaps[-1] < 0.05)
    if kind == "unbounded_monotone_sequence":
        seq = np.asarray(witness["sequence"])
        z = np.asarray(witness["bound"])
        limit = np.asarray(witness["limit"])
        monotone = np.all(np.atleast_1d(space.causal(seq[:-1], seq[1:])))
        bounded = np.all(np.atleast_1d(space.causal(seq, np.broadcast_to(z, seq.shape))))
        gaps = np.linalg.norm(seq - limit, axis=1)
        return bool(monotone and bounded and not bool(space.contains(limit))
                    and np.all(np.diff(gaps) < 0) and gaps[-1] < 0.05)
    if kind == "indistinguishable_pair":
        x, y = np.asarray(witness["x"]), np.asarray(witness["y"])
        rng = np.random.default_rng(witness.get("seed", 0))
        probe = space.sample(rng, budget["points"])
        xs, ys = np.broadcast_to(x, probe.shape), np.broadcast_to(y, probe.shape)
        same_future = np.array_equal(np.atleast_1d(space.chron(xs, probe)), np.atleast_1d(space.chron(ys, probe)))
        same_past = np.array_equal(np.atleast_1d(space.chron(probe, xs)), np.atleast_1d(space.chron(probe, ys)))
        return bool(not np.allclose(x, y) and (same_future or same_past))
    if kind == "imprisoned_curve":
        curve = cv.curve_from_config(witness["curve"])
        lo, hi = (np.asarray(b) for b in witness["box"])
        s = np.linspace(curve.a, curve.b, 4097)
        pts = curve(s)
        in_box = np.all((pts >= lo - 1e-12) & (pts <= hi + 1e-12))
        ok, _ = cv.is_causal(space, curve, 40)
        bounds = imprisonment_lower_bounds(space, curve, witness["k_schedule"])
        return bool(in_box and ok and np.all(np.diff(bounds) > 0) and bounds[-1] > budget["ceiling"])
    if kind == "chronological_loop":
        x = np.asarray(witness["x"])
        return bool(space.chron(x, x))
    if kind == "causal_cycle":
        x, y = np.asarray(witness["x"]), np.asarray(witness["y"])
        return bool(space.causal(x, y) and space.causal(y, x) and not np.allclose(x, y))
    if kind == "escaping_curve":
        curve = cv.curve_from_config(witness["curve"])
        pts = curve(np.asarray(witness["params"]))
        c = np.asarray(witness["center"])
        d = np.linalg.norm(pts - c, axis=1)
        return bool(d[0] < witness["r_v"] and d[-1] < witness["r_v"] and np.max(d) >= witness["r_u"])
    raise ValueError(f"unknown witness type {kind!r}")


def imprisonment_lower_bounds(space, curve, k_schedule):
    """d-variation of the spiral over partitions hitting its turning points.

    Each value is a lower bound on the d-length of the part of the curve
    before the last turning point; the sequence grows like (2/pi) log K.
    """
    from .spaces import imprison_partition
    out = []
    for k in k_schedule:
        part = imprison_partition(k, curve.a)
        part = part[(part > curve.a) & (part < curve.b)]
        pts = curve(np.concatenate([[curve.a], part]))
        out.append(float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1))))
    return np.asarray(out)


# ---------------------------------------------------------------------------
# continuum probes

def _pool(space, rng, n):
    pts = space.sample(rng, n)
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return pts, i.ravel(), j.ravel()


def _quasi_strong_probe(space, budget):
    """Look for a battery curve leaving U = B(x, r) between two visits to V = B(x, r/4)."""
    for curve in space.curve_battery():
        s = np.linspace(curve.a, curve.b, budget["curve_samples"])
        pts = curve(s)
        for r_u in (0.2, 0.05):
            r_v = r_u / 4
            for c in range(0, len(s), 8):
                d = np.linalg.norm(pts - pts[c], axis=1)
                near = np.nonzero(d < r_v)[0]
                if near.size < 2:
                    continue
                a, b = near[0], near[-1]
                if np.max(d[a:b + 1]) >= r_u:
                    return {"type": "escaping_curve", "curve_label": curve.label,
                            "params": [float(s[a]), float(s[int(a + np.argmax(d[a:b + 1]))]), float(s[b])],
                            "center": pts[c].tolist(), "r_u": r_u, "r_v": r_v}
    return None


def _verify_conformal_relations(space, rng, budget):
    """For a conformal space compare <<_Omega with << of the base on samples."""
    pts, i, j = _pool(space.base, rng, min(budget["points"], 40))
    a, b = pts[i], pts[j]
    same_chron = np.array_equal(np.atleast_1d(space.chron(a, b)), np.atleast_1d(space.base.chron(a, b)))
    same_causal = np.array_equal(np.atleast_1d(space.causal(a, b)), np.atleast_1d(space.base.causal(a, b)))
    return bool(same_chron and same_causal), int(i.size)


def ladder_probe(target, budget=None, seed=0):
    """Causality-ladder verdicts for a catalog space, a conformal space or a graph.

    Parameters
    ----------
    target : LorentzianPreLengthSpace or CausalGraph
    budget : dict, optional
        ``points`` (sample pool size), ``curve_samples``, ``ceiling`` (d-length
        bound for the imprisonment probe) and ``k_schedule``.
    seed : int
        Seed of every sampled check; stored in the report for replay.
    """
    budget = {**DEFAULT_BUDGET, **(budget or {})}
    if any(not (isinstance(v, (int, float)) and v > 0) for k, v in budget.items() if k != "k_schedule"):
        raise ValueError("budget entries must be positive")
    if isinstance(target, CausalGraph):
        return _graph_ladder(target, seed)
    return _space_ladder(target, budget, seed)


def _space_ladder(space, budget, seed):
    rng = np.random.default_rng(seed)
    facts = dict(space.facts)
    observations = {}
    if isinstance(space, ConformalSpace):
        agree, n = _verify_conformal_relations(space, rng, budget)
        observations["relations_match_base"] = agree
        observations["relations_checked"] = n
        facts = dict(space.base.facts) if agree else {}
    pts, i, j = _pool(space, rng, budget["points"])
    a, b = pts[i], pts[j]
    chron_ab = np.atleast_1d(space.chron(a, b))
    causal_ab = np.atleast_1d(space.causal(a, b))
    causal_ba = np.atleast_1d(space.causal(b, a))
    tau_ab = np.atleast_1d(space.tau(a, b))
    observations["pairs_sampled"] = int(i.size)
    if np.any(np.isinf(tau_ab)):
        k = int(np.argmax(np.isinf(tau_ab)))
        observations["tau_infinite_pair"] = [a[k].tolist(), b[k].tolist()]
    verdicts = {}

    def from_fact(cond, sampled_witness=None, source="analytic+sampled"):
        if sampled_witness is not None:
            return Verdict(VIOLATED, sampled_witness, "sampled", "sampled counterexample")
        fact = facts.get(cond)
        w = space.witness(cond)
        if fact is False:
            if w is None:
                return Verdict(INCONCLUSIVE, None, "analytic", "declared violated but no witness available")
            return Verdict(VIOLATED if replay_witness(space, w, budget) else INCONCLUSIVE, w,
                           "analytic+replayed", "")
        if fact is True:
            return Verdict(HOLDS, None, source)
        return Verdict(INCONCLUSIVE, None, "analytic", "not decided by the probe")

    diag = np.atleast_1d(space.chron(pts, pts))
    loop = {"type": "chronological_loop", "x": pts[int(np.argmax(diag))].tolist()} if np.any(diag) else None
    verdicts["chronological"] = from_fact("chronological", loop)

    twoway = causal_ab & causal_ba & (i != j) & np.any(np.abs(a - b) > 1e-12, axis=-1)
    cyc = None
    if np.any(twoway):
        k = int(np.argmax(twoway))
        cyc = {"type": "causal_cycle", "x": a[k].tolist(), "y": b[k].tolist()}
    verdicts["causal"] = from_fact("causal", cyc)

    nti = from_fact("non_totally_imprisoning")
    if nti.status == HOLDS:
        lengths = [cv.d_length(space, c, tol=1e-4, ceiling=1e3, max_points=2 ** 16)
                   for c in space.curve_battery() if c.kind != "plain"]
        observations["battery_d_lengths"] = [r.value for r in lengths]
        if not all(r.converged for r in lengths):
            nti = Verdict(INCONCLUSIVE, None, "sampled", "a battery curve did not converge")
    verdicts["non_totally_imprisoning"] = nti

    verdicts["distinguishing"] = from_fact("distinguishing")
    qs = _quasi_strong_probe(space, budget)
    verdicts["strongly_causal"] = from_fact("strongly_causal", qs)
    verdicts["strongly_causal"].note = "quasi-strong form on the curve battery"
    verdicts["stably_causal"] = Verdict(INCONCLUSIVE, None, "none",
                                        "closure of the causal relation is not computable on a continuum")
    cc = from_fact("causally_continuous")
    verdicts["causally_continuous"] = cc
    verdicts["causally_simple"] = from_fact("causally_simple")

    gh = from_fact("globally_hyperbolic")
    if gh.status == HOLDS:
        contained = []
        for k in np.nonzero(causal_ab & (i != j))[0][:20]:
            d = space.diamond_points(a[k], b[k], 64, rng)
            contained.append(bool(np.all(space.contains(d))))
        observations["diamonds_checked"] = len(contained)
        if not all(contained):
            gh = Verdict(INCONCLUSIVE, None, "sampled", "a sampled diamond left the space")
    verdicts["globally_hyperbolic"] = gh
    verdicts["forward_complete"] = from_fact("forward_complete")
    flags = {k: space.flags.get(k) for k in ("tau_finite", "nonempty_past", "causally_path_connected",
                                             "intrinsic", "quasi_strongly_causal")}
    return LadderReport(space.name, verdicts, flags, observations, seed)


def _closure(graph):
    n = graph.n
    r = np.eye(n, dtype=bool)
    for u, v in graph.edges:
        r[u, v] = True
    # Warshall transitive closure
    for k in range(n):
        r |= r[:, k:k + 1] & r[k:k + 1, :]
    return r


def _graph_ladder(graph, seed):
    n = graph.n
    causal = _closure(graph)
    chron = graph.tau > 0
    verdicts = {}
    offdiag = ~np.eye(n, dtype=bool)
    loops = np.nonzero(np.diag(chron))[0]
    verdicts["chronological"] = Verdict(VIOLATED, {"type": "graph_loop", "node": int(loops[0])}, "exact") \
        if loops.size else Verdict(HOLDS, None, "exact")
    two = causal & causal.T & offdiag
    if np.any(two):
        u, v = map(int, np.argwhere(two)[0])
        causal_v = Verdict(VIOLATED, {"type": "graph_cycle", "nodes": [u, v]}, "exact")
    else:
        causal_v = Verdict(HOLDS, None, "exact")
    verdicts["causal"] = causal_v
    verdicts["non_totally_imprisoning"] = Verdict(causal_v.status, causal_v.witness, "exact",
                                                  "finite graphs imprison only along cycles")
    dist_w = None
    for x in range(n):
        same_f = np.all(chron[x][None, :] == chron, axis=1)
        same_p = np.all(chron[:, x][:, None] == chron, axis=0)
        hit = np.nonzero((same_f | same_p) & offdiag[x])[0]
        if hit.size:
            dist_w = {"type": "graph_indistinguishable", "nodes": [x, int(hit[0])]}
            break
    verdicts["distinguishing"] = Verdict(VIOLATED, dist_w, "exact") if dist_w else Verdict(HOLDS, None, "exact")
    # chronological diamonds containing each node; the discrete topology needs {x} as an intersection
    uncovered = None
    for x in range(n):
        members = chron[:, x][:, None] & chron[x, :][None, :]
        if not np.any(members):
            uncovered = x
            break
        cut = np.ones(n, dtype=bool)
        for a_, b_ in np.argwhere(members):
            cut &= chron[a_] & chron[:, b_]
        if cut.sum() > 1:
            uncovered = x
            break
    verdicts["strongly_causal"] = Verdict(VIOLATED, {"type": "graph_unseparated_node", "node": uncovered},
                                          "exact", "Alexandrov subbase against the discrete topology") \
        if uncovered is not None else Verdict(HOLDS, None, "exact")
    verdicts["stably_causal"] = Verdict(causal_v.status, causal_v.witness, "exact",
                                        "every relation on a finite set is closed")
    cc_w = dist_w
    if cc_w is None:
        for x in range(n):
            for y in range(n):
                if x == y:
                    continue
                if np.all(chron[y] >= chron[x]) and not np.all(chron[:, x] >= chron[:, y]):
                    cc_w = {"type": "graph_inclusion_failure", "nodes": [x, y]}
                    break
            if cc_w:
                break
    verdicts["causally_continuous"] = Verdict(VIOLATED, cc_w, "exact") if cc_w else Verdict(HOLDS, None, "exact")
    verdicts["causally_simple"] = Verdict(causal_v.status, causal_v.witness, "exact", "finite sets are closed")
    verdicts["globally_hyperbolic"] = Verdict(causal_v.status, causal_v.witness, "exact", "finite diamonds are compact")
    verdicts["forward_complete"] = Verdict(causal_v.status, causal_v.witness, "exact",
                                           "monotone sequences in a finite partial order are eventually constant")
    has_past = bool(np.all(np.any(chron, axis=0)))
    flags = {"tau_finite": bool(np.all(np.isfinite(graph.tau))), "nonempty_past": has_past}
    return LadderReport("graph", verdicts, flags, {"nodes": n}, seed)


@dataclass
class LadderDiff:
    base: LadderReport
    conformal: LadderReport
    diffs: list


def conformal_graph(graph, omega):
    """Graph whose tau table is the discrete tau_Omega between all node pairs."""
    g = graph.with_omega(omega)
    tau = np.zeros((g.n, g.n))
    for u in range(g.n):
        for v in g.reachable(u):
            if v != u:
                tau[u, v] = dag_tau_omega(g, u, v)[0]
    return CausalGraph(g.nodes, g.edges, tau, g.omega, g.causal, g.labels)


def conformal_ladder_invariance(target, omega, budget=None, seed=0):
    """Ladder reports before and after the conformal change, and their differences.

    The conformal side uses <<_Omega defined by tau_Omega > 0.
    """
    base = ladder_probe(target, budget, seed)
    if isinstance(target, CausalGraph):
        changed = conformal_graph(target, omega)
    else:
        changed = ConformalSpace(target, omega)
    conf = ladder_probe(changed, budget, seed)
    diffs = [c for c in CONDITIONS if base.status(c) != conf.status(c)]
    return LadderDiff(base, conf, diffs)


# ---------------------------------------------------------------------------
# blow-up factor

@dataclass(frozen=True)
class BlowupFactor:
    """Product of bump factors around an escaping sequence.

    Omega_n(x) = (2n / (r_n ell_n)) * dist(x, complement of B(p_n, r_n / 2)) + 1,
    where r_n separates p_n from the other terms and ell_n = tau(s_n, p_n)
    for the stored witness segment s_n -> p_n.
    """

    factor: ConformalFactor
    centers: np.ndarray
    radii: np.ndarray
    ell: np.ndarray
    witnesses: list
    past: int


def blowup_factor_builder(graph, diamond, escaping_sequence, radii=None, past=None, witnesses=None):
    """Conformal factor that forces tau_Omega(p-, p_n) >= n along an escaping sequence.

    Parameters
    ----------
    graph : CausalGraph
    diamond : (int, int)
        Node indices of p and q.
    escaping_sequence : list of int
        Node indices p_1, p_2, ... inside J(p, q).
    radii : sequence of float, optional
        r(n); defaults to the separation of p_n from the other terms.
    past : int, optional
        Node p- with p- << p (default: ``graph.labels["past"]``).
    witnesses : list of int, optional
        Nodes s_n << p_n inside B(p_n, r_n / 4) (default:
        ``graph.labels["witnesses"]``, else the best such node).
    """
    p_idx, q_idx = diamond
    seq = [int(s) for s in escaping_sequence]
    if not seq:
        return BlowupFactor(constant(1.0), np.zeros((0, graph.nodes.shape[1])), np.zeros(0), np.zeros(0), [], -1)
    causal = graph.causal if graph.causal is not None else _closure(graph)
    for s in seq:
        if not (causal[p_idx, s] and causal[s, q_idx]):
            raise PreconditionError(f"node {s} is not in the diamond J(p, q)")
    centers = graph.nodes[seq]
    r = separation_radii(centers) if radii is None else np.asarray(radii, dtype=float)
    if len(seq) == 1 and radii is None:
        r = np.array([1.0])
    if r.shape != (len(seq),) or np.any(r <= 0):
        raise PreconditionError("radii must be positive, one per sequence term")
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if np.linalg.norm(centers[a] - centers[b]) < 0.5 * (r[a] + r[b]):
                raise PreconditionError(f"balls around terms {a + 1} and {b + 1} overlap")
    if past is None:
        past = graph.labels.get("past")
    if past is None or not graph.tau[past, p_idx] > 0:
        raise PreconditionError("a past point p- with p- << p is required; none is available")
    if witnesses is None:
        witnesses = graph.labels.get("witnesses")
    chosen = []
    for k, s in enumerate(seq):
        if witnesses is not None:
            w = int(witnesses[k])
        else:
            near = np.linalg.norm(graph.nodes - centers[k], axis=1) < r[k] / 4
            cand = np.nonzero(near & (graph.tau[:, s] > 0))[0]
            if cand.size == 0:
                raise PreconditionError(f"no witness s_n << p_n near term {k + 1}")
            w = int(cand[np.argmax(graph.tau[cand, s])])
        if not graph.tau[w, s] > 0 or np.linalg.norm(graph.nodes[w] - centers[k]) >= r[k] / 4:
            raise PreconditionError(f"witness {w} must satisfy s_n << p_n inside B(p_n, r_n / 4)")
        chosen.append(w)
    ell = np.array([graph.tau[w, s] for w, s in zip(chosen, seq)])
    scale = np.array([2.0 * (k + 1) / (r[k] * ell[k]) for k in range(len(seq))])

    def func(x):
        x = np.asarray(x, dtype=float)
        out = np.ones(x.shape[:-1])
        for c, rr, sc in zip(centers, r, scale):
            d = np.linalg.norm(x - c, axis=-1)
            out = out * (sc * np.maximum(0.0, rr / 2 - d) + 1.0)
        return out

    factor = ConformalFactor(func, f"blowup[{len(seq)}]", lipschitz=float(np.max(scale)))
    return BlowupFactor(factor, centers, r, ell, chosen, int(past))


@dataclass
class FinitenessReport:
    entries: list
    all_finite: bool
    bound_holds: bool
    growth_certified: bool = False
    notes: list = field(default_factory=list)

    def to_json(self):
        return _jsonable({"entries": self.entries, "all_finite": self.all_finite,
                          "bound_holds": self.bound_holds, "growth_certified": self.growth_certified,
                          "notes": self.notes})


def finiteness_probe(target, factors=(), pairs=(), threshold=8, seed=0, escaping=None):
    """tau_Omega finiteness against compactness of diamonds.

    On a space with finite tau, each (factor, pair) entry checks
    tau_Omega(p, q) <= M tau(p, q) with M the largest sampled factor value
    on J(p, q).  When tau takes the value +inf the infinite conformal values
    are reported and flagged.  On a graph with an escaping sequence
    (``escaping`` = (diamond, sequence) or the graph's labels) the blow-up
    factor is built and tau_Omega(p-, p_n) >= n is certified up to
    ``threshold``.
    """
    rng = np.random.default_rng(seed)
    notes = []
    if isinstance(target, CausalGraph):
        labels = target.labels
        if escaping is None and "tips" in labels:
            escaping = ((labels["p"], labels["q"]), labels["tips"])
        entries = []
        growth = False
        if escaping is not None:
            blow = blowup_factor_builder(target, escaping[0], escaping[1])
            g = target.with_omega(blow.factor)
            for n, tip in enumerate(escaping[1], start=1):
                value, path = dag_tau_omega(g, blow.past, tip)
                entries.append({"n": n, "node": int(tip), "tau_omega": value, "bound": n, "ok": value >= n,
                                "path_length": len(path)})
            growth = all(e["ok"] for e in entries) and len(entries) >= threshold
        for omega in factors:
            g = target.with_omega(omega)
            for p, q in pairs:
                value, _ = dag_tau_omega(g, p, q)
                members = target.diamond(p, q)
                m = float(np.max(g.omega[members])) if members else 0.0
                entries.append({"factor": omega.label, "pair": [int(p), int(q)], "tau_omega": value,
                                "bound": m * target.tau[p, q], "ok": value <= m * target.tau[p, q] * (1 + 1e-12) + 1e-15})
        finite = all(np.isfinite(e["tau_omega"]) for e in entries)
        return FinitenessReport(entries, finite, all(e["ok"] for e in entries), growth, notes)
    space = target
    tau_finite = bool(space.flags.get("tau_finite", True))
    if not tau_finite:
        notes.append("tau takes the value +inf: the finiteness assumption fails, no factor can help")
    entries = []
    for omega in factors:
        for p, q in pairs:
            p = space.as_points(p)
            q = space.as_points(q)
            value = float(space.tau_omega_exact(omega, p, q))
            t = float(space.tau(p, q))
            if np.isinf(t):
                entries.append({"factor": omega.label, "pair": [p.tolist(), q.tolist()],
                                "tau_omega": value, "tau": t, "bound": INF, "ok": np.isinf(value)})
                continue
            d = space.diamond_points(p, q, 400, rng)
            m = float(np.max(omega(d)))
            bound = m * t
            entries.append({"factor": omega.label, "pair": [p.tolist(), q.tolist()], "tau_omega": value,
                            "tau": t, "bound": bound, "ok": value <= bound * (1 + 1e-9) + 1e-12})
    finite = all(np.isfinite(e["tau_omega"]) for e in entries)
    return FinitenessReport(entries, finite, all(e["ok"] for e in entries), False, notes)
