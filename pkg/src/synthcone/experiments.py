"""Registry of named reproductions driven by JSON experiment specs.

Each experiment takes the parsed spec and a seed and returns an
:class:`ExperimentResult`: a table of rows for CSV output and a list of
tolerance checks.  Tolerances are read from ``spec["tolerances"]``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import causality as cz
from . import conformal as cf
from . import curves as cv
from . import discretize as dz
from . import factors as fc
from . import hausdorff as hd
from . import metric as mt
from .spaces import ConformalSpace, catalog_space, space_from_config


class SpecError(ValueError):
    """The experiment spec is malformed or misses a required entry."""


@dataclass
class Check:
    name: str
    value: float
    reference: float
    tol: float
    passed: bool
    kind: str = "abs"


@dataclass
class ExperimentResult:
    columns: list
    rows: list
    checks: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)


def _tol(spec, key):
    try:
        return float(spec["tolerances"][key])
    except KeyError:
        raise SpecError(f"spec {spec.get('name')!r} needs tolerances.{key}") from None


def _param(spec, key, default=None):
    params = spec.get("params", {})
    if key in params:
        return params[key]
    if default is None:
        raise SpecError(f"spec {spec.get('name')!r} needs params.{key}")
    return default


def _abs_check(name, value, reference, tol):
    value, reference = float(value), float(reference)
    return Check(name, value, reference, tol, bool(abs(value - reference) <= tol), "abs")


def _rel_check(name, value, reference, tol):
    value, reference = float(value), float(reference)
    gap = abs(value - reference) / max(abs(reference), 1e-300)
    return Check(name, value, reference, tol, bool(gap <= tol), "rel")


def _bound_check(name, value, bound, kind):
    ok = value >= bound if kind == "ge" else value <= bound
    return Check(name, float(value), float(bound), 0.0, bool(ok), kind)


def _reference(cfg):
    """A number, or {"ln": x} for log(x)."""
    if isinstance(cfg, dict) and set(cfg) == {"ln"}:
        return math.log(float(cfg["ln"]))
    if isinstance(cfg, (int, float)):
        return float(cfg)
    raise SpecError(f"reference must be a number or {{'ln': x}}, got {cfg!r}")


def _factor(spec, default):
    return fc.factor_from_config(spec.get("factor", default))


def _space(spec, default):
    return space_from_config(spec.get("space", {"name": default}))


# ---------------------------------------------------------------------------

def example_3_1(spec, seed):
    """Product-weighted length on the strip: values, non-additivity, reverse triangle."""
    space = _space(spec, "minkowski_strip")
    omega = _factor(spec, {"type": "t_poly", "coeffs": [0, 1, -1]})
    grid_n = int(_param(spec, "grid_n", 64))
    tol = _tol(spec, "abs")
    rows, checks = [], []
    for eps in _param(spec, "eps", [0.1, 0.2, 0.25, 0.3]):
        eps = float(eps)
        value = cf.prior_conformal_length(space, omega, cv.vertical(eps, 1 - eps), grid_n)
        ref = eps ** 2 * (1 - eps) ** 2 * (1 - 2 * eps)
        rows.append([eps, value, ref, abs(value - ref)])
        checks.append(_abs_check(f"prior_length[eps={eps:g}]", value, ref, tol))
    split = float(_param(spec, "split", 0.5))
    e0 = float(_param(spec, "split_eps", 0.1))
    whole = cf.prior_conformal_length(space, omega, cv.vertical(e0, 1 - e0), grid_n)
    parts = (cf.prior_conformal_length(space, omega, cv.vertical(e0, split), grid_n)
             + cf.prior_conformal_length(space, omega, cv.vertical(split, 1 - e0), grid_n))
    checks.append(_bound_check("split_gap", parts - whole, _tol(spec, "min_split_gap"), "ge"))
    e1 = float(_param(spec, "triangle_eps", 0.01))
    delta = float(_param(spec, "triangle_delta", 0.25))
    outer = cf.prior_conformal_length(space, omega, cv.vertical(e1, 1 - e1), grid_n)
    inner = cf.prior_conformal_length(space, omega, cv.vertical(delta, 1 - delta), grid_n)
    checks.append(_bound_check("reverse_triangle_violation", inner - outer, 0.0, "ge"))
    summary = {"whole": whole, "parts": parts, "outer": outer, "inner": inner}
    return ExperimentResult(["eps", "prior_length", "reference", "abs_error"], rows, checks, summary)


def _lorentz_speed(curve, s, h=1e-6):
    a = np.ravel(curve(max(curve.a, s - h)))
    b = np.ravel(curve(min(curve.b, s + h)))
    v = (b - a) / (min(curve.b, s + h) - max(curve.a, s - h))
    return math.sqrt(max(v[0] ** 2 - float(np.sum(v[1:] ** 2)), 0.0))


def smooth_agreement(spec, seed):
    """Conformal length against the smooth integral of Omega * Lorentzian speed."""
    tol = _tol(spec, "abs")
    rows, checks = [], []
    for combo in _param(spec, "combos"):
        space = space_from_config(combo["space"])
        omega = fc.factor_from_config(combo["factor"])
        curve = cv.curve_from_config(combo["curve"])
        res = cf.conformal_length(space, omega, curve, tol=float(combo.get("length_tol", 1e-6)))
        ref = quad(lambda s: float(omega(np.ravel(curve(s)))) * _lorentz_speed(curve, s),
                   curve.a, curve.b, epsabs=1e-12, limit=200)[0]
        rows.append([combo["label"], res.value, ref, abs(res.value - ref)])
        checks.append(_abs_check(f"length[{combo['label']}]", res.value, ref, tol))
    return ExperimentResult(["combo", "conformal_length", "quadrature", "abs_error"], rows, checks)


def composition_law(spec, seed):
    """Length for Omega' over tau_Omega against Omega*Omega' over tau."""
    space = _space(spec, "minkowski_strip")
    omega = _factor(spec, {"type": "t_poly", "coeffs": [0, 1, -1]})
    omega_p = fc.factor_from_config(_param(spec, "factor_prime"))
    tol = _tol(spec, "gap")
    rows, checks = [], []
    for t0, t1, x in _param(spec, "segments"):
        curve = cv.vertical(float(t0), float(t1), float(x))
        res = cf.conformal_length_composed(space, omega, omega_p, curve,
                                           tol=float(_param(spec, "length_tol", 1e-6)))
        rows.append([t0, t1, x, res.lhs, res.rhs, res.gap])
        checks.append(_bound_check(f"gap[{t0:g},{t1:g}]", res.gap, tol, "le"))
    return ExperimentResult(["t0", "t1", "x", "lhs", "rhs", "gap"], rows, checks)


def involution(spec, seed):
    """(tau_Omega)_{1/Omega} against tau on a battery of pairs."""
    space = _space(spec, "minkowski_strip")
    omega = _factor(spec, {"type": "t_poly", "coeffs": [0, 1, -1]})
    lifted = ConformalSpace(space, omega)
    inv = omega.reciprocal()
    tol = _tol(spec, "abs")
    rows, checks = [], []
    for p, q in _param(spec, "pairs"):
        value = cf.tau_omega(lifted, inv, p, q, strategy="curve_family",
                             tol=float(_param(spec, "length_tol", 1e-6))).value
        ref = float(space.tau(np.asarray(p, float), np.asarray(q, float)))
        rows.append([p[0], p[1], q[0], q[1], value, ref, abs(value - ref)])
        checks.append(_abs_check(f"involution[{p},{q}]", value, ref, tol))
    return ExperimentResult(["p_t", "p_x", "q_t", "q_x", "tau_back", "tau", "abs_error"], rows, checks)


def local_ratio(spec, seed):
    """tau_Omega(p, p_n) / tau(p, p_n) along p_n = p + (1/n, 0)."""
    space = _space(spec, "minkowski_strip")
    omega = _factor(spec, {"type": "t_poly", "coeffs": [0, 1, -1]})
    p = np.asarray(_param(spec, "p"), dtype=float)
    ns = [int(n) for n in _param(spec, "ns")]
    res = cf.local_ratio(space, omega, p, lambda n: p + np.array([1.0 / n, 0.0]), len(ns), ns=ns)
    rows = [[n, r] for n, r in zip(res.ns, res.ratios)]
    checks = [_abs_check(f"ratio[n={res.ns[-1]}]", res.ratios[-1], res.target, _tol(spec, "abs"))]
    return ExperimentResult(["n", "ratio"], rows, checks, {"omega_p": res.target})


def angle_invariance(spec, seed):
    """Angle between two timelike lines with and without a conformal factor."""
    space = _space(spec, "minkowski2")
    omega = _factor(spec, {"type": "t_poly", "coeffs": [0.1, 1, -1]})
    p = np.asarray(_param(spec, "p"), dtype=float)
    v = float(_param(spec, "velocity"))
    length = float(_param(spec, "length", 0.4))
    alpha = cv.line(p, p + np.array([length, 0.0]), kind="timelike", label="alpha")
    beta = cv.line(p, p + np.array([length, v * length]), kind="timelike", label="beta")
    schedule = [float(s) for s in _param(spec, "schedule")]
    ref = math.atanh(v)
    tol = _tol(spec, "abs")
    rows, checks = [], []
    for label, om in (("none", None), (omega.label, omega)):
        res = cf.angle_limit(space, om, alpha, beta, schedule)
        rows.extend([[label, s, ang] for s, _, _, _, _, ang in res.sequence])
        checks.append(_abs_check(f"angle[{label}]", res.estimate, ref, tol))
    return ExperimentResult(["factor", "s", "angle"], rows, checks, {"rapidity": ref})


def ladder_catalog(spec, seed):
    """Ladder verdicts per catalog space and their invariance under conformal changes."""
    budget = spec.get("params", {}).get("budget")
    expected = _param(spec, "expected")
    factor_cfgs = _param(spec, "factors")
    rows, checks = [], []
    reports = {}
    for name, want in expected.items():
        space = catalog_space(name)
        rep = cz.ladder_probe(space, budget, seed)
        reports[name] = rep.to_json()
        for cond in cz.CONDITIONS:
            rows.append([name, cond, rep.status(cond), rep.verdicts[cond].source])
        for cond, status in want.items():
            if cond == "tau_finite":
                got = bool(rep.flags.get("tau_finite", True))
                checks.append(Check(f"{name}.tau_finite", float(got), float(status), 0.0,
                                    got == bool(status), "eq"))
                continue
            got = rep.status(cond)
            checks.append(Check(f"{name}.{cond}={got}", float(got == status), 1.0, 0.0,
                                got == status, "eq"))
            if status == "violated":
                w = rep.verdicts[cond].witness
                ok = w is not None and cz.replay_witness(space, w)
                checks.append(Check(f"{name}.{cond}.witness_replays", float(ok), 1.0, 0.0, ok, "eq"))
        for cfg in factor_cfgs:
            omega = fc.factor_from_config(cfg)
            diff = cz.conformal_ladder_invariance(space, omega, budget, seed)
            checks.append(Check(f"{name}.invariance[{omega.label}]", float(len(diff.diffs)), 0.0,
                                0.0, not diff.diffs, "eq"))
    return ExperimentResult(["space", "condition", "status", "source"], rows, checks,
                            {"reports": reports})


def blowup_finiteness(spec, seed):
    """Blow-up factor on a funnel discretization: tau_Omega(p-, p_n) >= n."""
    n_nodes = int(_param(spec, "n_nodes", 400))
    n_tips = int(_param(spec, "n_tips", 8))
    graph = dz.funnel_hull_graph(n_nodes, n_tips, seed)
    rep = cz.finiteness_probe(graph, threshold=n_tips, seed=seed)
    rows, checks = [], []
    for e in rep.entries:
        rows.append([e["n"], e["node"], e["tau_omega"], e["bound"]])
        checks.append(_bound_check(f"tau_omega[n={e['n']}]", e["tau_omega"], e["bound"], "ge"))
    checks.append(Check("growth_certified", float(rep.growth_certified), 1.0, 0.0,
                        bool(rep.growth_certified), "eq"))
    return ExperimentResult(["n", "node", "tau_omega", "bound"], rows, checks,
                            {"nodes": graph.n, "edges": len(graph.edges)})


def hausdorff_conformal(spec, seed):
    """Diamond-cover Hausdorff measure, its conformal change and scaling."""
    space = _space(spec, "minkowski2")
    region = hd.Region.from_config(_param(spec, "region"))
    s = float(_param(spec, "s", 2))
    schedule = [float(d) for d in _param(spec, "schedule")]
    base = hd.hausdorff_measure(space, region, s, schedule, seed=seed)
    rows = [[s, d, v] for d, v in zip(base.delta_schedule, base.premeasures)]
    rows.append([s, "extrapolated", base.value])
    checks = []
    ref = spec.get("params", {}).get("reference")
    if ref is not None:
        checks.append(_rel_check("measure", base.value, ref, _tol(spec, "measure_rel")))
    summary = {"measure": base.value, "quality": base.quality}
    if "factor" in spec:
        omega = _factor(spec, None)
        mc = hd.conformal_measure_check(space, omega, region, s, schedule, seed=seed)
        checks.append(_bound_check("conformal_gap", mc.gap, _tol(spec, "conformal_rel"), "le"))
        summary.update({"conformal_lhs": mc.lhs, "conformal_rhs": mc.rhs, "conformal_gap": mc.gap})
    c = spec.get("params", {}).get("scaling_constant")
    if c is not None:
        scaled = hd.hausdorff_measure(space, region, s, schedule, omega=fc.constant(c), seed=seed)
        ratios = [a / b for a, b in zip(scaled.premeasures, base.premeasures)]
        worst = max(abs(r - c ** s) for r in ratios)
        checks.append(_bound_check("scaling_exact", worst, _tol(spec, "scaling_abs"), "le"))
        summary["scaling_ratios"] = ratios
    return ExperimentResult(["s", "delta", "value"], rows, checks, summary)


def nomizu_completion(spec, seed):
    """Completion factor 1/rho on an open interval and the escape x_n = 2^-n."""
    bundle = mt.length_space_from_config(spec.get("space", {"name": "open_interval"}))
    comp = mt.completion_factor(bundle)
    n_steps = int(_param(spec, "n_steps", 10))
    xs = [2.0 ** -n for n in range(1, n_steps + 2)]
    tol = _tol(spec, "step_abs")
    blocked = mt.completeness_probe(bundle, comp.omega, xs, threshold=_tol(spec, "threshold"))
    plain = mt.completeness_probe(bundle, fc.constant(1.0), xs, threshold=_tol(spec, "threshold"))
    rows, checks = [], []
    for n, step in enumerate(blocked.steps, start=1):
        rows.append([n, xs[n - 1], xs[n], step])
        checks.append(_abs_check(f"step[{n}]", step, math.log(2), tol))
    checks.append(Check("blocked", float(blocked.verdict == "escape blocked"), 1.0, 0.0,
                        blocked.verdict == "escape blocked", "eq"))
    checks.append(Check("plain_cauchy", float(plain.verdict == "still Cauchy"), 1.0, 0.0,
                        plain.verdict == "still Cauchy", "eq"))
    grid = np.linspace(0.01, 0.99, 99)
    rho = mt.nomizu_ozeki_rho(bundle, grid[:, None])
    lip = float(np.max(np.abs(np.diff(rho)) / np.diff(grid)))
    checks.append(_bound_check("rho_lipschitz", lip, 1.0 + 1e-9, "le"))
    return ExperimentResult(["n", "x_n", "x_n_plus_1", "d_omega"], rows, checks,
                            {"tail_diameter": blocked.tail_diameter,
                             "plain_tail_diameter": plain.tail_diameter})


def ln_law(spec, seed):
    """d_Omega for the completion factor of (0, 1) by quadrature and on a net."""
    bundle = mt.length_space_from_config(spec.get("space", {"name": "open_interval"}))
    omega = _factor(spec, {"type": "nomizu_interval"})
    step = float(_param(spec, "net_step", 1e-4))
    tol = _tol(spec, "abs")
    lo, hi = bundle.bounds
    net = dz.epsilon_net(lo, hi, step, include=np.array([[p] for p in _param(spec, "query_points")]),
                         contains=bundle.contains).with_omega(omega)
    rows, checks = [], []
    for p, q, ref_cfg in _param(spec, "pairs"):
        ref = _reference(ref_cfg)
        closed = mt.d_omega(bundle, omega, p, q, "closed_form").value
        graph = mt.d_omega(bundle, None, p, q, "graph", graph=net, p_idx=net.find([p]),
                           q_idx=net.find([q])).value
        rows.append([p, q, closed, graph, ref])
        checks.append(_abs_check(f"closed_form[{p},{q}]", closed, ref, tol))
        checks.append(_abs_check(f"graph[{p},{q}]", graph, ref, tol))
        checks.append(_abs_check(f"agreement[{p},{q}]", graph, closed, tol))
    return ExperimentResult(["p", "q", "closed_form", "graph", "reference"], rows, checks)


REGISTRY = {
    "example_3_1": (example_3_1, False),
    "smooth_agreement": (smooth_agreement, False),
    "composition_law": (composition_law, False),
    "involution": (involution, False),
    "local_ratio": (local_ratio, False),
    "angle_invariance": (angle_invariance, False),
    "ladder_catalog": (ladder_catalog, True),
    "blowup_finiteness": (blowup_finiteness, True),
    "hausdorff_conformal": (hausdorff_conformal, True),
    "nomizu_completion": (nomizu_completion, False),
    "ln_law": (ln_law, False),
}


def list_experiments(filter_text=None):
    """Registered names in registration order, optionally filtered by substring."""
    names = list(REGISTRY)
    if filter_text:
        names = [n for n in names if filter_text in n]
    return names


def is_stochastic(name):
    return REGISTRY[name][1]


def run_experiment(spec, seed):
    if spec["operation"] not in REGISTRY:
        raise SpecError(f"unknown operation {spec['operation']!r}")
    return REGISTRY[spec["operation"]][0](spec, seed)
