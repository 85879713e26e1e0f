"""Property-based checks of the structural invariants, over every catalog space."""

import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from synthcone import conformal as cf
from synthcone import curves as cv
from synthcone import discretize as dz
from synthcone import factors as fc
from synthcone import metric as mt
from synthcone.extended import fmt, from_json_number, to_json_number
from synthcone.spaces import CATALOG, ConformalSpace, catalog_space, push_up_check

NAMES = sorted(CATALOG)
SPACES = {n: catalog_space(n) for n in NAMES}
FACTORS = [fc.constant(2.0), fc.t_poly([1.5, 0.0, 0.5]), fc.exp_t(1.0, 0.5)]
SETTINGS = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
seeds = st.integers(0, 2 ** 31 - 1)
spaces = st.sampled_from(NAMES)
factor_idx = st.integers(0, len(FACTORS) - 1)


@SETTINGS
@given(spaces, seeds)
def test_background_distance_is_a_metric(name, seed):
    space = SPACES[name]
    rng = np.random.default_rng(seed)
    x, y, z = (space.sample(rng, 50) for _ in range(3))
    dxy = space.distance(x, y)
    assert np.all(dxy >= 0)
    assert np.all((dxy == 0) == np.all(x == y, axis=-1))
    assert np.allclose(dxy, space.distance(y, x))
    assert np.all(space.distance(x, z) <= dxy + space.distance(y, z) + 1e-12)


@SETTINGS
@given(spaces, seeds)
def test_relations_are_transitive_and_nested(name, seed):
    space = SPACES[name]
    rng = np.random.default_rng(seed)
    x, y, z = space.sample_causal_triples(rng, 30)
    assert np.all(space.causal(x, z))
    assert np.all(space.causal(x, x))
    chron_xy, chron_yz = np.atleast_1d(space.chron(x, y)), np.atleast_1d(space.chron(y, z))
    both = chron_xy & chron_yz
    assert np.all(np.atleast_1d(space.chron(x, z))[both])
    assert np.all(np.atleast_1d(space.causal(x, y))[chron_xy])


@SETTINGS
@given(spaces, seeds)
def test_time_separation_invariants(name, seed):
    space = SPACES[name]
    rng = np.random.default_rng(seed)
    p, q = space.sample(rng, 60), space.sample(rng, 60)
    tau = np.atleast_1d(space.tau(p, q))
    assert np.all(tau >= 0)
    assert np.all(tau[~np.atleast_1d(space.causal(p, q))] == 0)
    assert np.array_equal(tau > 0, np.atleast_1d(space.chron(p, q)))
    triples = space.sample_causal_triples(rng, 30)
    assert cf.check_reverse_triangle(space, space.tau, triples)["violations"] == []
    assert push_up_check(space, triples)["violations"] == []


@SETTINGS
@given(spaces, factor_idx, seeds)
def test_conformal_relations_and_reverse_triangle(name, k, seed):
    space, omega = SPACES[name], FACTORS[k]
    lifted = ConformalSpace(space, omega)
    rng = np.random.default_rng(seed)
    p, q = space.sample(rng, 100), space.sample(rng, 100)
    assert np.array_equal(np.atleast_1d(lifted.chron(p, q)), np.atleast_1d(space.chron(p, q)))
    triples = space.sample_causal_triples(rng, 20)
    assert cf.check_reverse_triangle(lifted, lifted.tau, triples)["violations"] == []


def _sorted_partition(a, b, fractions):
    inner = sorted(set(a + (b - a) * f for f in fractions if 0 < f < 1))
    return np.array([a] + inner + [b])


fractions = st.lists(st.floats(0.01, 0.99), min_size=1, max_size=6)


@SETTINGS
@given(spaces, factor_idx, seeds, fractions, fractions)
def test_refinement_monotone_and_sandwiched(name, k, seed, f1, f2):
    space, omega = SPACES[name], FACTORS[k]
    curves = space.curve_battery()
    curve = curves[seed % len(curves)]
    coarse = _sorted_partition(curve.a, curve.b, f1)
    fine = np.union1d(coarse, _sorted_partition(curve.a, curve.b, f2))
    v_coarse = cf.conformal_variation(space, omega, curve, coarse)
    v_fine = cf.conformal_variation(space, omega, curve, fine)
    if math.isinf(v_coarse):
        assert math.isinf(v_fine)
        return
    assert v_fine <= v_coarse + 1e-9 * max(1.0, v_coarse)
    lo, hi = cf.omega_range(omega, curve, fine)
    base = cv.tau_variation(space, curve, fine)
    assert lo * base - 1e-9 <= v_fine <= hi * base + 1e-9


@settings(max_examples=10, deadline=None)
@given(spaces, factor_idx, seeds, st.floats(0.2, 0.8))
def test_length_additivity(name, k, seed, frac):
    space, omega = SPACES[name], FACTORS[k]
    curves = space.curve_battery()
    curve = curves[seed % len(curves)]
    tol = 1e-5
    mid = curve.a + frac * (curve.b - curve.a)
    whole = cf.conformal_length(space, omega, curve, tol=tol, check_sandwich=False).value
    parts = (cf.conformal_length(space, omega, curve.restrict(curve.a, mid), tol=tol, check_sandwich=False).value
             + cf.conformal_length(space, omega, curve.restrict(mid, curve.b), tol=tol, check_sandwich=False).value)
    if math.isinf(whole) or math.isinf(parts):
        assert math.isinf(whole) and math.isinf(parts)
    else:
        # two refinements each within tol of their limit, plus the whole one
        assert abs(whole - parts) <= 3 * 2 * tol


@SETTINGS
@given(st.floats(0.01, 0.45), fractions, fractions)
def test_metric_variation_increases_under_refinement(a, f1, f2):
    bundle = mt.length_space("open_interval")
    omega = fc.nomizu_interval()
    curve = cv.scalar_path(a, 0.97)
    coarse = _sorted_partition(curve.a, curve.b, f1)
    fine = np.union1d(coarse, _sorted_partition(curve.a, curve.b, f2))
    v_coarse = mt.metric_conformal_variation(bundle, omega, curve, coarse)
    v_fine = mt.metric_conformal_variation(bundle, omega, curve, fine)
    assert v_fine >= v_coarse - 1e-9


@SETTINGS
@given(st.floats(0.01, 0.99), st.floats(0.01, 0.99), st.floats(0.01, 0.99))
def test_completion_distance_and_radius(x, y, z):
    bundle = mt.length_space("open_interval")
    omega = fc.nomizu_interval()

    def d(a, b):
        return mt.d_omega(bundle, omega, a, b).value

    assert d(x, y) == pytest.approx(d(y, x), rel=1e-9, abs=1e-12)
    assert d(x, z) <= d(x, y) + d(y, z) + 1e-9
    rho = mt.nomizu_ozeki_rho(bundle, np.array([[x], [y]]))
    assert np.all(rho > 0)
    assert abs(rho[0] - rho[1]) <= abs(x - y) + 1e-9


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_dag_matches_exhaustive_oracle(seed):
    graph, p, q = dz.random_dag(seed, n_max=10)
    assert dz.dag_tau_omega(graph, p, q)[0] == dz.brute_force_tau_omega(graph, p, q)


@SETTINGS
@given(seeds, st.integers(2, 60), st.sampled_from(["all", "reduction"]))
def test_sprinkled_graphs_respect_the_ambient_order(seed, n, rule):
    space = SPACES["minkowski_strip"]
    g = dz.sprinkle(space, ([0.1, -0.2], [0.9, 0.2]), n, seed, link_rule=rule)
    for u, v in g.edges:
        assert space.causal(g.nodes[u], g.nodes[v])
        assert g.tau[u, v] == pytest.approx(float(space.tau(g.nodes[u], g.nodes[v])))
    order = {v: i for i, v in enumerate(g.topological_order())}
    assert all(order[u] < order[v] for u, v in g.edges)


@SETTINGS
@given(fractions)
def test_partition_refinement(frs):
    sigma = cv.Partition(_sorted_partition(0.0, 1.0, frs))
    finer = sigma.refine()
    assert set(sigma.points) <= set(finer.points)
    assert finer.modulus <= sigma.modulus
    assert np.all(np.diff(finer.points) > 0)


@SETTINGS
@given(factor_idx, seeds)
def test_factor_values_positive(k, seed):
    pts = np.random.default_rng(seed).uniform(-3, 3, size=(200, 2))
    assert np.all(FACTORS[k](pts) > 0)


@given(st.one_of(st.floats(allow_nan=False), st.just(math.inf)))
def test_extended_real_json_round_trip(x):
    # outputs keep nine significant digits
    back = from_json_number(to_json_number(x))
    assert back == x if math.isinf(x) else back == float(fmt(x))
    assert back == pytest.approx(x, rel=1e-8) or math.isinf(x)
