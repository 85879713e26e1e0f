import numpy as np
import pytest

from synthcone import causality as cz
from synthcone import discretize as dz
from synthcone import factors as fc
from synthcone.extended import INF
from synthcone.spaces import catalog_space


def test_strip_is_globally_hyperbolic():
    rep = cz.ladder_probe(catalog_space("minkowski_strip"), seed=0)
    for cond in ("chronological", "causal", "strongly_causal", "causally_simple", "globally_hyperbolic"):
        assert rep.status(cond) == "holds"


def test_funnel_diamond_is_not_compact():
    space = catalog_space("funnel_X")
    rep = cz.ladder_probe(space, seed=0)
    v = rep.verdicts["globally_hyperbolic"]
    assert v.status == "violated"
    assert np.allclose(v.witness["p"], [-1.0, 0.0]) and np.allclose(v.witness["q"], [1.0, 0.0])
    assert cz.replay_witness(space, v.witness)
    assert rep.flags["nonempty_past"] is False


def test_imprisoning_space_witness():
    space = catalog_space("imprison_W")
    rep = cz.ladder_probe(space, seed=0)
    v = rep.verdicts["non_totally_imprisoning"]
    assert v.status == "violated" and v.witness["type"] == "imprisoned_curve"
    assert cz.replay_witness(space, v.witness)


def test_imprisonment_lower_bounds_grow():
    space = catalog_space("imprison_W")
    from synthcone import curves as cv
    bounds = cz.imprisonment_lower_bounds(space, cv.spiral(-1 / (2 * np.pi), -1e-5), [4, 16, 64])
    assert np.all(np.diff(bounds) > 0)


@pytest.mark.parametrize("name", ["funnel_X", "funnel_Y", "imprison_W"])
def test_every_violation_replays(name):
    space = catalog_space(name)
    rep = cz.ladder_probe(space, seed=2)
    for cond in cz.CONDITIONS:
        v = rep.verdicts[cond]
        if v.status == "violated" and v.witness is not None:
            assert cz.replay_witness(space, v.witness), cond


@pytest.mark.parametrize("name, omega", [
    ("minkowski_strip", fc.t_poly([0.0, 1.0, -1.0])),
    ("funnel_X", fc.constant(2.0)),
    ("imprison_W", fc.constant(1.0)),
])
def test_conformal_invariance_examples(name, omega):
    assert cz.conformal_ladder_invariance(catalog_space(name), omega, seed=0).diffs == []


def test_graph_ladder_is_exact_on_a_dag():
    g = dz.sprinkle(catalog_space("minkowski_strip"), ([0.1, -0.2], [0.9, 0.2]), 40, 1)
    rep = cz.ladder_probe(g, seed=0)
    assert rep.status("chronological") == "holds"
    assert rep.status("causal") == "holds"
    assert rep.status("globally_hyperbolic") == "holds"
    assert all(rep.verdicts[c].source == "exact" for c in cz.CONDITIONS)


def test_blowup_factor_shapes():
    graph = dz.funnel_hull_graph(120, 3, seed=1)
    labels = graph.labels
    assert cz.blowup_factor_builder(graph, (labels["p"], labels["q"]), []).factor(np.zeros(2)) == 1.0
    single = cz.blowup_factor_builder(graph, (labels["p"], labels["q"]), labels["tips"][:1],
                                      witnesses=labels["witnesses"][:1])
    far = np.array([[-0.9, 0.0], [0.9, 0.0]])
    assert np.allclose(single.factor(far), 1.0)
    assert np.all(single.factor(graph.nodes) >= 1.0)


def test_blowup_builder_preconditions():
    graph = dz.funnel_hull_graph(120, 3, seed=1)
    labels = graph.labels
    with pytest.raises(cz.PreconditionError):
        cz.blowup_factor_builder(graph, (labels["p"], labels["q"]), [labels["past"]])
    tips = labels["tips"]
    with pytest.raises(cz.PreconditionError):
        cz.blowup_factor_builder(graph, (labels["p"], labels["q"]), tips, radii=[5.0] * len(tips))
    literal = dz.funnel_graph(60, seed=0)
    with pytest.raises(cz.PreconditionError):
        cz.blowup_factor_builder(literal, (literal.labels["p"], literal.labels["q"]), literal.labels["tips"][:2])


def test_finiteness_on_the_strip():
    rng = np.random.default_rng(0)
    space = catalog_space("minkowski_strip")
    pairs = list(zip(*space.sample_causal_pairs(rng, 20)))
    factors = [fc.constant(2.0), fc.exp_t(1.0, 0.5), fc.t_poly([1.0, 0.5]),
               fc.t_poly([1.5, 0.0, 0.5]), fc.t_poly([0.0, 1.0, -1.0])]
    rep = cz.finiteness_probe(space, factors, pairs, seed=0)
    assert rep.all_finite and rep.bound_holds and len(rep.entries) == 100


def test_finiteness_flags_infinite_tau():
    rep = cz.finiteness_probe(catalog_space("infinity_line"), [fc.constant(2.0)], [(0.0, 1.0)])
    assert not rep.all_finite and rep.entries[0]["tau_omega"] == INF and rep.notes


def test_blowup_growth_certified():
    graph = dz.funnel_hull_graph(400, 8, seed=0)
    rep = cz.finiteness_probe(graph, threshold=8, seed=0)
    assert rep.growth_certified
    assert all(e["tau_omega"] >= e["n"] for e in rep.entries)
