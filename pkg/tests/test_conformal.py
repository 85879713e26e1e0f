import numpy as np
import pytest

from synthcone import conformal as cf
from synthcone import curves as cv
from synthcone import factors as fc
from synthcone.spaces import ConformalSpace, DomainError, StrategyError, catalog_space

from oracles import load

OR = load()
M2 = catalog_space("minkowski2")
STRIP = catalog_space("minkowski_strip")
TT = fc.t_poly([0.0, 1.0, -1.0])


def test_conformal_variation_hand_values():
    line = cv.vertical(0.0, 1.0)
    assert cf.conformal_variation(M2, fc.constant(1.0), line, [0.0, 0.5, 1.0]) == pytest.approx(1.0)
    seg = cv.vertical(0.25, 0.75)
    coarse = cf.conformal_variation(STRIP, TT, seg, [0.25, 0.5, 0.75])
    fine = cf.conformal_variation(STRIP, TT, seg, [0.25, 0.375, 0.5, 0.625, 0.75])
    assert coarse == pytest.approx(OR["conformal_variation_coarse"], abs=1e-12)
    assert fine == pytest.approx(OR["conformal_variation_fine"], abs=1e-12)
    assert fine <= coarse


def test_conformal_length_values():
    seg = cv.vertical(0.25, 0.75)
    unit = cf.conformal_length(STRIP, fc.constant(1.0), seg, tol=1e-8)
    assert unit.value == pytest.approx(unit.tau_length, abs=1e-8)
    res = cf.conformal_length(STRIP, TT, seg, tol=1e-7)
    assert res.converged and res.sandwich_ok
    assert abs(res.value - OR["tt_integral_quarter"]) <= 1e-6
    assert cf.conformal_length(M2, fc.exp_t(), cv.null(0.0, 1.0)).value == 0.0


def test_conformal_length_unpacks():
    value, converged = cf.conformal_length(STRIP, TT, cv.vertical(0.3, 0.6), tol=1e-6)
    assert converged and value > 0


def test_non_causal_curve_rejected():
    steep = cv.Curve(lambda s: np.column_stack([s, 2 * s]), 0.0, 0.4, "causal")
    with pytest.raises(cv.NonCausalCurveError):
        cf.conformal_variation(M2, TT, steep, [0.0, 0.4])


@pytest.mark.parametrize("eps", ["0.1", "0.25"])
def test_product_weighted_length(eps):
    e = float(eps)
    got = cf.prior_conformal_length(STRIP, TT, cv.vertical(e, 1 - e))
    assert got == pytest.approx(OR[f"prior_length_eps_{eps}"], abs=1e-12)
    flat = cf.prior_conformal_length(STRIP, fc.constant(1.0), cv.vertical(e, 1 - e))
    assert flat == pytest.approx(1 - 2 * e, abs=1e-12)


def test_product_weighted_separation_breaks_reverse_triangle():
    outer = cf.prior_tau_omega(STRIP, TT, [0.01, 0.0], [0.99, 0.0])
    left = cf.prior_tau_omega(STRIP, TT, [0.01, 0.0], [0.25, 0.0])
    mid = cf.prior_tau_omega(STRIP, TT, [0.25, 0.0], [0.99, 0.0])
    assert outer.upper < left.lower + mid.lower

    def upper_bound(x, z):
        return np.array([cf.prior_tau_omega(STRIP, TT, a, b).upper for a, b in zip(x, z)])

    triple = (np.array([[0.01, 0.0]]), np.array([[0.25, 0.0]]), np.array([[0.99, 0.0]]))
    assert cf.check_reverse_triangle(STRIP, upper_bound, triple)["violations"]


def test_tau_omega_closed_form_values():
    assert cf.tau_omega(M2, fc.constant(2.0), [0.2, 0.0], [0.8, 0.0]).value == pytest.approx(1.2)
    res = cf.tau_omega(STRIP, TT, [0.25, 0.0], [0.75, 0.0])
    assert res.kind == "exact" and abs(res.value - OR["tt_integral_quarter"]) <= 1e-12
    assert cf.tau_omega(STRIP, TT, [0.5, 0.0], [0.2, 0.0]).value == 0.0


def test_curve_family_is_a_lower_bound_close_to_closed_form():
    p, q = [0.2, 0.0], [0.8, 0.2]
    exact = cf.tau_omega(STRIP, TT, p, q).value
    search = cf.tau_omega(STRIP, TT, p, q, strategy="curve_family", tol=1e-6)
    assert search.kind == "lower_bound"
    assert search.value <= exact + 1e-6
    assert exact - search.value < 1e-3


def test_unknown_strategy_raises():
    with pytest.raises(StrategyError):
        cf.tau_omega(STRIP, TT, [0.2, 0.0], [0.8, 0.0], strategy="guess")
    with pytest.raises(StrategyError):
        cf.tau_omega(STRIP, fc.coord_poly(1, [2.0, 0.1]), [0.2, 0.0], [0.8, 0.0])


def test_reverse_triangle_examples():
    rng = np.random.default_rng(5)
    t = np.sort(rng.uniform(0.01, 0.99, size=(50, 3)), axis=1)
    triples = tuple(np.column_stack([t[:, k], np.zeros(50)]) for k in range(3))
    lifted = ConformalSpace(STRIP, TT)
    assert cf.check_reverse_triangle(lifted, lifted.tau, triples)["violations"] == []
    m2_triples = M2.sample_causal_triples(rng, 50)
    assert cf.check_reverse_triangle(M2, M2.tau, m2_triples)["violations"] == []


def test_local_ratio_examples():
    p = np.array([0.5, 0.0])
    res = cf.local_ratio(STRIP, fc.constant(3.0), p, lambda n: p + np.array([0.4 / n, 0.1 / n]), 6)
    assert np.allclose(res.ratios, 3.0, rtol=0, atol=1e-12)
    res = cf.local_ratio(STRIP, TT, p, lambda n: p + np.array([1.0 / n, 0.0]), 3, ns=[4, 64, 1024])
    for n, r in zip(res.ns, res.ratios):
        assert abs(r - OR[f"local_ratio_n_{n}"]) <= 1e-10
    with pytest.raises(DomainError):
        cf.local_ratio(STRIP, TT, p, lambda n: p + np.array([0.0, 0.1 / n]), 3)


def test_composition_examples():
    res = cf.conformal_length_composed(M2, fc.constant(2.0), fc.constant(3.0), cv.vertical(0.2, 0.8))
    assert res.lhs == pytest.approx(3.6) and res.rhs == pytest.approx(3.6)
    seg = cv.vertical(0.25, 0.75)
    inv = cf.conformal_length_composed(STRIP, TT, TT.reciprocal(), seg)
    assert abs(inv.lhs - 0.5) <= 1e-5
    law = cf.conformal_length_composed(STRIP, TT, fc.t_poly([0.0, 1.0]), seg)
    assert abs(law.lhs - OR["t2_1mt_integral_quarter"]) <= 1e-5
    assert law.gap <= 1e-5


def test_comparison_angle():
    assert cf.comparison_angle(1.0, 1.0, 0.0).comparison_angle == pytest.approx(0.0, abs=1e-7)
    comp = cf.comparison_angle(2.0, 1.0, 0.0)
    assert comp.comparison_angle == pytest.approx(np.arccosh(1.25))
    with pytest.raises(ValueError):
        cf.comparison_angle(0.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        cf.comparison_angle(1.0, 1.0, 1.9)


def test_angle_limit_examples():
    p = np.array([0.3, 0.0])
    alpha = cv.line(p, p + np.array([0.4, 0.0]), kind="timelike")
    beta = cv.line(p, p + np.array([0.4, 0.24]), kind="timelike")
    schedule = [0.1, 0.01, 0.001]
    plain = cf.angle_limit(M2, None, alpha, beta, schedule)
    assert abs(plain.estimate - OR["rapidity_0.6"]) <= 1e-2
    weighted = cf.angle_limit(M2, fc.t_poly([0.1, 1.0, -1.0]), alpha, beta, schedule)
    assert abs(weighted.estimate - plain.estimate) <= 1e-2
    steep = cv.line(p, p + np.array([0.2, 0.3]), kind="timelike")
    with pytest.raises(cv.NonCausalCurveError):
        cf.angle_limit(M2, None, alpha, steep, schedule)
