import numpy as np
import pytest

from synthcone import curves as cv
from synthcone.curves import CurveError, NonCausalCurveError, Partition
from synthcone.extended import INF
from synthcone.spaces import catalog_space

from oracles import load

OR = load()
M2 = catalog_space("minkowski2")


def test_causality_certificate():
    ok, pair = cv.is_causal(M2, cv.vertical(0.0, 1.0), 50)
    assert ok and pair is None
    steep = cv.Curve(lambda s: np.column_stack([s, 2 * s]), 0.0, 1.0, "plain")
    ok, pair = cv.is_causal(M2, steep, 50)
    assert not ok and pair[0] < pair[1]
    ok, _ = cv.is_causal(catalog_space("imprison_W"), cv.spiral(-1 / (2 * np.pi), -0.01), 50)
    assert ok
    with pytest.raises(CurveError):
        cv.is_causal(M2, cv.vertical(0.0, 1.0), 1)


def test_tau_variation_values():
    line = cv.vertical(0.0, 1.0)
    assert cv.tau_variation(M2, line, [0.0, 0.5, 1.0]) == pytest.approx(1.0)
    strip = catalog_space("minkowski_strip")
    assert cv.tau_variation(strip, cv.vertical(0.1, 0.9), [0.1, 0.9]) == pytest.approx(0.8)
    il = catalog_space("infinity_line")
    assert cv.tau_variation(il, cv.scalar_path(0.0, 1.0), [0.0, 1.0]) == INF


def test_spacelike_curve_is_flagged():
    steep = cv.Curve(lambda s: np.column_stack([s, 2 * s]), 0.0, 1.0, "causal")
    with pytest.raises(NonCausalCurveError):
        cv.tau_variation(M2, steep, [0.0, 1.0])


def test_tau_length_values():
    assert cv.tau_length(M2, cv.vertical(0.0, 1.0), tol=1e-9).value == pytest.approx(1.0, abs=1e-9)
    value, converged = cv.tau_length(M2, cv.sloped(0.5, 0.0, 1.0), tol=1e-9)
    assert converged and abs(value - OR["tau_length_slope_half"]) <= 1e-9
    assert cv.tau_length(M2, cv.null(0.0, 1.0), tol=1e-9).value == 0.0


def test_tau_length_both_infinite_levels_converge():
    res = cv.tau_length(catalog_space("infinity_line"), cv.scalar_path(0.0, 1.0))
    assert res.value == INF and res.converged


def test_d_length_values():
    assert cv.d_length(M2, cv.vertical(0.0, 1.0), tol=1e-9).value == pytest.approx(1.0)
    arc = cv.d_length(M2, cv.circle_arc(), tol=1e-7)
    assert arc.converged and abs(arc.value - OR["semicircle_length"]) <= 1e-6


def test_oscillating_arm_length_grows_without_bound():
    iw = catalog_space("imprison_W")
    res = cv.d_length(iw, cv.spiral(-1 / (2 * np.pi), -1e-4), tol=1e-4)
    assert res.converged and res.value > 2
    capped = cv.d_length(iw, cv.spiral(-1 / (2 * np.pi), -1e-7), tol=1e-6, ceiling=res.value)
    assert not capped.converged and capped.value > res.value


def test_reparametrization_preserves_tau_length():
    base = cv.sloped(0.5, 0.0, 1.0)
    ref = cv.tau_length(M2, base, tol=1e-9).value
    doubled = cv.reparametrize(base, lambda u: 2 * u, 0.0, 0.5)
    assert doubled.domain == (0.0, 0.5)
    assert cv.tau_length(M2, doubled, tol=1e-9).value == pytest.approx(ref, abs=1e-9)
    squared = cv.reparametrize(base, lambda u: u ** 2, 0.0, 1.0)
    assert cv.tau_length(M2, squared, tol=1e-8).value == pytest.approx(ref, abs=1e-7)
    with pytest.raises(CurveError):
        cv.reparametrize(base, lambda u: 1 - u, 0.0, 1.0)


def test_partition_rules():
    sigma = Partition([0.0, 0.25, 1.0])
    assert sigma.modulus == 0.75
    assert len(sigma.refine()) == 5
    with pytest.raises(CurveError):
        Partition([0.0, 0.5, 0.5, 1.0])
    with pytest.raises(CurveError):
        cv.tau_variation(M2, cv.vertical(0.0, 1.0), [0.0, 0.9])


def test_refine_rejects_bad_mode():
    with pytest.raises(ValueError):
        cv.refine(lambda l, r: r - l, 0.0, 1.0, mode="avg", tol=1e-3)


def test_curve_config():
    c = cv.curve_from_config({"type": "named", "name": "vertical", "params": {"t0": 0.2, "t1": 0.7}})
    assert c.domain == (0.2, 0.7)
    with pytest.raises(CurveError):
        cv.curve_from_config({"type": "named", "name": "zigzag"})
