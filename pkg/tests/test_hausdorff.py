import numpy as np
import pytest

from synthcone import factors as fc
from synthcone import hausdorff as hd
from synthcone.spaces import DomainError, catalog_space

from oracles import load

OR = load()
M2 = catalog_space("minkowski2")
UNIT = hd.Region.diamond([0.0, 0.0], [1.0, 0.0])
SCHEDULE = [0.2, 0.1, 0.05]


def test_normalization_constants():
    assert hd.omega_s(1) == pytest.approx(1.0)
    assert hd.omega_s(2) == pytest.approx(0.5)
    assert hd.omega_s(4) == pytest.approx(np.pi / 24)
    with pytest.raises(ValueError):
        hd.omega_s(0)


def test_premeasure_of_unit_diamond():
    value, cover = hd.hausdorff_premeasure(M2, UNIT, 2, 0.1)
    assert abs(value - OR["unit_diamond_area"]) <= 0.1 * OR["unit_diamond_area"]
    assert np.all(cover.diameters() < 0.1)
    rng = np.random.default_rng(0)
    assert np.all(cover.covers(UNIT.sample(rng, 2000)))


def test_empty_region():
    value, cover = hd.hausdorff_premeasure(M2, hd.Region.empty(), 2, 0.1)
    assert value == 0.0
    mc = hd.conformal_measure_check(M2, fc.constant(2.0), hd.Region.empty(), 2, SCHEDULE)
    assert (mc.lhs, mc.rhs, mc.gap) == (0.0, 0.0, 0.0)


def test_constant_factor_scales_by_its_square():
    base, _ = hd.hausdorff_premeasure(M2, UNIT, 2, 0.1)
    scaled, _ = hd.hausdorff_premeasure(M2, UNIT, 2, 0.1, omega=fc.constant(3.0))
    assert scaled == pytest.approx(9.0 * base, rel=1e-12)


def test_measure_estimates():
    est = hd.hausdorff_measure(M2, UNIT, 2, SCHEDULE)
    assert abs(est.value - OR["unit_diamond_area"]) <= 0.05 * OR["unit_diamond_area"]
    assert est.delta_schedule == sorted(est.delta_schedule, reverse=True)
    big = hd.hausdorff_measure(M2, hd.Region.diamond([0.0, 0.0], [2.0, 0.0]), 2, [0.4, 0.2, 0.1])
    assert abs(big.value - OR["scaled_diamond_area"]) <= 0.05 * OR["scaled_diamond_area"]


def test_dimension_overshoot_vanishes():
    est = hd.hausdorff_measure(M2, UNIT, 3, SCHEDULE)
    assert est.premeasures[-1] < est.premeasures[0]
    assert est.value < 0.05


def test_premeasures_nondecreasing_flag():
    est = hd.hausdorff_measure(M2, UNIT, 2, SCHEDULE)
    diffs = np.diff(est.premeasures)
    assert est.quality == bool(np.all(diffs >= -1e-12))


def test_conformal_measure_check():
    mc = hd.conformal_measure_check(M2, fc.t_poly([0.5, 1.0, -1.0]), UNIT, 2, SCHEDULE)
    assert mc.gap <= 0.10
    assert abs(mc.rhs - OR["weighted_diamond_integral"]) <= 1e-6
    const = hd.conformal_measure_check(M2, fc.constant(2.0), UNIT, 2, SCHEDULE)
    assert const.lhs == pytest.approx(const.rhs, rel=1e-6)


def test_region_outside_the_space_is_rejected():
    strip = catalog_space("minkowski_strip")
    with pytest.raises(DomainError):
        hd.hausdorff_premeasure(strip, hd.Region.diamond([0.0, 0.0], [1.0, 0.0]), 2, 0.1)
    with pytest.raises(ValueError):
        hd.hausdorff_premeasure(M2, UNIT, 2, 0.0)


def test_region_config():
    r = hd.Region.from_config({"type": "box", "lo": [0.2, -0.1], "hi": [0.6, 0.1]})
    assert r.contains(np.array([0.4, 0.0]))
    assert not r.contains(np.array([0.7, 0.0]))
