import numpy as np
import pytest

from synthcone import factors as fc
from synthcone.factors import FactorError


def test_time_polynomial_values_and_time_form():
    om = fc.t_poly([0.0, 1.0, -1.0])
    pts = np.array([[0.25, 3.0], [0.5, -1.0]])
    assert np.allclose(om(pts), [0.1875, 0.25])
    assert om.t_only
    assert om.of_t(0.5) == 0.25


def test_nonpositive_values_raise():
    with pytest.raises(FactorError):
        fc.t_poly([0.0, 1.0, -1.0])(np.array([1.5, 0.0]))
    with pytest.raises(FactorError):
        fc.constant(0.0)


def test_product_and_reciprocal():
    a, b = fc.constant(2.0), fc.exp_t(1.0, 1.0)
    p = np.array([0.3, 0.0])
    assert (a * b)(p) == pytest.approx(2 * np.exp(0.3))
    assert a.reciprocal()(p) == pytest.approx(0.5)
    assert (a * b).reciprocal().of_t(0.3) == pytest.approx(0.5 * np.exp(-0.3))


def test_coordinate_factor_is_not_time_only():
    om = fc.coord_poly(1, [2.0, 1.0])
    assert not om.t_only
    with pytest.raises(FactorError):
        om.of_t(0.3)


def test_nomizu_interval_factor():
    om = fc.nomizu_interval()
    assert om(np.array([0.25])) == pytest.approx(4.0)
    assert om(np.array([0.9])) == pytest.approx(10.0)


@pytest.mark.parametrize("cfg", [
    {"type": "const", "value": 3.0},
    {"type": "t_poly", "coeffs": [1.0, 0.5]},
    {"type": "exp_t", "scale": 1.0, "rate": 0.5},
])
def test_config_round_trip(cfg):
    om = fc.factor_from_config(cfg)
    again = fc.factor_from_config(om.to_config())
    p = np.array([0.4, 0.1])
    assert om(p) == again(p)


def test_unknown_factor_type():
    with pytest.raises(FactorError):
        fc.factor_from_config({"type": "nope"})
