import math

import numpy as np
import pytest

from synthcone import curves as cv
from synthcone import discretize as dz
from synthcone import factors as fc
from synthcone import metric as mt
from synthcone.extended import INF
from synthcone.spaces import DomainError, StrategyError

from oracles import load

OR = load()
UNIT = mt.length_space("open_interval")
NOMIZU = fc.nomizu_interval()
PLANE = mt.length_space("euclidean", dim=2)


def _path(a, b):
    return cv.scalar_path(a, b)


def test_variation_hand_values():
    c = _path(0.25, 0.5)
    assert mt.metric_conformal_variation(UNIT, NOMIZU, c, [0.25, 0.5]) == pytest.approx(
        OR["metric_variation_coarse"], abs=1e-12)
    assert mt.metric_conformal_variation(UNIT, NOMIZU, c, [0.25, 0.375, 0.5]) == pytest.approx(
        OR["metric_variation_fine"], abs=1e-12)
    # with Omega = 1 the variation is the plain distance sum 0.05 + 0.2
    flat = mt.metric_conformal_variation(UNIT, fc.constant(1.0), c, [0.25, 0.3, 0.5])
    assert flat == pytest.approx(0.25, abs=1e-12)


def test_length_values():
    assert mt.metric_conformal_length(UNIT, fc.constant(1.0), _path(0.0, 1.0)).value == pytest.approx(1.0)
    res = mt.metric_conformal_length(UNIT, NOMIZU, _path(0.25, 0.5), tol=1e-6)
    assert res.converged and res.sandwich_ok
    assert abs(res.value - OR["nomizu_quarter_half"]) <= 2e-6
    res = mt.metric_conformal_length(UNIT, NOMIZU, _path(0.05, 0.5), tol=1e-5)
    assert abs(res.value - OR["nomizu_twentieth_half"]) <= 2e-5
    levels = [v for _, v in res.levels]
    assert all(b >= a - 1e-12 for a, b in zip(levels, levels[1:]))


def test_distance_strategies():
    flat = mt.d_omega(UNIT, fc.constant(1.0), 0.2, 0.7)
    assert flat.value == pytest.approx(0.5)
    closed = mt.d_omega(UNIT, NOMIZU, 0.25, 0.5)
    assert closed.exact and abs(closed.value - OR["nomizu_quarter_half"]) <= 1e-12
    family = mt.d_omega(UNIT, NOMIZU, 0.25, 0.5, "curve_family")
    assert abs(family.value - OR["nomizu_quarter_half"]) <= 1e-5
    graph = mt.d_omega(UNIT, NOMIZU, 0.25, 0.5, "graph", step=1e-4)
    assert abs(graph.value - OR["nomizu_quarter_half"]) <= 1e-3


def test_graph_distance_across_components():
    net = dz.epsilon_net(0.0, 1.0, 0.1, contains=lambda x: np.abs(x[..., 0] - 0.5) > 0.2)
    res = mt.d_omega(UNIT, None, 0.1, 0.9, "graph", graph=net, p_idx=net.find([0.1]), q_idx=net.find([0.9]))
    assert res.value == INF


def test_distance_errors():
    with pytest.raises(StrategyError):
        mt.d_omega(UNIT, NOMIZU, 0.25, 0.5, "teleport")
    with pytest.raises(StrategyError):
        mt.d_omega(PLANE, fc.constant(1.0), [0.0, 0.0], [0.5, 0.5], "closed_form")
    with pytest.raises(DomainError):
        mt.d_omega(UNIT, NOMIZU, 0.25, 1.5)


def test_composition_in_the_metric_setting():
    res = mt.metric_length_composed(UNIT, NOMIZU, fc.t_poly([0.0, 1.0]), _path(0.2, 0.8))
    assert abs(res.rhs - OR["nomizu_fifth_fourfifths_times_t"]) <= 1e-4
    assert res.gap <= 1e-4


def test_speed_examples():
    diag = cv.line([-0.5, -0.5], [0.5, 0.5], kind="plain")
    v = mt.metric_speed(PLANE, diag, 0.5)
    assert v.converged and v.value == pytest.approx(math.sqrt(2), abs=1e-6)
    check = mt.conformal_speed_check(PLANE, fc.constant(2.0), diag, 0.5)
    assert check.v_omega.value == pytest.approx(2 * math.sqrt(2), abs=1e-5)
    nomizu = mt.conformal_speed_check(UNIT, NOMIZU, _path(0.1, 0.4), 0.25)
    assert abs(nomizu.v_omega.value - OR["metric_speed_nomizu_quarter"]) <= 1e-4
    assert nomizu.gap <= 1e-4


def test_completion_radius():
    assert mt.nomizu_ozeki_rho(UNIT, [0.3]) == pytest.approx(0.3, abs=1e-9)
    rho = mt.nomizu_ozeki_rho(UNIT, np.array([[0.3], [0.4]]))
    assert abs(rho[0] - rho[1]) <= 0.1 + 1e-9
    closed = mt.completion_factor(mt.length_space("closed_interval"))
    assert closed.all_balls_compact and closed.omega(np.array([0.5])) == 1.0
    assert mt.completion_factor(PLANE).all_balls_compact
    disk = mt.completion_factor(mt.length_space("open_disk"))
    assert disk.omega(np.array([0.5, 0.0])) == pytest.approx(2.0, abs=1e-8)


def test_inconsistent_ball_oracle():
    flicker = mt.LengthSpaceBundle(
        "flicker", 1, lambda p, q: np.abs(p[..., 0] - q[..., 0]), lambda p: np.ones(p.shape[:-1], bool),
        lambda p, r: (np.floor(np.log2(r)) % 2) == 0)
    with pytest.raises(mt.OracleError):
        mt.nomizu_ozeki_rho(flicker, [0.0])


def test_completeness_verdicts():
    comp = mt.completion_factor(UNIT)
    xs = [2.0 ** -n for n in range(1, 12)]
    blocked = mt.completeness_probe(UNIT, comp.omega, xs)
    assert blocked.verdict == "escape blocked"
    assert np.allclose(blocked.steps, OR["nomizu_dyadic_step_1"], atol=1e-9)
    assert mt.completeness_probe(UNIT, fc.constant(1.0), xs).verdict == "still Cauchy"
    assert mt.completeness_probe(UNIT, comp.omega, [0.3] * 6).verdict == "still Cauchy"


def test_metric_hausdorff_check():
    assert mt.ball_normalization(1) == pytest.approx(1.0)
    const = mt.metric_hausdorff_conformal_check(UNIT, fc.constant(3.0), (0.2, 0.8), 1, [0.2, 0.1, 0.05])
    assert const.lhs == pytest.approx(1.8, abs=1e-9)
    ramp = mt.metric_hausdorff_conformal_check(mt.length_space("closed_interval"), fc.t_poly([2.0, 1.0]),
                                               (0.0, 1.0), 1, [0.2, 0.1, 0.05])
    assert ramp.rhs == pytest.approx(OR["two_plus_t_integral"])
    assert ramp.gap <= 0.05 * OR["two_plus_t_integral"]
    empty = mt.metric_hausdorff_conformal_check(UNIT, NOMIZU, None, 1, [0.1])
    assert (empty.lhs, empty.rhs, empty.gap) == (0.0, 0.0, 0.0)


def test_bilipschitz_probe():
    const = mt.bilipschitz_probe(PLANE, fc.constant(3.0), [0.0, 0.0], 0.5)
    assert const.status == "certified"
    assert const.ratio_range == pytest.approx((3.0, 3.0))
    nom = mt.bilipschitz_probe(UNIT, NOMIZU, [0.5], 0.5, r0=0.1)
    assert nom.status == "certified" and nom.radius <= 0.1 and nom.exact_lower
    with pytest.raises(mt.PreconditionError):
        mt.bilipschitz_probe(UNIT, NOMIZU, [0.5], 2.0)


def test_intrinsic_distance_against_curves():
    rng = np.random.default_rng(0)
    p, q = PLANE.sample(rng, 5), PLANE.sample(rng, 5)
    for a, b in zip(p, q):
        d = float(PLANE.distance(a, b))
        res = mt.d_omega(PLANE, fc.constant(1.0), a, b, "curve_family")
        assert res.value == pytest.approx(d, abs=1e-6)


def test_length_lower_semicontinuous_on_zigzags():
    # zigzags in the plane converge uniformly to the chord from (0, 0) to (1, 0);
    # their lengths stay above the limit's length instead of dropping below it
    omega = fc.coord_poly(0, [1.0, 1.0])
    limit = mt.metric_conformal_length(PLANE, omega, cv.line([0.0, 0.0], [1.0, 0.0]), tol=1e-6).value
    assert limit == pytest.approx(1.5, abs=1e-5)
    for k in (4, 8, 16):
        xs = np.linspace(0.0, 1.0, 2 * k + 1)
        ys = np.where(np.arange(xs.size) % 2 == 1, 0.5 / k, 0.0)
        zig = cv.waypoints(np.column_stack([xs, ys]))
        assert mt.metric_conformal_length(PLANE, omega, zig, tol=1e-5).value >= limit - 1e-5
