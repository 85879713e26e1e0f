"""Reference values computed independently of the package.

Everything here uses mpmath at 30 digits and closed-form reasoning only; no
synthcone code is imported.  ``python3 tests/oracles.py --write`` refreshes
``oracle_values.json``; the test suite checks that a fresh computation still
matches the frozen file and compares the package against the frozen values.
"""

import json
import os
import sys

import mpmath as mp

mp.mp.dps = 30
HERE = os.path.dirname(os.path.abspath(__file__))
FROZEN = os.path.join(HERE, "oracle_values.json")


def _omega_tt(t):
    return t * (1 - t)


def _nomizu(t):
    return 1 / min(t, 1 - t)


def compute():
    v = {}
    # straight timelike line of slope 1/2: proper time sqrt(1 - 1/4)
    v["tau_length_slope_half"] = mp.sqrt(mp.mpf(3) / 4)
    v["semicircle_length"] = mp.pi
    # segment maxima of t(1-t) by hand: the maximum sits at t = 1/2 or at the
    # segment end nearest to it
    coarse = [(mp.mpf("0.25"), mp.mpf("0.5")), (mp.mpf("0.5"), mp.mpf("0.75"))]
    fine = [(mp.mpf("0.25"), mp.mpf("0.375")), (mp.mpf("0.375"), mp.mpf("0.5")),
            (mp.mpf("0.5"), mp.mpf("0.625")), (mp.mpf("0.625"), mp.mpf("0.75"))]

    def seg_max(a, b):
        m = min(max(mp.mpf("0.5"), a), b)
        return _omega_tt(m)

    v["conformal_variation_coarse"] = sum(seg_max(a, b) * (b - a) for a, b in coarse)
    v["conformal_variation_fine"] = sum(seg_max(a, b) * (b - a) for a, b in fine)
    v["tt_integral_quarter"] = mp.quad(_omega_tt, [0.25, 0.75])
    v["t2_1mt_integral_quarter"] = mp.quad(lambda t: t * t * (1 - t), [0.25, 0.75])
    for eps in ("0.1", "0.2", "0.25", "0.3"):
        e = mp.mpf(eps)
        v[f"prior_length_eps_{eps}"] = e ** 2 * (1 - e) ** 2 * (1 - 2 * e)
    for k in range(2, 11):
        n = 2 ** k
        v[f"local_ratio_n_{n}"] = n * mp.quad(_omega_tt, [0.5, 0.5 + mp.mpf(1) / n])
    v["smooth_vertical_tt"] = mp.quad(_omega_tt, [0.25, 0.75])
    v["smooth_slope_half_2pt"] = mp.sqrt(mp.mpf(3) / 4) * mp.quad(lambda t: 2 + t, [0, 1])
    v["smooth_vertical_exp"] = mp.quad(mp.exp, [0, 1])
    v["nomizu_quarter_half"] = mp.quad(_nomizu, [0.25, 0.5])
    v["nomizu_twentieth_half"] = mp.quad(_nomizu, [0.05, 0.5])
    v["nomizu_fifth_fourfifths_times_t"] = mp.quad(lambda t: t * _nomizu(t), [0.2, 0.5, 0.8])
    for n in range(1, 11):
        v[f"nomizu_dyadic_step_{n}"] = mp.quad(_nomizu, [mp.mpf(2) ** -(n + 1), mp.mpf(2) ** -n])
    # min of 1/min(t,1-t) on a segment left of 1/2 sits at its right end
    v["metric_variation_coarse"] = mp.mpf(1) / mp.mpf("0.5") * mp.mpf("0.25")
    v["metric_variation_fine"] = (mp.mpf(1) / mp.mpf("0.375") * mp.mpf("0.125")
                                  + mp.mpf(1) / mp.mpf("0.5") * mp.mpf("0.125"))
    v["metric_speed_nomizu_quarter"] = _nomizu(mp.mpf("0.25"))
    v["two_plus_t_integral"] = mp.quad(lambda t: 2 + t, [0, 1])
    v["rapidity_0.6"] = mp.atanh(mp.mpf("0.6"))
    # Lebesgue area of the diamond between (0,0) and (1,0), and the weighted
    # integral of (t(1-t) + 1/2)^2 over it (width 2 min(t, 1-t) at height t)
    v["unit_diamond_area"] = mp.quad(lambda t: 2 * min(t, 1 - t), [0, 0.5, 1])
    v["weighted_diamond_integral"] = mp.quad(lambda t: 2 * min(t, 1 - t) * (_omega_tt(t) + 0.5) ** 2,
                                            [0, 0.5, 1])
    v["scaled_diamond_area"] = mp.quad(lambda t: 2 * min(t, 2 - t), [0, 1, 2])
    return {k: float(x) for k, x in v.items()}


def load():
    with open(FROZEN, encoding="utf-8") as fh:
        return json.load(fh)


if __name__ == "__main__":
    values = compute()
    if "--write" in sys.argv:
        with open(FROZEN, "w", encoding="utf-8") as fh:
            json.dump(values, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        json.dump(values, sys.stdout, indent=2, sort_keys=True)
