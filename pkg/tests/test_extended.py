import json
import math

import pytest

from synthcone.extended import (INF, ExtendedRealError, ext_mul, ext_sum, fmt, from_json_number,
                                is_inf, to_json_number)


def test_infinite_sum_absorbs_finite_terms():
    assert ext_sum([1.0, INF, 2.0]) == INF
    assert ext_sum([0.1, 0.2, 0.3]) == pytest.approx(0.6, abs=1e-15)


def test_zero_times_inf_is_rejected():
    with pytest.raises(ExtendedRealError):
        ext_mul(0.0, INF)
    assert ext_mul(2.0, INF) == INF
    assert ext_mul(2.0, 3.0) == 6.0


def test_nan_in_sum_is_rejected():
    with pytest.raises(ExtendedRealError):
        ext_sum([1.0, math.nan])


def test_json_round_trip_of_infinity():
    enc = to_json_number(INF)
    assert from_json_number(json.loads(json.dumps(enc))) == INF
    assert from_json_number(to_json_number(0.25)) == 0.25
    assert is_inf(INF) and not is_inf(1e308)


def test_fmt_uses_nine_significant_digits():
    assert fmt(1 / 3) == "0.333333333"
    assert fmt(INF) != fmt(1e300)
