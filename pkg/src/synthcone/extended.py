"""Extended nonnegative reals.

Time separations and lengths take values in [0, +inf].  We use IEEE ``inf``
as the marker for +inf (it is never produced by overflow in this package,
every evaluator returns it deliberately) and route products through
:func:`ext_mul` so that the undefined form ``0 * inf`` raises instead of
silently becoming ``nan``.
"""

import math

import numpy as np

INF = math.inf


class ExtendedRealError(ArithmeticError):
    """Raised on an undefined extended-real operation such as 0 * inf."""


def is_inf(x):
    return np.isposinf(x)


def ext_mul(a, b):
    """Product in [0, +inf] with 0 * inf rejected.

    Works elementwise on arrays; scalars in, scalar out.
    """
    a_arr = np.asarray(a, dtype=float)
    b_arr = np.asarray(b, dtype=float)
    bad = ((a_arr == 0) & np.isinf(b_arr)) | ((b_arr == 0) & np.isinf(a_arr))
    if np.any(bad):
        raise ExtendedRealError("0 * inf is undefined in the extended reals")
    out = a_arr * b_arr
    if np.ndim(out) == 0:
        return float(out)
    return out


def ext_sum(values):
    """Sum of nonnegative extended reals.

    Uses a correctly rounded summation, so the result does not depend on
    the order of the terms and is bit-stable across runs.
    """
    arr = np.ravel(np.asarray(values, dtype=float))
    if np.any(np.isnan(arr)):
        raise ExtendedRealError("nan in extended-real sum")
    if np.any(arr < 0):
        raise ExtendedRealError("negative term in a sum of nonnegative extended reals")
    if np.any(np.isinf(arr)):
        return INF
    return math.fsum(arr.tolist())


def fmt(x):
    """9-significant-digit rendering used by every serializer."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return "%.9g" % x


def to_json_number(x):
    """JSON-safe value: finite floats rounded to 9 significant digits,
    infinities as the string "inf"."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return float("%.9g" % x)


def from_json_number(v):
    if isinstance(v, str):
        if v == "inf":
            return INF
        if v == "-inf":
            return -INF
        raise ValueError(f"not a number: {v!r}")
    return float(v)
