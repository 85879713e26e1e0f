"""Conformal factors: strictly positive continuous weights on points.

A factor is an evaluator on coordinate arrays of shape ``(..., dim)``.
Factors that only look at the first coordinate (the time coordinate on the
Minkowski models, the position on one-dimensional spaces) carry a scalar
``t_func`` as well; several closed-form solvers need that.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


class FactorError(ValueError):
    """Bad factor definition or a non-positive factor value."""


def _coords(pts):
    pts = np.asarray(pts, dtype=float)
    if pts.ndim == 0:
        pts = pts.reshape(1)
    return pts


@dataclass(frozen=True)
class ConformalFactor:
    """Positive weight Omega on points.

    Parameters
    ----------
    func : callable
        Maps an array of points ``(..., dim)`` to values ``(...)``.
    label : str
        Identifier used in reports.
    t_func : callable, optional
        Same factor written as a function of the first coordinate only.
        Present exactly when the factor depends on that coordinate alone.
    lipschitz : float, optional
        Declared Lipschitz constant with respect to the Euclidean norm on
        coordinates.  Used for the segment-max error bound.
    config : dict, optional
        JSON form, kept for round-tripping.
    """

    func: Callable
    label: str = "omega"
    t_func: Optional[Callable] = None
    lipschitz: Optional[float] = None
    config: Optional[dict] = field(default=None, compare=False)

    def __call__(self, pts):
        pts = _coords(pts)
        vals = np.asarray(self.func(pts), dtype=float)
        _check_positive(vals, self.label)
        if vals.ndim == 0:
            return float(vals)
        return vals

    def of_t(self, t):
        """Evaluate a time-only factor on time values."""
        if self.t_func is None:
            raise FactorError(f"factor {self.label!r} is not a function of the first coordinate alone")
        vals = np.asarray(self.t_func(np.asarray(t, dtype=float)), dtype=float)
        _check_positive(vals, self.label)
        if vals.ndim == 0:
            return float(vals)
        return vals

    @property
    def t_only(self):
        return self.t_func is not None

    def __mul__(self, other):
        return product(self, other)

    def reciprocal(self):
        return reciprocal(self)

    def to_config(self):
        if self.config is None:
            raise FactorError(f"factor {self.label!r} has no JSON form")
        return self.config


def _check_positive(vals, label):
    if not np.all(np.isfinite(vals)) or np.any(vals <= 0):
        bad = np.asarray(vals)[~(np.isfinite(vals) & (vals > 0))]
        raise FactorError(f"conformal factor {label!r} must be finite and strictly positive, got {bad.ravel()[:3]}")


def constant(c):
    c = float(c)
    if not (c > 0 and np.isfinite(c)):
        raise FactorError("constant factor must be a positive finite number")
    return ConformalFactor(
        func=lambda p: np.full(p.shape[:-1], c),
        label=f"const({c:g})",
        t_func=lambda t: np.full(np.shape(t), c),
        lipschitz=0.0,
        config={"type": "const", "value": c},
    )


def t_poly(coeffs):
    """Polynomial in the first coordinate, ascending coefficients.

    ``t_poly([0, 1, -1])`` is t(1 - t).
    """
    coeffs = [float(c) for c in coeffs]
    if not coeffs:
        raise FactorError("t_poly needs at least one coefficient")
    poly = np.polynomial.Polynomial(coeffs)
    return ConformalFactor(
        func=lambda p: poly(p[..., 0]),
        label="t_poly(" + ",".join(f"{c:g}" for c in coeffs) + ")",
        t_func=lambda t: poly(t),
        config={"type": "t_poly", "coeffs": coeffs},
    )


def exp_t(scale=1.0, rate=1.0):
    """scale * exp(rate * t)."""
    scale, rate = float(scale), float(rate)
    return ConformalFactor(
        func=lambda p: scale * np.exp(rate * p[..., 0]),
        label=f"exp_t({scale:g},{rate:g})",
        t_func=lambda t: scale * np.exp(rate * t),
        config={"type": "exp_t", "scale": scale, "rate": rate},
    )


def coord_poly(axis, coeffs):
    """Polynomial in one coordinate (axis 0 gives a time-only factor)."""
    axis = int(axis)
    if axis == 0:
        f = t_poly(coeffs)
        return ConformalFactor(f.func, f.label, f.t_func, config={"type": "coord_poly", "axis": 0, "coeffs": list(map(float, coeffs))})
    poly = np.polynomial.Polynomial([float(c) for c in coeffs])
    return ConformalFactor(
        func=lambda p: poly(p[..., axis]),
        label=f"coord_poly[{axis}]",
        config={"type": "coord_poly", "axis": axis, "coeffs": [float(c) for c in coeffs]},
    )


def nomizu_interval(a=0.0, b=1.0):
    """1 / min(x - a, b - x), the completion factor of the open interval (a, b)."""
    a, b = float(a), float(b)

    def f(t):
        return 1.0 / np.minimum(t - a, b - t)

    return ConformalFactor(
        func=lambda p: f(p[..., 0]),
        label=f"nomizu({a:g},{b:g})",
        t_func=f,
        config={"type": "nomizu_interval", "a": a, "b": b},
    )


def table(axis, grid, values):
    """Piecewise-linear interpolation of tabulated values along one axis."""
    axis = int(axis)
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    if grid.ndim != 1 or grid.shape != values.shape or grid.size < 2:
        raise FactorError("table factor needs matching 1D grid and values, size >= 2")
    if np.any(np.diff(grid) <= 0):
        raise FactorError("table grid must be strictly increasing")
    _check_positive(values, "table")

    def f(t):
        t = np.asarray(t, dtype=float)
        if np.any(t < grid[0]) or np.any(t > grid[-1]):
            raise FactorError("table factor evaluated outside its grid")
        return np.interp(t, grid, values)

    cfg = {"type": "expr_table", "axis": axis, "grid": grid.tolist(), "values": values.tolist()}
    return ConformalFactor(
        func=lambda p: f(p[..., axis]),
        label=f"table[{axis}]",
        t_func=f if axis == 0 else None,
        config=cfg,
    )


def product(*factors):
    factors = tuple(factors)
    if not factors:
        return constant(1.0)

    def func(p):
        out = np.asarray(factors[0].func(p), dtype=float)
        for f in factors[1:]:
            out = out * f.func(p)
        return out

    t_func = None
    if all(f.t_only for f in factors):
        def t_func(t):
            out = np.asarray(factors[0].t_func(t), dtype=float)
            for f in factors[1:]:
                out = out * f.t_func(t)
            return out

    cfg = None
    if all(f.config is not None for f in factors):
        cfg = {"type": "product", "factors": [f.config for f in factors]}
    return ConformalFactor(func, "*".join(f.label for f in factors), t_func, config=cfg)


def reciprocal(factor):
    t_func = None
    if factor.t_only:
        def t_func(t):
            return 1.0 / np.asarray(factor.t_func(t), dtype=float)
    cfg = None if factor.config is None else {"type": "reciprocal", "factor": factor.config}
    return ConformalFactor(lambda p: 1.0 / np.asarray(factor.func(p), dtype=float),
                           f"1/({factor.label})", t_func, config=cfg)


def from_callable(func, label="custom", t_func=None, lipschitz=None):
    return ConformalFactor(func, label, t_func, lipschitz)


FACTOR_TYPES = ("const", "t_poly", "exp_t", "coord_poly", "nomizu_interval", "product", "reciprocal", "expr_table")


def factor_from_config(cfg):
    """Build a factor from its JSON form.

    Examples
    --------
    >>> factor_from_config({"type": "t_poly", "coeffs": [0, 1, -1]}).of_t(0.5)
    0.25
    """
    if not isinstance(cfg, dict) or "type" not in cfg:
        raise FactorError("factor config must be an object with a 'type' key")
    kind = cfg["type"]
    try:
        if kind == "const":
            return constant(cfg["value"])
        if kind == "t_poly":
            return t_poly(cfg["coeffs"])
        if kind == "exp_t":
            return exp_t(cfg.get("scale", 1.0), cfg.get("rate", 1.0))
        if kind == "coord_poly":
            return coord_poly(cfg["axis"], cfg["coeffs"])
        if kind == "nomizu_interval":
            return nomizu_interval(cfg.get("a", 0.0), cfg.get("b", 1.0))
        if kind == "product":
            return product(*[factor_from_config(c) for c in cfg["factors"]])
        if kind == "reciprocal":
            return reciprocal(factor_from_config(cfg["factor"]))
        if kind == "expr_table":
            return table(cfg.get("axis", 0), cfg["grid"], cfg["values"])
    except KeyError as exc:
        raise FactorError(f"factor config of type {kind!r} is missing {exc}") from None
    raise FactorError(f"unknown factor type {kind!r}")
