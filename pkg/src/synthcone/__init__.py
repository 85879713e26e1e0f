"""Executable conformal constructions on Lorentzian pre-length spaces and length spaces."""

from .extended import INF, ExtendedRealError, ext_mul, ext_sum
from .factors import ConformalFactor, FactorError, factor_from_config
from . import causality, conformal, curves, discretize, factors, hausdorff, metric, solvers
from .metric import LengthSpaceBundle, length_space
from .spaces import (
    ConformalSpace,
    DomainError,
    LorentzianPreLengthSpace,
    SpaceError,
    StrategyError,
    catalog_space,
    conformal_space,
    push_up_check,
    space_from_config,
)

__all__ = [
    "causality",
    "conformal",
    "curves",
    "discretize",
    "factors",
    "hausdorff",
    "metric",
    "solvers",
    "LengthSpaceBundle",
    "length_space",
    "INF",
    "ExtendedRealError",
    "ext_mul",
    "ext_sum",
    "ConformalFactor",
    "FactorError",
    "factor_from_config",
    "ConformalSpace",
    "DomainError",
    "LorentzianPreLengthSpace",
    "SpaceError",
    "StrategyError",
    "catalog_space",
    "conformal_space",
    "push_up_check",
    "space_from_config",
]
