"""Exact enumeration of square-lattice walks by endpoint and algebraic area."""

from .enumerator import (
    AreaHistogram,
    EnumerationConfig,
    Mode,
    area_distribution,
    closed_area_histogram,
    endpoint_count,
    self_test,
    verify,
)
from .series import Strategy, WalkSeries, generator, multiply_series, power, restricted_product_at
from .twisted import TwistedMonomial

__all__ = [
    "AreaHistogram",
    "EnumerationConfig",
    "Mode",
    "Strategy",
    "TwistedMonomial",
    "WalkSeries",
    "area_distribution",
    "closed_area_histogram",
    "endpoint_count",
    "generator",
    "multiply_series",
    "power",
    "restricted_product_at",
    "self_test",
    "verify",
]
