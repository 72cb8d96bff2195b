"""Exact algebra of bounded-slope PL homeomorphisms of [0, inf) modulo H."""

from .plcore import (
    AffineTail,
    GeometricTail,
    PLMap,
    SlopeBounds,
    bilip_constant,
    compose,
    evaluate,
    identity,
    invert,
    linear,
    maps_equal,
    power,
    slope_bounds,
    validate,
)

__all__ = [
    "AffineTail",
    "GeometricTail",
    "PLMap",
    "SlopeBounds",
    "bilip_constant",
    "compose",
    "evaluate",
    "identity",
    "invert",
    "linear",
    "maps_equal",
    "power",
    "slope_bounds",
    "validate",
]
