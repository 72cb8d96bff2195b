"""Asymptotic ratio invariant, membership in H, and cosets of H.

H is the subgroup of maps with f(x)/x -> 1. Two maps lie in the same coset
exactly when (f(x) - g(x))/x -> 0. All decisions are exact: on every affine
piece f(x) = s*x + c the ratio f(x)/x = s + c/x is monotone, so extremes over a
self-similar period are attained at breakpoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .plcore import (
    PLMap,
    _canonical,
    common_base,
    compose,
    evaluate,
    linear,
    points,
)
from .rationals import format_rational


@dataclass(frozen=True)
class Singleton:
    value: Fraction

    def __str__(self):
        return f"singleton {format_rational(self.value)}"


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not 0 < self.lo < self.hi:
            raise ValueError(f"bad interval [{self.lo}, {self.hi}]")

    def __str__(self):
        return f"interval {format_rational(self.lo)} {format_rational(self.hi)}"


SInvariant = Union[Singleton, Interval]


@dataclass(frozen=True)
class CosetDecision:
    """Outcome of a coset comparison.

    When not equivalent, ``gap`` is the exact limit of |f(x_k) - g(x_k)| / x_k
    along x_k = ``witness_start`` * ``witness_ratio``**k (for intercept-free
    tails the ratio equals ``gap`` at every k).
    """

    equivalent: bool
    certificate: str
    gap: Fraction | None = None
    witness_start: Fraction | None = None
    witness_ratio: Fraction | None = None

    def __str__(self):
        if self.equivalent:
            return f"equivalent: {self.certificate}"
        return (
            f"not equivalent: gap {format_rational(self.gap)} along x_k = "
            f"{format_rational(self.witness_start)} * {format_rational(self.witness_ratio)}^k"
        )


def ratio_extremes(f: PLMap) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """(lo, x_lo, hi, x_hi): extremes of f(x)/x over one tail period and where they occur.

    For an affine tail the ratio tends to the slope; the reported point is T.
    """
    if not f.is_geometric:
        s = f.tail.slope
        return s, f.start, s, f.start
    ratios = [(v / p, p) for p, v in zip(f.tail_points, f.tail_values)]
    lo = min(ratios)
    hi = max(ratios)
    return lo[0], lo[1], hi[0], hi[1]


def s_invariant(f: PLMap) -> SInvariant:
    """Set of subsequential limits of f(x)/x as x -> inf."""
    lo, _, hi, _ = ratio_extremes(f)
    if lo == hi:
        return Singleton(lo)
    return Interval(lo, hi)


def in_H(f: PLMap) -> bool:
    return s_invariant(f) == Singleton(Fraction(1))


def _phi_gap(f: PLMap, s: Fraction):
    """Largest |f(x)/x - s| over a geometric period of f, with its location."""
    best = None
    for p, v in zip(f.tail_points, f.tail_values):
        d = abs(v / p - s)
        if best is None or d > best[0]:
            best = (d, p)
    return best


def coset_equivalent(f: PLMap, g: PLMap, cap: int | None = None) -> CosetDecision:
    """Decide whether (f(x) - g(x))/x -> 0."""
    if not f.is_geometric and not g.is_geometric:
        sf, sg = f.tail.slope, g.tail.slope
        X = max(f.start, g.start, Fraction(1))
        if sf == sg:
            c = f.intercept - g.intercept
            return CosetDecision(
                True,
                f"f(x) - g(x) = {format_rational(c)} for x >= {format_rational(X)}, "
                "so (f - g)(x)/x -> 0",
            )
        return CosetDecision(False, "tail slopes differ", abs(sf - sg), X, Fraction(2))

    if f.is_geometric != g.is_geometric:
        aff, geo = (f, g) if g.is_geometric else (g, f)
        s = aff.tail.slope
        d, p = _phi_gap(geo, s)
        # both maps are past their tail starts along p * base**k
        scale = Fraction(1)
        while p * scale < aff.start:
            scale *= geo.tail.base
        if d == 0:
            return CosetDecision(
                True,
                f"geometric ratio is identically {format_rational(s)}, matching the affine slope",
            )
        return CosetDecision(
            False,
            "geometric ratio deviates from the affine slope",
            d,
            p * scale,
            geo.tail.base,
        )

    lam = common_base(f.tail.base, g.tail.base, cap)
    X = max(f.start, g.start)
    cand = sorted(set(points(f, X, lam * X)) | set(points(g, X, lam * X)))
    best = None
    for p in cand:
        d = abs(evaluate(f, p) - evaluate(g, p)) / p
        if best is None or d > best[0]:
            best = (d, p)
    if best[0] == 0:
        return CosetDecision(
            True,
            f"f = g on [{format_rational(X)}, inf) (both self-similar with base "
            f"{format_rational(lam)}), so (f - g)(x)/x = 0 eventually",
        )
    return CosetDecision(False, "self-similar tails differ", best[0], best[1], lam)


def normalize_mod_H(f: PLMap) -> PLMap:
    """Canonical coset representative with an intercept-free tail."""
    if not f.is_geometric:
        return linear(f.tail.slope)
    # straight head through (T, f(T)); the tail is untouched
    head = f.values[-1] / f.start
    return _canonical([Fraction(0), f.start], [head], f.tail)


def quotient_compose(f: PLMap, g: PLMap, cap: int | None = None) -> PLMap:
    """Representative of the class product [f][g] in G/H."""
    return normalize_mod_H(compose(normalize_mod_H(f), normalize_mod_H(g), cap))


def torsion_order_check(f: PLMap, r_max: int = 8, cap: int | None = None):
    """[(r, S(f'^r), in_H(f'^r)) for r = 1..r_max] with f' = normalize_mod_H(f)."""
    base = normalize_mod_H(f)
    out = []
    current = base
    for r in range(1, r_max + 1):
        if r > 1:
            current = compose(current, base, cap)
        out.append((r, s_invariant(current), in_H(current)))
    return out

