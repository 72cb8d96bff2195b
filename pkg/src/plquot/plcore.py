"""Exact PL homeomorphisms of the half-line with bounded slopes.

A map is a finite list of affine pieces starting at 0, followed by one of two
tail descriptors that cover [T, inf):

* ``AffineTail(s)``: f(x) = s*x + c beyond T, with c fixed by continuity.
* ``GeometricTail(base, pieces)``: a slope pattern on [T, base*T] that repeats
  self-similarly, f(base**k * x) = base**k * f(x) for x >= T.

Everything is computed with :class:`fractions.Fraction`. Maps are kept in a
canonical form that depends only on the function (minimal self-similarity
base, earliest tail start at a genuine breakpoint, no removable breakpoints),
so structural equality of canonical maps is functional equality.
"""

from __future__ import annotations

import math
import os
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .errors import (
    EmptyMap,
    GeometricConsistencyViolation,
    IncommensurableScales,
    NegativeInput,
    NonMonotoneBreakpoints,
    NonPositiveSlope,
    TailNotClosed,
)
from .rationals import format_rational, log_ratio, rational_root

DEFAULT_CAP = 16
CAP_ENV = "PLQ_COMMENSURABILITY_CAP"


def commensurability_cap(cap: int | None = None) -> int:
    """Resolve the integer-power search cap (argument, then env var, then 16)."""
    if cap is not None:
        return cap
    raw = os.environ.get(CAP_ENV)
    if not raw:
        return DEFAULT_CAP
    value = int(raw)
    if value < 1:
        raise ValueError(f"{CAP_ENV} must be a positive integer, got {raw!r}")
    return value


@dataclass(frozen=True)
class AffineTail:
    slope: Fraction


@dataclass(frozen=True)
class GeometricTail:
    """Self-similar tail; ``pieces`` are (right endpoint, slope) in absolute coordinates."""

    base: Fraction
    pieces: tuple[tuple[Fraction, Fraction], ...]

    @property
    def start(self) -> Fraction:
        return self.pieces[-1][0] / self.base

    @property
    def slopes(self) -> tuple[Fraction, ...]:
        return tuple(s for _, s in self.pieces)


Tail = Union[AffineTail, GeometricTail]


@dataclass(frozen=True)
class SlopeBounds:
    min_slope: Fraction
    max_slope: Fraction


@dataclass(frozen=True)
class PLMap:
    """A PL homeomorphism of [0, inf) fixing 0.

    ``breakpoints[0] == 0`` and ``breakpoints[-1]`` is the tail start T;
    ``slopes[i]`` is the slope on ``[breakpoints[i], breakpoints[i+1]]``.
    Instances built directly are trusted; use :func:`validate` for input.
    """

    breakpoints: tuple[Fraction, ...]
    slopes: tuple[Fraction, ...]
    tail: Tail
    values: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)
    # pattern points T = P_0 < ... < P_m = base*T and f at those points
    tail_points: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)
    tail_values: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vals = [Fraction(0)]
        bps = self.breakpoints
        for i, s in enumerate(self.slopes):
            vals.append(vals[-1] + s * (bps[i + 1] - bps[i]))
        object.__setattr__(self, "values", tuple(vals))
        if isinstance(self.tail, GeometricTail):
            pts = [bps[-1]]
            tv = [vals[-1]]
            for p, s in self.tail.pieces:
                tv.append(tv[-1] + s * (p - pts[-1]))
                pts.append(p)
            object.__setattr__(self, "tail_points", tuple(pts))
            object.__setattr__(self, "tail_values", tuple(tv))
        else:
            object.__setattr__(self, "tail_points", ())
            object.__setattr__(self, "tail_values", ())

    @property
    def start(self) -> Fraction:
        """Tail start T (the last finite breakpoint)."""
        return self.breakpoints[-1]

    @property
    def is_geometric(self) -> bool:
        return isinstance(self.tail, GeometricTail)

    @property
    def intercept(self) -> Fraction | None:
        """c in f(x) = s*x + c on the tail, or None for a geometric tail."""
        if self.is_geometric:
            return None
        return self.values[-1] - self.tail.slope * self.start

    @property
    def is_linear_tail(self) -> bool:
        return not self.is_geometric and self.intercept == 0

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)

    def __str__(self):
        parts = [
            f"[{format_rational(a)},{format_rational(b)}]:{format_rational(s)}"
            for a, b, s in zip(self.breakpoints, self.breakpoints[1:], self.slopes)
        ]
        if self.is_geometric:
            pat = " ".join(f"{format_rational(p)}:{format_rational(s)}" for p, s in self.tail.pieces)
            parts.append(f"geometric {format_rational(self.tail.base)} ({pat})")
        else:
            parts.append(f"tail {format_rational(self.tail.slope)}")
        return "PLMap(" + ", ".join(parts) + ")"


# -- constructors -------------------------------------------------------------


def identity() -> PLMap:
    return PLMap((Fraction(0),), (), AffineTail(Fraction(1)))


def linear(s) -> PLMap:
    """The map x -> s*x."""
    s = Fraction(s)
    if s <= 0:
        raise NonPositiveSlope(f"slope must be positive, got {format_rational(s)}")
    return PLMap((Fraction(0),), (), AffineTail(s))


def validate(pieces: Sequence[tuple], tail: Tail | None) -> PLMap:
    """Check a raw description and return its canonical :class:`PLMap`.

    ``pieces`` is a sequence of (right endpoint, slope) pairs, contiguous from 0.
    Errors carry ``index`` (position in ``pieces``, or ``"tail"`` / ``("pattern", i)``).
    """
    if tail is None:
        raise EmptyMap("map has no tail descriptor")
    bps = [Fraction(0)]
    slopes = []
    for i, (x, s) in enumerate(pieces):
        x, s = Fraction(x), Fraction(s)
        if x <= bps[-1]:
            raise NonMonotoneBreakpoints(
                f"piece endpoint {format_rational(x)} does not exceed {format_rational(bps[-1])}",
                index=i,
            )
        if s <= 0:
            raise NonPositiveSlope(f"slope {format_rational(s)} is not positive", index=i)
        bps.append(x)
        slopes.append(s)

    if isinstance(tail, AffineTail):
        s = Fraction(tail.slope)
        if s <= 0:
            raise NonPositiveSlope(f"tail slope {format_rational(s)} is not positive", index="tail")
        return _canonical(bps, slopes, AffineTail(s))

    if not isinstance(tail, GeometricTail):
        raise TypeError(f"unknown tail descriptor {tail!r}")
    base = Fraction(tail.base)
    if base <= 1:
        raise GeometricConsistencyViolation(
            f"geometric base {format_rational(base)} must exceed 1", index="tail"
        )
    if not tail.pieces:
        raise EmptyMap("geometric tail has an empty pattern", index="tail")
    T = bps[-1]
    if T == 0:
        raise GeometricConsistencyViolation(
            "geometric tail needs a positive start; add a finite piece first", index="tail"
        )
    prev = T
    pat = []
    for i, (x, s) in enumerate(tail.pieces):
        x, s = Fraction(x), Fraction(s)
        if x <= prev:
            raise NonMonotoneBreakpoints(
                f"pattern endpoint {format_rational(x)} does not exceed {format_rational(prev)}",
                index=("pattern", i),
            )
        if s <= 0:
            raise NonPositiveSlope(
                f"pattern slope {format_rational(s)} is not positive", index=("pattern", i)
            )
        pat.append((x, s))
        prev = x
    if prev != base * T:
        raise GeometricConsistencyViolation(
            f"pattern ends at {format_rational(prev)}, expected base*T = {format_rational(base * T)}",
            index=("pattern", len(pat) - 1),
        )
    raw = PLMap(tuple(bps), tuple(slopes), GeometricTail(base, tuple(pat)))
    lhs, rhs = raw.tail_values[-1], base * raw.tail_values[0]
    if lhs != rhs:
        raise GeometricConsistencyViolation(
            f"f(base*T) = {format_rational(lhs)} but base*f(T) = {format_rational(rhs)}",
            index="tail",
        )
    return _canonical(bps, slopes, raw.tail)


def from_samples(points: Sequence[Fraction], values: Sequence[Fraction], tail_spec) -> PLMap:
    """Canonical map through (points, values) on [0, T] with the given tail.

    ``tail_spec`` is ``AffineTail`` or ``(base, pattern_points, pattern_values)``
    where the pattern samples start at T.
    """
    slopes = _diff_slopes(points, values)
    if isinstance(tail_spec, AffineTail):
        return _canonical(list(points), slopes, tail_spec)
    base, ppts, pvals = tail_spec
    pslopes = _diff_slopes(ppts, pvals)
    return _canonical(list(points), slopes, GeometricTail(base, tuple(zip(ppts[1:], pslopes))))


# -- evaluation ---------------------------------------------------------------


def _period(f: PLMap, x: Fraction, *, closed_right: bool = False) -> tuple[int, Fraction]:
    """(k, base**k) with base**k * T <= x < base**(k+1) * T.

    With ``closed_right`` the period is half-open the other way:
    base**k * T < x <= base**(k+1) * T. Requires x >= T (x > T if closed_right).
    """
    lam, T = f.tail.base, f.start
    k = max(0, int(math.floor(log_ratio(x, T) / log_ratio(lam, Fraction(1)))))
    scale = lam**k
    if closed_right:
        while x > scale * lam * T:
            k, scale = k + 1, scale * lam
        while k > 0 and x <= scale * T:
            k, scale = k - 1, scale / lam
    else:
        while x >= scale * lam * T:
            k, scale = k + 1, scale * lam
        while k > 0 and x < scale * T:
            k, scale = k - 1, scale / lam
    return k, scale


def evaluate(f: PLMap, x) -> Fraction:
    """Exact f(x) for x >= 0."""
    x = Fraction(x)
    if x < 0:
        raise NegativeInput(f"x = {format_rational(x)} is negative")
    bps = f.breakpoints
    T = bps[-1]
    if x <= T:
        i = bisect_right(bps, x) - 1
        if i == len(f.slopes):
            return f.values[-1]
        return f.values[i] + f.slopes[i] * (x - bps[i])
    if not f.is_geometric:
        return f.values[-1] + f.tail.slope * (x - T)
    _, scale = _period(f, x)
    y = x / scale
    P, V = f.tail_points, f.tail_values
    j = bisect_right(P, y) - 1
    return (V[j] + f.tail.pieces[j][1] * (y - P[j])) * scale


def evaluate_inverse(f: PLMap, y) -> Fraction:
    """Exact f^-1(y) for y >= 0."""
    y = Fraction(y)
    if y < 0:
        raise NegativeInput(f"y = {format_rational(y)} is negative")
    vals = f.values
    fT = vals[-1]
    if y <= fT:
        i = bisect_right(vals, y) - 1
        if i == len(f.slopes):
            return f.breakpoints[-1]
        return f.breakpoints[i] + (y - vals[i]) / f.slopes[i]
    if not f.is_geometric:
        return f.start + (y - fT) / f.tail.slope
    lam = f.tail.base
    k = max(0, int(math.floor(log_ratio(y, fT) / log_ratio(lam, Fraction(1)))))
    scale = lam**k
    while y >= scale * lam * fT:
        scale *= lam
    while scale > 1 and y < scale * fT:
        scale /= lam
    z = y / scale
    P, V = f.tail_points, f.tail_values
    j = bisect_right(V, z) - 1
    return (P[j] + (z - V[j]) / f.tail.pieces[j][1]) * scale


def slope_right(f: PLMap, x: Fraction) -> Fraction:
    """Slope of f on (x, x + eps)."""
    bps = f.breakpoints
    if x < bps[-1]:
        return f.slopes[bisect_right(bps, x) - 1]
    if not f.is_geometric:
        return f.tail.slope
    _, scale = _period(f, x)
    return f.tail.pieces[bisect_right(f.tail_points, x / scale) - 1][1]


def slope_left(f: PLMap, x: Fraction) -> Fraction:
    """Slope of f on (x - eps, x); needs x > 0."""
    bps = f.breakpoints
    if x <= bps[-1]:
        return f.slopes[bisect_left(bps, x) - 1]
    if not f.is_geometric:
        return f.tail.slope
    _, scale = _period(f, x, closed_right=True)
    return f.tail.pieces[bisect_left(f.tail_points, x / scale) - 1][1]


def points(f: PLMap, a: Fraction, b: Fraction) -> list[Fraction]:
    """Sorted representation breakpoints of f inside [a, b], plus a and b.

    f is affine between consecutive returned points.
    """
    out = {a, b}
    out.update(p for p in f.breakpoints if a < p < b)
    if f.is_geometric and b > f.start:
        lo = max(a, f.start)
        _, scale = _period(f, lo)
        P = f.tail_points
        lam = f.tail.base
        while True:
            for p in P:
                q = p * scale
                if q > b:
                    break
                if q >= a:
                    out.add(q)
            if P[-1] * scale >= b:
                break
            scale *= lam
    return sorted(out)


def _diff_slopes(pts: Sequence[Fraction], vals: Sequence[Fraction]) -> list[Fraction]:
    return [(vals[i + 1] - vals[i]) / (pts[i + 1] - pts[i]) for i in range(len(pts) - 1)]


def _merge(pts: Sequence[Fraction], slopes: Sequence[Fraction]) -> tuple[list, list]:
    """Remove points where the slope does not change."""
    out_p = [pts[0]]
    out_s: list[Fraction] = []
    for p, s in zip(pts[1:], slopes):
        if out_s and out_s[-1] == s:
            out_p[-1] = p
        else:
            out_p.append(p)
            out_s.append(s)
    return out_p, out_s


def _restrict(f: PLMap, a: Fraction, b: Fraction) -> tuple[list, list]:
    pts = points(f, a, b)
    if a == b:
        return [a], []
    return _merge(pts, _diff_slopes(pts, [evaluate(f, p) for p in pts]))


# -- canonical form -----------------------------------------------------------


def _canonical(bps: Sequence[Fraction], slopes: Sequence[Fraction], tail: Tail) -> PLMap:
    bps, slopes = _merge(bps, slopes)
    if isinstance(tail, AffineTail):
        if slopes and slopes[-1] == tail.slope:
            bps.pop()
            slopes.pop()
        return PLMap(tuple(bps), tuple(slopes), tail)
    T = bps[-1]
    ppts, pslopes = _merge([T] + [p for p, _ in tail.pieces], [s for _, s in tail.pieces])
    if len(pslopes) == 1:
        # single repeating slope: consistency forces f(x) = s*x on the tail
        return _canonical(bps, slopes, AffineTail(pslopes[0]))
    f = PLMap(tuple(bps), tuple(slopes), GeometricTail(tail.base, tuple(zip(ppts[1:], pslopes))))
    f = _reduce_period(f)
    return _settle_start(f)


def canonicalize(f: PLMap) -> PLMap:
    return _canonical(f.breakpoints, f.slopes, f.tail)


def _is_period(f: PLMap, mu: Fraction) -> bool:
    T, lam = f.start, f.tail.base
    cand = set(points(f, T, lam * T))
    cand.update(q / mu for q in points(f, mu * T, mu * lam * T))
    return all(evaluate(f, mu * x) == mu * evaluate(f, x) for x in cand)


def _reduce_period(f: PLMap) -> PLMap:
    lam = f.tail.base
    m = len(f.tail.pieces)
    for k in range(m, 1, -1):
        mu = rational_root(lam, k)
        if mu is not None and _is_period(f, mu):
            T = f.start
            ppts, pslopes = _restrict(f, T, mu * T)
            return PLMap(f.breakpoints, f.slopes, GeometricTail(mu, tuple(zip(ppts[1:], pslopes))))
    return f


def _settle_start(f: PLMap) -> PLMap:
    """Move the tail start to the smallest genuine breakpoint of the self-similar region."""
    lam = f.tail.base
    T = f.start
    t_star = None
    while t_star is None:
        lo = T / lam
        cand = {lo, T}
        cand.update(b for b in f.breakpoints if lo < b < T)
        cand.update(q / lam for q in points(f, T, lam * T))
        cand = sorted(cand)
        for left, right in zip(reversed(cand[:-1]), reversed(cand[1:])):
            if slope_right(f, left) != slope_right(f, left * lam):
                t_star = right
                break
        else:
            T = lo
    start = t_star
    if slope_left(f, start) == slope_right(f, start):
        for p in points(f, start, lam * start)[1:]:
            if slope_left(f, p) != slope_right(f, p):
                start = p
                break
    fpts, fslopes = _restrict(f, Fraction(0), start)
    ppts, pslopes = _restrict(f, start, lam * start)
    if len(ppts) - 1 != len(pslopes):
        raise AssertionError("pattern restriction lost coverage")
    # _restrict merges interior points only; the endpoint lam*start is always kept
    return PLMap(tuple(fpts), tuple(fslopes), GeometricTail(lam, tuple(zip(ppts[1:], pslopes))))


# -- group operations ---------------------------------------------------------


def common_base(a: Fraction, b: Fraction, cap: int | None = None) -> Fraction:
    """Smallest common integer power a**p == b**q with p, q <= cap."""
    cap = commensurability_cap(cap)
    if a == b:
        return a
    pa = {}
    v = Fraction(1)
    for p in range(1, cap + 1):
        v *= a
        pa[v] = p
    best = None
    v = Fraction(1)
    for _ in range(cap):
        v *= b
        if v in pa and (best is None or v < best):
            best = v
    if best is None:
        raise IncommensurableScales(
            f"bases {format_rational(a)} and {format_rational(b)} share no integer power "
            f"within cap {cap} (set {CAP_ENV} to raise it)"
        )
    return best


def _result_tail(f: PLMap, g: PLMap, cap: int | None):
    """Tail class of f∘g per the closure table: AffineTail or a geometric base."""
    if not f.is_geometric and not g.is_geometric:
        return AffineTail(f.tail.slope * g.tail.slope)
    if not f.is_geometric:
        if f.intercept != 0:
            raise TailNotClosed(
                "affine tail with nonzero intercept cannot be composed after a geometric tail; "
                "use quotient_compose for the class-level product"
            )
        return g.tail.base
    if not g.is_geometric:
        if g.intercept != 0:
            raise TailNotClosed(
                "geometric tail cannot be composed after an affine tail with nonzero intercept; "
                "use quotient_compose for the class-level product"
            )
        return f.tail.base
    return common_base(f.tail.base, g.tail.base, cap)


def compose(f: PLMap, g: PLMap, cap: int | None = None) -> PLMap:
    """Exact f∘g (g applied first)."""
    tail = _result_tail(f, g, cap)
    X = max(g.start, evaluate_inverse(g, f.start))

    def samples(a, b):
        pts = set(points(g, a, b))
        pts.update(evaluate_inverse(g, y) for y in points(f, evaluate(g, a), evaluate(g, b)))
        pts = sorted(pts)
        return pts, [evaluate(f, evaluate(g, p)) for p in pts]

    fin = samples(Fraction(0), X) if X > 0 else ([Fraction(0)], [Fraction(0)])
    if isinstance(tail, AffineTail):
        return from_samples(fin[0], fin[1], tail)
    pat = samples(X, tail * X)
    return from_samples(fin[0], fin[1], (tail, pat[0], pat[1]))


def invert(f: PLMap) -> PLMap:
    slopes = [1 / s for s in f.slopes]
    if not f.is_geometric:
        return _canonical(list(f.values), slopes, AffineTail(1 / f.tail.slope))
    pat = tuple((v, 1 / s) for v, (_, s) in zip(f.tail_values[1:], f.tail.pieces))
    return _canonical(list(f.values), slopes, GeometricTail(f.tail.base, pat))


def power(f: PLMap, r: int, cap: int | None = None) -> PLMap:
    """f composed with itself r >= 1 times."""
    if r < 1:
        raise ValueError(f"power needs r >= 1, got {r}")
    result = f
    for _ in range(r - 1):
        result = compose(result, f, cap)
    return result


def all_slopes(f: PLMap) -> set[Fraction]:
    out = set(f.slopes)
    if f.is_geometric:
        out.update(f.tail.slopes)
    else:
        out.add(f.tail.slope)
    return out


def slope_bounds(f: PLMap) -> SlopeBounds:
    s = all_slopes(f)
    return SlopeBounds(min(s), max(s))


def bilip_constant(f: PLMap) -> Fraction:
    b = slope_bounds(f)
    return max(b.max_slope, 1 / b.min_slope)


# -- equality -----------------------------------------------------------------


def find_difference(f: PLMap, g: PLMap, cap: int | None = None) -> Fraction | None:
    """A point x with f(x) != g(x), or None if none was found.

    The search window covers one common period past both tail starts, which
    is conclusive whenever the tails are commensurable.
    """
    T = max(f.start, g.start, Fraction(1))
    if f.is_geometric and g.is_geometric:
        try:
            W = common_base(f.tail.base, g.tail.base, cap) * T
        except IncommensurableScales:
            W = f.tail.base * g.tail.base * T
    elif f.is_geometric:
        W = f.tail.base * T
    elif g.is_geometric:
        W = g.tail.base * T
    else:
        W = T + 1
    cand = sorted(set(points(f, Fraction(0), W)) | set(points(g, Fraction(0), W)))
    for x in cand:
        if evaluate(f, x) != evaluate(g, x):
            return x
    return None


def maps_equal(f: PLMap, g: PLMap, cap: int | None = None) -> bool:
    """True iff f(x) == g(x) for all x >= 0."""
    f, g = canonicalize(f), canonicalize(g)
    if f == g:
        return True
    if find_difference(f, g, cap) is not None:
        return False
    raise IncommensurableScales(
        "could not separate maps with incommensurable geometric bases within the search window"
    )


def unroll(f: PLMap, times: int) -> PLMap:
    """Same function, geometric pattern written over base**times (non-canonical)."""
    if not f.is_geometric or times == 1:
        return f
    lam = f.tail.base**times
    ppts, pslopes = _restrict(f, f.start, lam * f.start)
    return PLMap(f.breakpoints, f.slopes, GeometricTail(lam, tuple(zip(ppts[1:], pslopes))))

