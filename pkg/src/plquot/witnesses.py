"""Proof-object constructors: anchors, the non-commuting conjugator, torsion
witnesses, conjugation checks, and the seeded map sampler used by the suites."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, replace
from fractions import Fraction

from .asymptotics import (
    CosetDecision,
    SInvariant,
    Singleton,
    coset_equivalent,
    in_H,
    normalize_mod_H,
    s_invariant,
)
from .errors import (
    AnchorBelowTailStart,
    InHNoWitness,
    NotLinearTail,
    RejectionLimitExceeded,
    SlopeNotAboveOne,
)
from .plcore import (
    AffineTail,
    GeometricTail,
    PLMap,
    compose,
    evaluate,
    invert,
    linear,
    power,
    validate,
)
from .rationals import format_rational

HALF = Fraction(1, 2)
FIVE_QUARTERS = Fraction(5, 4)


@dataclass(frozen=True)
class WitnessBundle:
    """Non-commutation certificate for the class of ``target``.

    ``target`` is the normalized input, inverted when its slope was below 1
    (``inverted`` is then True); a partner for [f^-1] is a partner for [f].
    """

    target: PLMap
    inverted: bool
    anchors: tuple[Fraction, ...]
    conjugator: PLMap
    gaps: tuple[Fraction, ...]
    verdict: CosetDecision


def _linear_slope(f: PLMap) -> Fraction:
    if not f.is_linear_tail:
        raise NotLinearTail("anchor sequences need an intercept-free affine tail (normalize first)")
    return f.tail.slope


def anchor_sequence(f: PLMap, a1, n: int) -> list[Fraction]:
    """a_1 = a1, a_{k+1} = 3 f(a_k)."""
    s = _linear_slope(f)
    if s <= 1:
        raise SlopeNotAboveOne(
            f"tail slope {format_rational(s)} is not above 1; invert the map first"
        )
    a = Fraction(a1)
    if a <= 0 or a < f.start:
        raise AnchorBelowTailStart(
            f"a1 = {format_rational(a)} must be positive and at least T = {format_rational(f.start)}"
        )
    out = [a]
    for _ in range(n - 1):
        out.append(3 * evaluate(f, out[-1]))
    return out


def conjugator(s: Fraction, a1: Fraction) -> PLMap:
    """Identity up to a1, then self-similar with base 3s.

    On [a, 3s*a] the pattern has slope 1/2 up to s*a and (5s - 1)/(4s) after,
    so g(s*a) = (1 + s)*a/2 and g(3s*a) = 3s*a.
    """
    return validate(
        [(a1, 1)],
        GeometricTail(3 * s, ((s * a1, HALF), (3 * s * a1, (5 * s - 1) / (4 * s)))),
    )


def noncommute_gap(f: PLMap, g: PLMap, anchors) -> list[Fraction]:
    return [abs(evaluate(f, evaluate(g, a)) - evaluate(g, evaluate(f, a))) / a for a in anchors]


def center_witness(f: PLMap, n_anchors: int = 4, a1=None, cap: int | None = None) -> WitnessBundle:
    """Build g with [f][g] != [g][f] for a map whose class has a linear representative."""
    target = normalize_mod_H(f)
    s = _linear_slope(target)
    inverted = False
    if s < 1:
        target, s, inverted = invert(target), 1 / s, True
    if s == 1:
        raise SlopeNotAboveOne("f lies in H; its class is the identity, which is central")
    lam = 3 * s
    if a1 is None:
        a1 = Fraction(1)
        while a1 < target.start:
            a1 *= lam
    anchors = anchor_sequence(target, a1, n_anchors)
    g = conjugator(s, Fraction(a1))
    verdict = coset_equivalent(compose(target, g, cap), compose(g, target, cap), cap)
    return WitnessBundle(
        target, inverted, tuple(anchors), g, tuple(noncommute_gap(target, g, anchors)), verdict
    )


DEFAULT_PARTNERS = (Fraction(2), Fraction(3), Fraction(5), Fraction(3, 2))


def linear_partner_witness(f: PLMap, partners=DEFAULT_PARTNERS, cap: int | None = None):
    """For a geometric-tail class: first c with [f][cx] != [cx][f], and the decision.

    Returns (c, decision) or None when every partner commutes mod H.
    """
    for c in partners:
        c = Fraction(c)
        lin = linear(c)
        d = coset_equivalent(compose(f, lin, cap), compose(lin, f, cap), cap)
        if not d.equivalent:
            return c, d
    return None


def conjugation_check(f: PLMap, g: PLMap, cap: int | None = None) -> bool:
    """in_H(g^-1 f g)."""
    return in_H(compose(invert(g), compose(f, g, cap), cap))


def torsion_witness(f: PLMap, r: int, cap: int | None = None) -> tuple[SInvariant, bool]:
    if in_H(f):
        raise InHNoWitness("f lies in H; there is no torsion witness to build")
    S = s_invariant(power(normalize_mod_H(f), r, cap))
    return S, S != Singleton(Fraction(1))


# -- sampler ------------------------------------------------------------------


class TailKind(str, enum.Enum):
    AFFINE = "affine"
    LINEAR = "linear"
    GEOMETRIC = "geometric"
    MIXED = "mixed"


@dataclass(frozen=True)
class SampleConfig:
    seed: int = 0
    max_breakpoints: int = 4
    slope_bound: Fraction = Fraction(4)
    denominator_bound: int = 6
    tail_kind: TailKind = TailKind.MIXED
    # forces the tail slope (affine/linear kinds only); slope 1 samples H
    tail_slope: Fraction | None = None
    bases: tuple[Fraction, ...] = (Fraction(2), Fraction(3), Fraction(4))
    max_pattern_pieces: int = 3
    max_tries: int = 200

    def __post_init__(self):
        if Fraction(self.slope_bound) <= 1:
            raise ValueError("slope_bound must exceed 1")
        if self.max_breakpoints < 0 or self.denominator_bound < 1 or self.max_pattern_pieces < 2:
            raise ValueError("sample bounds must be positive")


def _rand_slope(rng: random.Random, K: Fraction, D: int) -> Fraction:
    while True:
        q = rng.randint(1, D)
        s = Fraction(rng.randint(1, int(K * q) + 1), q)
        if 1 / K < s < K:
            return s


def _rand_step(rng: random.Random, D: int) -> Fraction:
    return Fraction(rng.randint(1, 3 * D), rng.randint(1, D))


def _in_bounds(s: Fraction, K: Fraction) -> bool:
    return 1 / K < s < K


def sample_map(cfg: SampleConfig) -> PLMap:
    """Deterministic pseudo-random valid map; the same config gives the same map."""
    rng = random.Random(cfg.seed)
    kind = TailKind(cfg.tail_kind)
    if kind is TailKind.MIXED:
        kind = rng.choice([TailKind.AFFINE, TailKind.LINEAR, TailKind.GEOMETRIC])
    K, D = Fraction(cfg.slope_bound), cfg.denominator_bound
    for _ in range(cfg.max_tries):
        f = _attempt(rng, kind, K, D, cfg)
        if f is not None:
            return f
    raise RejectionLimitExceeded(f"no valid {kind.value} sample after {cfg.max_tries} tries")


def _attempt(rng, kind, K, D, cfg) -> PLMap | None:
    lo = 1 if kind is TailKind.GEOMETRIC else 0
    n = rng.randint(lo, max(lo, cfg.max_breakpoints))
    xs = []
    x = Fraction(0)
    for _ in range(n):
        x += _rand_step(rng, D)
        xs.append(x)
    slopes = [_rand_slope(rng, K, D) for _ in range(n)]

    if kind is TailKind.AFFINE:
        s = Fraction(cfg.tail_slope) if cfg.tail_slope is not None else _rand_slope(rng, K, D)
        return validate(list(zip(xs, slopes)), AffineTail(s))

    if kind is TailKind.LINEAR:
        if cfg.tail_slope is None:
            s = _rand_slope(rng, K, D)
        else:
            s = Fraction(cfg.tail_slope)
        if n:
            # last slope solved so that f(T) = s*T
            head = sum(a * (b - c) for a, b, c in zip(slopes[:-1], xs[:-1], [0] + xs[:-2]))
            last = (s * xs[-1] - head) / (xs[-1] - (xs[-2] if n > 1 else 0))
            if not _in_bounds(last, K):
                return None
            slopes[-1] = last
        return validate(list(zip(xs, slopes)), AffineTail(s))

    lam = rng.choice(cfg.bases)
    T = xs[-1]
    fT = sum(a * (b - c) for a, b, c in zip(slopes, xs, [0] + xs[:-1]))
    m = rng.randint(2, cfg.max_pattern_pieces)
    inner = sorted({T + (lam - 1) * T * Fraction(rng.randint(1, 2 * D - 1), 2 * D) for _ in range(m - 1)})
    pts = inner + [lam * T]
    pslopes = [_rand_slope(rng, K, D) for _ in range(len(pts) - 1)]
    acc = fT
    prev = T
    for p, s in zip(pts[:-1], pslopes):
        acc += s * (p - prev)
        prev = p
    last = (lam * fT - acc) / (pts[-1] - prev)
    if not _in_bounds(last, K):
        return None
    f = validate([*zip(xs, slopes)], GeometricTail(lam, tuple(zip(pts, pslopes + [last]))))
    return f if f.is_geometric else None


def sample_in_H(seed: int, cfg: SampleConfig | None = None, linear_tail: bool = False) -> PLMap:
    """Sample from H (tail slope 1); ``linear_tail`` forces f(x) = x on the tail."""
    cfg = cfg or SampleConfig()
    if linear_tail:
        kind = TailKind.LINEAR
    else:
        kind = random.Random(seed).choice([TailKind.AFFINE, TailKind.LINEAR])
    return sample_map(replace(cfg, seed=seed, tail_kind=kind, tail_slope=Fraction(1)))

