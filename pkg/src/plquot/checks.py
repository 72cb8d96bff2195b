"""Seeded property suites, one per result being machine-checked.

Suite names and what they exercise:

    bilip      bounded slopes give a bi-Lipschitz map with constant K
    subgroup   H is closed under composition and inversion, and proper
    normal     g^-1 f g stays in H for f in H
    torsion    no power of a map outside H lands in H (r = 1..8)
    center     non-commuting partners exist for every non-identity class
    algebra    associativity, inverse laws, and quotient associativity
    roundtrip  serialize/parse round trip and byte-stable canonical text
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .asymptotics import (
    Interval,
    coset_equivalent,
    in_H,
    quotient_compose,
    s_invariant,
    torsion_order_check,
)
from .plcore import (
    PLMap,
    all_slopes,
    bilip_constant,
    compose,
    evaluate,
    identity,
    invert,
    linear,
    maps_equal,
    unroll,
)
from .textio import parse, serialize
from .witnesses import (
    FIVE_QUARTERS,
    HALF,
    SampleConfig,
    TailKind,
    center_witness,
    conjugation_check,
    linear_partner_witness,
    sample_in_H,
    sample_map,
)

SUITES = ("bilip", "subgroup", "normal", "torsion", "center", "algebra", "roundtrip")

# bases {2, 4} keep sampled geometric triples commensurable
COMMENSURABLE = (Fraction(2), Fraction(4))


@dataclass
class Failure:
    index: int
    seed: int
    invariant: str
    counterexample: str


@dataclass
class SuiteReport:
    name: str
    samples: int = 0
    failures: list[Failure] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures


def sample_seed(seed: int, index: int) -> int:
    return seed * 1_000_003 + index


def _one_line(*maps: PLMap) -> str:
    return " | ".join(serialize(m).strip().replace("\n", "; ") for m in maps)


class _Runner:
    def __init__(self, name, seed):
        self.report = SuiteReport(name)
        self.seed = seed

    def check(self, index, ok, invariant, *maps):
        if not ok:
            self.report.failures.append(
                Failure(index, sample_seed(self.seed, index), invariant, _one_line(*maps))
            )

    def guard(self, index, fn, *maps):
        """Run fn(); exceptions count as failures of the suite."""
        try:
            fn()
        except Exception as exc:  # noqa: BLE001 - every error is a reportable failure
            self.check(index, False, f"raised {type(exc).__name__}: {exc}", *maps)


def _rand_rational(rng: random.Random, hi: Fraction, den: int = 12) -> Fraction:
    q = rng.randint(1, den)
    return Fraction(rng.randint(0, int(hi * q)), q)


def _window(f: PLMap) -> Fraction:
    T = max(f.start, Fraction(1))
    return T * (f.tail.base**2 if f.is_geometric else 4)


def suite_bilip(seed: int, samples: int, pairs: int = 100) -> SuiteReport:
    run = _Runner("bilip", seed)
    for i in range(samples):
        s = sample_seed(seed, i)
        f = sample_map(SampleConfig(seed=s))
        rng = random.Random(s)
        K = bilip_constant(f)
        W = _window(f)
        for _ in range(pairs):
            x = _rand_rational(rng, W)
            y = _rand_rational(rng, W)
            if x == y:
                y = x + Fraction(1, rng.randint(1, 12))
            d = abs(x - y)
            df = abs(evaluate(f, x) - evaluate(f, y))
            if not (d / K <= df <= K * d):
                run.check(i, False, f"bi-Lipschitz fails at x={x}, y={y}, K={K}", f)
                break
        run.report.samples += 1
    return run.report


def suite_subgroup(seed: int, samples: int) -> SuiteReport:
    run = _Runner("subgroup", seed)
    for i in range(samples):
        s = sample_seed(seed, i)
        f1 = sample_in_H(s)
        f2 = sample_in_H(s + 500_000)

        def body():
            run.check(i, in_H(f1), "sampled member not in H", f1)
            run.check(i, in_H(compose(f1, f2)), "H not closed under composition", f1, f2)
            run.check(i, in_H(invert(f1)), "H not closed under inversion", f1)

        run.guard(i, body, f1, f2)
        run.report.samples += 1
    rng = random.Random(seed)
    ks = [Fraction(3, 2), Fraction(2), Fraction(5)]
    ks += [Fraction(rng.randint(11, 60), 10) for _ in range(5)]
    for j, k in enumerate(ks, start=samples):
        run.check(j, not in_H(linear(k)), f"x -> {k}x found in H", linear(k))
        run.report.samples += 1
    return run.report


def suite_normal(seed: int, samples: int) -> SuiteReport:
    run = _Runner("normal", seed)
    for i in range(samples):
        s = sample_seed(seed, i)
        f = sample_in_H(s, linear_tail=True)
        g = sample_map(SampleConfig(seed=s + 500_000))
        run.guard(i, lambda: run.check(i, conjugation_check(f, g), "g^-1 f g not in H", f, g), f, g)
        run.report.samples += 1
    return run.report


def _outside_H(s: int) -> PLMap:
    for attempt in range(100):
        f = sample_map(SampleConfig(seed=s + attempt * 7919))
        if not in_H(f):
            return f
    raise RuntimeError("sampler kept producing members of H")


def suite_torsion(seed: int, samples: int, r_max: int = 8) -> SuiteReport:
    run = _Runner("torsion", seed)
    for i in range(samples):
        f = _outside_H(sample_seed(seed, i))

        def body():
            for r, S, member in torsion_order_check(f, r_max):
                if member:
                    run.check(i, False, f"power r={r} lies in H (S = {S})", f)
                    break

        run.guard(i, body, f)
        run.report.samples += 1
    return run.report


def verify_witness(bundle) -> list[str]:
    """Machine-check the conjugator conditions; returns violated conditions."""
    bad = []
    f, g, a = bundle.target, bundle.conjugator, bundle.anchors
    s = f.tail.slope
    if g.breakpoints != (0, a[0]) or g.slopes != (1,):
        bad.append("(a) g is not the identity on [0, a_1]")
    for k in range(len(a) - 1):
        if a[k + 1] < 3 * evaluate(f, a[k]):
            bad.append(f"anchor rule fails at k={k + 1}")
        if evaluate(g, a[k]) != a[k] or evaluate(g, a[k + 1]) != a[k + 1]:
            bad.append(f"(b) g(I_k) != I_k at k={k + 1}")
        fa = evaluate(f, a[k])
        if not a[k] < fa < a[k + 1]:
            bad.append(f"f(a_k) outside I_k at k={k + 1}")
        if evaluate(g, fa) != (a[k] + fa) / 2:
            bad.append(f"(c) g(f(a_k)) != (a_k + f(a_k))/2 at k={k + 1}")
    pattern = set(g.tail.slopes)
    if pattern != {HALF, (5 * s - 1) / (4 * s)}:
        bad.append(f"unexpected pattern slope set {sorted(pattern)}")
    if not all(HALF <= t < FIVE_QUARTERS for t in all_slopes(g)):
        bad.append("slope outside [1/2, 5/4)")
    if g.tail.pieces[0][0] != s * a[0] or len(g.tail.pieces) != 2:
        bad.append("(c) pattern does not have exactly one break point at f(a_k)")
    expected = (s - 1) / 2
    if any(gap != expected for gap in bundle.gaps):
        bad.append(f"gaps {bundle.gaps} differ from (s-1)/2 = {expected}")
    if bundle.verdict.equivalent or bundle.verdict.gap != expected:
        bad.append(f"coset verdict {bundle.verdict}")
    return bad


def suite_center(seed: int, samples: int) -> SuiteReport:
    run = _Runner("center", seed)
    fixed = [Fraction(3, 2), Fraction(2), Fraction(3), Fraction(5)]
    for i in range(samples):
        s = sample_seed(seed, i)
        rng = random.Random(s)
        if i < len(fixed) or rng.random() < 0.5:
            if i < len(fixed):
                slope = fixed[i]
            else:
                slope = Fraction(rng.randint(2, 39), 10)
                slope = slope if slope != 1 else Fraction(1, 2)
            f = sample_map(SampleConfig(seed=s, tail_kind=TailKind.AFFINE, tail_slope=slope))

            def body():
                bundle = center_witness(f)
                for problem in verify_witness(bundle):
                    run.check(i, False, problem, f, bundle.conjugator)

        else:
            f = sample_map(SampleConfig(seed=s, tail_kind=TailKind.GEOMETRIC))

            def body():
                run.check(i, linear_partner_witness(f) is not None, "no non-commuting partner", f)

        run.guard(i, body, f)
        run.report.samples += 1
    return run.report


def _closed_triple(rng: random.Random, s: int):
    if rng.random() < 0.4:
        cfg = SampleConfig(tail_kind=TailKind.AFFINE, max_breakpoints=3)
        return [sample_map(replace(cfg, seed=s + j)) for j in range(3)]
    out = []
    for j in range(3):
        kind = rng.choice([TailKind.LINEAR, TailKind.GEOMETRIC])
        cfg = SampleConfig(seed=s + j, tail_kind=kind, bases=COMMENSURABLE, max_breakpoints=2)
        out.append(sample_map(cfg))
    return out


def suite_algebra(seed: int, samples: int) -> SuiteReport:
    run = _Runner("algebra", seed)
    for i in range(samples):
        s = sample_seed(seed, i)
        rng = random.Random(s)
        f, g, h = _closed_triple(rng, s)

        def laws():
            lhs = compose(h, compose(g, f))
            rhs = compose(compose(h, g), f)
            run.check(i, maps_equal(lhs, rhs), "compose is not associative", f, g, h)
            run.check(i, maps_equal(compose(f, invert(f)), identity()), "f f^-1 != id", f)
            run.check(i, maps_equal(compose(invert(f), f), identity()), "f^-1 f != id", f)

        run.guard(i, laws, f, g, h)
        cfg = SampleConfig(bases=COMMENSURABLE, max_breakpoints=2)
        qf, qg, qh = (sample_map(replace(cfg, seed=s + 10 + j)) for j in range(3))

        def quotient():
            left = quotient_compose(quotient_compose(qf, qg), qh)
            right = quotient_compose(qf, quotient_compose(qg, qh))
            run.check(
                i,
                coset_equivalent(left, right).equivalent,
                "quotient_compose not associative mod H",
                qf,
                qg,
                qh,
            )

        run.guard(i, quotient, qf, qg, qh)
        run.report.samples += 1
    return run.report


def suite_roundtrip(seed: int, samples: int) -> SuiteReport:
    run = _Runner("roundtrip", seed)
    for i in range(samples):
        f = sample_map(SampleConfig(seed=sample_seed(seed, i)))

        def body():
            text = serialize(f)
            back = parse(text)
            run.check(i, maps_equal(back, f), "parse(serialize(f)) != f", f)
            run.check(i, serialize(back) == text, "serializer not byte-stable", f)
            if f.is_geometric:
                run.check(i, serialize(unroll(f, 2)) == text, "unrolled form serializes differently", f)

        run.guard(i, body, f)
        run.report.samples += 1
    return run.report


_RUNNERS = {
    "bilip": suite_bilip,
    "subgroup": suite_subgroup,
    "normal": suite_normal,
    "torsion": suite_torsion,
    "center": suite_center,
    "algebra": suite_algebra,
    "roundtrip": suite_roundtrip,
}


def run_suite(name: str, seed: int, samples: int) -> SuiteReport:
    start = time.perf_counter()
    report = _RUNNERS[name](seed, samples)
    report.wall_time = time.perf_counter() - start
    return report


def s_shape_ok(f: PLMap) -> bool:
    """S is a singleton or an interval with lo < hi, inside [1/K, K]."""
    S = s_invariant(f)
    K = bilip_constant(f)
    lo, hi = (S.lo, S.hi) if isinstance(S, Interval) else (S.value, S.value)
    return 1 / K <= lo <= hi <= K
