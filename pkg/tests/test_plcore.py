from fractions import Fraction as F

import pytest
from hypothesis import assume, given, strategies as st

from plquot.errors import (
    EmptyMap,
    GeometricConsistencyViolation,
    IncommensurableScales,
    NegativeInput,
    NonMonotoneBreakpoints,
    NonPositiveSlope,
    TailNotClosed,
)
from plquot.plcore import (
    AffineTail,
    GeometricTail,
    PLMap,
    all_slopes,
    bilip_constant,
    canonicalize,
    common_base,
    compose,
    evaluate,
    evaluate_inverse,
    identity,
    invert,
    linear,
    maps_equal,
    power,
    slope_bounds,
    unroll,
    validate,
)

from .oracles import grid, walk_eval
from .strategies import affine_maps, geometric_maps, maps, positive_rationals, scale_free_maps


# -- validate -----------------------------------------------------------------


def test_validate_identity():
    assert validate([], AffineTail(1)) == identity()


def test_validate_geometric_example(geo):
    assert geo.is_geometric
    assert geo.tail.base == 2
    assert geo.tail_values[-1] == 2 * geo.tail_values[0] == 2


def test_validate_geometric_inconsistent():
    with pytest.raises(GeometricConsistencyViolation):
        validate([(1, 1)], GeometricTail(2, ((F(3, 2), F(1, 2)), (2, 1))))


@pytest.mark.parametrize(
    "pieces, tail, exc",
    [
        ([(1, 2), (F(1, 2), 3)], AffineTail(1), NonMonotoneBreakpoints),
        ([(0, 2)], AffineTail(1), NonMonotoneBreakpoints),
        ([(1, 0)], AffineTail(1), NonPositiveSlope),
        ([(1, -1)], AffineTail(1), NonPositiveSlope),
        ([], AffineTail(0), NonPositiveSlope),
        ([(1, 1)], None, EmptyMap),
        ([(1, 1)], GeometricTail(2, ()), EmptyMap),
        ([], GeometricTail(2, ((1, 1),)), GeometricConsistencyViolation),
        ([(1, 1)], GeometricTail(1, ((1, 1),)), GeometricConsistencyViolation),
        ([(1, 1)], GeometricTail(2, ((3, 1),)), GeometricConsistencyViolation),
        ([(1, 1)], GeometricTail(2, ((F(3, 2), 1), (F(5, 4), 1))), NonMonotoneBreakpoints),
    ],
)
def test_validate_errors(pieces, tail, exc):
    with pytest.raises(exc):
        validate(pieces, tail)


def test_removable_breakpoints_are_merged():
    assert validate([(1, 2), (3, 2)], AffineTail(2)) == linear(2)


def test_single_slope_geometric_becomes_linear():
    f = validate([(1, 3)], GeometricTail(2, ((F(3, 2), 3), (2, 3))))
    assert f == linear(3)


def test_tail_start_moves_back_to_self_similar_region(geo):
    # finite part already follows the pattern on [1, 2]
    g = validate([(1, 1), (F(3, 2), F(1, 2)), (2, F(3, 2))], GeometricTail(2, ((3, F(1, 2)), (4, F(3, 2)))))
    assert g == geo


def test_minimal_base(geo):
    assert canonicalize(unroll(geo, 3)) == geo
    assert unroll(geo, 3).tail.base == 8


# -- evaluate -----------------------------------------------------------------


def test_evaluate_examples(geo):
    assert evaluate(identity(), F(7, 2)) == F(7, 2)
    assert evaluate(validate([(1, F(1, 2))], AffineTail(2)), 3) == F(9, 2)
    # frozen from the piece-walking oracle
    assert evaluate(geo, 6) == 5
    assert geo(F(3, 2)) == F(5, 4)


def test_evaluate_negative():
    with pytest.raises(NegativeInput):
        evaluate(identity(), -1)


@given(maps, st.lists(st.fractions(min_value=0, max_value=500, max_denominator=30), min_size=1, max_size=20))
def test_evaluate_matches_walk_oracle(f, xs):
    for x in xs:
        assert evaluate(f, x) == walk_eval(f, x)


@given(maps, st.fractions(min_value=0, max_value=500, max_denominator=30))
def test_inverse_evaluation(f, y):
    assert evaluate(f, evaluate_inverse(f, y)) == y


@given(maps, st.lists(st.fractions(min_value=0, max_value=300, max_denominator=20), min_size=2, max_size=30))
def test_monotone(f, xs):
    xs = sorted(set(xs))
    ys = [evaluate(f, x) for x in xs]
    assert all(a < b for a, b in zip(ys, ys[1:]))


@given(geometric_maps, st.fractions(min_value=0, max_value=100, max_denominator=20))
def test_geometric_self_similarity(f, u):
    x = f.start + u
    lam = f.tail.base
    assert evaluate(f, lam * x) == lam * evaluate(f, x)


# -- compose / invert / power -------------------------------------------------


def test_compose_linear():
    assert compose(linear(2), linear(3)) == linear(6)


def test_compose_affine_example():
    f = validate([(1, 3)], AffineTail(2))
    h = compose(f, linear(2))
    assert h == validate([(F(1, 2), 6)], AffineTail(4))
    assert h(1) == 5
    # pointwise oracle: f(g(x)) walked independently, and 4x + 1 past 1/2
    for x in grid(0, 10, 41):
        assert h(x) == walk_eval(f, 2 * x)
        if x >= F(1, 2):
            assert h(x) == 4 * x + 1


def test_compose_tail_not_closed(geo):
    f = validate([(1, 3)], AffineTail(2))
    with pytest.raises(TailNotClosed, match="quotient_compose"):
        compose(f, geo)
    with pytest.raises(TailNotClosed):
        compose(geo, f)


def test_compose_incommensurable(geo):
    other = validate([(1, 1)], GeometricTail(3, ((2, F(1, 2)), (3, F(3, 2)))))
    with pytest.raises(IncommensurableScales):
        compose(geo, other)


def test_common_base():
    assert common_base(F(2), F(4)) == 4
    assert common_base(F(4), F(8)) == 64
    assert common_base(F(9, 4), F(3, 2)) == F(9, 4)
    with pytest.raises(IncommensurableScales):
        common_base(F(2), F(3))
    with pytest.raises(IncommensurableScales):
        common_base(F(2), F(2**20), cap=16)


def test_cap_env_override(monkeypatch):
    monkeypatch.setenv("PLQ_COMMENSURABILITY_CAP", "32")
    assert common_base(F(2), F(2**20)) == 2**20
    monkeypatch.setenv("PLQ_COMMENSURABILITY_CAP", "2")
    with pytest.raises(IncommensurableScales):
        common_base(F(2), F(8))


def test_invert_examples(geo):
    assert invert(linear(2)) == linear(F(1, 2))
    f = validate([(1, F(1, 2))], AffineTail(2))
    fi = invert(f)
    assert fi == validate([(F(1, 2), 2)], AffineTail(F(1, 2)))
    assert maps_equal(compose(fi, f), identity())
    gi = invert(geo)
    assert gi.tail.pieces == ((F(5, 4), 2), (2, F(2, 3)))
    assert maps_equal(compose(geo, gi), identity())


def test_power_examples(geo):
    assert power(linear(2), 3) == linear(8)
    assert power(identity(), 5) == identity()
    sq = power(geo, 2)
    assert sq.is_geometric and sq.tail.base == 2
    assert sq(F(3, 2)) == F(9, 8)
    for x in grid(0, 20, 81):
        assert sq(x) == walk_eval(geo, walk_eval(geo, x))


def test_slope_bounds_and_bilip(geo):
    assert slope_bounds(identity()).min_slope == slope_bounds(identity()).max_slope == 1
    b = slope_bounds(geo)
    assert (b.min_slope, b.max_slope) == (F(1, 2), F(3, 2))
    f = validate([(1, 3)], AffineTail(2))
    assert (slope_bounds(f).min_slope, slope_bounds(f).max_slope) == (2, 3)
    assert bilip_constant(identity()) == 1
    assert bilip_constant(geo) == 2
    assert bilip_constant(f) == 3


def test_maps_equal_examples(geo):
    assert maps_equal(identity(), identity())
    raw = PLMap((F(0), F(1)), (F(2),), AffineTail(F(2)))
    assert maps_equal(raw, linear(2))
    assert maps_equal(unroll(geo, 2), geo)
    assert not maps_equal(geo, invert(geo))


@given(maps)
def test_inverse_laws(f):
    assert maps_equal(compose(f, invert(f)), identity())
    assert maps_equal(compose(invert(f), f), identity())


@given(st.one_of(st.tuples(affine_maps, affine_maps, affine_maps), st.tuples(scale_free_maps, scale_free_maps, scale_free_maps)))
def test_associativity(triple):
    f, g, h = triple
    assert maps_equal(compose(h, compose(g, f)), compose(compose(h, g), f))


@given(maps, maps)
def test_composite_pointwise(f, g):
    try:
        h = compose(f, g)
    except (TailNotClosed, IncommensurableScales):
        assume(False)
    for x in grid(0, 60, 25):
        assert h(x) == walk_eval(f, walk_eval(g, x))


@given(st.one_of(st.tuples(affine_maps, affine_maps), st.tuples(scale_free_maps, scale_free_maps)))
def test_slope_multiplicativity(pair):
    f, g = pair
    products = {a * b for a in all_slopes(f) for b in all_slopes(g)}
    assert all_slopes(compose(f, g)) <= products


@given(maps, st.lists(st.tuples(st.fractions(min_value=0, max_value=200, max_denominator=16), st.fractions(min_value=0, max_value=200, max_denominator=16)), min_size=1, max_size=50))
def test_bilipschitz(f, pairs):
    K = bilip_constant(f)
    for x, y in pairs:
        d = abs(x - y)
        df = abs(f(x) - f(y))
        assert d / K <= df <= K * d


@given(maps)
def test_canonical_form_is_stable(f):
    assert canonicalize(f) == f
    if f.is_geometric:
        assert canonicalize(unroll(f, 2)) == f


@given(maps, positive_rationals)
def test_equality_detects_perturbation(f, c):
    assume(c != 1)
    assert not maps_equal(f, compose(linear(c), f))
