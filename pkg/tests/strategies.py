from fractions import Fraction

from hypothesis import strategies as st

from plquot.witnesses import SampleConfig, TailKind, sample_in_H, sample_map

seeds = st.integers(min_value=0, max_value=10**6)

maps = st.builds(lambda s: sample_map(SampleConfig(seed=s)), seeds)
geometric_maps = st.builds(lambda s: sample_map(SampleConfig(seed=s, tail_kind=TailKind.GEOMETRIC)), seeds)
# tails that always compose with each other: affine-only, or intercept-free with bases {2, 4}
affine_maps = st.builds(lambda s: sample_map(SampleConfig(seed=s, tail_kind=TailKind.AFFINE)), seeds)
scale_free_maps = st.builds(
    lambda s, k: sample_map(
        SampleConfig(seed=s, tail_kind=k, bases=(Fraction(2), Fraction(4)), max_breakpoints=2)
    ),
    seeds,
    st.sampled_from([TailKind.LINEAR, TailKind.GEOMETRIC]),
)
commensurable_maps = st.builds(
    lambda s: sample_map(SampleConfig(seed=s, bases=(Fraction(2), Fraction(4)), max_breakpoints=2)),
    seeds,
)
h_members = st.builds(sample_in_H, seeds)
h_linear_members = st.builds(lambda s: sample_in_H(s, linear_tail=True), seeds)
positive_rationals = st.fractions(min_value=Fraction(1, 8), max_value=Fraction(8), max_denominator=12)
