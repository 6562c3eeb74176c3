from fractions import Fraction

from hypothesis import settings, strategies as st

settings.register_profile("default", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("default")

small_fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
nonzero_fractions = small_fractions.filter(lambda x: x != 0)
exponents = st.builds(Fraction, st.integers(-12, 12), st.sampled_from((1, 2, 3)))
