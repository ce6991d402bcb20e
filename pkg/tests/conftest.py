import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from ncseries.series import Series

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def words(n, max_len=5, min_len=0):
    return st.lists(st.integers(1, n), min_size=min_len, max_size=max_len).map(tuple)


small_rationals = st.one_of(
    st.integers(-4, 4),
    st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4)),
)


@st.composite
def exact_series(draw, n=2, max_len=4, max_terms=6, trunc=5, constant=None):
    coeffs = draw(st.dictionaries(words(n, max_len), small_rationals, max_size=max_terms))
    if constant is not None:
        coeffs[()] = constant
    return Series(n, coeffs, trunc, field="exact")


def random_exact_series(rng: random.Random, n, degree, terms, trunc, zero_constant=False, lo=-3, hi=3):
    coeffs = {}
    for _ in range(terms):
        length = rng.randint(1 if zero_constant else 0, degree)
        w = tuple(rng.randint(1, n) for _ in range(length))
        coeffs[w] = rng.randint(lo, hi)
    if zero_constant:
        coeffs.pop((), None)
    return Series(n, coeffs, trunc, field="exact")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
