import itertools
from collections import Counter

import pytest

from ncseries.errors import PreconditionError
from ncseries.series import INF, BiSeries, Series
from ncseries.words import count_embeddings, embeddings, remove_along, words_up_to


def bx(i, n=2):
    return BiSeries.x(i, n, n, INF, "exact")


def by(i, n=2):
    return BiSeries.y(i, n, n, INF, "exact")


def test_y_commutes_with_x():
    assert bx(1) * by(1) == by(1) * bx(1)
    assert bx(1) * by(2) * bx(2) == bx(1) * bx(2) * by(2)


def test_y_letters_keep_their_order():
    assert by(1) * by(2) != by(2) * by(1)


def test_unit_law():
    one = BiSeries.one(2, 2, INF, "exact")
    a = bx(1) * by(2) + 3 * bx(2)
    assert a * one == a == one * a


def test_block_mismatch():
    with pytest.raises(PreconditionError):
        BiSeries.x(1, 2, 2) * BiSeries.x(1, 3, 2)


def _central_binomial(I, n=2):
    prod = BiSeries.one(n, n, INF, "exact")
    for i in I:
        prod = prod * (bx(i, n) + by(i, n))
    return prod


@pytest.mark.parametrize("I", [w for w in words_up_to(2, 5)])
def test_central_binomial_expansion(I):
    # (x + y)^I = sum over embeddings alpha: J -> I of x^J y^(I -_alpha J)
    want = Counter()
    for J in words_up_to(2, len(I)):
        for alpha in embeddings(J, I):
            want[(tuple(J), tuple(remove_along(I, alpha)))] += 1
    got = _central_binomial(I)
    assert dict(got.coeffs) == {k: v for k, v in want.items() if v}


@pytest.mark.parametrize("I", [w for w in words_up_to(3, 4)] + [w for w in itertools.product((1, 2), repeat=6)][::7])
def test_word_binomial_identity(I):
    # (x + 1)^I = sum_{J <= I} binom(I, J) x^J
    n = max(I, default=1)
    got = _central_binomial(I, n).specialize_y([1] * n)
    want = {}
    for J in words_up_to(n, len(I)):
        c = count_embeddings(J, I)
        if c:
            want[tuple(J)] = c
    assert got == Series(n, want, INF, field="exact")


def test_specialize_needs_all_values():
    with pytest.raises(PreconditionError):
        bx(1).specialize_y([1])


def test_from_blocks():
    f = Series(2, {(1, 2): 2}, 3, field="exact")
    assert BiSeries.from_x(f, 2).coeffs == {((1, 2), ()): 2}
    assert BiSeries.from_y(f, 2).coeffs == {((), (1, 2)): 2}
