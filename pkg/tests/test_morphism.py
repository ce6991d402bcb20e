import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from ncseries.errors import NotAnAutomorphism, PreconditionError
from ncseries.morphism import (
    Endomorphism,
    apply,
    compose_endos,
    invert,
    is_automorphism,
    is_identity_mod,
    jacobian,
)
from ncseries.series import INF, Series, compose

from conftest import random_exact_series


def X(i, n=2, trunc=INF, field="exact"):
    return Series.var(i, n, trunc, field)


def random_automorphism(rnd, n, D, field="exact"):
    while True:
        lin = [[rnd.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        if round(np.linalg.det(np.array(lin, dtype=float))) != 0:
            break
    images = []
    for k in range(n):
        coeffs = {(i + 1,): lin[k][i] for i in range(n)}
        nl = random_exact_series(rnd, n, 3, 4, D)
        for w, c in nl.coeffs.items():
            if len(w) >= 2:
                coeffs[w] = c
        images.append(Series(n, coeffs, D, field=field))
    return Endomorphism(tuple(images))


def test_identity_morphism():
    e = Endomorphism.identity(2, 5)
    assert is_automorphism(e)
    assert invert(e) == e
    g = X(1) * X(2) + 3
    assert apply(Endomorphism.identity(2), g) == g


def test_images_must_vanish_at_zero():
    with pytest.raises(PreconditionError):
        Endomorphism((X(1) + 1, X(2)))


def test_jacobian_entries():
    e = Endomorphism((X(1) + 2 * X(2) + X(1) * X(1), 3 * X(2)))
    assert jacobian(e).tolist() == [[1, 2], [0, 3]]


def test_invert_one_variable():
    f = Series(1, {(1,): 1, (1, 1): 1}, 6, field="exact")
    inv = invert(Endomorphism((f,)))
    want = {(1,): 1, (1, 1): -1, (1, 1, 1): 2, (1,) * 4: -5, (1,) * 5: 14, (1,) * 6: -42}
    assert dict(inv.images[0].coeffs) == want


def test_singular_jacobian():
    e = Endomorphism((X(1) + X(2), X(1) + X(2) + X(1) * X(2)))
    assert not is_automorphism(e)
    with pytest.raises(NotAnAutomorphism):
        invert(e, 4)


def test_float_threshold():
    e = Endomorphism((Series(2, {(1,): 1.0, (2,): 1.0}, 3, field="real"), Series(2, {(1,): 1.0, (2,): 1.0 + 1e-14}, 3, field="real")))
    assert not is_automorphism(e)
    with pytest.raises(NotAnAutomorphism):
        invert(e)


def test_inverse_round_trip_exact():
    rnd = random.Random(1)
    for _ in range(10):
        e = random_automorphism(rnd, 2, 5)
        h = invert(e)
        assert is_identity_mod(compose_endos(h, e), 5)
        assert is_identity_mod(compose_endos(e, h), 5)


def test_inverse_round_trip_rational_jacobian():
    e = Endomorphism((Fraction(1, 3) * X(1, trunc=4) + X(2, trunc=4) * X(1, trunc=4), X(2, trunc=4) - X(1, trunc=4) * X(1, trunc=4) * X(2, trunc=4)))
    h = invert(e)
    assert is_identity_mod(compose_endos(e, h), 4)
    assert is_identity_mod(compose_endos(h, e), 4)


def test_inverse_round_trip_float():
    rnd = random.Random(2)
    for _ in range(5):
        e = random_automorphism(rnd, 3, 4, field="complex")
        h = invert(e)
        assert is_identity_mod(compose_endos(h, e), 4, atol=1e-9)
        assert is_identity_mod(compose_endos(e, h), 4, atol=1e-9)


def test_polynomial_inverse_needs_degree():
    with pytest.raises(PreconditionError):
        invert(Endomorphism.identity(2))
    assert invert(Endomorphism.identity(2), 3) == Endomorphism.identity(2, 3)


def _observation_coefficients(g, f, K):
    """c_K for g o f from the composed-coefficient formula, by brute force.

    (g o f)(x_s) = f_s(g_1, ..., g_m): expand each letter of every word of f_s
    into a word of the matching g image and collect the concatenations.
    """
    total = 0
    t = len(K)
    for s_word, b in f.coeffs.items():
        if not s_word:
            continue
        for cuts in itertools.combinations(range(1, t), len(s_word) - 1):
            bounds = (0,) + cuts + (t,)
            term = b
            for letter, (lo, hi) in zip(s_word, zip(bounds, bounds[1:])):
                term *= g.images[letter - 1].coefficient(K[lo:hi])
                if term == 0:
                    break
            total += term
    return total


def test_composed_coefficients_match_brute_force():
    rnd = random.Random(4)
    for _ in range(6):
        f = random_automorphism(rnd, 2, 4)
        g = random_automorphism(rnd, 2, 4)
        gf = compose_endos(g, f)
        for s in range(2):
            for d in range(1, 5):
                for K in itertools.product((1, 2), repeat=d):
                    assert gf.images[s].coefficient(K) == _observation_coefficients(g, f.images[s], K)


def test_composition_of_endomorphisms_is_associative():
    rnd = random.Random(6)
    a, b, c = (random_automorphism(rnd, 2, 4) for _ in range(3))
    assert compose_endos(compose_endos(a, b), c) == compose_endos(a, compose_endos(b, c))


def test_apply_matches_compose():
    rnd = random.Random(7)
    e = random_automorphism(rnd, 2, 4)
    g = random_exact_series(rnd, 2, 3, 5, 4)
    assert apply(e, g) == compose(g, e.images)


def test_format():
    assert Endomorphism((X(1) + X(2) * X(1), X(2))).format() == "x1 + x2*x1\nx2"
