import random

import pytest

from ncseries.errors import PreconditionError
from ncseries.ideals import (
    apply_enveloping,
    commutator_kernel_check,
    commutators,
    enveloping,
    ideal_slice,
    membership,
)
from ncseries.series import INF, Series

from conftest import random_exact_series


def X(i, n=2, trunc=INF):
    return Series.var(i, n, trunc, "exact")


def test_enveloping_action_is_two_sided_multiplication():
    f = X(1) * X(2)
    e = enveloping((2,), (1, 2), 2)
    # (A, B) acts as x^A f x^reverse(B)
    assert apply_enveloping(e, f) == X(2) * X(1) * X(2) * X(2) * X(1)


def test_enveloping_product_is_composition_of_actions():
    f = X(1) + X(2) * X(1)
    a = enveloping((1,), (2,), 2)
    b = enveloping((2,), (1, 1), 2)
    assert apply_enveloping(a * b, f) == apply_enveloping(a, apply_enveloping(b, f))


def test_slice_of_principal_ideal():
    sl = ideal_slice([X(1)], 2)
    assert [b.format() for b in sl.basis] == ["x1", "x1*x1", "x1*x2", "x2*x1"]
    assert sl.dimension == 4


def test_membership_and_witness():
    assert not membership(X(2), [X(1)], 3)
    res = membership(X(1) * X(2) * X(1), [X(1)], 3, witness=True)
    assert res
    # reassemble the witness
    total = Series.zero(2, 3, "exact")
    for (a, gi, b), c in res.witness.items():
        total = total + c * Series.monomial(a, 2, 1, 3, "exact") * X(1) * Series.monomial(b, 2, 1, 3, "exact")
    assert total == (X(1) * X(2) * X(1)).truncate(3)


def test_inhomogeneous_generator():
    g = X(1) + X(2) * X(2)
    assert membership(g * X(2), [g], 3)
    # x1 differs from the generator by x2^2, which the ideal does not reach
    assert not membership(X(1), [g], 3)
    # modulo degree 1 the generator is x1
    assert membership(X(1), [g], 1)


def test_series_truncated_below_degree():
    with pytest.raises(PreconditionError):
        membership(Series(2, {(1,): 1}, 2, field="exact"), [X(1)], 3)


def test_commutators():
    assert len(commutators(3)) == 3
    assert commutators(2)[0] == X(1) * X(2) - X(2) * X(1)


def test_commutator_kernel_on_random_series():
    rnd = random.Random(12)
    for _ in range(30):
        f = random_exact_series(rnd, 3, 4, 8, 4)
        assert commutator_kernel_check(f, 4)


def test_abelianization_kernel_is_the_commutator_ideal():
    f = X(1) * X(2) * X(2) - X(2) * X(2) * X(1)
    assert f.abelianize().is_zero()
    assert membership(f, commutators(2), 3)
    # something with nonzero abelianization is not in the commutator ideal
    assert not membership(X(1) * X(2), commutators(2), 3)


def test_float_membership():
    g = Series(2, {(1,): 1.0}, INF, field="real")
    f = Series(2, {(2, 1, 2): 0.5, (1, 1): -2.0}, INF, field="real")
    assert membership(f, [g], 3)
    assert membership(f, [g], 3, witness=True).witness
    assert not membership(Series(2, {(2, 2): 1.0}, INF, field="real"), [g], 3)
