import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ncseries.errors import (
    ExpansionTooLarge,
    NoWitness,
    OutsideStableRegion,
    PreconditionError,
    SamplingError,
    StableRegionUndecided,
)
from ncseries.matrep import (
    GenericMatrixPoly,
    block_rank,
    convergence_probe,
    divergence_witness,
    evaluate,
    identity_level,
    injectivity_rank,
    is_identity,
    mat_basis,
    matrix_coordinates,
    phi,
    rep_from_point,
    seminorm,
    stalls,
    tail_profile,
)
from ncseries.matrix_tuple import MatrixTuple, opnorm
from ncseries.series import (
    INF,
    CoefficientOracle,
    Series,
    majorant_radius,
    standard_identity,
    substitute_xy,
    substituted_degree,
    substituted_standard_sum,
)
from ncseries.words import words_of_length

from conftest import exact_series

E12 = np.array([[0, 1], [0, 0]])
E21 = E12.T


def X(i, n=2, trunc=INF, field="exact"):
    return Series.var(i, n, trunc, field)


def commutator():
    return X(1) * X(2) - X(2) * X(1)


def random_tuple(rng, n, k, scale=1.0):
    return MatrixTuple(scale * (rng.normal(size=(n, k, k)) + 1j * rng.normal(size=(n, k, k))))


# -- basis and phi -----------------------------------------------------------


def test_basis():
    b = mat_basis(2)
    assert (b[0] == np.eye(2)).all()
    assert [tuple(np.argwhere(e)[0]) for e in b[1:]] == [(0, 1), (1, 0), (1, 1)]
    M = MatrixTuple([[[1, 2], [3, 4]]])
    coords = matrix_coordinates(M)
    assert np.allclose(sum(c * e for c, e in zip(coords, b)), M[0])


def test_phi_of_a_variable_is_the_generic_matrix():
    p = phi(Series.var(1, 1, INF, "exact"), 1)
    assert p.terms() == {(1,): np.array([[1]], dtype=object)}
    p2 = phi(X(2), 2)
    terms = p2.terms()
    # x_2 -> x_{2,1} I + x_{2,2} E12 + x_{2,3} E21 + x_{2,4} E22
    assert len(terms) == 4
    assert (terms[(0, 0, 0, 0, 1, 0, 0, 0)] == np.eye(2, dtype=int)).all()
    assert terms[(0, 0, 0, 0, 0, 0, 0, 1)][1, 1] == 1


def _sympy_phi(f, k):
    syms = sympy.symbols(f"x0:{f.n * k * k}")
    gens = []
    for i in range(f.n):
        m = sympy.zeros(k, k)
        for j, e in enumerate(mat_basis(k)):
            m += syms[i * k * k + j] * sympy.Matrix(e)
        gens.append(m)
    total = sympy.zeros(k, k)
    for w, c in f.coeffs.items():
        term = sympy.eye(k) * sympy.Rational(c)
        for a in w:
            term = term * gens[a - 1]
        total += term
    return total.applyfunc(sympy.expand), syms


def _as_sympy(p: GenericMatrixPoly, syms):
    out = sympy.zeros(p.k, p.k)
    for exps, mat in p.terms().items():
        mono = sympy.Mul(*[s**e for s, e in zip(syms, exps)])
        out += sympy.Matrix(mat.tolist()) * mono
    return out.applyfunc(sympy.expand)


@pytest.mark.parametrize("f", [commutator(), substitute_xy(2), X(1) * X(1) * X(2) + 3 - X(2)])
def test_phi_matches_symbolic_expansion(f):
    got, syms = _sympy_phi(f, 2)
    assert _as_sympy(phi(f, 2), syms) == got


@settings(max_examples=25)
@given(exact_series(n=2, max_len=3, max_terms=4, trunc=3), exact_series(n=2, max_len=3, max_terms=4, trunc=3))
def test_phi_is_a_homomorphism(f, g):
    assert phi(f * g, 2) == phi(f, 2) * phi(g, 2)
    assert phi(f + g, 2) == phi(f, 2) + phi(g, 2)


def test_phi_respects_degrees():
    f = Series(2, {(): 1, (1,): 2, (1, 2, 2): -1}, 4, field="exact")
    p = phi(f, 2)
    for d in range(5):
        assert p.homogeneous(d) == phi(f.homogeneous_component(d), 2)


def test_phi_of_s4_vanishes():
    assert phi(standard_identity(4), 2).is_zero()
    assert not phi(standard_identity(2), 2).is_zero()
    assert not phi(standard_identity(3), 2).is_zero()


def test_phi_needs_zero_center():
    with pytest.raises(PreconditionError):
        phi(Series(1, {(1,): 1}, 3, field="exact", center=(1,)), 1)


def test_phi_cap():
    with pytest.raises(ExpansionTooLarge):
        phi(X(1), 5)
    assert phi(X(1), 5, max_k=5).num_terms() > 0
    with pytest.raises(ExpansionTooLarge):
        phi(standard_identity(4), 2, max_terms=10)


def test_truncated_products_drop_high_degrees():
    f = Series(1, {(1,): 1, (1, 1): 1}, 3, field="exact")
    p = phi(f, 2) * phi(f, 2) * phi(f, 2)
    assert p == phi(f * f * f, 2)
    assert p.trunc == 3


# -- evaluation --------------------------------------------------------------


def test_evaluate_constant():
    M = MatrixTuple(np.ones((2, 3, 3)))
    ev = evaluate(Series.constant(5, 2, INF, "exact"), M)
    assert np.allclose(ev.value, 5 * np.eye(3))
    assert ev.tail_norms == [5.0]


def test_geometric_series_at_a_matrix(rng):
    A = rng.normal(size=(3, 3))
    A *= 0.6 / max(abs(np.linalg.eigvals(A)))
    geo = Series.from_oracle(CoefficientOracle.from_rule(1, lambda w: 1), 60, field="real")
    ev = evaluate(geo, MatrixTuple([A]), 60)
    assert np.abs(ev.value - np.linalg.inv(np.eye(3) - A)).max() < 1e-8


def test_evaluate_subtracts_center():
    f = Series(1, {(1, 1): 1}, 2, field="real", center=(2.0,))
    ev = evaluate(f, MatrixTuple.scalars([5.0]))
    assert ev.value[0, 0] == pytest.approx(9.0)


def test_evaluate_dimension_mismatch():
    with pytest.raises(PreconditionError):
        evaluate(X(1), MatrixTuple(np.zeros((3, 2, 2))))
    with pytest.raises(PreconditionError):
        evaluate(Series(2, {(1,): 1}, 2, field="exact"), MatrixTuple(np.zeros((2, 2, 2))), 5)


def test_s4_vanishes_on_random_tuples(rng):
    s4 = standard_identity(4)
    for _ in range(50):
        M = random_tuple(rng, 4, 2)
        scale = M.max_norm()
        assert opnorm(evaluate(s4, M).value) <= 1e-9 * scale**4


def test_commutation_square(rng):
    # evaluating f at M equals substituting M's coordinates into phi(f)
    for k in (1, 2, 3):
        for D in (2, 4):
            f = Series(2, {w: int(rng.integers(-3, 4)) for w in itertools.islice(words_of_length(2, D), 0, None, 3)}, INF, field="exact")
            f = f + Series(2, {(1,): 1, (): 2}, INF, field="exact")
            M = random_tuple(rng, 2, k)
            got = phi(f, k).evaluate(matrix_coordinates(M))
            assert np.allclose(got, evaluate(f, M).value, atol=1e-9)


# -- identities --------------------------------------------------------------


def test_is_identity_examples():
    assert is_identity(standard_identity(4), 2)
    assert not is_identity(standard_identity(2), 2)
    assert not is_identity(standard_identity(3), 2)
    assert is_identity(commutator(), 1)


def test_non_identity_has_a_numeric_witness(rng):
    s2 = standard_identity(2)
    M = random_tuple(rng, 2, 2)
    assert opnorm(evaluate(s2, M).value) > 1e-3


def test_float_identity_is_toleranced():
    s4 = standard_identity(4).with_field("real")
    assert is_identity(s4, 2)
    assert not is_identity(standard_identity(3).with_field("real"), 2)


def test_identity_levels():
    assert identity_level(commutator(), 2) == 1
    assert identity_level(standard_identity(4), 2) == 2
    assert identity_level(substitute_xy(2), 2) == 1
    assert identity_level(substitute_xy(4), 2) == 2
    assert identity_level(X(1), 2) == 0


def test_levels_are_nested():
    corpus = [standard_identity(2), standard_identity(3), standard_identity(4), commutator(), substitute_xy(2), substitute_xy(4)]
    for f in corpus:
        flags = [is_identity(f, k) for k in (1, 2)]
        assert flags[1] <= flags[0]


def test_certified_identities_have_no_low_degree_part():
    corpus = [standard_identity(4), substitute_xy(4), standard_identity(4) + Series(4, {(1, 2): 1, (2, 1): -1}, INF, field="exact")]
    for f in corpus:
        for k in (1, 2):
            if is_identity(f, k):
                assert all(len(w) >= 2 * k for w in f.coeffs)


def test_truncated_standard_sum_has_finite_level():
    f = substituted_standard_sum(14)
    # the l = 1 term x*y is not even a scalar identity
    assert identity_level(f, 2) == 0
    tail = f - substitute_xy(1).truncate(14)
    assert identity_level(tail, 2) == 1


# -- injectivity -------------------------------------------------------------


def test_injectivity_low_degree():
    rep = injectivity_rank(2, 3, 2)
    assert rep.rank == rep.dimension == 15
    assert rep.injective


@pytest.mark.parametrize("k", [1, 2])
def test_injectivity_one_variable(k):
    rep = injectivity_rank(k, 2 * k - 1, 1)
    assert rep.injective


def test_rank_deficiency_at_degree_2k():
    perms = [tuple(p) for p in itertools.permutations((1, 2, 3, 4))]
    assert block_rank(perms, 2, 4) == 23
    assert block_rank(perms[:5], 2, 4) == 5
    rep = injectivity_rank(1, 2, 2)
    assert rep.by_degree[2] == (3, 4)


# -- seminorms ---------------------------------------------------------------


def test_seminorm_examples(rng):
    samples = [MatrixTuple.scalars([q]) for q in (0.1, -0.7, 0.3j)]
    assert seminorm(Series.zero(1, INF, "exact"), samples) == 0.0
    assert seminorm(Series.var(1, 1, INF, "exact"), samples) == pytest.approx(0.7)
    assert seminorm(X(1), []) == 0.0


def test_seminorm_subadditive_and_monotone(rng):
    samples = [random_tuple(rng, 2, 2, 0.3) for _ in range(6)]
    f = Series(2, {(1, 2): 2, (2,): -1, (): 1}, INF, field="exact")
    g = Series(2, {(2, 1): 1.5, (1,): 1}, INF, field="real")
    assert seminorm(f + g, samples) <= seminorm(f, samples) + seminorm(g, samples) + 1e-12
    assert seminorm(f, samples[:3]) <= seminorm(f, samples)


def test_seminorm_threads(monkeypatch, rng):
    samples = [random_tuple(rng, 2, 2, 0.3) for _ in range(6)]
    f = Series(2, {(1, 2): 2, (2,): -1}, INF, field="exact")
    serial = seminorm(f, samples)
    monkeypatch.setenv("NCSERIES_THREADS", "4")
    assert seminorm(f, samples) == serial


# -- probing and witnesses ---------------------------------------------------


def test_stall_rule():
    assert stalls([1.0] * 30)
    assert not stalls([0.5**d for d in range(30)])
    assert not stalls([0.0] * 30)
    assert stalls([2.0**d for d in range(30)])


def test_probe_geometric_series():
    geo = Series.from_oracle(CoefficientOracle.from_rule(1, lambda w: 1), 5, field="real")
    rep = convergence_probe(geo, 0.5, 1, 40, trials=4, seed=1)
    assert rep.verdict == "no divergence detected"
    for s in rep.samples:
        assert s.bounds.upper < 0.5
        ratios = [b / a for a, b in zip(s.tails[1:], s.tails[2:])]
        assert max(ratios) < 0.5 + 1e-9


def test_probe_standard_sum_tails_vanish():
    f = substituted_standard_sum(20)
    rep = convergence_probe(f, 0.9, 2, 27, trials=3, seed=2)
    assert rep.verdict == "no divergence detected"
    # f_l with l >= 3 vanishes on 2x2 matrices, so only degrees 2 and 5 survive
    for s in rep.samples:
        if s.k == 2:
            assert all(t < 1e-9 for d, t in enumerate(s.tails) if d > 5)


def test_probe_flags_a_divergent_series():
    grow = Series.from_oracle(CoefficientOracle.from_rule(1, lambda w: 4.0 ** len(w)), 5, field="real")
    rep = convergence_probe(grow, 0.5, 1, 30, trials=3, seed=0)
    assert rep.verdict == "divergence suspected"
    assert rep.witness is not None


def test_probe_sampling_failure():
    geo = Series.from_oracle(CoefficientOracle.from_rule(1, lambda w: 1), 5, field="real")
    with pytest.raises(SamplingError):
        convergence_probe(geo, 1.0, 1, 10, trials=3, max_attempts=2, max_depth=1, tol=1e9)


def test_witness_scalar():
    M = MatrixTuple.scalars([0.9])
    w = divergence_witness(M, 30)
    for d in range(1, 31):
        assert w.coefficient((1,) * d) == pytest.approx(0.9**-d)
    assert majorant_radius(w).radius == pytest.approx(0.9)
    tails = tail_profile(w, M, 30)
    assert all(abs(t - 1) < 1e-12 for t in tails[1:])
    assert tail_profile(w, MatrixTuple.scalars([0.5]), 40)[-1] < 1e-6


def test_witness_pair_norms_are_one(rng):
    M = random_tuple(rng, 2, 2, 0.7)
    w = divergence_witness(M, 8)
    tails = tail_profile(w, M, 8)
    assert all(abs(t - 1) < 1e-12 for t in tails[1:])
    from ncseries.jsr import jsr_estimate

    b = jsr_estimate(M)
    assert majorant_radius(w).radius >= b.lower - 1e-12
    # strictly inside the stable region of radius |M| the tails decay
    inner = M.scale(0.5 * b.lower / b.upper)
    t = tail_profile(w, inner, 30)
    assert t[-1] < 1e-3


def test_witness_needs_positive_spectral_radius():
    with pytest.raises(NoWitness):
        divergence_witness(MatrixTuple([E12]), 6)
    with pytest.raises(NoWitness):
        divergence_witness(MatrixTuple.zeros(2, 2), 4)


def test_rep_from_point():
    q = MatrixTuple.scalars([0.3, -0.2j])
    rep = rep_from_point(q, 1.0)
    assert rep(X(1))[0, 0] == pytest.approx(0.3)
    assert rep(X(2))[0, 0] == pytest.approx(-0.2j)
    f = X(1) * X(2) + 1
    assert rep(f)[0, 0] == pytest.approx(1 + 0.3 * -0.2j)


def test_rep_distinguishes_points(rng):
    M = random_tuple(rng, 2, 2, 0.2)
    mats = np.array(M.matrices)
    mats[1, 0, 1] += 0.01
    N = MatrixTuple(mats)
    a, b = rep_from_point(M, 1.0), rep_from_point(N, 1.0)
    assert np.allclose(a(X(1)), M[0]) and np.allclose(a(X(2)), M[1])
    assert not np.allclose(a(X(2)), b(X(2)))


def test_rep_outside_and_undecided():
    pair = MatrixTuple([E12, E21])
    with pytest.raises(OutsideStableRegion):
        rep_from_point(pair.scale(2), 1.0)
    with pytest.raises(StableRegionUndecided):
        rep_from_point(pair, 1.0 + 5e-7)
