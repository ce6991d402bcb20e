"""Substitution morphisms between noncommutative power series algebras."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import linalg, scalars
from .errors import NotAnAutomorphism, PreconditionError
from .series import INF, Series, compose

RCOND_THRESHOLD = 1e-12


@dataclass(frozen=True)
class Endomorphism:
    """The local morphism x_s -> images[s-1] into series over ``target_n`` letters.

    Despite the name the target alphabet may differ from the source one; the
    Jacobian, inverse and automorphism test need them to agree.
    """

    images: tuple[Series, ...]

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if not images:
            raise PreconditionError("a morphism needs at least one image")
        first = images[0]
        for f in images:
            if f.n != first.n:
                raise PreconditionError("images must share the target alphabet")
            if any(c != 0 for c in f.center):
                raise PreconditionError("images must be centered at 0")
            if f.constant_term != 0:
                raise PreconditionError("images must have zero constant term")

    @classmethod
    def identity(cls, n: int, trunc=INF, field: str = "exact") -> "Endomorphism":
        return cls(tuple(Series.var(i, n, trunc, field) for i in range(1, n + 1)))

    @property
    def source_n(self) -> int:
        return len(self.images)

    @property
    def target_n(self) -> int:
        return self.images[0].n

    @property
    def trunc(self):
        return min(f.trunc for f in self.images)

    @property
    def field(self) -> str:
        return scalars.join_all(f.field for f in self.images)

    def truncate(self, degree) -> "Endomorphism":
        return Endomorphism(tuple(f.truncate(degree) for f in self.images))

    def __call__(self, g: Series) -> Series:
        return apply(self, g)

    def __eq__(self, other):
        if not isinstance(other, Endomorphism):
            return NotImplemented
        return self.images == other.images

    __hash__ = None

    def format(self, names=None, precision=None) -> str:
        return "\n".join(f.format(names, precision) for f in self.images)


def apply(e: Endomorphism, g: Series) -> Series:
    if g.n != e.source_n:
        raise PreconditionError(f"series has {g.n} generators, morphism expects {e.source_n}")
    return compose(g, e.images)


def compose_endos(g: Endomorphism, f: Endomorphism) -> Endomorphism:
    """g o f: first f (x -> y), then g (y -> z); x_s goes to f_s(g_1, ..., g_m)."""
    if g.source_n != f.target_n:
        raise PreconditionError("g must be defined on the target of f")
    return Endomorphism(tuple(compose(fs, g.images) for fs in f.images))


def jacobian(e: Endomorphism) -> np.ndarray:
    """Linear part: entry (k, i) is the coefficient of x_i in the k-th image."""
    if e.source_n != e.target_n:
        raise PreconditionError("the Jacobian is defined for endomorphisms only")
    n = e.source_n
    exact = e.field == "exact"
    out = np.zeros((n, n), dtype=object if exact else complex)
    for k, f in enumerate(e.images):
        for i in range(n):
            out[k, i] = f.coeffs.get((i + 1,), 0)
    return out


def jacobian_rcond(e: Endomorphism) -> float:
    return linalg.rcond(np.asarray(jacobian(e), dtype=complex))


def is_automorphism(e: Endomorphism, threshold: float = RCOND_THRESHOLD) -> bool:
    """Exact: nonzero Jacobian determinant.  Floating: reciprocal condition >= threshold."""
    if e.source_n != e.target_n:
        return False
    jac = jacobian(e)
    if e.field == "exact":
        return linalg.exact_det(jac.tolist()) != 0
    return jacobian_rcond(e) >= threshold


def invert(e: Endomorphism, degree: int | None = None, threshold: float = RCOND_THRESHOLD) -> Endomorphism:
    """The inverse automorphism modulo words longer than ``degree``.

    Built degree by degree: with h known below degree k, the degree-k
    coefficients b_J of h solve Jf . b_J = -[nonlinear part of e evaluated at h]_J,
    one linear system per word J sharing a single factorization of Jf.
    """
    D = e.trunc if degree is None else min(degree, e.trunc)
    if D == INF:
        raise PreconditionError("inverting polynomial images needs an explicit degree")
    D = int(D)
    if e.source_n != e.target_n:
        raise NotAnAutomorphism("source and target alphabets differ")
    n = e.source_n
    field = e.field
    jac = jacobian(e)

    if field == "exact":
        if linalg.exact_det(jac.tolist()) == 0:
            raise NotAnAutomorphism("Jacobian is singular")
        inv = linalg.exact_inverse(jac.tolist())

        def solve(rhs):  # rhs: n x m nested list, returns n x m
            return [[sum(inv[i][s] * rhs[s][j] for s in range(n)) for j in range(len(rhs[0]))] for i in range(n)]
    else:
        rc = linalg.rcond(jac.astype(complex))
        if rc < threshold:
            raise NotAnAutomorphism(f"Jacobian is numerically singular (rcond {rc:.3g} < {threshold:g})")
        lu = scipy.linalg.lu_factor(jac.astype(complex))

        def solve(rhs):
            return scipy.linalg.lu_solve(lu, np.asarray(rhs, dtype=complex)).tolist()

    identity = [[int(i == j) for j in range(n)] for i in range(n)]
    first = solve(identity)
    h = [{(t + 1,): first[i][t] for t in range(n) if first[i][t] != 0} for i in range(n)]
    nonlinear = [Series._raw(n, {w: c for w, c in f.coeffs.items() if len(w) >= 2}, f.trunc, f.field, f.center) for f in e.images]

    for k in range(2, D + 1):
        current = [Series(n, h[i], k, field=field) for i in range(n)]
        rhs_cols = defaultdict(lambda: [0] * n)
        for s, g in enumerate(nonlinear):
            for w, c in compose(g, current).coeffs.items():
                if len(w) == k:
                    rhs_cols[w][s] = -c
        if not rhs_cols:
            continue
        words = sorted(rhs_cols)
        rhs = [[rhs_cols[w][s] for w in words] for s in range(n)]
        sol = solve(rhs)
        for i in range(n):
            for j, w in enumerate(words):
                if sol[i][j] != 0:
                    h[i][w] = sol[i][j]
    return Endomorphism(tuple(Series(n, h[i], D, field=field) for i in range(n)))


def is_identity_mod(e: Endomorphism, degree: int, atol: float = 0.0) -> bool:
    """True iff every image equals its generator modulo words longer than degree."""
    ident = Endomorphism.identity(e.source_n, degree, e.field)
    for f, x in zip(e.images, ident.images):
        f = f.truncate(degree)
        if atol == 0.0:
            if f != x.truncate(f.trunc):
                return False
        elif not f.allclose(x.truncate(f.trunc), atol):
            return False
    return True
