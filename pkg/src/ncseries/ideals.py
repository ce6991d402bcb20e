"""Completed two-sided ideals, seen one truncation degree at a time.

An element of the enveloping algebra is a :class:`BiSeries` whose x-block acts
on the left and whose y-block is the opposite algebra acting on the right: the
monomial (A, B) sends f to x^A f x^reverse(B).  Up to degree D the completed
ideal generated by g_1..g_m is the span of the truncations of x^A g_i x^B.
"""

from __future__ import annotations

import functools
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from . import linalg, scalars
from .errors import PreconditionError
from .series import INF, BiSeries, Series, lift_sorted
from .words import words_of_length


def enveloping(left, right, n: int, c=1, field: str = "exact") -> BiSeries:
    """The monomial x^left (x)^op-word right of the enveloping algebra."""
    return BiSeries(n, n, {(tuple(left), tuple(right)): c}, field=field)


def apply_enveloping(e: BiSeries, f: Series) -> Series:
    if e.nx != e.ny or e.nx != f.n:
        raise PreconditionError("enveloping element and series use different alphabets")
    trunc = min(e.trunc, f.trunc)
    acc = defaultdict(int)
    for (a, b), c in e.coeffs.items():
        tail = b[::-1]
        for w, v in f.coeffs.items():
            if len(a) + len(w) + len(b) <= trunc:
                acc[a + w + tail] += c * v
    return Series(f.n, acc, trunc, field=scalars.join(e.field, f.field))


def commutators(n: int, field: str = "exact") -> list[Series]:
    out = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            out.append(Series(n, {(i, j): 1, (j, i): -1}, INF, field=field))
    return out


@dataclass
class Membership:
    member: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.member


@dataclass
class IdealSlice:
    """The degree-<=D part of a completed finitely generated ideal.

    ``spanning`` lists the (left word, generator index, right word) triples
    whose products span the slice; ``basis`` is a linearly independent subset
    of the span in reduced echelon form.
    """

    n: int
    degree: int
    field: str
    generators: list[Series]
    spanning: list[tuple]
    vectors: list[dict]
    basis: list[Series] = field(default_factory=list)
    _blocks: list = field(default_factory=list, repr=False)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def contains(self, f: Series, tol: float = 1e-9) -> bool:
        vec = {w: c for w, c in f.truncate(self.degree).coeffs.items()}
        for cols, rows, pivots in self._blocks:
            col_set = set(cols)
            part = {w: vec.pop(w) for w in list(vec) if w in col_set}
            if not part:
                continue
            if self.field == "exact":
                v = [part.get(w, 0) for w in cols]
                for row, p in zip(rows, pivots):
                    if v[p] != 0:
                        a = v[p]
                        v = [x - a * y for x, y in zip(v, row)]
                if any(x != 0 for x in v):
                    return False
            else:
                v = np.array([complex(part.get(w, 0)) for w in cols])
                resid = v - (v @ rows.conj().T) @ rows if len(rows) else v
                if np.linalg.norm(resid) > tol * max(1.0, np.linalg.norm(v)):
                    return False
        # words outside every block cannot be reached by the ideal
        if self.field == "exact":
            return not vec
        return all(abs(complex(c)) <= tol for c in vec.values())

    def witness(self, f: Series) -> dict | None:
        """Coefficients over ``spanning`` reproducing f modulo degree D, or None."""
        target = f.truncate(self.degree).coeffs
        cols = sorted(set(target) | {w for v in self.vectors for w in v}, key=lambda w: (len(w), w))
        index = {w: i for i, w in enumerate(cols)}
        m = len(self.vectors)
        if self.field == "exact":
            rows = [[0] * (m + 1) for _ in cols]
            for j, v in enumerate(self.vectors):
                for w, c in v.items():
                    rows[index[w]][j] = c
            for w, c in target.items():
                rows[index[w]][m] = c
            if not rows:
                return {}
            rref, pivots = linalg.exact_rref(rows, m + 1)
            if m in pivots:
                return None
            sol = {}
            for r, p in enumerate(pivots):
                if rref[r][m] != 0:
                    sol[self.spanning[p]] = rref[r][m]
            return sol
        a = np.zeros((len(cols), m), dtype=complex)
        b = np.zeros(len(cols), dtype=complex)
        for j, v in enumerate(self.vectors):
            for w, c in v.items():
                a[index[w], j] = c
        for w, c in target.items():
            b[index[w]] = c
        if m == 0:
            return {} if not np.any(b) else None
        x, *_ = np.linalg.lstsq(a, b, rcond=None)
        if np.linalg.norm(a @ x - b) > 1e-9 * max(1.0, np.linalg.norm(b)):
            return None
        return {self.spanning[j]: complex(x[j]) for j in range(m) if abs(x[j]) > 1e-14}


def _homogeneous(f: Series) -> bool:
    return len(f.degrees()) <= 1


def ideal_slice(gens, degree: int) -> IdealSlice:
    """Span of the truncations of x^A g x^B with |A| + |B| + order(g) <= degree."""
    gens = list(gens)
    if not gens:
        raise PreconditionError("need at least one generator")
    n = gens[0].n
    for g in gens:
        if g.n != n:
            raise PreconditionError("generators must share an alphabet")
        if g.trunc < degree:
            raise PreconditionError(f"generator truncated at {g.trunc} < {degree}")
    fld = scalars.join_all(g.field for g in gens)
    spanning, vectors = [], []
    for gi, g in enumerate(gens):
        g = g.truncate(degree)
        low = g.order()
        if low is None:
            continue
        for ab in range(degree - low + 1):
            for a_len in range(ab + 1):
                for a in words_of_length(n, a_len):
                    for b in words_of_length(n, ab - a_len):
                        vec = {}
                        for w, c in g.coeffs.items():
                            if a_len + len(w) + len(b) <= degree:
                                vec[tuple(a) + w + tuple(b)] = c
                        if vec:
                            spanning.append((tuple(a), gi, tuple(b)))
                            vectors.append(vec)

    # homogeneous generators give homogeneous products: eliminate degree by degree
    if all(_homogeneous(g.truncate(degree)) for g in gens):
        groups = defaultdict(list)
        for v in vectors:
            groups[len(next(iter(v)))].append(v)
        blocks_in = [groups[d] for d in sorted(groups)]
    else:
        blocks_in = [vectors] if vectors else []

    blocks, basis = [], []
    for vecs in blocks_in:
        cols = sorted({w for v in vecs for w in v}, key=lambda w: (len(w), w))
        index = {w: i for i, w in enumerate(cols)}
        if fld == "exact":
            dense = [[0] * len(cols) for _ in vecs]
            for r, v in enumerate(vecs):
                for w, c in v.items():
                    dense[r][index[w]] = c
            rref, pivots = linalg.exact_rref(dense, len(cols))
            rows = rref[: len(pivots)]
            blocks.append((cols, rows, pivots))
            for row in rows:
                basis.append(Series(n, {w: c for w, c in zip(cols, row) if c != 0}, degree, field="exact"))
        else:
            dense = np.zeros((len(vecs), len(cols)), dtype=complex)
            for r, v in enumerate(vecs):
                for w, c in v.items():
                    dense[r, index[w]] = c
            _, s, vh = np.linalg.svd(dense, full_matrices=False)
            rank = int(np.sum(s > 1e-10 * max(1.0, s[0]))) if s.size else 0
            rows = vh[:rank]
            blocks.append((cols, rows, None))
            for row in rows:
                basis.append(Series(n, {w: c for w, c in zip(cols, row) if abs(c) > 1e-14}, degree, field="complex"))
    return IdealSlice(n, degree, fld, gens, spanning, vectors, basis, blocks)


def membership(f: Series, gens, degree: int, witness: bool = False) -> Membership:
    """Is f, modulo words longer than degree, in the completed ideal (gens)?"""
    if f.trunc < degree:
        raise PreconditionError(f"series truncated at {f.trunc} < {degree}")
    sl = ideal_slice(gens, degree)
    if witness:
        w = sl.witness(f)
        return Membership(w is not None, w)
    return Membership(sl.contains(f))


@functools.lru_cache(maxsize=32)
def commutator_slice(n: int, degree: int, field: str = "exact") -> IdealSlice:
    return ideal_slice(commutators(n, field), degree)


def commutator_kernel_check(f: Series, degree: int) -> bool:
    """f minus the sorted lift of its abelianization lies in the commutator ideal."""
    if f.trunc < degree:
        raise PreconditionError(f"series truncated at {f.trunc} < {degree}")
    f = f.truncate(degree)
    diff = f - lift_sorted(f.abelianize()).truncate(degree)
    fld = "exact" if f.field == "exact" else "complex"
    return commutator_slice(f.n, degree, fld).contains(diff)
