"""Matrix representations: the generic-matrix homomorphism and evaluation at tuples.

The generic matrix for generator i is sum_j E_j x_{ij} in the fixed basis
E_1 = identity, then the elementary matrices E_rc with (r, c) != (1, 1) in
lexicographic order.  Variables are numbered v = (i - 1) k^2 + j - 1.

Matrix-valued commutative polynomials store each entry as a dict from a packed
integer key to a coefficient: key = deg B^N + sum_v e_v B^v with N = n k^2 and a
base B exceeding every exponent, so multiplying monomials is adding keys.
"""

from __future__ import annotations

import math
import os
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import linalg, scalars
from .errors import (
    ExpansionTooLarge,
    NoWitness,
    OutsideStableRegion,
    PreconditionError,
    SamplingError,
    StableRegionUndecided,
)
from .jsr import DEFAULT_MAX_DEPTH, DEFAULT_TOL, JsrBounds, Region, in_stable_region, jsr_estimate
from .matrix_tuple import MatrixTuple, opnorm, opnorms
from .series import INF, CoefficientOracle, Series
from .words import Word, abelianize_word, words_of_length

MAX_K = 4
MAX_TERMS = 4_000_000


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("NCSERIES_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn, items):
    """Ordered map, threaded when NCSERIES_THREADS > 1."""
    items = list(items)
    workers = min(_workers(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(fn, items))


# -- basis and coordinates ---------------------------------------------------


def mat_basis(k: int) -> list[np.ndarray]:
    """E_1 = I, then E_rc for (r, c) != (1, 1) in lexicographic order."""
    basis = [np.eye(k, dtype=int)]
    for r in range(k):
        for c in range(k):
            if (r, c) != (0, 0):
                e = np.zeros((k, k), dtype=int)
                e[r, c] = 1
                basis.append(e)
    return basis


def matrix_coordinates(M: MatrixTuple) -> np.ndarray:
    """Coordinates x_{ij} of M in the fixed basis, flattened as v = i k^2 + j (0-based)."""
    k = M.k
    out = np.zeros((M.n, k * k), dtype=complex)
    for i, m in enumerate(M.matrices):
        out[i] = m.reshape(-1)
        out[i, 0] = m[0, 0]
        for t in range(1, k):
            out[i, t * k + t] = m[t, t] - m[0, 0]
    return out.reshape(-1)


def _generic_entries(i: int, k: int) -> list[list[list[int]]]:
    """Variables in entry (r, s) of the generic matrix of generator i (0-based)."""
    base = i * k * k
    out = [[[] for _ in range(k)] for _ in range(k)]
    for r in range(k):
        for s in range(k):
            if r == s:
                out[r][s].append(base)
                if r > 0:
                    out[r][s].append(base + r * k + r)
            else:
                out[r][s].append(base + r * k + s)
    return out


# -- matrix-valued commutative polynomials ----------------------------------


class GenericMatrixPoly:
    """A k x k matrix of commutative polynomials in n k^2 variables."""

    __slots__ = ("k", "n", "trunc", "field", "base", "entries")

    def __init__(self, k: int, n: int, entries, trunc=INF, field: str = "exact", base: int = 2):
        self.k, self.n, self.trunc, self.field, self.base = k, n, trunc, field, base
        self.entries = entries

    @property
    def nvars(self) -> int:
        return self.n * self.k * self.k

    @property
    def _top(self) -> int:
        return self.base**self.nvars

    @classmethod
    def zero(cls, k: int, n: int, trunc=INF, field: str = "exact") -> "GenericMatrixPoly":
        return cls(k, n, [[{} for _ in range(k)] for _ in range(k)], trunc, field)

    def exponents(self, key: int) -> tuple[int, ...]:
        out = []
        key %= self._top
        for _ in range(self.nvars):
            key, e = divmod(key, self.base)
            out.append(e)
        return tuple(out)

    def _pack(self, exps, base: int) -> int:
        key = sum(exps) * base**self.nvars
        for v, e in enumerate(exps):
            key += e * base**v
        return key

    def _rebased(self, base: int) -> list[list[dict]]:
        if base == self.base:
            return self.entries
        return [[{self._pack(self.exponents(key), base): c for key, c in e.items()} for e in row] for row in self.entries]

    def _max_degree(self) -> int:
        top = self._top
        return max((key // top for row in self.entries for e in row for key in e), default=0)

    def _check(self, other: "GenericMatrixPoly"):
        if (self.k, self.n) != (other.k, other.n):
            raise PreconditionError("generic matrix polynomials of different shapes")

    def __add__(self, other: "GenericMatrixPoly") -> "GenericMatrixPoly":
        self._check(other)
        return self._combine(other, 1)

    def __sub__(self, other: "GenericMatrixPoly") -> "GenericMatrixPoly":
        self._check(other)
        return self._combine(other, -1)

    def _combine(self, other, sign) -> "GenericMatrixPoly":
        base = max(self.base, other.base)
        trunc = min(self.trunc, other.trunc)
        a, b = self._rebased(base), other._rebased(base)
        top = base**self.nvars
        out = []
        for r in range(self.k):
            row = []
            for c in range(self.k):
                acc = defaultdict(int)
                for key, v in a[r][c].items():
                    acc[key] += v
                for key, v in b[r][c].items():
                    acc[key] += sign * v
                row.append({key: v for key, v in acc.items() if v != 0 and key // top <= trunc})
            out.append(row)
        return GenericMatrixPoly(self.k, self.n, out, trunc, scalars.join(self.field, other.field), base)

    def __mul__(self, other: "GenericMatrixPoly") -> "GenericMatrixPoly":
        self._check(other)
        trunc = min(self.trunc, other.trunc)
        bound = trunc if trunc != INF else self._max_degree() + other._max_degree()
        base = max(2, int(bound) + 1)
        a, b = self._rebased(base), other._rebased(base)
        top = base**self.nvars
        k = self.k
        out = []
        for r in range(k):
            row = []
            for c in range(k):
                acc = defaultdict(int)
                for s in range(k):
                    for k1, v1 in a[r][s].items():
                        for k2, v2 in b[s][c].items():
                            key = k1 + k2
                            # a carry can only raise the apparent degree, and those terms are dropped
                            if key // top <= bound:
                                acc[key] += v1 * v2
                row.append({key: v for key, v in acc.items() if v != 0})
            out.append(row)
        return GenericMatrixPoly(k, self.n, out, trunc, scalars.join(self.field, other.field), base)

    def is_zero(self, tol: float = 0.0) -> bool:
        if tol == 0.0:
            return not any(e for row in self.entries for e in row)
        return all(abs(v) <= tol for row in self.entries for e in row for v in e.values())

    def num_terms(self) -> int:
        return sum(len(e) for row in self.entries for e in row)

    def max_abs(self) -> float:
        return max((abs(complex(v)) for row in self.entries for e in row for v in e.values()), default=0.0)

    def homogeneous(self, d: int) -> "GenericMatrixPoly":
        top = self._top
        ents = [[{key: v for key, v in e.items() if key // top == d} for e in row] for row in self.entries]
        return GenericMatrixPoly(self.k, self.n, ents, self.trunc, self.field, self.base)

    def terms(self) -> dict[tuple[int, ...], np.ndarray]:
        """Exponent vector -> dense k x k coefficient matrix."""
        out = {}
        dtype = object if self.field == "exact" else complex
        for r, row in enumerate(self.entries):
            for c, e in enumerate(row):
                for key, v in e.items():
                    exps = self.exponents(key)
                    if exps not in out:
                        out[exps] = np.zeros((self.k, self.k), dtype=dtype)
                    out[exps][r, c] = v
        return dict(sorted(out.items(), key=lambda kv: (sum(kv[0]), kv[0])))

    def evaluate(self, coords) -> np.ndarray:
        """Substitute numeric values for the n k^2 coordinates."""
        coords = np.asarray(coords, dtype=complex).reshape(-1)
        if coords.size != self.nvars:
            raise PreconditionError(f"expected {self.nvars} coordinates, got {coords.size}")
        out = np.zeros((self.k, self.k), dtype=complex)
        cache = {}
        for r, row in enumerate(self.entries):
            for c, e in enumerate(row):
                total = 0j
                for key, v in e.items():
                    if key not in cache:
                        cache[key] = complex(np.prod(coords ** np.array(self.exponents(key))))
                    total += complex(v) * cache[key]
                out[r, c] = total
        return out

    def __eq__(self, other):
        if not isinstance(other, GenericMatrixPoly):
            return NotImplemented
        if (self.k, self.n) != (other.k, other.n):
            return False
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self) -> str:
        return f"GenericMatrixPoly(k={self.k}, n={self.n}, terms={self.num_terms()})"


def _series_degree(f: Series) -> int:
    if f.trunc != INF:
        return int(f.trunc)
    return f.degree() or 0


def phi(f: Series, k: int, *, max_k: int = MAX_K, max_terms: int = MAX_TERMS) -> GenericMatrixPoly:
    """Substitute the generic k x k matrices into f (truncated series map to truncated polys)."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    if k > max_k:
        raise ExpansionTooLarge(f"k = {k} exceeds the expansion cap {max_k}; raise max_k to override")
    if any(c != 0 for c in f.center):
        raise PreconditionError("phi needs a series centered at 0; shift the center first")
    n = f.n
    fld = f.field
    D = _series_degree(f)
    base = max(2, D + 1)
    nvars = n * k * k
    top = base**nvars
    shifts = [
        [[[top + base**v for v in cell] for cell in row] for row in _generic_entries(i, k)] for i in range(n)
    ]
    coeffs = dict(f.coeffs)
    count = [0]

    def horner(terms: dict) -> list[list[dict]]:
        # value = c_empty I + sum_a G_a * value(children_a)
        out = [[defaultdict(int) for _ in range(k)] for _ in range(k)]
        if () in terms:
            for t in range(k):
                out[t][t][0] += terms[()]
        children = defaultdict(dict)
        for w, c in terms.items():
            if w:
                children[w[0]][w[1:]] = c
        for a in sorted(children):
            inner = horner(children[a])
            g = shifts[a - 1]
            for r in range(k):
                for s in range(k):
                    for shift in g[r][s]:
                        for c in range(k):
                            target = out[r][c]
                            for key, v in inner[s][c].items():
                                target[key + shift] += v
        result = [[{key: v for key, v in e.items() if v != 0} for e in row] for row in out]
        count[0] = sum(len(e) for row in result for e in row)
        if count[0] > max_terms:
            raise ExpansionTooLarge(f"generic-matrix expansion exceeds {max_terms} terms")
        return result

    entries = horner(coeffs) if coeffs else [[{} for _ in range(k)] for _ in range(k)]
    return GenericMatrixPoly(k, n, entries, f.trunc, fld, base)


# -- evaluation --------------------------------------------------------------


@dataclass
class Evaluation:
    """Partial sum of a series at a matrix tuple plus per-degree term norms."""

    value: np.ndarray
    tail_norms: list[float]
    components: list[np.ndarray] = field(default_factory=list, repr=False)

    @property
    def degree(self) -> int:
        return len(self.tail_norms) - 1


def _prepare(f: Series, degree: int | None) -> tuple[Series, int]:
    D = _series_degree(f) if degree is None else int(degree)
    if D < 0:
        raise PreconditionError("degree must be nonnegative")
    if D > f.trunc:
        if f.oracle is None:
            raise PreconditionError(f"degree {D} exceeds truncation {f.trunc} and no oracle is attached")
        f = f.extend(D)
    return f.truncate(D), D


def _horner_numeric(terms: dict, mats: np.ndarray) -> np.ndarray:
    k = mats.shape[1]
    out = np.zeros((k, k), dtype=complex)
    if () in terms:
        out += complex(terms[()]) * np.eye(k)
    children = defaultdict(dict)
    for w, c in terms.items():
        if w:
            children[w[0]][w[1:]] = c
    for a in sorted(children):
        out += mats[a - 1] @ _horner_numeric(children[a], mats)
    return out


def evaluate(f: Series, M: MatrixTuple, degree: int | None = None) -> Evaluation:
    """sum_{|I|<=D} a_I (M - p)^I together with the norms of each degree-d part."""
    M = M if isinstance(M, MatrixTuple) else MatrixTuple(M)
    if M.n != f.n:
        raise PreconditionError(f"series has {f.n} generators but the tuple has {M.n} matrices")
    f, D = _prepare(f, degree)
    k = M.k
    mats = M.matrices - np.array([complex(p) * np.eye(k) for p in f.center]).reshape(M.n, k, k)
    by_degree = defaultdict(dict)
    for w, c in f.coeffs.items():
        by_degree[len(w)][w] = c
    comps = []
    for d in range(D + 1):
        comps.append(_horner_numeric(by_degree[d], mats) if by_degree.get(d) else np.zeros((k, k), dtype=complex))
    value = np.sum(comps, axis=0) if comps else np.zeros((k, k), dtype=complex)
    return Evaluation(value, [opnorm(c) for c in comps], comps)


def tail_profile(f: Series, M: MatrixTuple, degree: int | None = None) -> list[float]:
    return evaluate(f, M, degree).tail_norms


# -- identities --------------------------------------------------------------


def is_identity(f: Series, k: int, degree: int | None = None, tol: float = 1e-9, max_k: int = MAX_K) -> bool:
    """True iff phi of every homogeneous component of degree <= D vanishes.

    Exact series give an exact answer; floating series are compared against
    ``tol`` times the largest coefficient.
    """
    f, D = _prepare(f, degree)
    scale = max((abs(complex(c)) for c in f.coeffs.values()), default=0.0)
    for d in range(D + 1):
        comp = f.homogeneous_component(d)
        if comp.is_zero():
            continue
        p = phi(comp, k, max_k=max_k)
        if f.field == "exact":
            if not p.is_zero():
                return False
        elif not p.is_zero(tol * max(1.0, scale)):
            return False
    return True


def identity_level(f: Series, k_max: int, degree: int | None = None, max_k: int = MAX_K) -> int:
    """Largest k <= k_max with f in I_k (the levels are nested), or 0."""
    level = 0
    for k in range(1, k_max + 1):
        if not is_identity(f, k, degree, max_k=max_k):
            break
        level = k
    return level


@dataclass
class InjectivityReport:
    k: int
    n: int
    d_max: int
    rank: int
    dimension: int
    by_degree: dict[int, tuple[int, int]]

    @property
    def injective(self) -> bool:
        return self.rank == self.dimension


def block_rank(words, k: int, n: int) -> int:
    """Exact rank of the images of the given monomials under phi."""
    words = [tuple(w) for w in words]
    if not words:
        return 0
    columns, rows = {}, []
    for w in words:
        p = phi(Series(n, {w: 1}, INF, field="exact"), k)
        row = {}
        for r, ents in enumerate(p.entries):
            for c, e in enumerate(ents):
                for key, v in e.items():
                    col = columns.setdefault((r, c, p.exponents(key)), len(columns))
                    row[col] = v
        rows.append(row)
    dense = [[row.get(j, 0) for j in range(len(columns))] for row in rows]
    return linalg.exact_rank(dense) if columns else 0


def injectivity_rank(k: int, d_max: int, n: int) -> InjectivityReport:
    """Rank of phi on polynomials of degree <= d_max, against sum_d n^d.

    phi keeps both the total degree and the letter content (every coordinate
    belongs to one generator), so the rank splits into blocks of words with a
    common abelianization.  Full rank is expected for d_max < 2k; from degree
    2k on the standard identity lies in the kernel once n >= 2k.
    """
    if d_max < 0:
        raise PreconditionError("d_max must be nonnegative")
    by_degree = {}
    for d in range(d_max + 1):
        blocks = defaultdict(list)
        for w in words_of_length(n, d):
            blocks[abelianize_word(w, n)].append(w)
        rank = sum(_map(lambda ws: block_rank(ws, k, n), list(blocks.values())))
        by_degree[d] = (rank, n**d)
    rank = sum(r for r, _ in by_degree.values())
    dim = sum(m for _, m in by_degree.values())
    return InjectivityReport(k, n, d_max, rank, dim, by_degree)


# -- seminorms and probing ---------------------------------------------------


def seminorm(f: Series, samples, degree: int | None = None) -> float:
    """max over the samples of the operator norm of the partial sum."""
    samples = list(samples)
    if not samples:
        return 0.0
    return max(_map(lambda M: opnorm(evaluate(f, M, degree).value), samples))


def stalls(tails, ratio: float = 0.999) -> bool:
    """Heuristic divergence flag: the supremum of the remaining term norms does
    not shrink between the middle and the last third of the degree range."""
    tails = list(tails)
    D = len(tails) - 1
    if D < 3:
        return False
    a, b = D // 3, (2 * D) // 3
    late = max(tails[b:])
    mid = max(tails[a:])
    if late == 0.0 or not math.isfinite(mid):
        return not math.isfinite(mid)
    return late >= ratio * mid


@dataclass
class ProbeSample:
    k: int
    point: MatrixTuple
    bounds: JsrBounds
    tails: list[float]
    stalled: bool


@dataclass
class ProbeReport:
    radius: float
    degree: int
    verdict: str  # "no divergence detected" or "divergence suspected"
    witness: MatrixTuple | None
    samples: list[ProbeSample]

    def summary(self, precision: int = 6) -> str:
        lines = [f"verdict: {self.verdict}"]
        for s in self.samples:
            late = max(s.tails[(2 * self.degree) // 3 :]) if s.tails else 0.0
            lines.append(f"k={s.k} jsr<={s.bounds.upper:.{precision}f} late_tail={late:.{precision}e} stalled={s.stalled}")
        return "\n".join(lines)


def _draw(rng, n: int, k: int, r: float, field: str) -> MatrixTuple:
    a = rng.normal(size=(n, k, k))
    if field != "real":
        a = a + 1j * rng.normal(size=(n, k, k))
    norms = np.linalg.norm(a, ord=2, axis=(1, 2))
    m = r * rng.uniform(0.1, 1.0)
    return MatrixTuple(a * (m / norms.max()))


def convergence_probe(
    f: Series,
    r: float,
    k_max: int,
    degree: int,
    trials: int = 8,
    seed: int = 0,
    *,
    field: str = "complex",
    max_attempts: int | None = None,
    tol: float = DEFAULT_TOL,
    max_depth: int = 10,
    ratio: float = 0.999,
) -> ProbeReport:
    """Evaluate f at random tuples with certified JSR < r and inspect the tails.

    A report of no detected divergence is not a proof of convergence.
    """
    if not r > 0:
        raise PreconditionError("radius must be positive")
    if degree > f.trunc and f.oracle is None:
        raise PreconditionError("probing beyond the truncation needs a coefficient oracle")
    rng = np.random.default_rng(seed)
    attempts = max_attempts if max_attempts is not None else 50 * trials
    points = []
    for k in range(1, k_max + 1):
        got = 0
        for _ in range(attempts):
            M = _draw(rng, f.n, k, r, field)
            verdict = in_stable_region(M, None, r, tol, max_depth)
            if verdict.region is Region.INSIDE:
                points.append((k, M, verdict.bounds))
                got += 1
                if got == trials:
                    break
        if got < trials:
            raise SamplingError(f"found only {got} of {trials} tuples with certified JSR < {r} at k = {k}")
    f, D = _prepare(f, degree)
    profiles = _map(lambda item: evaluate(f, item[1], D).tail_norms, points)
    samples = [ProbeSample(k, M, b, t, stalls(t, ratio)) for (k, M, b), t in zip(points, profiles)]
    witness = next((s.point for s in samples if s.stalled), None)
    verdict = "divergence suspected" if witness is not None else "no divergence detected"
    return ProbeReport(r, D, verdict, witness, samples)


# -- divergence witness and point evaluations --------------------------------


class WitnessOracle(CoefficientOracle):
    """a_I = 1/||M^I|| for one selected word I per length, 0 elsewhere.

    Up to ``L_max`` the selected word maximizes ||M^I|| over all words of its
    length.  Longer lengths use prefixes of the periodic word W W W ..., where
    W realizes the certified lower bound rho(M^W)^(1/|W|); their norm roots tend
    to that bound, so the series keeps unit-norm terms at M at every length.
    """

    def __init__(self, M: MatrixTuple, L_max: int, period: tuple, limit: int = 2**20):
        self.M = M
        self.L_max = L_max
        self.period = tuple(period)
        self.limit = limit
        self.selected: dict[int, tuple[Word, float]] = {}
        super().__init__(M.n, self._component)

    def _exhaustive(self, length: int) -> tuple[tuple, float]:
        n, k = self.M.n, self.M.k
        if n == 1:
            return (1,) * length, opnorm(np.linalg.matrix_power(self.M.matrices[0], length))
        if n**length > self.limit:
            raise ExpansionTooLarge(f"{n}**{length} products exceed the enumeration limit")
        stack = self.M.matrices
        for _ in range(length - 1):
            stack = (stack[:, None] @ self.M.matrices[None, :]).reshape(-1, k, k)
        norms = opnorms(stack)
        i = int(np.argmax(norms))
        return tuple(int(x) + 1 for x in np.unravel_index(i, (n,) * length)), float(norms[i])

    def select(self, length: int) -> tuple[Word, float] | None:
        if length not in self.selected:
            if length <= self.L_max:
                word, norm = self._exhaustive(length)
            else:
                p = self.period
                word = (p * (length // len(p) + 1))[:length]
                norm = opnorm(self.M.product(word))
            self.selected[length] = (Word(word), norm)
        word, norm = self.selected[length]
        return None if norm == 0.0 else (word, norm)

    def _component(self, d: int) -> dict:
        if d == 0:
            return {}
        got = self.select(d)
        return {} if got is None else {tuple(got[0]): 1.0 / got[1]}

    def roots(self) -> dict[int, float]:
        return {d: norm ** (1.0 / d) for d, (_, norm) in sorted(self.selected.items()) if norm > 0}


def divergence_witness(M: MatrixTuple, L_max: int, tol: float = DEFAULT_TOL, max_depth: int = 12) -> Series:
    """A series convergent on the open stable region of radius |M| that does not
    converge at M: its degree-d part evaluated at M has norm exactly 1 at every
    selected length."""
    M = M if isinstance(M, MatrixTuple) else MatrixTuple(M)
    if L_max < 1:
        raise PreconditionError("L_max must be at least 1")
    if M.n > 1 and M.n**L_max > 2**20:
        raise ExpansionTooLarge(f"exhaustive search over {M.n}**{L_max} words is too large")
    bounds = jsr_estimate(M, tol, max(1, min(L_max, max_depth)))
    if bounds.lower <= 0.0:
        raise NoWitness("no product has positive spectral radius; the joint spectral radius is not certified positive")
    oracle = WitnessOracle(M, L_max, bounds.word)
    if all(oracle.select(d) is None for d in range(1, L_max + 1)):
        raise NoWitness(f"every product of length <= {L_max} vanishes")
    return Series.from_oracle(oracle, L_max, field="real")


class PointEvaluation:
    """The evaluation homomorphism f -> f(M) at a tuple inside a stable region."""

    def __init__(self, M: MatrixTuple, radius: float, bounds: JsrBounds):
        self.point, self.radius, self.bounds = M, radius, bounds

    def __call__(self, f: Series, degree: int | None = None) -> np.ndarray:
        return evaluate(f, self.point, degree).value

    def __repr__(self) -> str:
        return f"PointEvaluation({self.point!r}, radius={self.radius})"


def rep_from_point(M: MatrixTuple, r: float, tol: float = DEFAULT_TOL, max_depth: int = DEFAULT_MAX_DEPTH) -> PointEvaluation:
    M = M if isinstance(M, MatrixTuple) else MatrixTuple(M)
    verdict = in_stable_region(M, M.center, r, tol, max_depth)
    if verdict.region is Region.OUTSIDE:
        raise OutsideStableRegion(f"joint spectral radius >= {verdict.bounds.lower:.6g} >= {r}")
    if verdict.region is Region.UNKNOWN:
        raise StableRegionUndecided(
            f"bounds [{verdict.bounds.lower:.6g}, {verdict.bounds.upper:.6g}] straddle the radius {r}"
        )
    return PointEvaluation(M, r, verdict.bounds)
