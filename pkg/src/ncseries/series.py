"""Truncated noncommutative power series and their commutative relatives.

A :class:`Series` stores the coefficients of the words of length at most
``trunc``; everything above that degree is unknown.  ``trunc`` may be
``math.inf`` for a polynomial, which is exact in every degree.  Binary
operations return the smaller of the input truncations, so a result is always
exactly correct up to the degree it reports.
"""

from __future__ import annotations

import itertools
import math
import threading
from collections import defaultdict
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType

from . import scalars
from .errors import NotAUnit, PreconditionError
from .words import Word, abelianize_word, sorted_word, words_of_length

INF = math.inf


class CoefficientOracle:
    """A rule producing the homogeneous component of any degree on demand.

    ``component(d)`` returns ``{word: coefficient}`` for the words of length
    ``d``.  Results are cached; the cache is guarded by a lock so concurrent
    readers see one consistent set of coefficients.
    """

    def __init__(self, n: int, component: Callable[[int], Mapping]):
        self.n = n
        self._component = component
        self._cache: dict[int, dict] = {}
        self._lock = threading.Lock()

    @classmethod
    def from_rule(cls, n: int, rule: Callable[[Word], object]) -> "CoefficientOracle":
        """Oracle from a per-word rule; enumerates all n**d words of each degree."""

        def component(d):
            out = {}
            for w in words_of_length(n, d):
                c = rule(w)
                if c != 0:
                    out[w] = c
            return out

        return cls(n, component)

    def component(self, d: int) -> dict:
        with self._lock:
            if d not in self._cache:
                comp = {}
                for w, c in self._component(d).items():
                    w = tuple(w)
                    if len(w) != d:
                        raise ValueError(f"oracle returned word {w} for degree {d}")
                    if c != 0:
                        comp[w] = c
                self._cache[d] = comp
            return self._cache[d]

    def coefficient(self, word) -> object:
        return self.component(len(word)).get(tuple(word), 0)


def _as_trunc(trunc) -> float | int:
    if trunc is None or trunc == INF:
        return INF
    if int(trunc) != trunc or trunc < 0:
        raise ValueError(f"truncation degree must be a nonnegative integer or inf, got {trunc!r}")
    return int(trunc)


def _zero(field):
    return 0 if field == "exact" else (0.0 if field == "real" else 0j)


def _finish(acc: dict, field: str) -> dict:
    if field == "exact":
        return {w: scalars.normalize_exact(c) for w, c in acc.items() if c != 0}
    return {w: c for w, c in acc.items() if c != 0}


def _mul_dicts(a: Mapping, b: Mapping, trunc, field: str) -> dict:
    by_len = defaultdict(list)
    for w, c in b.items():
        by_len[len(w)].append((w, c))
    lengths = sorted(by_len)
    acc = defaultdict(int)
    for w1, c1 in a.items():
        room = trunc - len(w1)
        for length in lengths:
            if length > room:
                break
            for w2, c2 in by_len[length]:
                acc[w1 + w2] += c1 * c2
    return _finish(acc, field)


class Series:
    """A noncommutative power series in x1..xn truncated at degree ``trunc``.

    Coefficients live in ``field`` ("exact" rationals, "real" or "complex"
    floats).  ``center`` records the expansion point p, i.e. the series is in
    the variables x_i - p_i; arithmetic requires equal centers.
    """

    __slots__ = ("n", "trunc", "field", "center", "oracle", "_coeffs")

    def __init__(
        self,
        n: int,
        coeffs: Mapping | None = None,
        trunc=INF,
        *,
        field: str = "complex",
        center=None,
        oracle: CoefficientOracle | None = None,
    ):
        if n < 0:
            raise ValueError("alphabet size must be nonnegative")
        self.n = n
        self.trunc = _as_trunc(trunc)
        self.field = scalars.check_field(field)
        self.center = self._make_center(center)
        if oracle is not None:
            if oracle.n != n:
                raise ValueError("oracle alphabet does not match series")
            if self.trunc == INF:
                raise ValueError("an oracle-backed series needs a finite truncation")
        self.oracle = oracle
        clean = {}
        for w, c in (coeffs or {}).items():
            w = tuple(Word(w).check(n))
            if len(w) > self.trunc:
                continue
            c = scalars.coerce(c, self.field)
            if c != 0:
                clean[w] = c
        if oracle is not None:
            for d in range(self.trunc + 1):
                for w, c in oracle.component(d).items():
                    c = scalars.coerce(c, self.field)
                    if w in clean and clean[w] != c:
                        raise ValueError(f"stored coefficient of {Word(w)} disagrees with the oracle")
                    clean[w] = c
        self._coeffs = clean

    def _make_center(self, center):
        if center is None:
            return tuple(scalars.coerce(0, self.field) for _ in range(self.n))
        center = tuple(scalars.coerce(c, self.field) for c in center)
        if len(center) != self.n:
            raise ValueError("center must have one entry per generator")
        return center

    @classmethod
    def _raw(cls, n, coeffs, trunc, field, center, oracle=None) -> "Series":
        s = object.__new__(cls)
        s.n, s._coeffs, s.trunc, s.field, s.center, s.oracle = n, coeffs, trunc, field, center, oracle
        return s

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n: int, trunc=INF, field="complex") -> "Series":
        return cls(n, {}, trunc, field=field)

    @classmethod
    def constant(cls, c, n: int, trunc=INF, field="complex") -> "Series":
        return cls(n, {(): c}, trunc, field=field)

    @classmethod
    def one(cls, n: int, trunc=INF, field="complex") -> "Series":
        return cls.constant(1, n, trunc, field)

    @classmethod
    def var(cls, i: int, n: int, trunc=INF, field="complex") -> "Series":
        return cls(n, {(i,): 1}, trunc, field=field)

    @classmethod
    def monomial(cls, word, n: int, c=1, trunc=INF, field="complex") -> "Series":
        return cls(n, {tuple(word): c}, trunc, field=field)

    @classmethod
    def from_oracle(cls, oracle: CoefficientOracle, trunc: int, field="complex", center=None) -> "Series":
        return cls(oracle.n, None, trunc, field=field, center=center, oracle=oracle)

    # -- access ------------------------------------------------------------

    @property
    def coeffs(self) -> Mapping:
        return MappingProxyType(self._coeffs)

    def items(self):
        """(Word, coefficient) pairs in length-lexicographic order."""
        for w in sorted(self._coeffs, key=lambda w: (len(w), w)):
            yield Word(w), self._coeffs[w]

    def __len__(self) -> int:
        return len(self._coeffs)

    def __iter__(self):
        return (w for w, _ in self.items())

    def coefficient(self, word):
        w = tuple(word)
        if len(w) > self.trunc:
            if self.oracle is None:
                raise ValueError(f"coefficient of a word of length {len(w)} is beyond truncation {self.trunc}")
            return scalars.coerce(self.oracle.coefficient(w), self.field)
        return self._coeffs.get(w, _zero(self.field))

    __getitem__ = coefficient

    @property
    def constant_term(self):
        return self._coeffs.get((), _zero(self.field))

    def degree(self) -> int | None:
        return max((len(w) for w in self._coeffs), default=None)

    def order(self) -> int | None:
        return min((len(w) for w in self._coeffs), default=None)

    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def is_polynomial(self) -> bool:
        return self.trunc == INF

    def degrees(self) -> list[int]:
        return sorted({len(w) for w in self._coeffs})

    # -- structural operations --------------------------------------------

    def with_field(self, field: str) -> "Series":
        return Series(self.n, self._coeffs, self.trunc, field=field, center=self.center, oracle=None)

    def truncate(self, degree) -> "Series":
        t = min(self.trunc, _as_trunc(degree))
        return Series._raw(self.n, {w: c for w, c in self._coeffs.items() if len(w) <= t}, t, self.field, self.center)

    def extend(self, degree: int) -> "Series":
        """Materialize the oracle up to ``degree``."""
        if degree <= self.trunc:
            return self
        if self.oracle is None:
            raise PreconditionError("cannot extend a series without a coefficient oracle")
        return Series(self.n, self._coeffs, degree, field=self.field, center=self.center, oracle=self.oracle)

    def homogeneous_component(self, d: int) -> "Series":
        if d > self.trunc:
            raise PreconditionError(f"degree {d} exceeds truncation {self.trunc}")
        return Series._raw(self.n, {w: c for w, c in self._coeffs.items() if len(w) == d}, self.trunc, self.field, self.center)

    def reverse(self) -> "Series":
        return Series._raw(self.n, {w[::-1]: c for w, c in self._coeffs.items()}, self.trunc, self.field, self.center)

    def embed_free(self, offset: int, total_n: int) -> "Series":
        """Relabel x_i as x_{i+offset} inside an alphabet of size total_n."""
        if offset < 0 or offset + self.n > total_n:
            raise PreconditionError(f"cannot place {self.n} generators at offset {offset} in {total_n}")
        coeffs = {tuple(i + offset for i in w): c for w, c in self._coeffs.items()}
        center = [0] * total_n
        center[offset:offset + self.n] = self.center
        return Series(total_n, coeffs, self.trunc, field=self.field, center=center)

    def abelianize(self) -> "CommSeries":
        acc = defaultdict(int)
        for w, c in self._coeffs.items():
            acc[abelianize_word(w, self.n)] += c
        return CommSeries(self.n, acc, self.trunc, field=self.field)

    # -- arithmetic --------------------------------------------------------

    def _coerce_other(self, other) -> "Series":
        if isinstance(other, Series):
            if other.n != self.n:
                raise PreconditionError(f"alphabet sizes differ: {self.n} vs {other.n}")
            if other.center != self.center:
                raise PreconditionError("series are expanded around different centers")
            return other
        if isinstance(other, (int, float, complex, Fraction)) or hasattr(other, "__complex__"):
            field = scalars.join(self.field, scalars.field_of(other))
            return Series._raw(self.n, {(): other} if other != 0 else {}, INF, field, self.center)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        field = scalars.join(self.field, other.field)
        trunc = min(self.trunc, other.trunc)
        acc = defaultdict(int)
        for src in (self._coeffs, other._coeffs):
            for w, c in src.items():
                if len(w) <= trunc:
                    acc[w] += c
        return Series._raw(self.n, _convert(_finish(acc, field), field), trunc, field, _center(self, field))

    __radd__ = __add__

    def __neg__(self):
        return Series._raw(self.n, {w: -c for w, c in self._coeffs.items()}, self.trunc, self.field, self.center)

    def __sub__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        field = scalars.join(self.field, other.field)
        trunc = min(self.trunc, other.trunc)
        coeffs = _mul_dicts(self._coeffs, other._coeffs, trunc, field)
        return Series._raw(self.n, _convert(coeffs, field), trunc, field, _center(self, field))

    def __rmul__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        return other * self

    def __truediv__(self, c):
        if isinstance(c, Series):
            return NotImplemented
        field = scalars.join(self.field, scalars.field_of(c))
        if field == "exact":
            c = Fraction(c)
        coeffs = {w: v / c for w, v in self._coeffs.items()}
        return Series._raw(self.n, _convert(coeffs, field), self.trunc, field, _center(self, field))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are defined")
        out = Series.one(self.n, INF, self.field)
        out = Series._raw(self.n, out._coeffs, INF, self.field, self.center)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.n == other.n
            and self.trunc == other.trunc
            and tuple(map(complex, self.center)) == tuple(map(complex, other.center))
            and self._coeffs == other._coeffs
        )

    __hash__ = None

    def allclose(self, other: "Series", atol: float = 1e-12) -> bool:
        if self.n != other.n or self.trunc != other.trunc:
            return False
        keys = set(self._coeffs) | set(other._coeffs)
        return all(abs(complex(self._coeffs.get(w, 0)) - complex(other._coeffs.get(w, 0))) <= atol for w in keys)

    # -- text --------------------------------------------------------------

    def format(self, names=None, precision: int | None = None) -> str:
        return _format_terms([(w.format(names) if w else "", c) for w, c in self.items()], precision)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        t = "inf" if self.trunc == INF else self.trunc
        return f"Series(n={self.n}, trunc={t}, field={self.field!r}: {self.format()})"


def _format_terms(terms, precision: int | None) -> str:
    """Join (monomial text, coefficient) pairs; an empty monomial is the constant."""
    if not terms:
        return "0"
    parts = []
    for mono, c in terms:
        neg = scalars.is_negative_real(c)
        mag = -c if neg else c
        if not mono:
            body = scalars.format_scalar(mag, precision)
        elif mag == 1:
            body = mono
        else:
            body = f"{scalars.format_scalar(mag, precision)}*{mono}"
        parts.append((neg, body))
    neg, body = parts[0]
    out = ("-" if neg else "") + body
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


def _convert(coeffs: dict, field: str) -> dict:
    if field == "exact":
        return {w: scalars.normalize_exact(c) for w, c in coeffs.items()}
    conv = complex if field == "complex" else float
    return {w: conv(c) for w, c in coeffs.items()}


def _center(s: Series, field: str):
    if field == s.field:
        return s.center
    return tuple(scalars.coerce(c, field) for c in s.center)


# -- composition -------------------------------------------------------------


def compose(g: Series, fs: Iterable[Series]) -> Series:
    """Substitute fs[k] for x_{k+1} in g.

    Every substituted series must lie in the maximal ideal (zero constant
    term).  The result is truncated at the smallest input truncation.
    """
    fs = list(fs)
    if len(fs) != g.n:
        raise PreconditionError(f"g has {g.n} generators but {len(fs)} series were given")
    if not fs:
        return Series.constant(g.constant_term, 0, g.trunc, g.field)
    m = fs[0].n
    for f in fs:
        if f.n != m or f.center != fs[0].center:
            raise PreconditionError("substituted series must share alphabet and center")
        if f.constant_term != 0:
            raise PreconditionError("substituted series must have zero constant term")
    field = scalars.join_all([g.field] + [f.field for f in fs])
    trunc = min([g.trunc] + [f.trunc for f in fs])
    images = [_convert(dict(f._coeffs), field) for f in fs]
    orders = [f.order() for f in fs]

    def horner(terms: dict, budget) -> dict:
        acc = defaultdict(int)
        if () in terms:
            acc[()] += terms[()]
        children = defaultdict(dict)
        for w, c in terms.items():
            if w and len(w) <= budget:
                children[w[0]][w[1:]] = c
        for a, sub in children.items():
            if orders[a - 1] is None or orders[a - 1] > budget:
                continue
            inner = horner(sub, budget - orders[a - 1])
            for w, c in _mul_dicts(images[a - 1], inner, budget, field).items():
                acc[w] += c
        return _finish(acc, field)

    coeffs = horner(_convert(dict(g._coeffs), field), trunc)
    return Series._raw(m, _convert(coeffs, field), trunc, field, _center(fs[0], field))


def geometric_inverse(f: Series, degree: int | None = None) -> Series:
    """Two-sided inverse of a unit as the scaled partial geometric sum.

    With u = 1 - f/f0 the result is sum_{j<=D} u**j / f0, which inverts f
    modulo words longer than D.  A polynomial input needs an explicit degree.
    """
    D = f.trunc if degree is None else min(f.trunc, degree)
    if D == INF:
        raise PreconditionError("inverse of a polynomial needs an explicit degree")
    f0 = f.constant_term
    if f0 == 0:
        raise NotAUnit("series with zero constant term is not invertible")
    f = f.truncate(D)
    u = (1 - f / f0).truncate(D)
    acc = Series._raw(f.n, {(): scalars.coerce(1, u.field)}, D, u.field, u.center)
    for _ in range(D):
        acc = (1 + u * acc).truncate(D)
    return acc / f0


def lift_sorted(c: "CommSeries") -> Series:
    """Canonical section of abelianization: x^nu goes to the sorted word."""
    return Series(c.n, {tuple(sorted_word(nu)): a for nu, a in c.coeffs.items()}, c.trunc, field=c.field)


# -- commutative series ------------------------------------------------------


class CommSeries:
    """A commutative power series in x1..xn keyed by exponent tuples."""

    __slots__ = ("n", "trunc", "field", "_coeffs")

    def __init__(self, n: int, coeffs: Mapping | None = None, trunc=INF, *, field="complex"):
        self.n = n
        self.trunc = _as_trunc(trunc)
        self.field = scalars.check_field(field)
        clean = {}
        for nu, c in (coeffs or {}).items():
            nu = tuple(int(e) for e in nu)
            if len(nu) != n or min(nu, default=0) < 0:
                raise ValueError(f"bad multidegree {nu} for {n} variables")
            if sum(nu) > self.trunc:
                continue
            c = scalars.coerce(c, self.field)
            if c != 0:
                clean[nu] = c
        self._coeffs = clean

    @classmethod
    def var(cls, i: int, n: int, trunc=INF, field="complex") -> "CommSeries":
        return cls(n, {tuple(int(k == i) for k in range(1, n + 1)): 1}, trunc, field=field)

    @property
    def coeffs(self) -> Mapping:
        return MappingProxyType(self._coeffs)

    @property
    def constant_term(self):
        return self._coeffs.get((0,) * self.n, _zero(self.field))

    def items(self):
        for nu in sorted(self._coeffs, key=lambda nu: (sum(nu), tuple(-e for e in nu))):
            yield nu, self._coeffs[nu]

    def is_zero(self) -> bool:
        return not self._coeffs

    def truncate(self, degree) -> "CommSeries":
        t = min(self.trunc, _as_trunc(degree))
        return CommSeries(self.n, {nu: c for nu, c in self._coeffs.items() if sum(nu) <= t}, t, field=self.field)

    def _other(self, other) -> "CommSeries":
        if isinstance(other, CommSeries):
            if other.n != self.n:
                raise PreconditionError("alphabet sizes differ")
            return other
        return CommSeries(self.n, {(0,) * self.n: other}, INF, field=scalars.join(self.field, scalars.field_of(other)))

    def __add__(self, other):
        other = self._other(other)
        acc = defaultdict(int)
        for src in (self._coeffs, other._coeffs):
            for nu, c in src.items():
                acc[nu] += c
        return CommSeries(self.n, acc, min(self.trunc, other.trunc), field=scalars.join(self.field, other.field))

    __radd__ = __add__

    def __neg__(self):
        return CommSeries(self.n, {nu: -c for nu, c in self._coeffs.items()}, self.trunc, field=self.field)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __mul__(self, other):
        other = self._other(other)
        trunc = min(self.trunc, other.trunc)
        acc = defaultdict(int)
        for nu, a in self._coeffs.items():
            for mu, b in other._coeffs.items():
                if sum(nu) + sum(mu) <= trunc:
                    acc[tuple(x + y for x, y in zip(nu, mu))] += a * b
        return CommSeries(self.n, acc, trunc, field=scalars.join(self.field, other.field))

    __rmul__ = __mul__

    def compose(self, fs) -> "CommSeries":
        """Substitute the commutative series fs[i] (zero constant term) for x_{i+1}."""
        fs = list(fs)
        if len(fs) != self.n:
            raise PreconditionError("need one substituted series per generator")
        if any(f.constant_term != 0 for f in fs):
            raise PreconditionError("substituted series must have zero constant term")
        m = fs[0].n if fs else 0
        trunc = min([self.trunc] + [f.trunc for f in fs])
        field = scalars.join_all([self.field] + [f.field for f in fs])
        out = CommSeries(m, {}, trunc, field=field)
        powers: dict[tuple[int, int], CommSeries] = {}

        def power(i, e):
            if (i, e) not in powers:
                powers[(i, e)] = (
                    CommSeries(m, {(0,) * m: 1}, trunc, field=field) if e == 0 else (power(i, e - 1) * fs[i]).truncate(trunc)
                )
            return powers[(i, e)]

        for nu, c in self._coeffs.items():
            if sum(nu) > trunc:
                continue
            term = CommSeries(m, {(0,) * m: c}, trunc, field=field)
            for i, e in enumerate(nu):
                if e:
                    term = (term * power(i, e)).truncate(trunc)
            out = out + term
        return out

    def __eq__(self, other):
        if not isinstance(other, CommSeries):
            return NotImplemented
        return self.n == other.n and self.trunc == other.trunc and self._coeffs == other._coeffs

    __hash__ = None

    def format(self, names=None, precision: int | None = None) -> str:
        """Commuting monomials print as x1^2*x2; the grammar matches Series.format."""
        terms = []
        for nu, c in self.items():
            mono = "*".join(
                (names[i] if names else f"x{i + 1}") + (f"^{e}" if e > 1 else "") for i, e in enumerate(nu) if e
            )
            terms.append((mono, c))
        return _format_terms(terms, precision)

    def __repr__(self) -> str:
        return f"CommSeries(n={self.n}, trunc={self.trunc}: {self.format()})"


# -- complete tensor product ---------------------------------------------------


class BiSeries:
    """Series in an x-block and a y-block where every y commutes with every x.

    Stored in the normal form with all y-letters moved to the right, so a
    monomial is a pair (x-word, y-word).  The y-letters keep their mutual order.
    """

    __slots__ = ("nx", "ny", "trunc", "field", "_coeffs")

    def __init__(self, nx: int, ny: int, coeffs: Mapping | None = None, trunc=INF, *, field="complex"):
        self.nx, self.ny = nx, ny
        self.trunc = _as_trunc(trunc)
        self.field = scalars.check_field(field)
        clean = {}
        for (a, b), c in (coeffs or {}).items():
            a, b = tuple(Word(a).check(nx)), tuple(Word(b).check(ny))
            if len(a) + len(b) > self.trunc:
                continue
            c = scalars.coerce(c, self.field)
            if c != 0:
                clean[(a, b)] = c
        self._coeffs = clean

    @classmethod
    def one(cls, nx, ny, trunc=INF, field="complex") -> "BiSeries":
        return cls(nx, ny, {((), ()): 1}, trunc, field=field)

    @classmethod
    def x(cls, i, nx, ny, trunc=INF, field="complex") -> "BiSeries":
        return cls(nx, ny, {((i,), ()): 1}, trunc, field=field)

    @classmethod
    def y(cls, j, nx, ny, trunc=INF, field="complex") -> "BiSeries":
        return cls(nx, ny, {((), (j,)): 1}, trunc, field=field)

    @classmethod
    def from_x(cls, f: Series, ny: int) -> "BiSeries":
        return cls(f.n, ny, {(w, ()): c for w, c in f.coeffs.items()}, f.trunc, field=f.field)

    @classmethod
    def from_y(cls, f: Series, nx: int) -> "BiSeries":
        return cls(nx, f.n, {((), w): c for w, c in f.coeffs.items()}, f.trunc, field=f.field)

    @property
    def coeffs(self) -> Mapping:
        return MappingProxyType(self._coeffs)

    def items(self):
        for key in sorted(self._coeffs, key=lambda k: (len(k[0]) + len(k[1]), len(k[0]), k)):
            yield (Word(key[0]), Word(key[1])), self._coeffs[key]

    def _other(self, other) -> "BiSeries":
        if isinstance(other, BiSeries):
            if (other.nx, other.ny) != (self.nx, self.ny):
                raise PreconditionError("block alphabets differ")
            return other
        field = scalars.join(self.field, scalars.field_of(other))
        return BiSeries(self.nx, self.ny, {((), ()): other}, INF, field=field)

    def __add__(self, other):
        other = self._other(other)
        acc = defaultdict(int)
        for src in (self._coeffs, other._coeffs):
            for k, c in src.items():
                acc[k] += c
        return BiSeries(self.nx, self.ny, acc, min(self.trunc, other.trunc), field=scalars.join(self.field, other.field))

    __radd__ = __add__

    def __neg__(self):
        return BiSeries(self.nx, self.ny, {k: -c for k, c in self._coeffs.items()}, self.trunc, field=self.field)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __mul__(self, other):
        other = self._other(other)
        trunc = min(self.trunc, other.trunc)
        acc = defaultdict(int)
        for (a, b), c in self._coeffs.items():
            for (a2, b2), c2 in other._coeffs.items():
                if len(a) + len(b) + len(a2) + len(b2) <= trunc:
                    acc[(a + a2, b + b2)] += c * c2
        return BiSeries(self.nx, self.ny, acc, trunc, field=scalars.join(self.field, other.field))

    def __rmul__(self, other):
        return self._other(other) * self

    def specialize_y(self, values) -> Series:
        """Send y_j to the scalar values[j-1], giving a series in the x-block."""
        values = list(values)
        if len(values) != self.ny:
            raise PreconditionError("need one value per y generator")
        acc = defaultdict(int)
        for (a, b), c in self._coeffs.items():
            acc[a] += c * math.prod(values[j - 1] for j in b)
        field = scalars.join_all([self.field] + [scalars.field_of(v) for v in values])
        return Series(self.nx, acc, self.trunc, field=field)

    def __eq__(self, other):
        if not isinstance(other, BiSeries):
            return NotImplemented
        return (self.nx, self.ny, self.trunc, self._coeffs) == (other.nx, other.ny, other.trunc, other._coeffs)

    __hash__ = None

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*[{a}|{b}]" for (a, b), c in self.items()) or "0"
        return f"BiSeries(nx={self.nx}, ny={self.ny}: {body})"


# -- named constructions -----------------------------------------------------


def permutation_sign(perm) -> int:
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def standard_identity(l: int) -> Series:
    """s_l = sum over permutations sigma of sgn(sigma) x_sigma(1) ... x_sigma(l)."""
    if l < 1:
        raise PreconditionError("standard identity needs l >= 1")
    coeffs = {
        tuple(i + 1 for i in perm): permutation_sign(perm)
        for perm in itertools.permutations(range(l))
    }
    return Series(l, coeffs, INF, field="exact")


def substitute_xy(l: int) -> Series:
    """s_l evaluated at z_i = x*y**i, as an exact polynomial in x = x1, y = x2.

    Each z_i is a single monomial, so the substitution maps the word of a
    permutation directly to a word; every term has l letters x and
    l(l+1)/2 letters y.
    """
    if l < 1:
        raise PreconditionError("substitution needs l >= 1")
    blocks = [(1,) + (2,) * i for i in range(1, l + 1)]
    coeffs = {}
    for perm in itertools.permutations(range(l)):
        coeffs[sum((blocks[i] for i in perm), ())] = permutation_sign(perm)
    return Series(2, coeffs, INF, field="exact")


def substituted_degree(l: int) -> tuple[int, int]:
    """(x-degree, y-degree) of every term of substitute_xy(l)."""
    return l, l * (l + 1) // 2


def substituted_standard_sum(trunc: int) -> Series:
    """The series sum_{l>=1} substitute_xy(l), backed by an oracle."""

    def component(d):
        for l in itertools.count(1):
            total = sum(substituted_degree(l))
            if total == d:
                return dict(substitute_xy(l).coeffs)
            if total > d:
                return {}

    return Series.from_oracle(CoefficientOracle(2, component), trunc, field="exact")


@dataclass(frozen=True)
class MajorantEstimate:
    radius: float
    window: tuple[int, int]
    roots: dict[int, float]


def majorant_radius(f: Series, start: int | None = None) -> MajorantEstimate:
    """Root-test estimate of the polydisk radius of the absolute majorant.

    With c_d the largest coefficient of total degree d of the abelianization of
    sum |a_I| x^I, the estimate is 1 / max c_d**(1/d) over the degree window
    [start, trunc] (default start: half the truncation).  Polynomials give inf.
    """
    if f.trunc == INF:
        return MajorantEstimate(math.inf, (0, 0), {})
    D = int(f.trunc)
    if D < 2:
        raise PreconditionError("majorant estimate needs truncation >= 2")
    lo = max(1, math.ceil(D / 2)) if start is None else max(1, start)
    acc = defaultdict(float)
    for w, c in f.coeffs.items():
        if w:
            acc[abelianize_word(w, f.n)] += abs(complex(c))
    best = defaultdict(float)
    for nu, c in acc.items():
        d = sum(nu)
        best[d] = max(best[d], c)
    roots = {d: best[d] ** (1.0 / d) for d in sorted(best) if best[d] > 0}
    window_roots = [r for d, r in roots.items() if lo <= d <= D]
    radius = math.inf if not window_roots else 1.0 / max(window_roots)
    return MajorantEstimate(radius, (lo, D), roots)
