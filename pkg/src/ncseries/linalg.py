"""Small exact and floating linear-algebra helpers.

Exact work goes through sympy's DomainMatrix over QQ; floating work through
numpy.  Matrices are passed as lists of rows.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def _qq(c):
    c = Fraction(c)
    return QQ(c.numerator, c.denominator)


def _frac(q):
    f = Fraction(int(q.numerator), int(q.denominator))
    return int(f) if f.denominator == 1 else f


def to_domain(rows, ncols: int | None = None) -> DomainMatrix:
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return DomainMatrix([[_qq(c) for c in r] for r in rows], (len(rows), ncols), QQ)


def from_domain(m: DomainMatrix) -> list[list]:
    return [[_frac(c) for c in row] for row in m.to_list()]


def exact_rank(rows, ncols: int | None = None) -> int:
    if not rows:
        return 0
    return to_domain(rows, ncols).rank()


def exact_det(rows):
    return _frac(to_domain(rows).det())


def exact_inverse(rows) -> list[list]:
    return from_domain(to_domain(rows).inv())


def exact_rref(rows, ncols: int | None = None):
    """Reduced row echelon form and pivot columns."""
    if not rows:
        return [], ()
    r, pivots = to_domain(rows, ncols).rref()
    return from_domain(r), tuple(pivots)


def float_rank(a, rtol: float = 1e-10) -> int:
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(s > rtol * max(1.0, s[0])))


def rcond(a) -> float:
    """Reciprocal 2-norm condition number (0 for a singular matrix)."""
    a = np.asarray(a, dtype=complex)
    s = np.linalg.svd(a, compute_uv=False)
    return 0.0 if s[0] == 0 else float(s[-1] / s[0])
