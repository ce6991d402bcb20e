"""Scalar fields: exact rationals, real floats and complex floats."""

from __future__ import annotations

import numbers
from fractions import Fraction

FIELDS = ("exact", "real", "complex")


def check_field(field: str) -> str:
    if field not in FIELDS:
        raise ValueError(f"unknown field {field!r}; expected one of {FIELDS}")
    return field


def join(a: str, b: str) -> str:
    if a == b:
        return a
    if "complex" in (a, b):
        return "complex"
    return "real"


def join_all(fields) -> str:
    out = "exact"
    for f in fields:
        out = join(out, f)
    return out


def normalize_exact(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


def coerce(c, field: str):
    if field == "exact":
        if isinstance(c, bool):
            return int(c)
        if isinstance(c, int):
            return c
        if isinstance(c, Fraction):
            return normalize_exact(c)
        if isinstance(c, numbers.Integral):
            return int(c)
        if isinstance(c, numbers.Rational):
            return normalize_exact(Fraction(int(c.numerator), int(c.denominator)))
        if isinstance(c, numbers.Complex) and not isinstance(c, numbers.Real):
            if c.imag != 0:
                raise TypeError(f"complex coefficient {c!r} in exact field")
            c = c.real
        if isinstance(c, numbers.Real):
            return normalize_exact(Fraction(float(c)))
        # sympy rationals and similar
        try:
            return normalize_exact(Fraction(str(c)))
        except (ValueError, TypeError):
            raise TypeError(f"cannot use {c!r} as an exact scalar") from None
    if field == "real":
        if isinstance(c, numbers.Complex) and not isinstance(c, numbers.Real):
            if c.imag != 0:
                raise TypeError(f"complex coefficient {c!r} in real field")
            c = c.real
        return float(c)
    if field == "complex":
        return complex(c)
    raise ValueError(f"unknown field {field!r}")


def field_of(c) -> str:
    if isinstance(c, (int, Fraction)) or isinstance(c, numbers.Rational):
        return "exact"
    if isinstance(c, numbers.Real):
        return "real"
    return "complex"


def is_zero(c) -> bool:
    return c == 0


def format_scalar(c, precision: int | None = None) -> str:
    """Text form of a coefficient that the expression parser reads back."""
    if isinstance(c, bool):
        c = int(c)
    if isinstance(c, int):
        return str(c)
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    if isinstance(c, complex):
        re, im = c.real, c.imag
        if im == 0:
            return _fmt_float(re, precision)
        if re == 0:
            return _fmt_float(im, precision) + "j"
        sign = "-" if im < 0 else "+"
        return f"({_fmt_float(re, precision)}{sign}{_fmt_float(abs(im), precision)}j)"
    return _fmt_float(float(c), precision)


def _fmt_float(x: float, precision: int | None) -> str:
    if x == 0:
        x = 0.0
    if precision is None:
        return repr(float(x))
    return f"{x:.{precision}g}"


def is_negative_real(c) -> bool:
    if isinstance(c, complex):
        return c.imag == 0 and c.real < 0
    return c < 0


def absolute(c) -> float:
    return abs(complex(c)) if isinstance(c, complex) else abs(c)
