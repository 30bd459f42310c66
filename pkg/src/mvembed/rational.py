"""Exact rational scalars.

``fractions.Fraction`` already keeps values in lowest terms with a positive
denominator after every operation, so it is used directly as the scalar type.
This module adds the text format and the denominator utilities the rest of
the package needs.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import lcm
from typing import Iterable, Union

Rational = Fraction

RationalLike = Union[Fraction, int, str]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: RationalLike) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a reduced fraction.

    Integers and fractions are passed through. ``q = 0`` is rejected.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise TypeError(f"cannot parse {text!r} as a rational")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"malformed rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def lcm_of_denominators(values: Iterable[Fraction | int]) -> int:
    """Smallest positive k such that k*v is an integer for every v.

    Zeros are ignored; an input with no nonzero value is an error.
    """
    dens = [Fraction(v).denominator for v in values if v != 0]
    if not dens:
        raise ValueError("no nonzero values")
    return lcm(*dens)


def scale_to_integers(values: Iterable[Fraction | int]) -> tuple[int, list[int]]:
    """Return ``(q, [q*v ...])`` with q the lcm of all denominators (1 if all zero)."""
    values = [Fraction(v) for v in values]
    q = lcm(*(v.denominator for v in values)) if values else 1
    return q, [int(v * q) for v in values]
