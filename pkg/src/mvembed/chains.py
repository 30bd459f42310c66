"""Linearly ordered MV-algebras given by element-wise operations.

* :class:`FiniteChain` -- L_k with elements the fractions i/k.
* :class:`RationalChain` -- the rational unit interval with truncated addition.
* :class:`ChangAlgebra` -- the unit interval [(0,0), (1,0)] of Z x Z ordered
  lexicographically; the elements (0, n) are infinitesimals.

:class:`ChainPower` (L_k)^l is not a chain but uses the same interface; it is
the target of embeddings of finite MV-algebras.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable

from .algebra import MVOperations, PartialSubalgebra, restrict
from .rational import format_rational, parse_rational


class RationalChain(MVOperations):
    """Q cap [0,1] with x (+) y = min(x+y, 1) and not x = 1 - x."""

    zero = Fraction(0)
    one = Fraction(1)

    def __repr__(self) -> str:
        return "RationalChain()"

    def __eq__(self, other) -> bool:
        return type(other) is type(self)

    def __hash__(self) -> int:
        return hash(type(self))

    def element(self, x) -> Fraction:
        v = parse_rational(x)
        if not 0 <= v <= 1:
            raise ValueError(f"{format_rational(v)} is outside [0,1]")
        return v

    def oplus(self, a: Fraction, b: Fraction) -> Fraction:
        return min(a + b, self.one)

    def neg(self, a: Fraction) -> Fraction:
        return self.one - a

    def leq(self, a, b) -> bool:
        return a <= b

    def compare(self, a, b) -> int:
        return (a > b) - (a < b)

    def sort(self, elements) -> list:
        return sorted(elements)

    def name(self, x) -> str:
        return format_rational(x)

    def parse(self, text: str) -> Fraction:
        return self.element(parse_rational(text))


class FiniteChain(RationalChain):
    """L_k = {0, 1/k, ..., 1} as a subchain of the rational interval."""

    def __init__(self, k: int):
        if isinstance(k, bool) or not isinstance(k, int) or k < 1:
            raise ValueError(f"L_k needs an integer k >= 1, got {k!r}")
        self.k = k

    def __repr__(self) -> str:
        return f"FiniteChain({self.k})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteChain) and other.k == self.k

    def __hash__(self) -> int:
        return hash(("L", self.k))

    @property
    def elements(self) -> list[Fraction]:
        return [Fraction(i, self.k) for i in range(self.k + 1)]

    def element(self, x) -> Fraction:
        v = super().element(x)
        if self.k % v.denominator:
            raise ValueError(f"{format_rational(v)} is not an element of L_{self.k}")
        return v


_PAIR_RE = re.compile(r"^\s*\(\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*\)\s*$")


class ChangAlgebra(MVOperations):
    """Gamma(Z x_lex Z, (1,0)): pairs (a,b) with (0,0) <= (a,b) <= (1,0) lexicographically.

    Python tuples already compare lexicographically, so the order is tuple order.
    """

    zero = (0, 0)
    one = (1, 0)

    def __repr__(self) -> str:
        return "ChangAlgebra()"

    def __eq__(self, other) -> bool:
        return type(other) is type(self)

    def __hash__(self) -> int:
        return hash(type(self))

    def element(self, x) -> tuple[int, int]:
        if isinstance(x, str):
            return self.parse(x)
        try:
            a, b = x
        except (TypeError, ValueError):
            raise ValueError(f"{x!r} is not a pair") from None
        if not all(isinstance(c, int) and not isinstance(c, bool) for c in (a, b)):
            raise ValueError(f"{x!r} must have integer coordinates")
        v = (a, b)
        if not self.zero <= v <= self.one:
            raise ValueError(f"{v} lies outside [(0,0), (1,0)]")
        return v

    def oplus(self, a, b):
        s = (a[0] + b[0], a[1] + b[1])
        return s if s <= self.one else self.one

    def neg(self, a):
        return (1 - a[0], -a[1])

    def leq(self, a, b) -> bool:
        return a <= b

    def compare(self, a, b) -> int:
        return (a > b) - (a < b)

    def sort(self, elements) -> list:
        return sorted(elements)

    def name(self, x) -> str:
        return f"({x[0]},{x[1]})"

    def parse(self, text: str) -> tuple[int, int]:
        m = _PAIR_RE.match(text)
        if m is None:
            raise ValueError(f"malformed Chang element {text!r}")
        return self.element((int(m.group(1)), int(m.group(2))))


class ChainPower(MVOperations):
    """(L_k)^l with componentwise operations; elements are l-tuples of fractions."""

    def __init__(self, k: int, l: int):
        self.chain = FiniteChain(k)
        if l < 0:
            raise ValueError("l must be non-negative")
        self.k, self.l = k, l
        self.zero = (Fraction(0),) * l
        self.one = (Fraction(1),) * l

    def __repr__(self) -> str:
        return f"ChainPower({self.k}, {self.l})"

    def element(self, x) -> tuple:
        if len(x) != self.l:
            raise ValueError(f"expected {self.l} coordinates, got {len(x)}")
        return tuple(self.chain.element(c) for c in x)

    def oplus(self, a, b):
        return tuple(min(x + y, 1) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(1 - x for x in a)

    def name(self, x) -> str:
        return "(" + ",".join(format_rational(c) for c in x) + ")"


def sample_partial(oracle, elements: Iterable) -> PartialSubalgebra:
    """Restrict a chain oracle to a finite set of its elements."""
    return restrict(oracle, elements)


def split_elements(text: str) -> list[str]:
    """Split a comma list, keeping ``(a,b)`` pairs intact."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    tail = "".join(cur).strip()
    if tail or parts:
        parts.append(tail)
    if any(not p for p in parts):
        raise ValueError(f"empty item in element list {text!r}")
    return parts


def oracle_from_spec(spec: str):
    """``lk:<k>``, ``qunit`` or ``chang``."""
    spec = spec.strip().lower()
    if spec == "qunit":
        return RationalChain()
    if spec == "chang":
        return ChangAlgebra()
    if spec.startswith("lk:"):
        try:
            k = int(spec[3:])
        except ValueError:
            raise ValueError(f"bad chain size in {spec!r}") from None
        return FiniteChain(k)
    raise ValueError(f"unknown algebra {spec!r}; use lk:<k>, qunit or chang")


def oracle_spec(oracle) -> str:
    if isinstance(oracle, FiniteChain):
        return f"lk:{oracle.k}"
    if isinstance(oracle, RationalChain):
        return "qunit"
    if isinstance(oracle, ChangAlgebra):
        return "chang"
    raise TypeError(f"{oracle!r} has no CLI name")
