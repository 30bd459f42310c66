"""Embedding finite partial MV-chains into L_k and finite MV-algebras into (L_k)^l.

The chain case solves an exact linear system whose unknowns are the values of
the elements of the oplus-closure of X; positivity of every unknown and
additivity on non-truncated sums are the only constraints. Scaling a solution
by its top value gives a valuation into the rationals, and restricting it to
the difference-closure of X gives an embedding into L_k with k the lcm of the
denominators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from math import lcm
from typing import Any, Hashable, Iterable, Sequence

from .algebra import EmbeddingMap, FiniteMvAlgebra, Report, restrict, verify_partial_embedding
from .chains import ChainPower, FiniteChain
from .farkas import DEFAULT_ROW_CAP, Certificate, LinearSystem, solve_inequalities
from .filters import Filter, QuotientAlgebra, quotient, separating_prime_filters
from .rational import lcm_of_denominators


class NonMVOracleError(RuntimeError):
    """The valuation system had no solution, so the oracle is not an MV-chain."""

    def __init__(self, message: str, certificate: Certificate):
        super().__init__(message)
        self.certificate = certificate


class EmbeddingVerificationError(RuntimeError):
    def __init__(self, message: str, report: Report):
        super().__init__(message)
        self.report = report


_ONE = Fraction(1)
_TWO = Fraction(2)


def _distinct(oracle, elements: Iterable) -> list:
    X = [oracle.element(x) for x in elements]
    if len(set(X)) != len(X):
        raise ValueError("duplicate elements")
    return X


def _sorted(oracle, elements: Iterable) -> list:
    if hasattr(oracle, "sort"):
        return oracle.sort(elements)
    return sorted(elements, key=cmp_to_key(oracle.compare))


def closure_oplus(oracle, elements: Iterable) -> list:
    """Sorted {x (+) y : x, y in X u {0, 1}}; it starts with 0 and ends with 1."""
    X = [x for x in _distinct(oracle, elements) if x != oracle.zero]
    base = X + [oracle.zero, oracle.one]
    Y = {oracle.oplus(a, b) for a, b in itertools.combinations_with_replacement(base, 2)}
    return _sorted(oracle, Y)


@dataclass
class Lemma1System:
    """Unknowns z_1..z_n stand for the values of Y[1..n] (Y[0] is 0).

    ``rows`` lists ``(x, y, {column: coefficient})``; ``system`` is
    ``-z <= -1, A z <= 0, -A z <= 0`` followed by ``z_j - z_n <= 0``. The
    last block keeps s inside [0, 1]; the additivity rows alone allow
    s(1/3) = 2 for X = {1/3}.
    """

    elements: list
    Y: list
    index: dict
    rows: list
    system: LinearSystem

    @property
    def n(self) -> int:
        return len(self.Y) - 1


def build_lemma1_system(oracle, elements: Iterable) -> Lemma1System:
    X = [x for x in _distinct(oracle, elements) if x != oracle.zero]
    Y = closure_oplus(oracle, X)
    index = {y: j - 1 for j, y in enumerate(Y)}  # column of y_j is j-1
    n = len(Y) - 1
    X_sorted = _sorted(oracle, X)
    rows = []
    for i, x in enumerate(X_sorted):
        for y in X_sorted[i:]:
            if not oracle.leq(x, oracle.neg(y)):
                continue
            s = index[oracle.oplus(x, y)]
            if x == y:
                row = {index[x]: _TWO}
            else:
                row = {index[x]: _ONE, index[y]: _ONE}
            row[s] = row.get(s, 0) - _ONE
            rows.append((x, y, {c: v for c, v in row.items() if v}))
    A_rows = [{j: -_ONE} for j in range(n)]
    A_rows += [r for _, _, r in rows]
    A_rows += [{c: -v for c, v in r.items()} for _, _, r in rows]
    A_rows += [{j: _ONE, n - 1: -_ONE} for j in range(n - 1)]
    rhs = [Fraction(-1)] * n + [Fraction(0)] * (2 * len(rows) + n - 1)
    return Lemma1System(X, Y, index, rows, LinearSystem(A_rows, rhs, n_vars=n))


@dataclass
class RationalValuation:
    """s on X u {0, 1} with values q_{j_x} / q_n; ``q`` solves the system."""

    values: dict
    q: tuple
    lemma1: Lemma1System

    def __getitem__(self, x) -> Fraction:
        return self.values[x]


def rational_valuation(oracle, elements: Iterable, row_cap: int = DEFAULT_ROW_CAP) -> RationalValuation:
    L = build_lemma1_system(oracle, elements)
    result = solve_inequalities(L.system, row_cap=row_cap)
    if isinstance(result, Certificate):
        raise NonMVOracleError("oracle violates linear MV structure", result)
    q = result.x
    top = q[-1]
    values = {oracle.zero: Fraction(0), oracle.one: Fraction(1)}
    for x in L.elements:
        values[x] = q[L.index[x]] / top
    v = RationalValuation(values, q, L)
    report = verify_valuation(v, oracle, L.elements)
    if not report:  # pragma: no cover - guarded by the solver's own check
        raise EmbeddingVerificationError("valuation fails its conditions", report)
    return v


def verify_valuation(v: RationalValuation, oracle, elements: Iterable) -> Report:
    """Check s(0)=0, s(1)=1, additivity below the complement, 0 < s <= 1 on X."""
    s = v.values
    X = [x for x in (oracle.element(e) for e in elements) if x != oracle.zero]
    dom = X + [x for x in (oracle.zero, oracle.one) if x not in X]
    failures = []
    if any(x not in s for x in dom):
        return Report(False, [("undefined", tuple(x for x in dom if x not in s))])
    if s[oracle.zero] != 0:
        failures.append(("condition-1", (oracle.zero,)))
    if s[oracle.one] != 1:
        failures.append(("condition-1", (oracle.one,)))
    members = set(dom)
    negs = {y: oracle.neg(y) for y in dom}
    for x, y in itertools.product(dom, repeat=2):
        if not oracle.leq(x, negs[y]):
            continue
        z = oracle.oplus(x, y)
        if z in members and s[z] != s[x] + s[y]:
            failures.append(("condition-2", (x, y)))
    for x in X:
        if not s[x] > 0:
            failures.append(("condition-3", (x,)))
        if s[x] > 1:
            failures.append(("range", (x,)))
    if v.q:
        if any(c < 1 for c in v.q):
            failures.append(("positivity", tuple(v.q)))
        # the rows are homogeneous, so q may be scaled to integers
        den = 1
        for c in v.q:
            den = lcm(den, c.denominator)
        Q = [c.numerator * (den // c.denominator) for c in v.q]
        for x, y, row in v.lemma1.rows:
            if sum(c * Q[j] for j, c in row.items()) != 0:
                failures.append(("additivity", (x, y)))
    return Report(not failures, failures)


@dataclass
class ChainEmbedding:
    k: int
    mapping: dict
    oracle: Any
    valuation: RationalValuation
    report: Report

    @property
    def target(self) -> FiniteChain:
        return FiniteChain(self.k)


def embed_chain(oracle, elements: Iterable, row_cap: int = DEFAULT_ROW_CAP) -> ChainEmbedding:
    """Embed the partial subalgebra on ``elements`` of a chain into some L_k.

    The valuation is taken on all differences x (-) y of X u {0, 1} and on the
    products x (.) y = x (-) not y of X. The products are what forces
    s(x) + s(y) >= 1 whenever x (+) y truncates to 1; differences alone do not
    (X = {3/5, 2/3, 1} in the rational chain admits s(3/5) < 1/2 otherwise).
    """
    X = _distinct(oracle, elements)
    base = X + [x for x in (oracle.zero, oracle.one) if x not in X]
    Y = {oracle.ominus(x, y) for x in base for y in base}
    Y.update(oracle.odot(x, y) for x in X for y in X)
    Y.discard(oracle.zero)
    v = rational_valuation(oracle, _sorted(oracle, Y), row_cap=row_cap)
    f = {x: v.values[x] for x in X}
    nonzero = [c for c in f.values() if c != 0]
    k = lcm_of_denominators(nonzero) if nonzero else 1
    report = verify_partial_embedding(EmbeddingMap(restrict(oracle, X), FiniteChain(k), f))
    if not report:
        raise EmbeddingVerificationError("chain embedding failed verification", report)
    return ChainEmbedding(k, f, oracle, v, report)


@dataclass
class ProductEmbedding:
    k: int
    l: int
    filters: list
    factors: list
    mapping: dict
    report: Report

    @property
    def target(self) -> ChainPower:
        return ChainPower(self.k, self.l)


def embed_finite_mv(alg: FiniteMvAlgebra, row_cap: int = DEFAULT_ROW_CAP) -> ProductEmbedding:
    """Embed a finite MV-algebra into (L_k)^l through chain quotients by prime filters.

    The one-element algebra has no pair to separate; it maps onto the
    one-element power (L_1)^0.
    """
    filters = separating_prime_filters(alg)
    factors: list[tuple[QuotientAlgebra, ChainEmbedding]] = []
    for p in filters:
        q = quotient(alg, p)
        factors.append((q, embed_chain(q.algebra, q.algebra.elements, row_cap=row_cap)))
    k = lcm(*(e.k for _, e in factors)) if factors else 1
    mapping = {
        x: tuple(e.mapping[q.projection[x]] for q, e in factors) for x in alg.elements
    }
    target = ChainPower(k, len(factors))
    report = verify_partial_embedding(EmbeddingMap(restrict(alg, alg.elements), target, mapping))
    if not report:
        raise EmbeddingVerificationError("product embedding failed verification", report)
    return ProductEmbedding(k, len(factors), filters, factors, mapping, report)
