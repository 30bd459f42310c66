"""Filters, quotients and reduced products of finite MV-algebras."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import FiniteMvAlgebra, direct_product

DEFAULT_FILTER_BOUND = 64


class FilterEnumerationLimit(RuntimeError):
    pass


@dataclass(frozen=True)
class Filter:
    algebra: FiniteMvAlgebra
    members: frozenset

    def __contains__(self, x) -> bool:
        return x in self.members

    def __len__(self) -> int:
        return len(self.members)

    def sorted_members(self) -> list[int]:
        return sorted(self.members)

    def names(self) -> list[str]:
        return [self.algebra.name(x) for x in self.sorted_members()]


def is_filter(alg: FiniteMvAlgebra, members: Iterable[int]) -> bool:
    F = set(members)
    if alg.one not in F:
        return False
    for x in F:
        if any(alg.leq(x, y) and y not in F for y in alg.elements):
            return False
        if any(alg.odot(x, y) not in F for y in F):
            return False
    return True


def generated_filter(alg: FiniteMvAlgebra, seed: Iterable[int] = ()) -> Filter:
    """Least filter containing ``seed`` (and 1)."""
    F = {alg.one} | {alg.element(x) for x in seed}
    while True:
        grown = set(F)
        grown.update(alg.odot(x, y) for x in F for y in F)
        grown.update([y for x in grown for y in alg.elements if alg.leq(x, y)])
        if grown == F:
            return Filter(alg, frozenset(F))
        F = grown


def _filter_order(f: Filter):
    return (len(f.members), sorted(f.members))


def enumerate_filters(alg: FiniteMvAlgebra, bound: int = DEFAULT_FILTER_BOUND) -> list[Filter]:
    """All filters, by breadth-first search over one-generator extensions.

    Every filter of a finite algebra is finitely generated, so starting from
    {1} and repeatedly adding one element reaches all of them.
    """
    if alg.size > bound:
        raise FilterEnumerationLimit(f"algebra of size {alg.size} exceeds bound {bound}")
    start = generated_filter(alg)
    seen = {start.members: start}
    queue = deque([start])
    while queue:
        f = queue.popleft()
        for x in alg.elements:
            if x in f.members:
                continue
            g = generated_filter(alg, f.members | {x})
            if g.members not in seen:
                seen[g.members] = g
                queue.append(g)
    return sorted(seen.values(), key=_filter_order)


def is_prime(alg: FiniteMvAlgebra, f: Filter) -> bool:
    return all(
        alg.implies(x, y) in f.members or alg.implies(y, x) in f.members
        for x, y in itertools.combinations(alg.elements, 2)
    )


def is_ultra(alg: FiniteMvAlgebra, f: Filter, filters: Sequence[Filter] | None = None) -> bool:
    """Maximal among proper filters."""
    if alg.zero in f.members:
        return False
    if filters is None:
        filters = enumerate_filters(alg)
    return not any(
        f.members < g.members and alg.zero not in g.members for g in filters
    )


def prime_filters(alg: FiniteMvAlgebra) -> list[Filter]:
    return [f for f in enumerate_filters(alg) if is_prime(alg, f)]


@dataclass(frozen=True)
class QuotientAlgebra:
    algebra: FiniteMvAlgebra
    projection: tuple[int, ...]
    representatives: tuple[int, ...]


def congruent(alg: FiniteMvAlgebra, f: Filter, x: int, y: int) -> bool:
    return alg.odot(alg.implies(x, y), alg.implies(y, x)) in f.members


def quotient(alg: FiniteMvAlgebra, f: Filter) -> QuotientAlgebra:
    """alg / f; each class is represented by its least element index."""
    rep_of: list[int] = []
    reps: list[int] = []
    for x in alg.elements:
        for r in reps:
            if congruent(alg, f, x, r):
                rep_of.append(r)
                break
        else:
            reps.append(x)
            rep_of.append(x)
    cls = {r: i for i, r in enumerate(reps)}
    projection = tuple(cls[rep_of[x]] for x in alg.elements)
    oplus = [[projection[alg.oplus(a, b)] for b in reps] for a in reps]
    neg = [projection[alg.neg(a)] for a in reps]
    names = [alg.name(r) for r in reps]
    q = FiniteMvAlgebra(oplus, neg, projection[alg.zero], names)
    return QuotientAlgebra(q, projection, tuple(reps))


def separating_prime_filters(alg: FiniteMvAlgebra, elements: Iterable[int] | None = None) -> list[Filter]:
    """Greedy family of prime filters telling apart every pair of ``elements``."""
    X = list(alg.elements) if elements is None else [alg.element(x) for x in elements]
    primes = None
    chosen: list[Filter] = []
    for x, y in itertools.combinations(X, 2):
        if x == y or any(not congruent(alg, p, x, y) for p in chosen):
            continue
        if primes is None:
            primes = prime_filters(alg)
        for p in primes:
            if not congruent(alg, p, x, y):
                chosen.append(p)
                break
        else:
            raise ValueError(
                f"no prime filter separates {alg.name(x)} and {alg.name(y)}; not an MV-algebra?"
            )
    return chosen


def is_index_filter(index_count: int, family: Iterable[Iterable[int]]) -> bool:
    """Whether ``family`` is a filter of the powerset of ``range(index_count)``."""
    F = {frozenset(s) for s in family}
    full = frozenset(range(index_count))
    if full not in F:
        return False
    for s in F:
        if not s <= full:
            return False
        if any(s & t not in F for t in F):
            return False
    # upward closed: adding any single index keeps membership
    return all(s | {i} in F for s in F for i in full)


def principal_index_filter(index_count: int, generator: Iterable[int]) -> set[frozenset]:
    g = frozenset(generator)
    rest = [i for i in range(index_count) if i not in g]
    return {
        g | frozenset(extra)
        for r in range(len(rest) + 1)
        for extra in itertools.combinations(rest, r)
    }


def reduced_product(
    algs: Sequence[FiniteMvAlgebra], family: Iterable[Iterable[int]]
) -> QuotientAlgebra:
    """Product of ``algs`` modulo x ~ y iff {i : x(i) = y(i)} belongs to ``family``."""
    if not algs:
        raise ValueError("reduced product of an empty family")
    F = {frozenset(s) for s in family}
    if not is_index_filter(len(algs), F):
        raise ValueError("the index family is not a filter of the powerset")
    prod = direct_product(algs)
    coords = list(itertools.product(*(a.elements for a in algs)))
    rep_of: dict[int, int] = {}
    reps: list[int] = []
    for x, cx in enumerate(coords):
        for r in reps:
            agree = frozenset(i for i, (a, b) in enumerate(zip(cx, coords[r])) if a == b)
            if agree in F:
                rep_of[x] = r
                break
        else:
            reps.append(x)
            rep_of[x] = x
    cls = {r: i for i, r in enumerate(reps)}
    projection = tuple(cls[rep_of[x]] for x in prod.elements)
    oplus = [[projection[prod.oplus(a, b)] for b in reps] for a in reps]
    neg = [projection[prod.neg(a)] for a in reps]
    names = [prod.name(r) for r in reps]
    q = FiniteMvAlgebra(oplus, neg, projection[prod.zero], names)
    return QuotientAlgebra(q, projection, tuple(reps))
