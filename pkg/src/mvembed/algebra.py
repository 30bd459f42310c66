"""Finite MV-algebras given by Cayley tables, partial subalgebras and embeddings.

Elements of a :class:`FiniteMvAlgebra` are the indices ``0 .. size-1``; display
names (fractions for chains, tuples for products) are kept separately in
``names``. Chain oracles from :mod:`mvembed.chains` share the same operation
interface (``oplus``, ``neg``, ``zero``, ``one``, ``element``), so
:func:`restrict` and :func:`verify_partial_embedding` work for both.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Any, Hashable, Iterable, Mapping, Sequence

from .rational import format_rational


class MVOperations:
    """Derived MV operations in terms of ``oplus``, ``neg`` and ``one``."""

    zero: Any
    one: Any

    def oplus(self, a, b):  # pragma: no cover - abstract
        raise NotImplementedError

    def neg(self, a):  # pragma: no cover - abstract
        raise NotImplementedError

    def element(self, x):
        return x

    def name(self, x) -> str:
        return str(x)

    def odot(self, a, b):
        return self.neg(self.oplus(self.neg(a), self.neg(b)))

    def implies(self, a, b):
        return self.oplus(self.neg(a), b)

    def ominus(self, a, b):
        return self.odot(a, self.neg(b))

    def join(self, a, b):
        return self.oplus(self.neg(self.oplus(self.neg(a), b)), b)

    def meet(self, a, b):
        return self.neg(self.join(self.neg(a), self.neg(b)))

    def leq(self, a, b) -> bool:
        return self.implies(a, b) == self.one

    def sort(self, elements: Iterable) -> list:
        """Elements in increasing order; raises on an incomparable pair."""
        return sorted(elements, key=cmp_to_key(self.compare))

    def compare(self, a, b) -> int:
        if a == b:
            return 0
        if self.leq(a, b):
            return -1
        if self.leq(b, a):
            return 1
        raise ValueError(f"{self.name(a)} and {self.name(b)} are incomparable")


@dataclass
class Report:
    """Outcome of a check; ``failures`` holds ``(tag, witness)`` pairs."""

    ok: bool
    failures: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


class FiniteMvAlgebra(MVOperations):
    """An algebra ``(A, oplus, neg, 0)`` on ``{0, ..., size-1}`` given by tables."""

    def __init__(
        self,
        oplus: Sequence[Sequence[int]],
        neg: Sequence[int],
        zero: int,
        names: Sequence[str] | None = None,
    ):
        n = len(neg)
        if n < 1:
            raise ValueError("an algebra needs at least one element")
        if len(oplus) != n or any(len(row) != n for row in oplus):
            raise ValueError(f"oplus table must be {n}x{n}")
        for v in itertools.chain(neg, itertools.chain.from_iterable(oplus), [zero]):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
                raise ValueError(f"table entry {v!r} outside carrier of size {n}")
        if names is not None and len(names) != n:
            raise ValueError("names must list one name per element")
        if names is not None and len(set(names)) != n:
            raise ValueError("element names must be distinct")
        self.size = n
        self.oplus_table = tuple(tuple(row) for row in oplus)
        self.neg_table = tuple(neg)
        self.zero = zero
        self.one = self.neg_table[zero]
        self.names = tuple(names) if names is not None else tuple(str(i) for i in range(n))

    def __repr__(self) -> str:
        return f"FiniteMvAlgebra(size={self.size})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteMvAlgebra):
            return NotImplemented
        return (
            self.oplus_table == other.oplus_table
            and self.neg_table == other.neg_table
            and self.zero == other.zero
        )

    def __hash__(self) -> int:
        return hash((self.oplus_table, self.neg_table, self.zero))

    @property
    def elements(self) -> range:
        return range(self.size)

    def element(self, x) -> int:
        if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < self.size:
            raise ValueError(f"{x!r} is not an element index of {self!r}")
        return x

    def oplus(self, a: int, b: int) -> int:
        return self.oplus_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def name(self, x: int) -> str:
        return self.names[x]

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ValueError(f"no element named {name!r}") from None

    def derived_ops(self, a: int, b: int) -> dict:
        a, b = self.element(a), self.element(b)
        return {
            "odot": self.odot(a, b),
            "implies": self.implies(a, b),
            "ominus": self.ominus(a, b),
            "join": self.join(a, b),
            "meet": self.meet(a, b),
            "leq": self.leq(a, b),
        }

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "zero": self.zero,
            "neg": list(self.neg_table),
            "oplus": [list(row) for row in self.oplus_table],
            "names": list(self.names),
        }

    @classmethod
    def from_json(cls, data: Mapping | str) -> "FiniteMvAlgebra":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            size = data["size"]
            alg = cls(data["oplus"], data["neg"], data["zero"], data.get("names"))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed algebra JSON: {exc}") from exc
        if alg.size != size:
            raise ValueError(f"size {size} does not match tables of size {alg.size}")
        return alg


def lukasiewicz_chain(k: int) -> FiniteMvAlgebra:
    """The chain L_k on {0, 1/k, ..., 1} (k+1 elements); index i stands for i/k."""
    if k < 1:
        raise ValueError("L_k needs k >= 1")
    oplus = [[min(i + j, k) for j in range(k + 1)] for i in range(k + 1)]
    neg = [k - i for i in range(k + 1)]
    names = [format_rational(Fraction(i, k)) for i in range(k + 1)]
    return FiniteMvAlgebra(oplus, neg, 0, names)


def trivial_algebra() -> FiniteMvAlgebra:
    return FiniteMvAlgebra([[0]], [0], 0, ["0"])


def check_axioms(alg: FiniteMvAlgebra, max_failures: int = 100) -> Report:
    """Exhaustively test MV1-MV6 on all element tuples.

    Each failure is ``(axiom, witness tuple)``; at most ``max_failures`` are kept.
    """
    failures: list = []
    E = alg.elements
    op, ng, one, zero = alg.oplus_table, alg.neg_table, alg.one, alg.zero

    def fail(tag, *witness):
        if len(failures) < max_failures:
            failures.append((tag, witness))
        return len(failures) >= max_failures

    for x in E:
        if op[x][zero] != x and fail("MV3", x):
            return Report(False, failures)
        if ng[ng[x]] != x and fail("MV4", x):
            return Report(False, failures)
        if op[x][one] != one and fail("MV5", x):
            return Report(False, failures)
    for x, y in itertools.product(E, repeat=2):
        if op[x][y] != op[y][x] and fail("MV1", x, y):
            return Report(False, failures)
        if op[ng[op[ng[x]][y]]][y] != op[ng[op[ng[y]][x]]][x] and fail("MV6", x, y):
            return Report(False, failures)
    for x, y, z in itertools.product(E, repeat=3):
        if op[x][op[y][z]] != op[op[x][y]][z] and fail("MV2", x, y, z):
            return Report(False, failures)
    return Report(not failures, failures)


def check_adjointness(alg: FiniteMvAlgebra) -> Report:
    """x odot y <= z iff x <= y -> z, for all triples."""
    failures = []
    for x, y, z in itertools.product(alg.elements, repeat=3):
        if alg.leq(alg.odot(x, y), z) != alg.leq(x, alg.implies(y, z)):
            failures.append(("adjointness", (x, y, z)))
            break
    return Report(not failures, failures)


def is_chain(alg: FiniteMvAlgebra) -> bool:
    return all(
        alg.leq(a, b) or alg.leq(b, a)
        for a, b in itertools.combinations(alg.elements, 2)
    )


def direct_product(algs: Sequence[FiniteMvAlgebra]) -> FiniteMvAlgebra:
    """Componentwise product; element names are tuples of factor names."""
    if not algs:
        raise ValueError("direct product of an empty family")
    tuples = list(itertools.product(*(a.elements for a in algs)))
    index = {t: i for i, t in enumerate(tuples)}
    oplus = [
        [index[tuple(a.oplus(x, y) for a, x, y in zip(algs, s, t))] for t in tuples]
        for s in tuples
    ]
    neg = [index[tuple(a.neg(x) for a, x in zip(algs, s))] for s in tuples]
    zero = index[tuple(a.zero for a in algs)]
    names = ["(" + ",".join(a.name(x) for a, x in zip(algs, t)) + ")" for t in tuples]
    return FiniteMvAlgebra(oplus, neg, zero, names)


def product_coordinates(algs: Sequence[FiniteMvAlgebra]) -> list[tuple[int, ...]]:
    """Coordinate tuple of each element index of ``direct_product(algs)``."""
    return list(itertools.product(*(a.elements for a in algs)))


@dataclass(frozen=True)
class PartialSubalgebra:
    """The restriction of ``parent`` to ``carrier``.

    ``oplus`` and ``neg`` hold only the instances whose parent value lies in
    the carrier; they are frozen at construction time.
    """

    parent: Any
    carrier: tuple
    oplus: Mapping[tuple, Hashable]
    neg: Mapping[Hashable, Hashable]

    @property
    def has_zero(self) -> bool:
        return self.parent.zero in self._members

    @property
    def has_one(self) -> bool:
        return self.parent.one in self._members

    @property
    def _members(self) -> frozenset:
        return frozenset(self.carrier)

    def oplus_defined(self, a, b) -> bool:
        return (a, b) in self.oplus

    def neg_defined(self, a) -> bool:
        return a in self.neg


def restrict(parent, elements: Iterable) -> PartialSubalgebra:
    """Partial subalgebra on ``elements``: an operation value is kept iff it lies in the set."""
    carrier = tuple(parent.element(x) for x in elements)
    members = set(carrier)
    if len(members) != len(carrier):
        raise ValueError("duplicate elements in restriction")
    oplus = {}
    for a in carrier:
        for b in carrier:
            c = parent.oplus(a, b)
            if c in members:
                oplus[(a, b)] = c
    neg = {}
    for a in carrier:
        c = parent.neg(a)
        if c in members:
            neg[a] = c
    return PartialSubalgebra(parent, carrier, oplus, neg)


@dataclass(frozen=True)
class EmbeddingMap:
    domain: PartialSubalgebra
    target: Any
    assignment: Mapping


def verify_partial_embedding(emb: EmbeddingMap) -> Report:
    """Injectivity plus preservation of every defined oplus, neg, 0 and 1 instance."""
    dom, tgt, f = emb.domain, emb.target, emb.assignment
    failures = []
    missing = [x for x in dom.carrier if x not in f]
    if missing:
        return Report(False, [("undefined", tuple(missing))])
    seen: dict = {}
    for x in dom.carrier:
        y = f[x]
        try:
            tgt.element(y)
        except (ValueError, TypeError):
            failures.append(("not-in-target", (x, y)))
            continue
        if y in seen:
            failures.append(("injectivity", (seen[y], x)))
        seen.setdefault(y, x)
    if failures:
        return Report(False, failures)
    parent = dom.parent
    if dom.has_zero and f[parent.zero] != tgt.zero:
        failures.append(("zero", (parent.zero,)))
    if dom.has_one and f[parent.one] != tgt.one:
        failures.append(("one", (parent.one,)))
    for a, c in dom.neg.items():
        if f[c] != tgt.neg(f[a]):
            failures.append(("neg", (a,)))
    for (a, b), c in dom.oplus.items():
        if f[c] != tgt.oplus(f[a], f[b]):
            failures.append(("oplus", (a, b)))
    return Report(not failures, failures)
