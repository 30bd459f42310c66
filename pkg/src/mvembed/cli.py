"""The ``mvembed`` command.

Every command writes one JSON document to standard output (or ``--output``)
and a one-line summary with the elapsed time to standard error, so the JSON
is byte-identical across runs. Documents carry a ``kind`` and every input
they were computed from; ``mvembed verify`` re-checks any of them without
calling the solver.

Exit codes: 0 success, 2 unreadable input, 3 a verification failed, 4 the
solver row cap was hit, 5 a chain oracle gave an infeasible valuation system
(the document then holds the multipliers).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from math import lcm
from typing import Any, Callable, Sequence

from .algebra import (
    EmbeddingMap,
    FiniteMvAlgebra,
    Report,
    check_adjointness,
    check_axioms,
    is_chain,
    restrict,
    verify_partial_embedding,
)
from .chains import ChainPower, FiniteChain, oracle_from_spec, oracle_spec, split_elements
from .embedding import (
    EmbeddingVerificationError,
    NonMVOracleError,
    build_lemma1_system,
    embed_chain,
    embed_finite_mv,
)
from .farkas import (
    DEFAULT_ROW_CAP,
    Certificate,
    LinearSystem,
    RowLimitExceeded,
    Solution,
    integerize_certificate,
    solve_inequalities,
    verify_result,
)
from .filters import (
    FilterEnumerationLimit,
    enumerate_filters,
    is_filter,
    is_prime,
    is_ultra,
    quotient,
)
from .rational import format_rational, parse_rational

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VERIFY = 3
EXIT_CAP = 4
EXIT_NON_MV = 5


class CliError(Exception):
    def __init__(self, code: int, message: str, document: dict | None = None):
        super().__init__(message)
        self.code = code
        self.document = document


def _fmt(v) -> str:
    return format_rational(v)


def _read_json(path: str) -> tuple[Any, str]:
    try:
        if path == "-":
            raw = sys.stdin.buffer.read()
        else:
            with open(path, "rb") as fh:
                raw = fh.read()
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CliError(EXIT_PARSE, f"{path} is not valid JSON: {exc}") from None
    return data, hashlib.sha256(raw).hexdigest()


def _load_algebra(data) -> FiniteMvAlgebra:
    try:
        return FiniteMvAlgebra.from_json(data)
    except (ValueError, TypeError) as exc:
        raise CliError(EXIT_PARSE, f"bad algebra: {exc}") from None


def _failures(report: Report, name: Callable) -> list[dict]:
    out = []
    for tag, witness in report.failures:
        out.append({"check": tag, "witness": [name(w) for w in witness]})
    return out


def _problems(report: Report, name: Callable) -> list[str]:
    out = []
    for tag, wit in report.failures:
        if tag == "not-in-target":
            x, y = wit
            image = y if isinstance(y, (int, Fraction)) else ",".join(map(str, y))
            out.append(f"{tag}: {name(x)} -> {image}")
        else:
            out.append(f"{tag}: {[name(w) for w in wit]}")
    return out


# ---------------------------------------------------------------- commands


def cmd_axioms(alg: FiniteMvAlgebra) -> tuple[dict, str, int]:
    report = check_axioms(alg)
    doc = {"kind": "axioms", "algebra": alg.to_json(), "ok": report.ok}
    doc["failures"] = _failures(report, alg.name)
    if report.ok:
        doc["adjointness"] = check_adjointness(alg).ok
        doc["chain"] = is_chain(alg)
    verdict = "pass" if report.ok else f"fail ({len(report.failures)} instances)"
    return doc, f"axioms: {alg.size} elements, {verdict}", EXIT_OK if report.ok else EXIT_VERIFY


def _filters(alg: FiniteMvAlgebra):
    try:
        return enumerate_filters(alg)
    except FilterEnumerationLimit as exc:
        raise CliError(EXIT_CAP, str(exc)) from None


def cmd_filters(alg: FiniteMvAlgebra, prime: bool = False, ultra: bool = False) -> tuple[dict, str, int]:
    filters = _filters(alg)
    listed = []
    for i, f in enumerate(filters):
        p, u = is_prime(alg, f), is_ultra(alg, f, filters)
        if (prime and not p) or (ultra and not u):
            continue
        listed.append({"id": i, "members": f.names(), "prime": p, "ultra": u})
    selection = "prime" if prime else "ultra" if ultra else "all"
    doc = {"kind": "filters", "algebra": alg.to_json(), "selection": selection, "filters": listed}
    return doc, f"filters: {len(listed)} listed ({selection}) of {len(filters)}", EXIT_OK


def cmd_quotient(alg: FiniteMvAlgebra, filter_id: int) -> tuple[dict, str, int]:
    filters = _filters(alg)
    if not 0 <= filter_id < len(filters):
        raise CliError(EXIT_PARSE, f"filter id {filter_id} out of range 0..{len(filters) - 1}")
    f = filters[filter_id]
    q = quotient(alg, f)
    # the quotient's own tables come first so the document is a valid algebra input
    doc = dict(q.algebra.to_json())
    doc.update(
        kind="quotient",
        parent=alg.to_json(),
        filter={"id": filter_id, "members": f.names()},
        projection=list(q.projection),
        chain=is_chain(q.algebra),
    )
    return doc, f"quotient: {alg.size} -> {q.algebra.size} elements by filter {filter_id}", EXIT_OK


def _parse_elements(oracle, text: str) -> list:
    try:
        items = split_elements(text) if text.strip() else []
        X = [oracle.element(item) for item in items]
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise CliError(EXIT_PARSE, f"bad element list: {exc}") from None
    if len(set(X)) != len(X):
        raise CliError(EXIT_PARSE, "element list has duplicates")
    return X


def _certificate_doc(kind: str, message: str, cert: Certificate) -> dict:
    return {
        "kind": kind,
        "error": message,
        "lambda": [_fmt(v) for v in cert.lam],
        "lambda_integer": list(integerize_certificate(cert.lam)),
    }


def cmd_embed_chain(spec: str, elements: str, row_cap: int = DEFAULT_ROW_CAP) -> tuple[dict, str, int]:
    try:
        oracle = oracle_from_spec(spec)
    except ValueError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    X = oracle.sort(_parse_elements(oracle, elements))
    try:
        emb = embed_chain(oracle, X, row_cap=row_cap)
    except NonMVOracleError as exc:
        raise CliError(EXIT_NON_MV, str(exc), _certificate_doc("embed-chain", str(exc), exc.certificate))
    except EmbeddingVerificationError as exc:
        doc = {"kind": "embed-chain", "error": str(exc), "failures": _failures(exc.report, oracle.name)}
        raise CliError(EXIT_VERIFY, str(exc), doc)
    L = emb.valuation.lemma1
    doc = {
        "kind": "embed-chain",
        "algebra": oracle_spec(oracle),
        "elements": [oracle.name(x) for x in X],
        "k": emb.k,
        "map": {oracle.name(x): _fmt(emb.mapping[x]) for x in X},
        "verified": emb.report.ok,
        "witness": {
            "Y": [oracle.name(y) for y in L.elements],
            "system": L.system.to_json(sparse=True),
            "q": [_fmt(v) for v in emb.valuation.q],
        },
    }
    return doc, f"embed-chain: {len(X)} elements into L_{emb.k}, verified", EXIT_OK


def cmd_embed(alg: FiniteMvAlgebra, row_cap: int = DEFAULT_ROW_CAP) -> tuple[dict, str, int]:
    axioms = check_axioms(alg)
    if not axioms:
        doc = {"kind": "embed", "error": "not an MV-algebra", "failures": _failures(axioms, alg.name)}
        raise CliError(EXIT_VERIFY, "input fails the MV axioms", doc)
    try:
        emb = embed_finite_mv(alg, row_cap=row_cap)
    except FilterEnumerationLimit as exc:
        raise CliError(EXIT_CAP, str(exc)) from None
    except NonMVOracleError as exc:
        raise CliError(EXIT_NON_MV, str(exc), _certificate_doc("embed", str(exc), exc.certificate))
    except EmbeddingVerificationError as exc:
        doc = {"kind": "embed", "error": str(exc), "failures": _failures(exc.report, str)}
        raise CliError(EXIT_VERIFY, str(exc), doc)
    factors = []
    for f, (q, e) in zip(emb.filters, emb.factors):
        factors.append(
            {
                "filter": f.names(),
                "quotient": q.algebra.to_json(),
                "projection": list(q.projection),
                "k": e.k,
                "map": {q.algebra.name(c): _fmt(e.mapping[c]) for c in q.algebra.elements},
            }
        )
    doc = {
        "kind": "embed",
        "algebra": alg.to_json(),
        "k": emb.k,
        "l": emb.l,
        "filters": [f.names() for f in emb.filters],
        "map": {alg.name(x): [_fmt(c) for c in emb.mapping[x]] for x in alg.elements},
        "verified": emb.report.ok,
        "factors": factors,
    }
    return doc, f"embed: {alg.size} elements into (L_{emb.k})^{emb.l}, verified", EXIT_OK


def _load_system(data) -> LinearSystem:
    try:
        return LinearSystem.from_json(data)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise CliError(EXIT_PARSE, f"bad system: {exc}") from None


def cmd_farkas(data, row_cap: int = DEFAULT_ROW_CAP, method: str = "auto") -> tuple[dict, str, int]:
    system = _load_system(data)
    result = solve_inequalities(system, row_cap=row_cap, method=method)
    doc: dict = {"kind": "farkas", "system": system.to_json(sparse="n" in data)}
    if isinstance(result, Solution):
        doc.update(status="solution", x=[_fmt(v) for v in result.x])
        summary = f"farkas: {system.m} rows, {system.n} variables, solution"
    else:
        doc.update(
            status="infeasible",
            **{"lambda": [_fmt(v) for v in result.lam]},
            lambda_integer=list(integerize_certificate(result.lam)),
        )
        summary = f"farkas: {system.m} rows, {system.n} variables, infeasible"
    doc["verified"] = verify_result(system, result)
    return doc, summary, EXIT_OK


# ---------------------------------------------------------------- verify


def _verify_axioms(doc) -> list[str]:
    alg = _load_algebra(doc["algebra"])
    ok = check_axioms(alg).ok
    problems = []
    if ok != doc["ok"]:
        problems.append(f"axiom verdict is {ok}, document says {doc['ok']}")
    if ok:
        if doc.get("adjointness") != check_adjointness(alg).ok:
            problems.append("adjointness verdict differs")
        if doc.get("chain") != is_chain(alg):
            problems.append("chain verdict differs")
    return problems


def _member_set(alg: FiniteMvAlgebra, names) -> frozenset:
    return frozenset(alg.index_of(n) for n in names)


def _verify_filters(doc) -> list[str]:
    alg = _load_algebra(doc["algebra"])
    filters = _filters(alg)
    problems = []
    for entry in doc["filters"]:
        members = _member_set(alg, entry["members"])
        if not is_filter(alg, members):
            problems.append(f"filter {entry['id']} is not a filter")
            continue
        i = entry["id"]
        if not 0 <= i < len(filters) or filters[i].members != members:
            problems.append(f"filter {i} does not match the enumeration")
            continue
        if is_prime(alg, filters[i]) != entry["prime"]:
            problems.append(f"filter {i}: primality differs")
        if is_ultra(alg, filters[i], filters) != entry["ultra"]:
            problems.append(f"filter {i}: maximality differs")
    return problems


def _verify_quotient(doc) -> list[str]:
    parent = _load_algebra(doc["parent"])
    members = _member_set(parent, doc["filter"]["members"])
    if not is_filter(parent, members):
        return ["the filter is not a filter"]
    filters = _filters(parent)
    f = next(g for g in filters if g.members == members)
    q = quotient(parent, f)
    problems = []
    if q.algebra.to_json() != _load_algebra(doc).to_json():
        problems.append("quotient tables differ")
    if list(q.projection) != doc["projection"]:
        problems.append("projection differs")
    if is_chain(q.algebra) != doc["chain"]:
        problems.append("chain verdict differs")
    return problems


def _verify_embed_chain(doc) -> list[str]:
    oracle = oracle_from_spec(doc["algebra"])
    X = [oracle.element(e) for e in doc["elements"]]
    names = {oracle.name(x): x for x in X}
    if len(names) != len(X) or set(doc["map"]) != set(names):
        return ["map keys do not match the elements"]
    k = doc["k"]
    f = {names[n]: parse_rational(v) for n, v in doc["map"].items()}
    problems = []
    report = verify_partial_embedding(EmbeddingMap(restrict(oracle, X), FiniteChain(k), f))
    problems += _problems(report, oracle.name)
    ordered = oracle.sort(X)
    if any(f[a] >= f[b] for a, b in zip(ordered, ordered[1:])):
        problems.append("map is not strictly increasing")
    nonzero = [v for v in f.values() if v]
    if (lcm(*(v.denominator for v in nonzero)) if nonzero else 1) != k:
        problems.append("k is not the lcm of the denominators")
    # the valuation witness: Y, the system built from it, and a solution
    w = doc["witness"]
    Y = [oracle.element(e) for e in w["Y"]]
    L = build_lemma1_system(oracle, Y)
    if L.system.to_json(sparse=True) != w["system"]:
        problems.append("witness system does not match its Y")
        return problems
    q = tuple(parse_rational(v) for v in w["q"])
    if not verify_result(L.system, Solution(q)):
        problems.append("witness q does not solve the system")
        return problems
    for x in X:
        if x == oracle.zero:
            expected = Fraction(0)
        elif x in L.index:
            expected = q[L.index[x]] / q[-1]
        else:
            problems.append(f"{oracle.name(x)} has no valuation")
            continue
        if f[x] != expected:
            problems.append(f"map of {oracle.name(x)} is not q_j/q_n")
    return problems


def _verify_embed(doc) -> list[str]:
    alg = _load_algebra(doc["algebra"])
    k, l = doc["k"], doc["l"]
    problems = []
    f = {}
    for name, coords in doc["map"].items():
        f[alg.index_of(name)] = tuple(parse_rational(c) for c in coords)
    if len(f) != alg.size:
        return ["map is not total"]
    report = verify_partial_embedding(EmbeddingMap(restrict(alg, alg.elements), ChainPower(k, l), f))
    problems += _problems(report, alg.name)
    if len(doc["filters"]) != l or len(doc["factors"]) != l:
        problems.append("l does not match the filters")
        return problems
    filters = None
    for i, (names, factor) in enumerate(zip(doc["filters"], doc["factors"])):
        members = _member_set(alg, names)
        if not is_filter(alg, members):
            problems.append(f"filter {i} is not a filter")
            continue
        if filters is None:
            filters = _filters(alg)
        F = next(g for g in filters if g.members == members)
        if not is_prime(alg, F):
            problems.append(f"filter {i} is not prime")
        q = quotient(alg, F)
        if list(q.projection) != factor["projection"]:
            problems.append(f"factor {i}: projection differs")
            continue
        for x in alg.elements:
            c = parse_rational(factor["map"][q.algebra.name(q.projection[x])])
            if f[x][i] != c:
                problems.append(f"factor {i}: coordinate of {alg.name(x)} differs")
                break
    return problems


def _verify_farkas(doc) -> list[str]:
    system = _load_system(doc["system"])
    if doc["status"] == "solution":
        result = Solution(tuple(parse_rational(v) for v in doc["x"]))
        return [] if verify_result(system, result) else ["x does not satisfy the system"]
    problems = []
    lam = tuple(parse_rational(v) for v in doc["lambda"])
    if not verify_result(system, Certificate(lam)):
        problems.append("lambda is not a certificate")
    ints = tuple(doc["lambda_integer"])
    if not verify_result(system, Certificate(tuple(Fraction(v) for v in ints))):
        problems.append("lambda_integer is not a certificate")
    return problems


_VERIFIERS = {
    "axioms": _verify_axioms,
    "filters": _verify_filters,
    "quotient": _verify_quotient,
    "embed-chain": _verify_embed_chain,
    "embed": _verify_embed,
    "farkas": _verify_farkas,
}


def cmd_verify(doc) -> tuple[dict, str, int]:
    if not isinstance(doc, dict) or doc.get("kind") not in _VERIFIERS:
        raise CliError(EXIT_PARSE, "not a witness document (unknown or missing kind)")
    kind = doc["kind"]
    if "error" in doc:
        raise CliError(EXIT_PARSE, f"{kind} document records an error, nothing to verify")
    try:
        problems = _VERIFIERS[kind](doc)
    except CliError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError, StopIteration) as exc:
        raise CliError(EXIT_PARSE, f"malformed {kind} document: {exc!r}") from None
    if kind in ("embed-chain", "embed", "farkas") and doc.get("verified") is not True:
        problems.append("document is not marked verified")
    ok = not problems
    out = {"kind": "verify", "target": kind, "verified": ok, "problems": problems}
    return out, f"verify {kind}: {'ok' if ok else 'FAILED'}", EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------- plumbing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mvembed",
        description="Embed finite MV-chains into L_k and finite MV-algebras into (L_k)^l.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help, inputs=True):
        p = sub.add_parser(name, help=help)
        if inputs:
            p.add_argument("--input", required=True, help="JSON input file, or - for stdin")
        p.add_argument("--output", help="write the JSON document here instead of stdout")
        return p

    add("axioms", "check MV1-MV6 (and adjointness, linearity) on an algebra")
    p = add("filters", "list the filters of an algebra")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--prime", action="store_true", help="only prime filters")
    g.add_argument("--ultra", action="store_true", help="only ultrafilters")
    p = add("quotient", "quotient of an algebra by a filter")
    p.add_argument("--filter", type=int, required=True, help="filter id as listed by 'filters'")
    p = add("embed-chain", "embed a finite subset of a chain into some L_k", inputs=False)
    p.add_argument("--algebra", required=True, help="lk:<k>, qunit or chang")
    p.add_argument("--elements", required=True, help='comma list, e.g. "1/3,2/3" or "(0,1),(1,-1)"')
    p.add_argument("--row-cap", type=int, default=DEFAULT_ROW_CAP)
    p = add("embed", "embed a finite MV-algebra into some (L_k)^l")
    p.add_argument("--row-cap", type=int, default=DEFAULT_ROW_CAP)
    p = add("farkas", "solve A x <= b or return a Farkas certificate")
    p.add_argument("--row-cap", type=int, default=DEFAULT_ROW_CAP)
    p.add_argument("--method", choices=["auto", "fm", "simplex"], default="auto")
    add("verify", "re-check a document written by any other command")
    return parser


def _dispatch(args) -> tuple[dict, str, int]:
    if args.command == "embed-chain":
        return cmd_embed_chain(args.algebra, args.elements, args.row_cap)
    data, digest = _read_json(args.input)
    if args.command == "verify":
        doc, summary, code = cmd_verify(data)
    elif args.command == "farkas":
        if not isinstance(data, dict):
            raise CliError(EXIT_PARSE, "a system must be a JSON object")
        doc, summary, code = cmd_farkas(data, args.row_cap, args.method)
    else:
        alg = _load_algebra(data)
        if args.command == "axioms":
            doc, summary, code = cmd_axioms(alg)
        elif args.command == "filters":
            doc, summary, code = cmd_filters(alg, args.prime, args.ultra)
        elif args.command == "quotient":
            doc, summary, code = cmd_quotient(alg, args.filter)
        else:
            doc, summary, code = cmd_embed(alg, args.row_cap)
    doc["input_digest"] = digest
    return doc, summary, code


def _emit(doc: dict, path: str | None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        doc, summary, code = _dispatch(args)
    except CliError as exc:
        if exc.document is not None:
            _emit(exc.document, args.output)
        print(f"mvembed {args.command}: {exc}", file=sys.stderr)
        return exc.code
    except RowLimitExceeded as exc:
        print(f"mvembed {args.command}: row cap reached: {exc}", file=sys.stderr)
        return EXIT_CAP
    _emit(doc, args.output)
    print(f"{summary} [{time.perf_counter() - start:.3f}s]", file=sys.stderr)
    return code


def run() -> None:
    sys.exit(main())
