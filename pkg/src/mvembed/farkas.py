"""Exact linear feasibility with certificates.

``solve_inequalities`` decides ``A x <= b`` over the rationals and returns
either a :class:`Solution` or a :class:`Certificate` ``lam >= 0`` with
``lam A = 0`` and ``lam b < 0``.

Internally every row is a coprime integer vector, a positive multiple of a
nonnegative combination of input rows. The steps are:

* pairs of rows ``r`` / ``-r`` with opposite right-hand sides are recognised
  as equalities and used to substitute variables away;
* rows that are positive multiples of each other are merged, keeping the
  tightest right-hand side, and rows implied by the single-variable bounds
  are dropped;
* Fourier-Motzkin elimination in ascending variable order, pruned by the
  Chernikov and Kohler support rules, while the system stays small;
  otherwise (or with ``method="simplex"``) phase one of Bland's simplex on
  the Farkas dual.

Multipliers are only tracked when the cheap first pass reports infeasibility;
the second pass repeats the same deterministic steps with bookkeeping. Every
result is re-checked exactly before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Mapping, Sequence, Union

from .rational import RationalLike, format_rational, parse_rational, scale_to_integers

DEFAULT_ROW_CAP = 200_000
# in "auto" mode Fourier-Motzkin hands over to the simplex beyond this many rows
FM_ROW_BUDGET = 300

ZERO = Fraction(0)


class RowLimitExceeded(RuntimeError):
    """Fourier-Motzkin produced more intermediate rows than the configured cap."""


class LinearSystem:
    """``A x <= b`` with exact rational entries, stored row-sparse.

    ``A`` may be given densely (list of lists) or as a list of ``{column: value}``
    mappings, in which case ``n_vars`` is required.
    """

    def __init__(self, A: Sequence, b: Sequence[RationalLike], n_vars: int | None = None):
        if len(A) != len(b):
            raise ValueError(f"A has {len(A)} rows but b has {len(b)} entries")
        if not A:
            raise ValueError("a system needs at least one row")
        rows = []
        for row in A:
            if isinstance(row, Mapping):
                if n_vars is None:
                    raise ValueError("sparse rows need n_vars")
                sparse = {int(j): parse_rational(v) for j, v in row.items()}
                if any(not 0 <= j < n_vars for j in sparse):
                    raise ValueError("sparse row has a column out of range")
            else:
                if n_vars is None:
                    n_vars = len(row)
                if len(row) != n_vars:
                    raise ValueError(f"row of length {len(row)}, expected {n_vars}")
                sparse = {j: parse_rational(v) for j, v in enumerate(row)}
            rows.append({j: v for j, v in sparse.items() if v})
        if not n_vars or n_vars < 1:
            raise ValueError("a system needs at least one variable")
        self.rows: tuple[dict[int, Fraction], ...] = tuple(rows)
        self.b: tuple[Fraction, ...] = tuple(parse_rational(v) for v in b)
        self.n = n_vars
        self._int_rows = None

    def integer_rows(self) -> list[tuple[dict[int, int], int, Fraction]]:
        """Each row as a coprime integer row, with the positive factor applied."""
        if self._int_rows is None:
            self._int_rows = [_integer_row(c, r) for c, r in zip(self.rows, self.b)]
        return self._int_rows

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def A(self) -> list[list[Fraction]]:
        return [[row.get(j, ZERO) for j in range(self.n)] for row in self.rows]

    def __repr__(self) -> str:
        return f"LinearSystem(m={self.m}, n={self.n})"

    def to_json(self, sparse: bool = False) -> dict:
        """Dense ``{"A": [[...]], "b": [...]}``, or with ``sparse`` the rows as
        ``{column: value}`` objects plus ``"n"``; entries are rational strings."""
        b = [format_rational(v) for v in self.b]
        if sparse:
            rows = [{str(j): format_rational(v) for j, v in sorted(r.items())} for r in self.rows]
            return {"n": self.n, "A": rows, "b": b}
        return {"A": [[format_rational(v) for v in row] for row in self.A], "b": b}

    @classmethod
    def from_json(cls, data: Mapping) -> "LinearSystem":
        try:
            if "n" in data:
                return cls(data["A"], data["b"], n_vars=data["n"])
            return cls(data["A"], data["b"])
        except KeyError as exc:
            raise ValueError(f"system JSON is missing {exc}") from None
        except TypeError as exc:
            raise ValueError(f"malformed system JSON: {exc}") from None


@dataclass(frozen=True)
class Solution:
    x: tuple[Fraction, ...]


@dataclass(frozen=True)
class Certificate:
    """``lam`` for ``A x <= b``; for the equality form it holds ``y``."""

    lam: tuple[Fraction, ...]


FeasibilityResult = Union[Solution, Certificate]


class _Row:
    """An inequality ``coef . x <= rhs`` with coprime integer entries.

    ``mult`` (only when tracking) expresses the row as a nonnegative
    combination of the input rows.
    """

    __slots__ = ("coef", "rhs", "mult", "neg_mult", "support")

    def __init__(self, coef, rhs, mult=None, neg_mult=None, support=0):
        self.coef = coef
        self.rhs = rhs
        self.mult = mult
        # equality rows also carry the multipliers of their negated copy
        self.neg_mult = neg_mult
        # bitmask of the phase-2 input rows combined into this one
        self.support = support


def _axpy(dst: dict, t, src: dict) -> None:
    """dst += t * src, dropping zeros."""
    for k, v in src.items():
        w = dst.get(k, 0) + t * v
        if w:
            dst[k] = w
        else:
            dst.pop(k, None)


def _scaled(d: dict, t) -> dict:
    return {k: t * v for k, v in d.items()}


class _Infeasible(Exception):
    def __init__(self, mult):
        self.mult = mult


def _integer_row(coef: dict, rhs: Fraction) -> tuple[dict, int, Fraction]:
    """Positive multiple of a row with coprime integer entries, and the factor."""
    den = rhs.denominator
    for v in coef.values():
        d = v.denominator
        if den % d:
            den = den * d // gcd(den, d)
    ints = {k: v.numerator * (den // v.denominator) for k, v in coef.items()}
    r = rhs.numerator * (den // rhs.denominator)
    g = gcd(r, *ints.values()) or 1
    if g > 1:
        ints = {k: v // g for k, v in ints.items()}
        r //= g
    return ints, r, Fraction(den, g)


def _combine(a: int, r: _Row, t: int, e: _Row, track: bool):
    """Primitive form of ``a r + t e`` with ``a > 0`` and ``t >= 0``.

    Returns ``(coef, rhs, mult, g)`` where ``g`` is the divided-out content.
    """
    coef = {k: a * c for k, c in r.coef.items()}
    for k, c in e.coef.items():
        w = coef.get(k, 0) + t * c
        if w:
            coef[k] = w
        else:
            coef.pop(k, None)
    rhs = a * r.rhs + t * e.rhs
    g = gcd(rhs, *coef.values()) or 1
    if g > 1:
        coef = {k: c // g for k, c in coef.items()}
        rhs //= g
    mult = None
    if track:
        mult = _scaled(r.mult, Fraction(a, g))
        _axpy(mult, Fraction(t, g), e.mult)
    return coef, rhs, mult, g


def _dedupe(rows: list[_Row], track: bool, by_support: bool = False) -> list[_Row]:
    """Drop repeated rows.

    Without ``by_support`` rows that are positive multiples in their
    coefficients are merged into the tightest one. With it, only rows equal in
    coefficients, right-hand side and support are merged; such rows are
    interchangeable for the support rules below.
    """
    best: dict = {}
    order = []
    for r in rows:
        if not r.coef:
            if r.rhs < 0:
                raise _Infeasible(r.mult)
            continue
        c = gcd(*r.coef.values())
        coef_key = tuple(sorted((k, v // c) for k, v in r.coef.items()))
        bound = Fraction(r.rhs, c)
        key = (coef_key, r.rhs, r.support) if by_support else coef_key
        prev = best.get(key)
        if prev is None:
            best[key] = (bound, r)
            order.append(key)
        elif bound < prev[0]:
            best[key] = (bound, r)
    return [best[k][1] for k in order]


def _drop_box_implied(rows: list[_Row]) -> list[_Row]:
    """Drop rows implied by the single-variable rows alone.

    Single-variable rows give a box ``lo <= x <= hi``; a wider row whose
    maximum over that box is at most its right-hand side cannot cut anything.
    """
    lo: dict[int, Fraction] = {}
    hi: dict[int, Fraction] = {}
    for r in rows:
        if len(r.coef) == 1:
            (v, c), = r.coef.items()
            bound = Fraction(r.rhs, c)
            if c > 0:
                hi[v] = min(hi.get(v, bound), bound)
            else:
                lo[v] = max(lo.get(v, bound), bound)
    kept = []
    for r in rows:
        if len(r.coef) > 1:
            top = ZERO
            for v, c in r.coef.items():
                b = (hi if c > 0 else lo).get(v)
                if b is None:
                    break
                top += c * b
            else:
                if top <= r.rhs:
                    continue
        kept.append(r)
    return kept


def _minimal_support(rows: list[_Row], eliminated: int) -> list[_Row]:
    """Drop rows that are provably redundant after ``eliminated`` FM steps.

    A row combining more than ``eliminated + 1`` inputs (Chernikov), or whose
    input set strictly contains that of another row (Kohler), is implied by
    the remaining rows.
    """
    limit = eliminated + 1
    candidates = [r for r in rows if r.support.bit_count() <= limit]
    by_size = sorted(range(len(candidates)), key=lambda i: candidates[i].support.bit_count())
    kept_supports: list[int] = []
    keep = [False] * len(candidates)
    for i in by_size:
        s = candidates[i].support
        if any(t != s and t & ~s == 0 for t in kept_supports):
            continue
        keep[i] = True
        kept_supports.append(s)
    return [r for r, k in zip(candidates, keep) if k]


def _substitute_equalities(system: LinearSystem, track: bool) -> tuple[list[_Row], list]:
    """Use every equality pair to substitute one variable away.

    Returns the remaining inequality rows and the pivots, in order, for back
    substitution. Raises :class:`_Infeasible` on a row ``0 <= negative``.
    """
    rows: dict[int, _Row] = {}
    equalities: list[int] = []
    unmatched: dict = {}
    for i, (icoef, irhs, scale) in enumerate(system.integer_rows()):
        if not icoef:
            if irhs < 0:
                raise _Infeasible({i: scale} if track else None)
            continue
        mult = {i: scale} if track else None
        key = (tuple(sorted(icoef.items())), irhs)
        neg_key = (tuple(sorted((k, -v) for k, v in icoef.items())), -irhs)
        partner = unmatched.pop(neg_key, None)
        if partner is not None:
            # fold row i into its partner as the negated copy of an equality
            rows[partner].neg_mult = mult
            equalities.append(partner)
        else:
            unmatched.setdefault(key, i)
            rows[i] = _Row(dict(icoef), irhs, mult)
    eq_set = set(equalities)

    column: dict[int, set[int]] = {}
    for rid, r in rows.items():
        for v in r.coef:
            column.setdefault(v, set()).add(rid)

    pivots: list = []
    for eid in equalities:
        e = rows.pop(eid)
        if not e.coef:
            if e.rhs < 0:
                raise _Infeasible(e.mult)
            if e.rhs > 0:
                raise _Infeasible(e.neg_mult)
            continue
        # fewest occurrences first keeps fill-in low; ties by index
        v = min(e.coef, key=lambda u: (len(column[u]), u))
        ev = e.coef[v]
        for u in e.coef:
            column[u].discard(eid)
        pivots.append((v, e.coef, e.rhs))
        a = abs(ev)
        sign = 1 if ev > 0 else -1
        e_neg = _signed(e, -1)
        for rid in sorted(column[v]):
            r = rows[rid]
            # r <- a r + t e; a negative t means adding |t| copies of -e
            t = -sign * r.coef[v]
            for u in r.coef:
                column[u].discard(rid)
            coef, rhs, mult, g = _combine(a, r, abs(t), e if t > 0 else e_neg, track)
            if track and r.neg_mult is not None:
                neg = _scaled(r.neg_mult, Fraction(a, g))
                _axpy(neg, Fraction(abs(t), g), e.mult if t < 0 else e.neg_mult)
                r.neg_mult = neg
            r.coef, r.rhs, r.mult = coef, rhs, mult
            for u in r.coef:
                column[u].add(rid)
        del column[v]
    return [rows[rid] for rid in sorted(rows) if rid not in eq_set], pivots


def _signed(e: _Row, t: int) -> _Row:
    """``e`` itself, or its negated copy when ``t < 0``."""
    if t >= 0:
        return e
    return _Row({k: -c for k, c in e.coef.items()}, -e.rhs, e.neg_mult)


def _fourier_motzkin(active: list[_Row], row_cap: int, track: bool) -> list:
    """Eliminate all variables in ascending order; returns the bound rows per variable."""
    for i, r in enumerate(active):
        r.support = 1 << i
    history = []
    pending = sorted({v for r in active for v in r.coef})
    for step, v in enumerate(pending, start=1):
        pos, neg, rest = [], [], []
        for r in active:
            c = r.coef.get(v)
            if c is None:
                rest.append(r)
            elif c > 0:
                pos.append(r)
            else:
                neg.append(r)
        history.append((v, [(r.coef, r.rhs) for r in pos + neg]))
        limit = step + 1
        combos = []
        for p in pos:
            pv = p.coef[v]
            for q in neg:
                support = p.support | q.support
                if support.bit_count() > limit:
                    continue
                coef, rhs, mult, _ = _combine(-q.coef[v], p, pv, q, track)
                coef.pop(v, None)
                combos.append(_Row(coef, rhs, mult, support=support))
        if len(rest) + len(combos) > row_cap:
            raise RowLimitExceeded(
                f"eliminating x{v} produced {len(rest) + len(combos)} rows (cap {row_cap})"
            )
        active = _minimal_support(_dedupe(rest + combos, track, by_support=True), step)
    return history


def _residual(coef: dict, rhs, v: int, values: dict) -> Fraction:
    return rhs - sum((c * values.get(u, ZERO) for u, c in coef.items() if u != v), ZERO)


def _fm_back_substitute(history: list) -> dict[int, Fraction]:
    """Midpoint of the residual interval, else its finite end, else 0."""
    values: dict[int, Fraction] = {}
    for v, bounds in reversed(history):
        lo = hi = None
        for coef, rhs in bounds:
            bound = _residual(coef, rhs, v, values) / coef[v]
            if coef[v] > 0:
                hi = bound if hi is None or bound < hi else hi
            else:
                lo = bound if lo is None or bound > lo else lo
        if lo is not None and hi is not None:
            values[v] = (lo + hi) / 2
        elif lo is not None:
            values[v] = lo
        elif hi is not None:
            values[v] = hi
        else:
            values[v] = ZERO
    return values


def _simplex_feasibility(rows: list[_Row]):
    """Decide ``R w <= r`` via phase one of Bland's simplex on the Farkas dual.

    The dual asks for ``lam >= 0`` with ``lam R = 0`` and ``-lam r = 1``; it has
    one equation per variable plus one, so the tableau stays short even when
    there are many rows. The tableau is kept fraction-free: integer entries
    over a common positive denominator ``D``, updated by Bareiss' rule whose
    divisions are exact. Returns ``dict`` values of ``w`` when the primal is
    feasible, otherwise the list of row weights ``lam``.
    """
    variables = sorted({v for r in rows for v in r.coef})
    d = len(variables)
    R = len(rows)
    width = R + d + 1
    # equations: for each variable, sum_i lam_i R_i[v] = 0; last: -sum lam_i r_i = 1
    tab = []
    for j, v in enumerate(variables):
        line = [r.coef.get(v, 0) for r in rows] + [0] * (d + 2)
        line[R + j] = 1
        tab.append(line)
    last = [-r.rhs for r in rows] + [0] * (d + 1) + [1]
    last[R + d] = 1
    tab.append(last)
    # the phase-one right-hand sides must be nonnegative
    for line in tab:
        if line[width] < 0:  # pragma: no cover - all are 0 or 1 by construction
            raise RuntimeError("negative phase-one right-hand side")
    basis = [R + j for j in range(d + 1)]
    # reduced costs of phase one (cost 1 on the artificial columns)
    cost = [0] * (width + 1)
    for line in tab:
        for c in range(width + 1):
            cost[c] -= line[c]
    for j in range(d + 1):
        cost[R + j] += 1
    D = 1
    while True:
        enter = next((c for c in range(width) if cost[c] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i, line in enumerate(tab):
            a = line[enter]
            if a > 0:
                ratio = Fraction(line[width], a)
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # pragma: no cover - phase one is bounded below by 0
            raise RuntimeError("unbounded phase-one problem")
        piv = tab[leave]
        p = piv[enter]
        nz = [c for c, x in enumerate(piv) if x]
        for line in tab + [cost]:
            if line is piv:
                continue
            f = line[enter]
            if f:
                for c in range(width + 1):
                    line[c] *= p
                for c in nz:
                    line[c] -= f * piv[c]
            else:
                for c in range(width + 1):
                    line[c] *= p
            for c in range(width + 1):
                line[c] //= D
        D = p
        basis[leave] = enter
    if cost[width] == 0:
        lam = [ZERO] * R
        for i, b in enumerate(basis):
            if b < R:
                lam[b] = Fraction(tab[i][width], D)
        return lam
    # primal point from the phase-one duals y_j = 1 - reduced cost of artificial j
    y = [D - cost[R + j] for j in range(d + 1)]
    return {v: Fraction(y[j], y[d]) for j, v in enumerate(variables)}


def _attempt(system: LinearSystem, row_cap: int, method: str, track: bool) -> tuple:
    rows, pivots = _substitute_equalities(system, track)
    rows = _drop_box_implied(_dedupe(rows, track))
    if len(rows) > row_cap:
        raise RowLimitExceeded(f"{len(rows)} rows remain after substitution (cap {row_cap})")
    values = None
    if method == "fm" or (method == "auto" and len(rows) <= FM_ROW_BUDGET):
        cap = row_cap if method == "fm" else min(row_cap, FM_ROW_BUDGET)
        try:
            history = _fourier_motzkin(rows, cap, track)
        except RowLimitExceeded:
            if method == "fm":
                raise
        else:
            values = _fm_back_substitute(history)
    if values is None:
        outcome = _simplex_feasibility(rows)
        if isinstance(outcome, list):
            mult = None
            if track:
                mult = {}
                for w, r in zip(outcome, rows):
                    if w:
                        _axpy(mult, w, r.mult)
            raise _Infeasible(mult)
        values = outcome
    for v, coef, rhs in reversed(pivots):
        values[v] = _residual(coef, rhs, v, values) / coef[v]
    return tuple(values.get(j, ZERO) for j in range(system.n))


def solve_inequalities(
    system: LinearSystem, row_cap: int = DEFAULT_ROW_CAP, method: str = "auto"
) -> FeasibilityResult:
    """Return a solution of ``A x <= b`` or a Farkas certificate, never both.

    ``method`` is ``"fm"`` (Fourier-Motzkin only), ``"simplex"``, or
    ``"auto"``: Fourier-Motzkin while it stays under ``FM_ROW_BUDGET`` rows,
    simplex otherwise. :class:`RowLimitExceeded` is raised when more than
    ``row_cap`` rows survive substitution, or when Fourier-Motzkin in
    ``"fm"`` mode produces more than that.
    """
    if method not in ("auto", "fm", "simplex"):
        raise ValueError(f"unknown method {method!r}")
    try:
        x = _attempt(system, row_cap, method, track=False)
    except _Infeasible:
        try:
            _attempt(system, row_cap, method, track=True)
        except _Infeasible as exc:
            lam = tuple(exc.mult.get(i, ZERO) for i in range(system.m))
            result: FeasibilityResult = Certificate(lam)
        else:  # pragma: no cover - both passes take identical steps
            raise RuntimeError("tracking pass disagrees with the first pass")
    else:
        result = Solution(x)
    if not verify_result(system, result):  # pragma: no cover - internal consistency
        raise RuntimeError(f"solver produced an invalid {type(result).__name__}")
    return result


def verify_result(system: LinearSystem, result: FeasibilityResult) -> bool:
    """Exact re-check of the defining conditions of either arm."""
    if isinstance(result, Solution):
        x = result.x
        if len(x) != system.n:
            return False
        # compare on the common denominator of x, in integers
        x = [parse_rational(v) for v in x]
        den = 1
        for v in x:
            den = lcm(den, v.denominator)
        X = [v.numerator * (den // v.denominator) for v in x]
        return all(
            sum(c * X[j] for j, c in coef.items()) <= rhs * den
            for coef, rhs, _ in system.integer_rows()
        )
    if isinstance(result, Certificate):
        lam = result.lam
        if len(lam) != system.m or any(l < 0 for l in lam):
            return False
        combo: dict[int, Fraction] = {}
        for l, row in zip(lam, system.rows):
            if l:
                _axpy(combo, Fraction(l), row)
        if combo:
            return False
        return sum((l * bi for l, bi in zip(lam, system.b)), ZERO) < 0
    return False


def integerize_certificate(lam: Sequence[RationalLike]) -> tuple[int, ...]:
    """Scale a nonnegative multiplier vector by the lcm of its denominators."""
    lam = [parse_rational(v) for v in lam]
    if any(v < 0 for v in lam):
        raise ValueError("certificate entries must be nonnegative")
    _, ints = scale_to_integers(lam)
    return tuple(ints)


def _check_matrix(A: Sequence[Sequence[RationalLike]], c: Sequence[RationalLike]):
    if not A or len(A) != len(c):
        raise ValueError("A and c must have the same, nonzero number of rows")
    n = len(A[0])
    if n < 1 or any(len(row) != n for row in A):
        raise ValueError("A must be a non-empty rectangular matrix")
    A = [[parse_rational(v) for v in row] for row in A]
    c = [parse_rational(v) for v in c]
    return A, c, len(A), n


def solve_equality_nonneg(
    A: Sequence[Sequence[RationalLike]],
    c: Sequence[RationalLike],
    row_cap: int = DEFAULT_ROW_CAP,
) -> FeasibilityResult:
    """Find ``x >= 0`` with ``A x = c``, or ``y`` with ``y A >= 0`` and ``y c < 0``.

    Stacks ``{A x <= c, -A x <= -c, -x <= 0}``; a certificate ``(alpha, beta,
    gamma)`` of that system gives ``y = alpha - beta`` since ``y A = gamma >= 0``.
    """
    A, c, m, n = _check_matrix(A, c)
    stacked = [row[:] for row in A] + [[-v for v in row] for row in A]
    stacked += [[Fraction(-1) if j == i else ZERO for j in range(n)] for i in range(n)]
    rhs = c + [-v for v in c] + [ZERO] * n
    result = solve_inequalities(LinearSystem(stacked, rhs), row_cap)
    if isinstance(result, Solution):
        return result
    lam = result.lam
    y = tuple(lam[i] - lam[m + i] for i in range(m))
    return Certificate(y)


def verify_equality_result(
    A: Sequence[Sequence[RationalLike]], c: Sequence[RationalLike], result: FeasibilityResult
) -> bool:
    A, c, m, n = _check_matrix(A, c)
    if isinstance(result, Solution):
        x = result.x
        return (
            len(x) == n
            and all(v >= 0 for v in x)
            and all(sum((a * v for a, v in zip(row, x)), ZERO) == ci for row, ci in zip(A, c))
        )
    if isinstance(result, Certificate):
        y = result.lam
        if len(y) != m:
            return False
        yA = [sum((y[i] * A[i][j] for i in range(m)), ZERO) for j in range(n)]
        return all(v >= 0 for v in yA) and sum((a * b for a, b in zip(y, c)), ZERO) < 0
    return False
