import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from mvembed.algebra import FiniteMvAlgebra, direct_product, lukasiewicz_chain, trivial_algebra
from mvembed.chains import ChangAlgebra, FiniteChain, RationalChain
from mvembed.embedding import (
    NonMVOracleError,
    RationalValuation,
    build_lemma1_system,
    closure_oplus,
    embed_chain,
    embed_finite_mv,
    rational_valuation,
    verify_valuation,
)
from mvembed.farkas import Certificate
from oracles import find_isomorphism

Q = RationalChain()
C = ChangAlgebra()


def test_closure_examples():
    assert closure_oplus(Q, [F(1, 3)]) == [0, F(1, 3), F(2, 3), 1]
    assert closure_oplus(C, [(0, 1)]) == [(0, 0), (0, 1), (0, 2), (1, 0)]
    assert closure_oplus(Q, []) == [0, 1]
    assert closure_oplus(Q, [0, F(1, 2)]) == [0, F(1, 2), 1]
    with pytest.raises(ValueError):
        closure_oplus(Q, [F(1, 2), F(1, 2)])


def test_lemma1_system_examples():
    L = build_lemma1_system(Q, [F(1, 3)])
    assert L.n == 3 and len(L.rows) == 1
    x, y, row = L.rows[0]
    assert x == y == F(1, 3)
    assert row == {L.index[F(1, 3)]: 2, L.index[F(2, 3)]: -1}
    assert L.system.m == 3 + 2 + 2  # bounds, A, -A, z_j <= z_n
    L = build_lemma1_system(Q, [])
    assert L.n == 1 and L.rows == [] and L.system.m == 1
    L = build_lemma1_system(C, [(0, 1)])
    assert L.n == 3
    assert [r for _, _, r in L.rows] == [{L.index[(0, 1)]: 2, L.index[(0, 2)]: -1}]


def test_rows_exist_exactly_below_the_complement():
    X = [F(1, 5), F(1, 3), F(1, 2), F(3, 4)]
    L = build_lemma1_system(Q, X)
    got = {frozenset((x, y)) for x, y, _ in L.rows}
    want = {frozenset((x, y)) for x, y in itertools.combinations_with_replacement(X, 2) if x <= 1 - y}
    assert got == want


def test_rational_valuation_examples():
    v = rational_valuation(Q, [F(1, 3)])
    assert all(c >= 1 for c in v.q)
    L = v.lemma1
    assert 2 * v.q[L.index[F(1, 3)]] == v.q[L.index[F(2, 3)]]
    v = rational_valuation(Q, [])
    assert v.values == {0: 0, 1: 1}
    v = rational_valuation(C, [(0, 1)])
    assert v[(0, 1)] > 0
    assert 2 * v.q[v.lemma1.index[(0, 1)]] == v.q[v.lemma1.index[(0, 2)]]


def test_verify_valuation_injected_failures():
    X = [F(1, 3)]
    v = rational_valuation(Q, X)
    assert verify_valuation(v, Q, X)
    bad = RationalValuation(dict(v.values), v.q, v.lemma1)
    bad.values[F(0)] = F(1, 2)
    assert ("condition-1", (0,)) in verify_valuation(bad, Q, X).failures
    X = [F(1, 3), F(2, 3)]
    v = rational_valuation(Q, X)
    bad = RationalValuation({**v.values, F(2, 3): v.values[F(2, 3)] + F(1, 100)}, (), v.lemma1)
    tags = verify_valuation(bad, Q, X).failures
    assert ("condition-2", (F(1, 3), F(1, 3))) in tags
    bad = RationalValuation({0: F(0), 1: F(1)}, (), v.lemma1)
    assert verify_valuation(bad, Q, X).failures[0][0] == "undefined"
    bad = RationalValuation({0: F(0), 1: F(1), F(1, 3): F(2)}, (), v.lemma1)
    assert ("range", (F(1, 3),)) in verify_valuation(bad, Q, [F(1, 3)]).failures


def test_valuation_stays_in_unit_interval():
    # nothing in the additivity rows ties 1/3 to 1 here
    for X in ([F(1, 3)], [F(1, 5), F(1, 7)], [(0, 3)]):
        oracle = C if isinstance(X[0], tuple) else Q
        v = rational_valuation(oracle, X)
        assert all(0 < v[x] <= 1 for x in X)


def test_embed_chain_examples():
    e = embed_chain(Q, [0, 1])
    assert e.k == 1 and e.mapping == {0: 0, 1: 1}
    e = embed_chain(Q, [F(1, 2)])
    assert e.k == 2 and e.mapping == {F(1, 2): F(1, 2)}
    e = embed_chain(C, [(0, 1), (1, -1)])
    t = e.mapping[(0, 1)]
    assert 0 < t <= F(1, 2) and e.mapping[(1, -1)] == 1 - t
    assert e.report


def test_embed_chain_truncated_sums_regression():
    # 3/5 (+) 2/3 truncates to 1; a valuation on differences alone can miss that
    X = [F(3, 5), F(2, 3), F(1)]
    e = embed_chain(Q, X)
    f = e.mapping
    assert min(f[F(3, 5)] + f[F(2, 3)], 1) == 1
    assert f[F(3, 5)] < f[F(2, 3)] < f[F(1)]


def test_full_carrier_of_lk_is_isomorphic_image():
    for k in range(1, 8):
        e = embed_chain(FiniteChain(k), FiniteChain(k).elements)
        image = sorted(e.mapping.values())
        assert len(image) == k + 1
        # a (k+1)-element subalgebra of L_k' is the chain of multiples of 1/k
        assert image == [F(i, k) for i in range(k + 1)]


oracle_elements = st.one_of(
    st.tuples(st.just(Q), st.lists(st.fractions(0, 1, max_denominator=30), unique=True, max_size=8)),
    st.tuples(
        st.just(C),
        st.lists(
            st.one_of(st.tuples(st.just(0), st.integers(0, 50)), st.tuples(st.just(1), st.integers(-50, 0))),
            unique=True,
            max_size=8,
        ),
    ),
)


@settings(max_examples=60)
@given(oracle_elements)
def test_embed_chain_properties(case):
    oracle, X = case
    e = embed_chain(oracle, X)
    f = e.mapping
    for x, y in itertools.combinations(sorted(X), 2):
        assert f[x] < f[y]
    for x, y in itertools.product(X, repeat=2):
        if oracle.leq(oracle.neg(y), x) and oracle.neg(y) != x and oracle.oplus(x, y) in f:
            assert min(f[x] + f[y], 1) == 1
    assert all(c >= 1 for c in e.valuation.q)
    assert all((v * e.k).denominator == 1 for v in f.values())


class Broken(RationalChain):
    """Idempotent on the diagonal, so 2 s(x) = s(x) forces s(x) = 0."""

    def oplus(self, a, b):
        return a if a == b else min(a + b, F(1))


def test_non_mv_oracle_is_reported():
    with pytest.raises(NonMVOracleError) as info:
        rational_valuation(Broken(), [F(1, 4)])
    assert isinstance(info.value.certificate, Certificate)


def test_embed_finite_mv_examples():
    e = embed_finite_mv(lukasiewicz_chain(3))
    assert (e.l, e.k) == (1, 3)
    assert [e.mapping[i] for i in range(4)] == [(F(i, 3),) for i in range(4)]
    B = direct_product([lukasiewicz_chain(1)] * 2)
    e = embed_finite_mv(B)
    assert (e.l, e.k) == (2, 1)
    assert len(set(e.mapping.values())) == 4
    e = embed_finite_mv(trivial_algebra())
    assert (e.l, e.k) == (0, 1) and e.mapping == {0: ()}


def test_embed_finite_mv_is_injective_homomorphism():
    for ks in [(2,), (1, 2), (2, 3), (1, 1, 1), (3, 4)]:
        alg = direct_product([lukasiewicz_chain(k) for k in ks])
        e = embed_finite_mv(alg)
        f, T = e.mapping, e.target
        assert len(set(f.values())) == alg.size
        for x, y in itertools.product(alg.elements, repeat=2):
            assert f[alg.oplus(x, y)] == T.oplus(f[x], f[y])
        assert all(f[alg.neg(x)] == T.neg(f[x]) for x in alg.elements)
