import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from mvembed.algebra import lukasiewicz_chain
from mvembed.chains import (
    ChainPower,
    ChangAlgebra,
    FiniteChain,
    RationalChain,
    oracle_from_spec,
    oracle_spec,
    sample_partial,
    split_elements,
)


def test_finite_chain_agrees_with_table_algebra():
    for k in range(1, 7):
        C, T = FiniteChain(k), lukasiewicz_chain(k)
        assert C.elements == [F(i, k) for i in range(k + 1)]
        for i, j in itertools.product(range(k + 1), repeat=2):
            assert C.oplus(F(i, k), F(j, k)) == F(T.oplus(i, j), k)
            assert C.odot(F(i, k), F(j, k)) == F(T.odot(i, j), k)


def test_finite_chain_membership():
    C = FiniteChain(6)
    assert C.element("1/3") == F(1, 3)
    for bad in ("1/4", "7/6", "-1/6"):
        with pytest.raises(ValueError):
            C.element(bad)
    for k in (0, -2, 1.5, True):
        with pytest.raises(ValueError):
            FiniteChain(k)


def test_rational_chain():
    Q = RationalChain()
    assert Q.oplus(F(2, 3), F(1, 2)) == 1
    assert Q.neg(F(1, 3)) == F(2, 3)
    assert Q.ominus(F(2, 3), F(1, 2)) == F(1, 6)
    assert Q.sort([F(1, 2), F(0), F(1, 3)]) == [0, F(1, 3), F(1, 2)]
    with pytest.raises(ValueError):
        Q.element("3/2")


def test_chang_examples():
    C = ChangAlgebra()
    assert C.oplus((0, 1), (0, 1)) == (0, 2)
    assert C.neg((0, 1)) == (1, -1)
    assert C.oplus((0, 5), (1, -3)) == (1, 0)
    assert C.leq((0, 10**6), (1, -(10**6)))
    assert C.parse(" ( 1 , -2 ) ") == (1, -2)
    for bad in ("(0,-1)", "(1,1)", "(2,0)", "0,1", "(a,b)"):
        with pytest.raises(ValueError):
            C.parse(bad)
    with pytest.raises(ValueError):
        C.element((0.5, 0))


small = st.integers(-20, 20)
chang = st.one_of(
    st.tuples(st.just(0), st.integers(0, 20)), st.tuples(st.just(1), st.integers(-20, 0))
)


@given(chang, chang, chang)
def test_chang_axioms_sampled(x, y, z):
    C = ChangAlgebra()
    o, n = C.oplus, C.neg
    assert o(o(x, y), z) == o(x, o(y, z))
    assert o(x, y) == o(y, x)
    assert o(x, C.zero) == x and n(n(x)) == x
    assert o(x, n(C.zero)) == n(C.zero)
    assert o(n(o(n(x), y)), y) == o(n(o(n(y), x)), x)
    assert C.leq(x, y) == (o(n(x), y) == C.one)


@given(st.integers(1, 10), st.data())
def test_rational_chain_order_matches_mv_order(k, data):
    Q = RationalChain()
    a, b = (F(data.draw(st.integers(0, k)), k) for _ in range(2))
    assert (a <= b) == (Q.oplus(Q.neg(a), b) == 1)


def test_sample_partial_examples():
    P = sample_partial(ChangAlgebra(), [(0, 0), (0, 1), (0, 2), (1, 0)])
    assert P.oplus[((0, 1), (0, 1))] == (0, 2)
    assert not P.oplus_defined((0, 1), (0, 2))  # (0,3) is outside the set
    assert P.oplus[((0, 2), (1, 0))] == (1, 0)
    P = sample_partial(RationalChain(), [F(1, 2)])
    assert not P.oplus_defined(F(1, 2), F(1, 2))  # 1 is not in the set
    assert P.neg[F(1, 2)] == F(1, 2)


def test_chain_power():
    P = ChainPower(2, 3)
    x = (F(1, 2), F(0), F(1))
    assert P.neg(x) == (F(1, 2), F(1), F(0))
    assert P.oplus(x, x) == (F(1), F(0), F(1))
    assert P.name(x) == "(1/2,0,1)"
    assert ChainPower(1, 0).zero == ChainPower(1, 0).one == ()
    with pytest.raises(ValueError):
        P.element((F(1, 3), 0, 0))


def test_split_elements():
    assert split_elements("1/2, 1/3") == ["1/2", "1/3"]
    assert split_elements("(0,1),(1,-1)") == ["(0,1)", "(1,-1)"]
    assert split_elements("") == []
    with pytest.raises(ValueError):
        split_elements("1/2,,1")


def test_oracle_specs_round_trip():
    for spec in ("lk:5", "qunit", "chang"):
        assert oracle_spec(oracle_from_spec(spec)) == spec
    assert oracle_from_spec("LK:3") == FiniteChain(3)
    for bad in ("lk:x", "lk:0", "real"):
        with pytest.raises(ValueError):
            oracle_from_spec(bad)
