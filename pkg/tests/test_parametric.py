from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from powerinv import parametric as P
from powerinv.indices import power_index
from powerinv.shortening import k_rounding


@st.composite
def params(draw, max_voters=9):
    k = draw(st.integers(2, max_voters - 1))
    n = draw(st.integers(1, max_voters - k))
    l = draw(st.integers(1, k - 1))
    m = draw(st.integers(1, n))
    return P.ParametricParams(k, l, m, n)


@given(params())
@settings(max_examples=40, deadline=None)
def test_weighted_repr_reproduces_game(pp):
    for which in P.WHICH:
        q = pp.variant(which)
        assert P.weighted_repr(q).game() == P.build_game(q)


@given(params(), st.sampled_from([F(1, 3), F(1, 2), F(3, 4)]))
@settings(max_examples=40, deadline=None)
def test_psi_closed_form(pp, p):
    for which in P.WHICH:
        got = list(power_index(P.build_game(pp.variant(which)), f"pbinomial:{p}").values)
        assert got == P.psi_p_closed_form(pp, which, p).expand(pp)


@given(params())
@settings(max_examples=40, deadline=None)
def test_ssi_closed_form(pp):
    for which in P.WHICH:
        got = list(power_index(P.build_game(pp.variant(which)), "ssi").values)
        assert got == P.ssi_closed_form(pp, which).expand(pp)


@given(params())
@settings(max_examples=30, deadline=None)
def test_johnston_closed_form(pp):
    pp = P.ParametricParams(pp.k, 1, pp.m, pp.n)
    for which in P.WHICH:
        got = list(power_index(P.build_game(pp.variant(which)), "js").values)
        assert got == P.johnston_closed_form(pp.k, pp.n, pp.m, which).expand(pp)


@given(params())
@settings(max_examples=40, deadline=None)
def test_rounding_lands_on_g2_or_g3(pp):
    h = k_rounding(P.build_game(pp), pp.k)
    assert h == P.build_game(pp.variant(P.rounding_case(pp)))


def test_typed_triple_helpers():
    pp = P.ParametricParams(3, 1, 2, 3)
    t = P.TypedPowerTriple(F(1), F(2), F(3))
    assert t.expand(pp) == [1, 1, 2, 3, 3, 3]
    assert t.total(pp) == 13
    assert t.normalized(pp).total(pp) == 1
    assert t.distance(P.TypedPowerTriple(F(0), F(2), F(4)), pp) == 5


def test_param_validation():
    for args in ((2, 0, 1, 1), (2, 2, 1, 1), (3, 1, 5, 3), (3, 1, 1, 0)):
        with pytest.raises(ValueError):
            P.ParametricParams(*args)


def test_deltas_are_distances():
    pp = P.ParametricParams(3, 1, 2, 5)
    d = P.psi_p_deltas(pp, F(1, 3))
    g1, g2 = (P.psi_p_closed_form(pp, w, F(1, 3)) for w in ("G1", "G2"))
    assert d.d12 == (abs(g1.t1 - g2.t1), abs(g1.t2 - g2.t2), abs(g1.t3 - g2.t3))


@pytest.mark.parametrize("n", [3, 4, 9, 20, 41])
def test_binomial_and_tail_bounds(n):
    for d in (F(0), F(1, 100), F(1, 10), F(1, 4), F(49, 100)):
        for m in range(1, n + 1):
            assert all(P.tail_bounds_check(n, m, d).values())


def test_product_bound_needs_central_m():
    # away from the two central values the product bound can fail
    assert P.tail_bounds_check(5, 3, F(1, 4))["product"]
    assert "product" not in P.tail_bounds_check(5, 1, F(1, 4))
    # n=5, m=1, p=1/4: (3/4)^4 exceeds 4 (3/4) / 2^4
    assert F(3, 4) ** 4 > 4 * F(3, 4) / 16


def test_johnston_negative_small_cases():
    for k in (2, 3):
        for nt in (1, 2, 5, 10):
            r = P.johnston_negative_check(k, nt)
            assert r["abs12"] and r["abs13"]


def test_pbinomial_witness_grows():
    r = P.pbinomial_negative_witness(2, 1, F(1, 3), [11, 21, 31])
    assert r["ratio_increasing"] and r["xi_decreasing"]
