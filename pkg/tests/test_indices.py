from fractions import Fraction as F
from itertools import permutations
from math import factorial

import pytest
from hypothesis import given, settings

from powerinv.game_core import Game, enumerate_games, from_weighted, members
from powerinv.indices import (INCREMENTAL_TAGS, TAGS, IndexId, NormalizationOfZero, UndefinedIndex, index_id,
                              normalize, power_index, power_index_naive, ssi_semivalue, turn_losing,
                              update_on_mwc_removal)
from strategies import small_simple_games, weighted_games


# independent oracles

def ssi_by_orderings(g):
    n = g.n
    out = [F(0)] * n
    for order in permutations(range(n)):
        S = 0
        for i in order:
            if not g(S) and g(S | 1 << i):
                out[i] += 1
            S |= 1 << i
    return tuple(x / factorial(n) for x in out)


def swings(g):
    return tuple(sum(1 for S in range(1 << g.n) if not S >> i & 1 and not g(S) and g(S | 1 << i))
                 for i in range(g.n))


def johnston_by_critical_sets(g):
    out = [F(0)] * g.n
    for S in range(1 << g.n):
        if not g(S):
            continue
        crit = [i for i in members(S) if not g(S & ~(1 << i))]
        for i in crit:
            out[i] += F(1, len(crit))
    return tuple(out)


def deegan_packel(g):
    out = [F(0)] * g.n
    for S in g.minimal_winning:
        for i in members(S):
            out[i] += F(1, len(members(S)))
    return tuple(out)


@given(small_simple_games())
def test_ssi_matches_orderings(g):
    assert power_index(g, "ssi").values == ssi_by_orderings(g)


@given(weighted_games(max_n=6))
@settings(max_examples=40)
def test_banzhaf_and_swing_match_swing_count(g):
    s = swings(g)
    assert power_index(g, "swing").values == s
    assert power_index(g, "bz").values == tuple(F(x, 2 ** (g.n - 1)) for x in s)


@given(small_simple_games())
def test_johnston_and_dp(g):
    assert power_index(g, "js").values == johnston_by_critical_sets(g)
    assert power_index(g, "dp").values == deegan_packel(g)


def test_worked_values():
    g = from_weighted(2, [2, 1, 1])
    assert power_index(g, "js").values == (3, F(1, 2), F(1, 2))
    assert power_index(g, index_id("js", True)).values == (F(3, 4), F(1, 8), F(1, 8))
    h = from_weighted(3, [2, 1, 1])
    assert power_index(h, "ssi").values == (F(2, 3), F(1, 6), F(1, 6))
    assert power_index(h, "tijs").values == (1, 0, 0)
    assert power_index(h, "pgi").values == (2, 1, 1)


@pytest.mark.parametrize("tag", [t for t in TAGS if t not in ("semivalue", "pbinomial")])
def test_fast_equals_naive(tag):
    for g in enumerate_games(3):
        if tag in ("shift", "sdp") and not g.is_complete:
            continue
        assert power_index(g, tag).values == power_index_naive(g, tag).values, (tag, g)


def test_parametrized_indices_equal_naive():
    for spec in ("pbinomial:1/3", ssi_semivalue(3), "semivalue:1/2,1/8,1/4"):
        for g in enumerate_games(3):
            assert power_index(g, spec).values == power_index_naive(g, spec).values


def test_efficiency_of_normalized_and_ssi():
    for g in enumerate_games(4):
        assert sum(power_index(g, "ssi").values) == 1
        assert sum(power_index(g, index_id("bz", True)).values) == 1


@given(small_simple_games())
def test_symmetry(g):
    for perm in permutations(range(g.n)):
        h = g.permuted(perm)
        for tag in ("ssi", "bz", "js", "pgi", "kb"):
            a, b = power_index(g, tag).values, power_index(h, tag).values
            assert all(b[perm[i]] == a[i] for i in range(g.n))


@given(small_simple_games())
def test_null_voters_get_nothing(g):
    for tag in ("ssi", "bz", "js", "dp", "pgi"):
        v = power_index(g, tag).values
        assert all(v[i] == 0 for i in g.null_voters)


def test_semivalue_with_ssi_weights():
    for g in enumerate_games(4):
        assert power_index(g, ssi_semivalue(4)).values == power_index(g, "ssi").values


def test_normalization_of_zero():
    # the vetoers of unanimity on {1,2} share the Tijs power
    assert power_index(Game.from_minimal(3, [0b011]), "tijs").values == (1, 1, 0)
    majority = from_weighted(2, [1, 1, 1])
    assert power_index(majority, "tijs").values == (0, 0, 0)
    with pytest.raises(NormalizationOfZero):
        power_index(majority, index_id("tijs", True))


def test_bad_specs():
    for bad in ("nope", "pbinomial", "pbinomial:3/2", "semivalue"):
        with pytest.raises(ValueError):
            index_id(bad)
    assert str(index_id("pbinomial:2/6")) == "pbinomial:1/3"
    assert index_id("BZ", True) == IndexId("bz", True)


def test_shift_indices_need_complete_games():
    g = Game.from_winning(3, [0b011, 0b110, 0b111])
    with pytest.raises((ValueError, UndefinedIndex)):
        power_index(g, "shift")


@given(small_simple_games())
@settings(max_examples=60)
def test_incremental_update(g):
    for tag in INCREMENTAL_TAGS:
        spec = "pbinomial:2/3" if tag == "pbinomial" else tag
        cur = power_index(g, spec)
        for T in g.minimal_winning:
            if T == g.full:
                continue
            assert update_on_mwc_removal(g, T, spec, cur).values == power_index(turn_losing(g, T), spec).values


def test_small_game_values():
    g = from_weighted(2, [2, 1, 1])
    expect = {"bz": (F(3, 4), F(1, 4), F(1, 4)), "swing": (3, 1, 1), "chow": (4, 3, 3),
              "kb": (F(4, 5), F(3, 5), F(3, 5)), "colini": (1, F(1, 3), F(1, 3))}
    for tag, want in expect.items():
        assert power_index(g, tag).values == want
    assert power_index(Game.from_minimal(2, [0b11]), "ssi").values == (F(1, 2), F(1, 2))


def test_chow_kb_phi_agree_normalized():
    for n in (3, 4):
        for g in enumerate_games(n):
            c = power_index(g, index_id("chow", True)).values
            assert power_index(g, index_id("kb", True)).values == c
            assert power_index(g, index_id("phi", True)).values == c


def test_bounded_indices():
    for n in (3, 4):
        for g in enumerate_games(n):
            for tag, r in (("kb", 2), ("phi", 4), ("chow", 2)):
                v = power_index(g, tag).values
                assert max(v) <= r * min(v)
