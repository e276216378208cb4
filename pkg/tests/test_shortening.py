from fractions import Fraction as F

import pytest
from hypothesis import given

from powerinv.game_core import Game, enumerate_games, from_weighted
from powerinv.shortening import (ShorteningId, check_preservation, is_k_pure, k_rounding, k_up_rounding, pk_rounding,
                                 preservation_holds, reduced_sizes, switches)
from strategies import small_simple_games


def k_pure_tables(n, k):
    # every table that only depends on the first k voters
    for bits in range(1 << (1 << k)):
        yield Game(n, bytes(bits >> (S & ((1 << k) - 1)) & 1 for S in range(1 << n)))


@given(small_simple_games())
def test_rounding_is_k_pure_and_closest(g):
    for k in range(1, g.n):
        h = k_rounding(g, k)
        assert is_k_pure(h, k)
        # fewest switches among all k-pure tables (ties may differ)
        assert switches(g, h) == min(switches(g, t) for t in k_pure_tables(g.n, k))


def test_tie_loses_by_default():
    maj = from_weighted(2, [1, 1, 1])
    assert k_rounding(maj, 2) == Game.from_minimal(3, [0b011])
    assert k_rounding(maj, 2, ties_win=True) == Game.from_minimal(3, [0b001, 0b010])


def test_pk_rounding_half_equals_k_rounding():
    for g in enumerate_games(4):
        for k in (1, 2, 3):
            assert pk_rounding(g, F(1, 2), k) == k_rounding(g, k)


def test_up_rounding():
    g = from_weighted(2, [1, 1, 1])
    # any A whose reduced game has a winning coalition becomes winning
    assert k_up_rounding(g, 2) == Game.from_minimal(3, [0b001, 0b010])
    assert ShorteningId("up", 2).apply(g) == k_up_rounding(g, 2)


def test_reduced_sizes():
    g = from_weighted(2, [1, 1, 1])
    assert reduced_sizes(g, 2) == [0, 1, 1, 2]


def test_bad_arguments():
    g = from_weighted(2, [1, 1, 1])
    for k in (0, 3):
        with pytest.raises(ValueError):
            k_rounding(g, k)
    with pytest.raises(ValueError):
        pk_rounding(g, 1, 1)


@pytest.mark.parametrize("name", ["simple", "complete", "weighted", "proper"])
def test_class_preservation(name):
    for n in (2, 3, 4):
        for g in enumerate_games(n):
            for k in range(1, n):
                if k_rounding(g, k).is_constant:
                    continue
                prem, concl = check_preservation(g, k)[name]
                assert concl or not prem, (g, k)


def test_strong_not_preserved_by_rounding():
    # majority of three is strong; rounding on two voters gives unanimity on {1,2}
    maj = from_weighted(2, [1, 1, 1])
    rep = check_preservation(maj, 2)
    assert rep["strong_simple"] == (True, False)
    assert not preservation_holds(rep)


def test_strong_preserved_by_up_rounding():
    for n in (2, 3, 4):
        for g in enumerate_games(n):
            if not g.is_strong:
                continue
            for k in range(1, n):
                h = k_up_rounding(g, k)
                assert h.is_constant or h.is_strong
