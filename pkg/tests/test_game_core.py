import json
from itertools import permutations

import pytest
from hypothesis import given, settings

from powerinv.game_core import (Game, ReducedKind, add_null_voter, classify, dual, enumerate_games, from_weighted,
                                game_from_json, game_to_json, is_weighted, mask_of, members, parse_game,
                                parse_weighted, reduced_game, remove_null_voters)
from strategies import small_simple_games, weighted_games


def brute_monotone(n):
    # all 2^(2^n) tables, filtered: an independent count of simple games
    full = 1 << n
    count = 0
    for t in range(1 << full):
        if t & 1 or not t >> (full - 1) & 1:
            continue
        if all(not (t >> S & 1) or t >> (S | 1 << i) & 1 for S in range(full) for i in range(n)):
            count += 1
    return count


@pytest.mark.parametrize("n,simple,complete,weighted", [
    (1, 1, 1, 1), (2, 4, 4, 4), (3, 18, 18, 18), (4, 166, 148, 148),
])
def test_class_counts(n, simple, complete, weighted):
    assert sum(1 for _ in enumerate_games(n, "simple")) == simple
    assert sum(1 for _ in enumerate_games(n, "complete")) == complete
    assert sum(1 for _ in enumerate_games(n, "weighted")) == weighted


def test_simple_count_matches_brute_force():
    for n in (1, 2, 3, 4):
        assert brute_monotone(n) == sum(1 for _ in enumerate_games(n))


def test_boolean_count():
    # v(empty)=0 and v(N)=1 fix two entries of the table
    assert sum(1 for _ in enumerate_games(3, "boolean")) == 2 ** 6


def test_fixed_order_complete_counts():
    assert [sum(g.is_complete for g in enumerate_games(n)) for n in (3, 4, 5)] == [8, 25, 117]


def test_classify_small_examples():
    f = classify(from_weighted(2, [2, 1, 1]))
    assert f["simple"] and f["complete"]
    # {1} and {2,3} are disjoint winning coalitions
    assert not f["proper"]
    assert f["strong"]
    u = Game.from_minimal(2, [0b11])
    assert u.is_proper and not u.is_strong


def test_majority_is_constant_sum():
    g = from_weighted(2, [1, 1, 1])
    assert g.is_proper and g.is_strong
    assert dual(g) == g


def test_boolean_and_monotone_checks():
    assert Game.from_winning(2, [0b01, 0b11, 0b10]).is_simple
    assert not Game(2, bytes([0, 1, 0, 0])).is_boolean  # grand coalition loses
    g = Game.from_winning(3, [0b001, 0b111])  # {1} wins but {1,2} loses
    assert g.is_boolean and not g.is_simple


def test_desirability_order():
    # voter 2 is a vetoer while voter 1 is not, so 1 >= 2 fails
    g = Game.from_winning(3, [0b011, 0b110, 0b111])
    assert g.is_simple
    assert g.is_complete_any_order
    assert not g.is_complete


@given(weighted_games())
def test_weighted_games_roundtrip(g):
    assert g.is_simple
    assert g.is_complete_any_order
    rep = is_weighted(g)
    assert rep is not None and rep.game() == g


@given(small_simple_games())
def test_minimal_winning_generates(g):
    assert Game.from_minimal(g.n, g.minimal_winning) == g
    mw = g.minimal_winning
    assert not any(a != b and a & b == a for a in mw for b in mw)


@given(small_simple_games())
def test_dual_involution(g):
    assert dual(dual(g)) == g
    assert g.is_proper == dual(g).is_strong


@given(small_simple_games())
def test_shift_minimal_subset_of_minimal(g):
    if g.is_complete:
        assert set(g.shift_minimal_winning) <= set(g.minimal_winning)


@given(small_simple_games())
def test_null_and_vetoers(g):
    for i in range(g.n):
        null = all(not g(S) or g(S & ~(1 << i)) for S in range(1 << g.n))
        assert (i in g.null_voters) == null
        assert (i in g.vetoers) == (not g(g.full & ~(1 << i)))


def test_null_voter_add_remove():
    g = from_weighted(2, [1, 1])
    h = add_null_voter(g)
    assert h.n == 3 and h.null_voters == (2,)
    assert remove_null_voters(h) == g


@given(small_simple_games())
def test_permutation_invariance_of_flags(g):
    for perm in permutations(range(g.n)):
        h = g.permuted(perm)
        assert h.is_simple and h.is_proper == g.is_proper and h.is_strong == g.is_strong


def test_reduced_game_kinds():
    g = from_weighted(3, [2, 1, 1])
    assert reduced_game(g, 0b1, 1).kind is ReducedKind.BOOLEAN
    assert reduced_game(g, 0b0, 1).kind is ReducedKind.ALL_LOSING
    assert reduced_game(from_weighted(2, [2, 1, 1]), 0b1, 1).kind is ReducedKind.ALL_WINNING
    with pytest.raises(ValueError):
        reduced_game(g, 0b10, 1)


def test_masks():
    assert mask_of([0, 2]) == 5
    assert members(5) == [0, 2]


def test_json_and_text_forms():
    g = from_weighted(3, [2, 1, 1])
    assert game_from_json(json.loads(json.dumps(game_to_json(g)))) == g
    assert parse_game("[3;2,1,1]") == g
    assert parse_game('{"quota": 3, "weights": [2, 1, 1]}') == g
    rep = parse_weighted("[1/2;1/2,1/4]")
    assert rep.game() == Game.from_minimal(2, [0b01])
    with pytest.raises(ValueError):
        parse_weighted("3;2,1")
