import json
from fractions import Fraction as F

import pytest

from powerinv import inverse as inv
from powerinv.game_core import Game, enumerate_games, from_weighted
from powerinv.indices import index_id, power_index
from powerinv.lpfile import IlpModel, emit_lp, parse_lp

BZN = index_id("bz", True)


def test_instance_validation_and_json():
    with pytest.raises(ValueError):
        inv.InverseInstance((F(1, 2), F(1, 3)), BZN)
    with pytest.raises(ValueError):
        inv.InverseInstance((F(1, 2), F(1, 2)), BZN, "nope")
    inst = inv.InverseInstance(("3/4", "1/4", 0), BZN, norm="linf")
    assert inst.norm == "Linf"
    again = inv.InverseInstance.from_json(json.loads(json.dumps(inst.to_json())))
    assert again == inst


def test_exhaustive_against_direct_minimum():
    for sigma in [(F(1, 2), F(1, 2), F(0)), (F(3, 5), F(1, 5), F(1, 5)), (F(1, 2), F(1, 3), F(1, 6))]:
        inst = inv.InverseInstance(sigma, BZN)
        direct = min(sum(abs(a - b) for a, b in zip(power_index(g, BZN).values, sigma))
                     for g in enumerate_games(3))
        sol = inv.exhaustive_inverse(inst)
        assert sol.best_deviation == direct
        assert all(inv.deviation(g, inst) == direct for g in sol.witnesses)


def test_linf_norm():
    inst = inv.InverseInstance((F(3, 4), F(1, 4), F(0)), BZN, norm="linf")
    assert inv.exhaustive_inverse(inst).best_deviation == F(1, 5)


def test_solution_json_is_deterministic():
    inst = inv.InverseInstance((F(3, 4), F(1, 4), F(0)), BZN)
    assert inv.exhaustive_inverse(inst).dumps() == inv.exhaustive_inverse(inst).dumps()


def test_big_m():
    assert [inv.big_m(n) for n in range(1, 7)] == [2, 6, 12, 28, 68, 171]
    for n in range(1, 12):
        # M^2 >= (4n((n+1)/4)^((n+1)/2))^2 > (M-1)^2, all rational
        sq = 16 * n * n * F(n + 1, 4) ** (n + 1)
        m = inv.big_m(n)
        assert m * m >= sq > (m - 1) ** 2


def test_weights_as_power_baseline():
    for n in (3, 4, 5):
        sigma = [F(2, 2 * n - 1)] * (n - 1) + [F(1, 2 * n - 1)]
        best, _, recs = inv.weights_as_power_baseline(sigma, "bz")
        assert best == min(d for _, d in recs) >= inv.baseline_bound(n)


@pytest.mark.parametrize("cls,count", [("boolean", 64), ("simple", 18), ("complete", 8), ("weighted", 8)])
def test_class_rows_n3(cls, count):
    r = inv.verify_model_semantics(3, cls, indices=[])
    assert r.class_match and r.feasible == count


def test_weighted_rows_any_order():
    r = inv.verify_model_semantics(2, "weighted", indices=[], ordered=False)
    assert r.class_match and r.feasible == 4


def test_index_blocks_force_power_n3():
    r = inv.verify_model_semantics(3, "simple", indices=["ssi", "bz", "js", "dp", "tijs", "chow"])
    assert r.ok, r.index_failures[:3]


def test_published_complete_rows_admit_a_non_complete_game():
    # Shift rows that only move the largest member (plus dropping voter n)
    # accept W = {12, 23, 123}, where voter 2 is more desirable than voter 1.
    n = 3
    g = Game.from_winning(n, [0b011, 0b110, 0b111])
    assert g.is_simple and not g.is_complete
    rows = []
    for S in range(1, 1 << (n - 1)):
        top = S.bit_length() - 1
        rows.append((S ^ (1 << top) ^ (1 << (top + 1)), S))
    for S in range(1 << n):
        if S >> (n - 1) & 1:
            rows.append((S ^ (1 << (n - 1)), S))
    assert all(g(lo) <= g(hi) for lo, hi in rows)
    # the model we emit rejects it
    model = inv.build_ilp(inv.InverseInstance((F(1, 3),) * 3, index_id("chow"), "complete"))
    assert g not in inv.class_feasible_games(model, n)


def forced_power(model, g, n):
    leaves = inv.completion_ranges(model, inv.incidence(g), [f"p_{i + 1}" for i in range(n)])
    vals = {tuple(leaf[f"p_{i + 1}"] for i in range(n)) for leaf in leaves}
    assert len(vals) == 1
    return [lo for lo, hi in vals.pop()]


def test_tijs_encodings_disagree():
    inst = inv.InverseInstance((F(1, 3),) * 3, index_id("tijs"))
    vetoer = inv.build_ilp(inst, tijs_encoding="vetoer")
    unique = inv.build_ilp(inst, tijs_encoding="unique-mwc")
    g = from_weighted(3, [2, 1, 1])
    assert power_index(g, "tijs").values == (1, 0, 0)
    assert forced_power(vetoer, g, 3) == [1, 0, 0]
    assert forced_power(unique, g, 3) == [0, 0, 0]
    u = Game.from_minimal(3, [0b011])
    assert forced_power(vetoer, u, 3) == [1, 1, 0]
    assert forced_power(unique, u, 3) == [1, 1, 1]


def test_objective_matches_deviation():
    inst = inv.InverseInstance((F(1, 2), F(1, 3), F(1, 6)), index_id("bz"))
    for g in list(enumerate_games(3))[::3]:
        assert inv.objective_matches(inst, g)
    ninst = inv.InverseInstance((F(1, 2), F(1, 3), F(1, 6)), BZN)
    for g in list(enumerate_games(3))[::4]:
        assert inv.objective_matches(ninst, g, alpha=F(1, 3))


def test_bisection_with_ilp_oracle():
    inst = inv.InverseInstance((F(3, 4), F(1, 4), F(0)), BZN)
    exact = inv.exhaustive_inverse(inst).best_deviation
    sol = inv.bisection_normalized(inst, tol=F(1, 64), oracle=inv.ilp_oracle())
    lo, hi = sol.interval
    assert lo < exact <= hi and hi - lo <= F(1, 64)


def test_bisection_needs_normalized_index():
    with pytest.raises(ValueError):
        inv.bisection_normalized(inv.InverseInstance((F(1, 2), F(1, 2)), index_id("bz")))


def test_lp_roundtrip_is_byte_identical():
    for sigma, idx, cls, alpha in [((F(1, 3),) * 3, "ssi", "simple", None),
                                   ((F(3, 4), F(1, 4), F(0)), "bz", "weighted", None),
                                   ((F(1, 2), F(1, 2)), index_id("js", True), "complete", F(1, 10))]:
        model = inv.build_ilp(inv.InverseInstance(sigma, index_id(idx), cls), alpha=alpha)
        text = emit_lp(model)
        back = parse_lp(text)
        assert emit_lp(back) == text
        assert set(back.variables) == set(model.variables)


def test_lp_writer_format():
    m = IlpModel()
    x, y = m.var("x_1", "bin"), m.var("p_1")
    m.add("row", [(F(1, 3), x), (-1, y)], ">=", F(1, 6))
    m.add("row", [(F(1, 4), x)], "<=", 1)
    m.objective = {y: F(1)}
    text = emit_lp(m)
    assert " row_1: 2 x_1 - 6 p_1 >= 1" in text
    assert " row_2: 0.25 x_1 <= 1" in text
    assert " p_1 >= 0" in text and "Binary\n x_1\nEnd" in text
    with pytest.raises(ValueError):
        m.add("bad", [(0, x)], ">=", 1)
