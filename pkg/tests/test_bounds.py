from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from powerinv import bounds
from powerinv.game_core import enumerate_games, from_weighted
from powerinv.indices import index_id, normalize, power_index
from powerinv.shortening import k_rounding
from strategies import small_simple_games


def test_quality_table():
    assert bounds.quality("bz", 2) == (1, 3)
    assert bounds.quality("colprev", 3) == (2, 7)
    assert bounds.quality("tijs", 5) == (0, 1)
    assert bounds.quality("pbinomial:1/2", 2) == (1, 3)
    assert bounds.quality("semivalue:1/4,1/12,1/12,1/4", 2) == (3, 9)
    for tag in ("js", "kb", "phi", "chow", "ssi", "pbinomial:1/3"):
        with pytest.raises(bounds.NoQualityFunctions):
            bounds.quality(tag, 2)


def test_canonical_f2():
    for tag in ("bz", "colprev"):
        f1, f2 = bounds.quality(tag, 3)
        assert bounds.canonical_f2(f1, 3) == f2


def test_tijs_uses_up_rounding():
    assert bounds.shortening_for("tijs", 2).tag == "up"
    assert bounds.shortening_for("bz", 2).tag == "k"


@given(small_simple_games())
@settings(max_examples=60)
def test_bz_bound_by_hand(g):
    # recompute the normalized bound independently for Banzhaf
    for k in range(1, g.n):
        c = bounds.approximation_bounds(g, k, "bz")
        assert c.ok
        h = k_rounding(g, k)
        pg = power_index(g, "bz").values
        eps = sum(pg[k:]) / sum(pg)
        assert c.epsilon == eps
        if not h.is_constant and sum(power_index(h, "bz").values) > 0:
            ng, nh = normalize(power_index(g, "bz")).values, normalize(power_index(h, "bz")).values
            assert sum(abs(a - b) for a, b in zip(ng, nh)) <= (3 * k + 2) * eps


@pytest.mark.parametrize("tag", ["bz", "tijs", "colini", "dp", "shift"])
def test_sweep_n4(tag):
    r = bounds.empirical_bound_sweep(4, tag, local=True)
    assert r.ok
    assert r.max_ratio_absolute <= 1 and r.max_ratio_normalized <= 1


def test_sweep_rejects_indices_without_quality_functions():
    with pytest.raises(bounds.NoQualityFunctions):
        bounds.empirical_bound_sweep(3, "js")


def brute_lambda(prefix):
    best = sum(prefix)  # constant games sit at the zero vector
    k = len(prefix)
    for g in enumerate_games(k):
        v = normalize(power_index(g, "bz")).values
        best = min(best, sum(abs(a - b) for a, b in zip(v, prefix)))
    return best


def test_lambda_min():
    prefix = [F(3, 4), F(1, 4)]
    assert bounds.lambda_min(prefix, "simple", 2, "bz") == brute_lambda(prefix) == F(1, 2)


def test_lower_bounds():
    lb = bounds.approximation_lower_bound([F(3, 4), F(1, 4), 0, 0], 2, "bz")
    assert lb.path == "no-tail"
    # min(2/f2, 2 lambda / (f2 + k f1 + 3)) with f1=1, f2=3, lambda=1/2
    assert lb.value == min(F(2, 3), 2 * F(1, 2) / 8) == F(1, 8)
    for n in (4, 5, 7):
        s = [F(29, 40), F(9, 40)] + [F(1, 20 * (n - 2))] * (n - 2)
        lb = bounds.approximation_lower_bound(s, 2, "bz")
        assert lb.path == "tail" and lb.alpha == F(1, 20) and lb.value == F(3, 80)


def test_lower_bound_below_exhaustive_optimum():
    from powerinv.inverse import InverseInstance, exhaustive_inverse
    s = (F(29, 40), F(9, 40), F(1, 40), F(1, 40))
    opt = exhaustive_inverse(InverseInstance(s, index_id("bz", True))).best_deviation
    assert opt >= bounds.approximation_lower_bound(s, 2, "bz").value


def test_lower_bound_hypotheses():
    with pytest.raises(bounds.HypothesisViolation):
        bounds.approximation_lower_bound([F(1, 2), F(1, 2), 0], 2, "js")
    with pytest.raises(bounds.HypothesisViolation):
        bounds.approximation_lower_bound([F(1, 3), F(1, 3), F(1, 3)], 2, "bz")


def test_tightness_vs_original():
    assert all(bounds.tightness_vs_original(k, F(1, 2 * (k + 1))) for k in (1, 2, 3))


def test_constant_guard():
    assert bounds.constant_guard_failures(4, "bz") == []


def test_pk_probe_is_reported_not_asserted():
    r = bounds.pk_conjecture_probe(F(1, 3), 4, 2)
    assert r["games"] > 0 and r["max_ratio"] >= 0
