"""Named invariant suites.  Each returns a list of (check, ok, detail)."""

from __future__ import annotations

from fractions import Fraction as F

from . import bounds, inverse, parametric
from .game_core import enumerate_games, from_weighted, is_weighted
from .indices import (INCREMENTAL_TAGS, IndexId, check_property, PROPERTIES, PROPERTY_TABLE, index_id, normalize, power_index,
                      ssi_semivalue, turn_losing, update_on_mwc_removal)
from .rational import fmt_vector
from .shortening import check_preservation, k_rounding, preservation_holds


def examples():
    out = []
    g = from_weighted(2, [2, 1, 1])
    js = power_index(g, "js").values
    out.append(("js [2;2,1,1]", js == (F(3), F(1, 2), F(1, 2)), fmt_vector(js)))
    jsn = normalize(power_index(g, "js")).values
    out.append(("js normalized [2;2,1,1]", jsn == (F(3, 4), F(1, 8), F(1, 8)), fmt_vector(jsn)))
    h = from_weighted(3, [2, 1, 1])
    a = normalize(power_index(h, "js")).values
    b = power_index(h, "ssi").values
    want = (F(2, 3), F(1, 6), F(1, 6))
    out.append(("js normalized = ssi on [3;2,1,1]", a == want and b == want, f"{fmt_vector(a)} / {fmt_vector(b)}"))
    return out


def identities(ns=(3, 4)):
    bad = {"rae": 0, "coleman": 0, "swing": 0, "pbinomial": 0, "semivalue": 0}
    count = 0
    for n in ns:
        sv = ssi_semivalue(n)
        for g in enumerate_games(n, "simple"):
            count += 1
            bz = power_index(g, "bz").values
            rae = power_index(g, "rae").values
            bad["rae"] += rae != tuple(F(1, 2) + x / 2 for x in bz)
            nb = normalize(power_index(g, "bz")).values
            bad["coleman"] += not (nb == normalize(power_index(g, "colprev")).values
                                   == normalize(power_index(g, "colini")).values)
            sw = power_index(g, "swing").values
            chow = power_index(g, "chow").values
            bad["swing"] += sw != tuple(2 * c - g.num_winning for c in chow)
            bad["pbinomial"] += power_index(g, "pbinomial:1/2").values != bz
            bad["semivalue"] += power_index(g, sv).values != power_index(g, "ssi").values
    return [(k, v == 0, f"{v} mismatches over {count} games") for k, v in bad.items()]


def sweep(n_max=5, tags=bounds.SWEEP_TAGS, workers=1):
    out = []
    for n in range(2, n_max + 1):
        for t in tags:
            r = bounds.empirical_bound_sweep(n, t, "simple", local=n <= 4, workers=workers)
            out.append((f"n={n} {r.index}", r.ok,
                        f"{r.games} games, {len(r.violations)} bound / {len(r.local_violations)} local violations, "
                        f"max ratio {r.max_ratio_absolute} / {r.max_ratio_normalized}"))
    return out


def lower_bound(ns=(4, 5)):
    out = []
    s1 = [F(3, 4), F(1, 4), F(0), F(0)]
    v = bounds.approximation_lower_bound(s1, 2, "bz", "simple").value
    out.append(("no-tail bound 1/8", v == F(1, 8), v))
    for n in (4, 5, 6):
        tail = [F(1, 20 * (n - 2))] * (n - 2)
        v = bounds.approximation_lower_bound([F(29, 40), F(9, 40)] + tail, 2, "bz", "simple").value
        out.append((f"tail bound 3/80 (n={n})", v == F(3, 80), v))
    for n in ns:
        inst = inverse.InverseInstance((F(3, 4), F(1, 4)) + (F(0),) * (n - 2), index_id("bz", True))
        best = inverse.exhaustive_inverse(inst).best_deviation
        out.append((f"exhaustive optimum n={n} >= 1/8", best >= F(1, 8), best))
    return out


def parametric_forms(limit=9, ps=(F(1, 3), F(1, 2), F(2, 3))):
    bad, cnt = [], 0
    for k in range(2, limit):
        for n in range(1, limit - k + 1):
            for l in range(1, k):
                for m in range(0, n + 2):
                    pp = parametric.ParametricParams(k, l, m, n)
                    for which in parametric.WHICH:
                        if which == "G1" and not 1 <= m <= n:
                            continue
                        h = parametric.build_game(pp.variant(which))
                        for p in ps:
                            cnt += 1
                            got = power_index(h, f"pbinomial:{p}").values
                            if list(got) != parametric.psi_p_closed_form(pp, which, p).expand(pp):
                                bad.append(("psi", pp, which, p))
                        cnt += 1
                        if list(power_index(h, "ssi").values) != parametric.ssi_closed_form(pp, which).expand(pp):
                            bad.append(("ssi", pp, which))
                        if l == 1:
                            cnt += 1
                            if list(power_index(h, "js").values) != parametric.johnston_closed_form(k, n, m, which).expand(pp):
                                bad.append(("js", pp, which))
    return [("closed forms vs brute force", not bad, f"{cnt} comparisons, {len(bad)} mismatches {bad[:3]}")]


def negative():
    out = []
    fails = []
    for k in (2, 3, 4):
        for nt in range(1, 31):
            r = parametric.johnston_negative_check(k, nt)
            if not (r["abs12"] and r["abs13"] and r.get("xi_share_ok", True)):
                fails.append((k, nt))
    out.append(("johnston finite inequalities k<=4, ntilde<=30", not fails, fails[:5]))
    for k in (2, 3):
        r = parametric.johnston_negative_check(k, 100)
        out.append((f"normalized distances >= 1/(5k) at ntilde=100, k={k}", r["norm_ok"],
                    (r["norm12"], r["norm13"])))
    for p in (F(1, 3), F(2, 3)):
        r = parametric.pbinomial_negative_witness(2, 1, p, [11, 21, 31])
        out.append((f"Delta/xi grows, xi shrinks (p={p})", r["ratio_increasing"] and r["xi_decreasing"],
                    [str(x) for x in r["ratios"]]))
    tails = all(all(parametric.tail_bounds_check(n, m, d).values())
                for n in range(3, 25) for m in range(1, n + 1) for d in (F(1, 10), F(1, 4)))
    out.append(("binomial and tail bounds", tails, "n in 3..24"))
    return out


def preservation(n_max=4):
    """Each implication is reported separately over all simple games n <= n_max."""
    bad, seen = {}, 0
    for n in range(2, n_max + 1):
        for g in enumerate_games(n, "simple"):
            for k in range(1, n):
                if k_rounding(g, k).is_constant:
                    continue
                seen += 1
                for name, (prem, concl) in check_preservation(g, k).items():
                    bad.setdefault(name, [])
                    if prem and not concl:
                        bad[name].append((n, g.winning(), k))
    return [(f"k-rounding preserves {name}", not b, f"{seen} roundings, {len(b)} failures {b[:1]}")
            for name, b in bad.items()]


BATTERY = [
    (F(1, 2), F(1, 2), F(0)),
    (F(3, 4), F(1, 4), F(0)),
    (F(1, 3), F(1, 3), F(1, 3)),
    (F(3, 5), F(1, 5), F(1, 5)),
    (F(1, 2), F(1, 3), F(1, 6)),
    (F(3, 4), F(1, 4), F(0), F(0)),
    (F(2, 7), F(2, 7), F(2, 7), F(1, 7)),
    (F(2, 5), F(3, 10), F(1, 5), F(1, 10)),
    (F(1, 4), F(1, 4), F(1, 4), F(1, 4)),
    (F(7, 10), F(1, 10), F(1, 10), F(1, 10)),
]


def ilp(n_max=3, tol=F(1, 1024)):
    out = []
    for n in range(1, n_max + 1):
        for cls in ("boolean", "simple", "complete", "weighted"):
            r = inverse.verify_model_semantics(n, cls, indices=[])
            out.append((f"class rows n={n} {cls}", r.class_match, f"{r.feasible} feasible, {r.expected} expected"))
    r = inverse.verify_model_semantics(2, "weighted", indices=[], ordered=False)
    out.append(("class rows n=2 weighted, any order", r.class_match and r.feasible == 4, r.feasible))
    for cls in ("simple", "complete"):
        r = inverse.verify_model_semantics(n_max, cls)
        out.append((f"index blocks force P, n={n_max} {cls}", r.ok, f"{r.checked} checks, {r.index_failures[:2]}"))
    for sigma in BATTERY:
        inst = inverse.InverseInstance(sigma, index_id("bz", True), "simple")
        exact = inverse.exhaustive_inverse(inst).best_deviation
        sol = inverse.bisection_normalized(inst, tol=tol)
        lo, hi = sol.interval
        ok = (lo < exact <= hi or lo == exact == hi) and hi - lo <= tol
        out.append((f"bisection brackets optimum {tuple(map(str, sigma))}", ok, (str(lo), str(hi), str(exact))))
    return out


def incremental(n_max=4):
    bad, cnt = [], 0
    for n in range(2, n_max + 1):
        for g in enumerate_games(n, "simple"):
            for tag in INCREMENTAL_TAGS:
                spec = "pbinomial:1/3" if tag == "pbinomial" else tag
                cur = power_index(g, spec)
                for T in g.minimal_winning:
                    if T == g.full:
                        continue
                    cnt += 1
                    if update_on_mwc_removal(g, T, spec, cur).values != power_index(turn_losing(g, T), spec).values:
                        bad.append((tag, g.win.hex(), T))
    return [("incremental update = recomputation", not bad, f"{cnt} updates, {len(bad)} mismatches {bad[:3]}")]


def baseline(ns=(3, 4, 5)):
    out = []
    for n in ns:
        sigma = [F(2, 2 * n - 1)] * (n - 1) + [F(1, 2 * n - 1)]
        _, _, recs = inverse.weights_as_power_baseline(sigma, "bz")
        worst = min(d for _, d in recs)
        out.append((f"baseline inequality n={n}", worst >= inverse.baseline_bound(n),
                    f"min {worst} vs bound {inverse.baseline_bound(n)} over {len(recs)} quotas"))
    return out


def properties(n=3):
    out = []
    for tag, row in PROPERTY_TABLE.items():
        # a non-Shapley weighting, otherwise efficiency would hold by accident
        pv = tuple(F(1, 3) ** j * F(2, 3) ** (n - 1 - j) for j in range(n))
        spec = {"semivalue": IndexId("semivalue", False, pv), "pbinomial": "pbinomial:1/3"}.get(tag, tag)
        for prop, want in zip(PROPERTIES, row):
            if want is None:
                continue
            idx = index_id(spec, False)
            got, _ = check_property(idx, prop, n)
            out.append((f"{tag} {prop}", got == want, f"expected {want}, found {got}"))
    return out


def weighted_counts():
    want = {1: 1, 2: 4, 3: 18, 4: 148}
    got = {n: sum(1 for g in enumerate_games(n, "weighted")) for n in want}
    return [("weighted game counts", got == want, got),
            ("weighted repr reproduces game", all(is_weighted(g).game() == g for g in enumerate_games(4, "weighted")),
             "n=4")]


SUITES = {
    "examples": examples,
    "identities": identities,
    "sweep": sweep,
    "lower-bound": lower_bound,
    "parametric": parametric_forms,
    "negative": negative,
    "preservation": preservation,
    "ilp": ilp,
    "incremental": incremental,
    "baseline": baseline,
    "properties": properties,
    "counts": weighted_counts,
}


def run(name, **kw):
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](**kw)

