"""The inverse power-index problem: exhaustive search, ILP models, bisection
for normalized indices, and the weights-as-power baseline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import ceil, comb, isqrt

from . import lp
from .game_core import ENUM_LIMITS, Game, enumerate_games, from_weighted, game_to_json, members, popcount
from .indices import (SHIFT_TAGS, TAGS, IndexId, UndefinedIndex, _size_weight, index_id, normalize,
                      power_index)
from .lpfile import BIN, CONT, EQ, GE, LE, IlpModel, emit_lp, parse_lp  # noqa: F401
from .rational import fmt, to_fraction

CLASSES = ("boolean", "simple", "complete", "weighted")
NORMS = ("L1", "Linf")


@dataclass(frozen=True)
class InverseInstance:
    sigma: tuple
    index: IndexId
    cls: str = "simple"
    norm: str = "L1"
    proper: bool = False
    strong: bool = False
    ordered: bool = True  # complete/weighted classes use the order 1 >= 2 >= ... >= n

    def __post_init__(self):
        s = tuple(to_fraction(x) for x in self.sigma)
        if any(x < 0 for x in s) or sum(s) != 1:
            raise ValueError("sigma must be nonnegative and sum to 1")
        object.__setattr__(self, "sigma", s)
        object.__setattr__(self, "index", index_id(self.index))
        if self.cls not in CLASSES:
            raise ValueError(f"unknown class {self.cls!r}")
        norm = {"l1": "L1", "linf": "Linf"}.get(self.norm.lower())
        if norm is None:
            raise ValueError(f"unknown norm {self.norm!r}")
        object.__setattr__(self, "norm", norm)

    @property
    def n(self):
        return len(self.sigma)

    @classmethod
    def from_json(cls, obj: dict) -> "InverseInstance":
        idx = index_id(obj.get("index", "bz"), bool(obj.get("normalized", True)))
        return cls(tuple(obj["sigma"]), idx, obj.get("class", "simple"), obj.get("norm", "L1"),
                   bool(obj.get("proper", False)), bool(obj.get("strong", False)),
                   bool(obj.get("ordered", True)))

    def to_json(self) -> dict:
        return {"sigma": [fmt(x) for x in self.sigma], "index": str(self.index.absolute()),
                "normalized": self.index.normalized, "class": self.cls, "norm": self.norm,
                "proper": self.proper, "strong": self.strong, "ordered": self.ordered}


@dataclass
class InverseSolution:
    best_deviation: Fraction | None
    witnesses: list
    method: str
    interval: tuple | None = None
    skipped: int = 0
    examined: int = 0

    def to_json(self) -> dict:
        out = {"best_deviation": None if self.best_deviation is None else fmt(self.best_deviation),
               "method": self.method, "witnesses": [game_to_json(g) for g in self.witnesses],
               "skipped": self.skipped, "examined": self.examined}
        if self.interval is not None:
            out["interval"] = [fmt(x) for x in self.interval]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def norm_of(diff, norm: str) -> Fraction:
    if norm == "L1":
        return sum((abs(x) for x in diff), Fraction(0))
    return max((abs(x) for x in diff), default=Fraction(0))


def deviation(g: Game, inst: InverseInstance) -> Fraction:
    """||P(g) - sigma|| for the instance's index (normalized or not) and norm."""
    v = power_index(g, inst.index)
    if inst.index.normalized:
        v = normalize(v)
    return norm_of([a - b for a, b in zip(v.values, inst.sigma)], inst.norm)


def class_games(inst: InverseInstance, n: int | None = None):
    """Class games on n voters honoring the instance's flags."""
    n = inst.n if n is None else n
    cls = inst.cls
    for g in enumerate_games(n, cls):
        if inst.ordered and cls in ("complete", "weighted") and not g.is_complete:
            continue
        if inst.proper and not g.is_proper:
            continue
        if inst.strong and not g.is_strong:
            continue
        if inst.index.tag in SHIFT_TAGS and not g.is_complete:
            continue
        yield g


def exhaustive_inverse(inst: InverseInstance, n: int | None = None) -> InverseSolution:
    n = inst.n if n is None else n
    if n != inst.n:
        raise ValueError("sigma length must equal n")
    best, wit, skipped, seen = None, [], 0, 0
    for g in class_games(inst, n):
        try:
            d = deviation(g, inst)
        except (ZeroDivisionError, UndefinedIndex):
            skipped += 1
            continue
        seen += 1
        if best is None or d < best:
            best, wit = d, [g]
        elif d == best:
            wit.append(g)
    return InverseSolution(best, wit, "exhaustive", skipped=skipped, examined=seen)


def weights_as_power_baseline(sigma, idx="bz", norm: str = "L1"):
    """Best ||P^([q; sigma]) - sigma|| over every structurally distinct quota.

    Returns (min deviation, quota attaining it, [(quota, deviation), ...]).
    """
    s = [to_fraction(x) for x in sigma]
    if any(x < 0 for x in s) or sum(s) != 1:
        raise ValueError("sigma must be nonnegative and sum to 1")
    idx = index_id(idx, True)
    n = len(s)
    sums = {Fraction(0)}
    for x in s:
        sums |= {t + x for t in sums}
    records = []
    for q in sorted(t for t in sums if t > 0):
        g = from_weighted(q, s)
        try:
            v = normalize(power_index(g, idx.absolute())).values
        except (ZeroDivisionError, UndefinedIndex):
            continue
        records.append((q, norm_of([a - b for a, b in zip(v, s)], norm)))
    best = min(records, key=lambda r: (r[1], r[0]))
    return best[1], best[0], records


def baseline_bound(n: int) -> Fraction:
    """(2/(2n-1)) * ((n-1)/n), the bound for sigma = (2,...,2,1)/(2n-1)."""
    return Fraction(2, 2 * n - 1) * Fraction(n - 1, n)


# ILP models

def big_m(n: int) -> int:
    """Smallest integer >= 4n((n+1)/4)^((n+1)/2)."""
    base = Fraction(n + 1, 4)
    if (n + 1) % 2 == 0:
        return ceil(4 * n * base ** ((n + 1) // 2))
    # odd exponent (n+1)/2 = h + 1/2: 4n base^h sqrt(base), compare squares
    h = n // 2
    c = 4 * n * base ** h
    sq = c * c * base  # M^2 must reach this
    m = isqrt(sq.numerator // sq.denominator)
    while Fraction(m * m) < sq:
        m += 1
    return m


def X(S):
    return f"x_{S}"


def Y(i, S):
    return f"y_{i + 1}_{S}"


def Z(i, S):
    return f"z_{i + 1}_{S}"


def _right_shifts(n, S):
    out = []
    for i in range(n - 1):
        if S >> i & 1 and not S >> (i + 1) & 1:
            out.append(S ^ (1 << i) ^ (1 << (i + 1)))
    if S >> (n - 1) & 1:
        out.append(S ^ (1 << (n - 1)))
    return out


def _class_block(m: IlpModel, n: int, inst: InverseInstance):
    full = (1 << n) - 1
    for S in range(1 << n):
        m.var(X(S), BIN)
    m.add("fix", [(1, X(0))], EQ, 0)
    m.add("fix", [(1, X(full))], EQ, 1)
    cls = inst.cls
    shifts = cls == "complete" or (cls == "weighted" and inst.ordered)
    if cls == "complete" and not inst.ordered:
        raise ValueError("the complete class is modeled in the fixed order 1 >= ... >= n only")
    if cls != "boolean" and not shifts:
        for S in range(1, 1 << n):
            for i in members(S):
                m.add("simple", [(1, X(S ^ (1 << i))), (-1, X(S))], LE, 0)
    if shifts:
        # every direct right-shift, not only the one of the largest member
        for S in range(1, 1 << n):
            for T in _right_shifts(n, S):
                m.add("shift", [(1, X(T)), (-1, X(S))], LE, 0)
    if cls == "weighted":
        M = big_m(n)
        m.big_m = Fraction(M)
        m.var("q")
        for i in range(n):
            m.var(f"w_{i + 1}")
        m.add("qmin", [(1, "q")], GE, 1)
        if inst.ordered:
            for i in range(n - 1):
                m.add("worder", [(1, f"w_{i + 1}"), (-1, f"w_{i + 2}")], GE, 0)
        for S in range(1 << n):
            ws = [(-1, f"w_{i + 1}") for i in members(S)]
            m.add("wwin", [(1, "q"), (M, X(S))] + ws, LE, M)
            m.add("wlose", [(1, "q"), (M, X(S))] + ws, GE, 1)
        m.add("qmax", [(1, "q")], LE, M)
    if inst.proper or inst.strong:
        for S in range(1 << n):
            if 2 * popcount(S) <= n:
                if inst.proper:
                    m.add("proper", [(1, X(S)), (1, X(full ^ S))], LE, 1)
                if inst.strong:
                    m.add("strong", [(1, X(S)), (1, X(full ^ S))], GE, 1)


def _swing_z(m, n, simple):
    """z_{i,S} = 1 iff i in S, S winning and S - i losing."""
    for i in range(n):
        for S in range(1 << n):
            z = m.var(Z(i, S), BIN)
            Si = S & ~(1 << i)
            if simple:
                m.add("zswing", [(1, z), (-1, X(S)), (1, X(Si))], EQ, 0)
            else:
                m.add("zswing", [(1, z), (-1, X(S))], LE, 0)
                m.add("zswing", [(1, z), (1, X(Si))], LE, 1)
                m.add("zswing", [(1, z), (-1, X(S)), (1, X(Si))], GE, 0)


def _share_a(m, n, losing=False, size_weighted=False):
    """a_S = 1/|W| on winning coalitions (or 1/|L| on losing ones, or 1/sum|S|)."""
    for S in range(1 << n):
        m.var(f"a_{S}")
    for S in range(1 << n):
        if losing:
            m.add("ashare", [(1, f"a_{S}"), (1, X(S))], LE, 1)
        else:
            m.add("ashare", [(1, f"a_{S}"), (-1, X(S))], LE, 0)
    for S in range(1 << n):
        for T in range(1 << n):
            if S == T:
                continue
            if losing:
                m.add("aequal", [(1, f"a_{S}"), (-1, f"a_{T}"), (1, X(S)), (1, X(T))], GE, 0)
            else:
                m.add("aequal", [(1, f"a_{S}"), (-1, f"a_{T}"), (-1, X(S)), (-1, X(T))], GE, -2)
    w = (lambda S: popcount(S)) if size_weighted else (lambda S: 1)
    m.add("asum", [(w(S), f"a_{S}") for S in range(1 << n)], EQ, 1)


def _index_block(m: IlpModel, n: int, inst: InverseInstance, tijs_encoding: str):
    idx = inst.index
    t = idx.tag
    simple = inst.cls != "boolean"
    full = (1 << n) - 1
    if t in ("pgi", "dp") and not simple:
        raise ValueError(f"{t} needs a class of simple games")
    if t in SHIFT_TAGS and not (inst.cls in ("complete", "weighted") and inst.ordered):
        raise ValueError(f"{t} needs the complete or ordered weighted class")
    N2 = range(1 << n)
    for i in range(n):
        for S in N2:
            m.var(Y(i, S))
        m.var(f"p_{i + 1}")

    def zero_outside():
        for i in range(n):
            for S in N2:
                if not S >> i & 1:
                    m.add("yzero", [(1, Y(i, S))], EQ, 0)

    if t == "ssi":
        w = _size_weight(idx, n)
        zero_outside()
        for i in range(n):
            for S in N2:
                if S >> i & 1:
                    c, Si = w(popcount(S)), S ^ (1 << i)
                    if simple:
                        m.add("ssi", [(1, Y(i, S)), (-c, X(S)), (c, X(Si))], EQ, 0)
                    else:
                        m.add("ssi", [(1, Y(i, S)), (-c, X(S))], LE, 0)
                        m.add("ssi", [(1, Y(i, S)), (c, X(Si))], LE, c)
                        m.add("ssi", [(1, Y(i, S)), (-c, X(S)), (c, X(Si))], GE, 0)
    elif t in ("semivalue", "pbinomial", "bz", "swing"):
        w = _size_weight(idx, n)
        _swing_z(m, n, simple)
        zero_outside()
        for i in range(n):
            for S in N2:
                if S >> i & 1:
                    m.add("semi", [(1, Y(i, S)), (-w(popcount(S)), Z(i, S))], EQ, 0)
    elif t == "tijs" and tijs_encoding == "unique-mwc":
        for S in N2:
            m.var(f"zm_{S}", BIN)
        m.var("mu", BIN)
        for S in N2:
            zm = f"zm_{S}"
            m.add("zmin", [(1, zm), (-1, X(S))], LE, 0)
            for j in members(S):
                m.add("zmin", [(1, zm), (1, X(S ^ (1 << j)))], LE, 1)
            m.add("zmin", [(1, zm), (-1, X(S))] + [(1, X(S ^ (1 << j))) for j in members(S)], GE, 0)
        m.add("mu", [(1, "mu")] + [(-1, f"zm_{S}") for S in N2], LE, 0)
        for S in N2:
            m.add("mu", [(1, "mu"), (-1, f"zm_{S}")] + [(1, f"zm_{T}") for T in N2 if T != S], GE, 0)
        m.add("mu", [(1, f"zm_{S}") for S in N2] + [(2 ** n - 1, "mu")], LE, 2 ** n)
        for i in range(n):
            for S in N2:
                m.add("tijs", [(1, Y(i, S)), (-1, f"zm_{S}")], LE, 0)
                m.add("tijs", [(1, Y(i, S)), (-1, "mu")], LE, 0)
                m.add("tijs", [(1, Y(i, S)), (-1, f"zm_{S}"), (-1, "mu")], GE, -1)
    elif t == "tijs":
        # vetoer indicator: y_{i,N} = x_N - x_{N-i}, everything else zero
        for i in range(n):
            for S in N2:
                if S == full:
                    m.add("tijs", [(1, Y(i, S)), (-1, X(full)), (1, X(full ^ (1 << i)))], EQ, 0)
                else:
                    m.add("yzero", [(1, Y(i, S))], EQ, 0)
    elif t in ("colprev", "kb", "phi"):
        _share_a(m, n, size_weighted=(t == "phi"))
        if t == "colprev":
            _swing_z(m, n, simple)
            for i in range(n):
                for S in N2:
                    y, a, z = Y(i, S), f"a_{S}", Z(i, S)
                    m.add("colprev", [(1, y), (-1, z)], LE, 0)
                    m.add("colprev", [(1, y), (-1, a), (-1, z)], GE, -1)
                    m.add("colprev", [(1, y), (-1, a), (1, X(S))], LE, 1)
        elif t == "kb":
            zero_outside()
            for i in range(n):
                for S in N2:
                    if S >> i & 1:
                        m.add("kb", [(1, Y(i, S)), (-1, f"a_{S}")], EQ, 0)
        else:
            zero_outside()
            for i in range(n):
                for S in N2:
                    if S >> i & 1:
                        y, a = Y(i, S), f"a_{S}"
                        m.add("phi", [(1, y), (-1, X(S))], LE, 0)
                        m.add("phi", [(1, y), (-1, a), (-1, X(S))], GE, -1)
                        m.add("phi", [(1, y), (-1, a), (1, X(S))], LE, 1)
    elif t == "colini":
        _share_a(m, n, losing=True)
        for i in range(n):
            for S in N2:
                y = Y(i, S)
                if S >> i & 1:
                    m.add("yzero", [(1, y)], EQ, 0)
                    continue
                a, Si = f"a_{S}", S | (1 << i)
                m.add("colini", [(1, y), (1, X(S))], LE, 1)
                m.add("colini", [(1, y), (-1, X(Si))], LE, 0)
                m.add("colini", [(1, y), (-1, a), (1, X(S)), (-1, X(Si))], GE, -1)
                m.add("colini", [(1, y), (-1, a), (-1, X(S)), (1, X(Si))], LE, 1)
    elif t == "rae":
        c = Fraction(1, 2 ** n)
        for i in range(n):
            for S in N2:
                if S >> i & 1:
                    m.add("rae", [(1, Y(i, S)), (-c, X(S))], EQ, 0)
                else:
                    m.add("rae", [(1, Y(i, S)), (c, X(S))], EQ, c)
    elif t == "chow":
        zero_outside()
        for i in range(n):
            for S in N2:
                if S >> i & 1:
                    m.add("chow", [(1, Y(i, S)), (-1, X(S))], EQ, 0)
    elif t == "js":
        _swing_z(m, n, simple)
        for S in N2:
            for i in range(n):
                m.add("js", [(1, Y(i, S)), (-1, Z(i, S))], LE, 0)
                for j in range(n):
                    if j != i:
                        m.add("js", [(1, Y(i, S)), (-1, Y(j, S)), (-1, Z(i, S)), (-1, Z(j, S))], GE, -2)
            m.add("js", [(1, Y(i, S)) for i in range(n)], LE, 1)
            m.add("js", [(1, Y(i, S)) for i in range(n)] + [(-1, Z(i, S)) for i in range(n)], LE, 0)
            for i in range(n):
                m.add("js", [(1, Y(j, S)) for j in range(n)] + [(-1, Z(i, S))], GE, 0)
    elif t in ("pgi", "dp", "shift", "sdp"):
        zero_outside()
        for i in range(n):
            for S in N2:
                if not S >> i & 1:
                    continue
                c = Fraction(1) if t in ("pgi", "shift") else Fraction(1, popcount(S))
                if t in ("pgi", "dp"):
                    below = [S ^ (1 << j) for j in members(S)]
                else:
                    below = _right_shifts(n, S)
                y = Y(i, S)
                m.add(t, [(1, y), (-c, X(S))], LE, 0)
                for T in below:
                    m.add(t, [(1, y), (c, X(T))], LE, c)
                m.add(t, [(1, y), (-c, X(S))] + [(c, X(T)) for T in below], GE, 0)
    else:
        raise ValueError(f"no ILP block for {t}")
    for i in range(n):
        m.add("power", [(1, f"p_{i + 1}")] + [(-1, Y(i, S)) for S in N2], EQ, 0)


def _deviation_block(m: IlpModel, n: int, inst: InverseInstance, alpha):
    sig = inst.sigma
    P = [f"p_{i + 1}" for i in range(n)]
    if inst.index.normalized:
        if alpha is None:
            raise ValueError("normalized mode needs alpha; give alpha or use the absolute index")
        alpha = to_fraction(alpha)
        names = [m.var(f"dp_{i + 1}") for i in range(n)] if inst.norm == "L1" else [m.var("dp")] * n
        for i in range(n):
            tot = [(sig[i], p) for p in P]
            m.add("dev", [(1, names[i]), (-1, P[i])] + tot, GE, 0)
            m.add("dev", [(1, names[i]), (1, P[i])] + [(-c, p) for c, p in tot], GE, 0)
        used = sorted(set(names))
        m.add("alpha", [(1, v) for v in used] + [(-alpha, p) for p in P], LE, 0)
        m.objective = {}
    else:
        names = [m.var(f"d_{i + 1}") for i in range(n)] if inst.norm == "L1" else [m.var("d")] * n
        for i in range(n):
            m.add("dev", [(1, names[i]), (-1, P[i])], GE, -sig[i])
            m.add("dev", [(1, names[i]), (1, P[i])], GE, sig[i])
        m.objective = {v: Fraction(1) for v in sorted(set(names))}


def build_ilp(inst: InverseInstance, n: int | None = None, alpha=None,
              tijs_encoding: str = "vetoer") -> IlpModel:
    """Class constraints, index block and deviation block for one instance.

    tijs_encoding="unique-mwc" emits the unique-minimal-winning-coalition
    encoding instead of the vetoer one; the two disagree on e.g. [3;2,1,1].
    """
    n = inst.n if n is None else n
    if n != inst.n:
        raise ValueError("sigma length must equal n")
    if inst.index.tag not in TAGS:
        raise ValueError(f"unsupported index {inst.index.tag}")
    if tijs_encoding not in ("vetoer", "unique-mwc"):
        raise ValueError(tijs_encoding)
    m = IlpModel(meta={"n": n, "class": inst.cls, "index": str(inst.index), "norm": inst.norm,
                       "ordered": inst.ordered, "alpha": alpha})
    _class_block(m, n, inst)
    _index_block(m, n, inst, tijs_encoding)
    _deviation_block(m, n, inst, alpha)
    return m


def incidence(g: Game) -> dict:
    return {X(S): Fraction(g.win[S]) for S in range(1 << g.n)}


def game_of(values: dict, n: int) -> Game:
    return Game(n, bytes(int(values[X(S)]) for S in range(1 << n)))


# solving a model once the x-variables are fixed

class _Infeasible(Exception):
    pass


def _substitute(model: IlpModel, fixed: dict):
    rows = []
    for _, coeffs, sense, rhs in model.constraints:
        free = {}
        r = rhs
        for v, c in coeffs.items():
            if v in fixed:
                r -= c * fixed[v]
            else:
                free[v] = c
        if not free:
            if not {LE: 0 <= r, GE: 0 >= r, EQ: r == 0}[sense]:
                raise _Infeasible
            continue
        rows.append((free, sense, r))
    return rows


def _propagate(rows, bounds, binaries, passes=30):
    """Activity-based bound tightening; binaries are rounded to integers."""
    for _ in range(passes):
        changed = False
        for coeffs, sense, rhs in rows:
            for want in ((LE,) if sense == LE else (GE,) if sense == GE else (LE, GE)):
                sgn = 1 if want == LE else -1
                # sgn * sum(c v) <= sgn * rhs
                lo_terms = []
                for v, c in coeffs.items():
                    c = sgn * c
                    lo, hi = bounds[v]
                    lo_terms.append(c * lo if c > 0 else (None if hi is None else c * hi))
                if sum(t is None for t in lo_terms) > 1:
                    continue
                finite = sum(t for t in lo_terms if t is not None)
                if None not in lo_terms and finite > sgn * rhs:
                    raise _Infeasible
                for (v, c), t in zip(coeffs.items(), lo_terms):
                    if None in lo_terms and t is not None:
                        continue
                    c = sgn * c
                    slack = sgn * rhs - (finite - (t if t is not None else 0))
                    lo, hi = bounds[v]
                    if c > 0:
                        nb = slack / c
                        if v in binaries:
                            nb = Fraction(nb.numerator // nb.denominator)
                        if hi is None or nb < hi:
                            if nb < lo:
                                raise _Infeasible
                            bounds[v] = (lo, nb)
                            changed = True
                    else:
                        nb = slack / c
                        if v in binaries:
                            nb = Fraction(-((-nb.numerator) // nb.denominator))
                        if nb > lo:
                            if hi is not None and nb > hi:
                                raise _Infeasible
                            bounds[v] = (nb, hi)
                            changed = True
        if not changed:
            return


def _lp_range(rows, bounds, targets, cont):
    """Exact min/max of each target over the LP; None when infeasible."""
    cont = sorted(cont)
    pos = {v: j for j, v in enumerate(cont)}
    fixed = {v: bounds[v][0] for v in bounds if bounds[v][0] == bounds[v][1]}
    lp_rows = []
    for coeffs, sense, rhs in rows:
        d, r = {}, rhs
        for v, c in coeffs.items():
            if v in pos and v not in fixed:
                d[pos[v]] = c
            else:
                r -= c * fixed[v]
        if d:
            lp_rows.append((d, sense, r))
        elif not {LE: 0 <= r, GE: 0 >= r, EQ: r == 0}[sense]:
            return None
    lower = [bounds[v][0] for v in cont]
    upper = [bounds[v][1] for v in cont]
    out = {}
    for t in targets:
        if t in fixed:
            out[t] = (fixed[t], fixed[t])
            continue
        lo = lp.solve(len(cont), {pos[t]: 1}, lp_rows, lower, upper)
        if lo.status == "infeasible":
            return None
        hi = lp.solve(len(cont), {pos[t]: 1}, lp_rows, lower, upper, maximize=True)
        out[t] = (lo.value, hi.value if hi.status == "optimal" else None)
    if not targets:
        res = lp.solve(len(cont), {}, lp_rows, lower, upper)
        if res.status == "infeasible":
            return None
    return out


def completion_ranges(model: IlpModel, fixed: dict, targets) -> list | None:
    """For each feasible setting of the remaining binaries, the exact range of
    every target variable.  None when no completion exists."""
    try:
        rows = _substitute(model, fixed)
    except _Infeasible:
        return None
    free = [v for v in model.variables if v not in fixed]
    binaries = {v for v in free if model.variables[v] == BIN}
    bounds = {v: (Fraction(0), Fraction(1) if v in binaries else None) for v in free}
    leaves = []

    def dfs(bounds):
        try:
            _propagate(rows, bounds, binaries)
        except _Infeasible:
            return
        open_bins = sorted(v for v in binaries if bounds[v][0] != bounds[v][1])
        if open_bins:
            v = open_bins[0]
            for val in (Fraction(0), Fraction(1)):
                b = dict(bounds)
                b[v] = (val, val)
                dfs(b)
            return
        cont = [v for v in free if v not in binaries]
        res = _lp_range(rows, bounds, [t for t in targets if t in bounds], cont)
        if res is not None:
            leaves.append(res)

    dfs(bounds)
    return leaves or None


def min_objective(model: IlpModel, fixed: dict) -> Fraction | None:
    """Exact optimum of the model with the given variables fixed (binaries branched)."""
    try:
        rows = _substitute(model, fixed)
    except _Infeasible:
        return None
    free = [v for v in model.variables if v not in fixed]
    binaries = {v for v in free if model.variables[v] == BIN}
    bounds = {v: (Fraction(0), Fraction(1) if v in binaries else None) for v in free}
    best = [None]

    def dfs(bounds):
        try:
            _propagate(rows, bounds, binaries)
        except _Infeasible:
            return
        open_bins = sorted(v for v in binaries if bounds[v][0] != bounds[v][1])
        if open_bins:
            for val in (Fraction(0), Fraction(1)):
                b = dict(bounds)
                b[open_bins[0]] = (val, val)
                dfs(b)
            return
        cont = sorted(v for v in free if v not in binaries)
        pos = {v: j for j, v in enumerate(cont)}
        lp_rows = []
        for coeffs, sense, rhs in rows:
            d, r = {}, rhs
            for v, c in coeffs.items():
                if v in pos:
                    d[pos[v]] = c
                else:
                    r -= c * bounds[v][0]
            if d:
                lp_rows.append((d, sense, r))
            elif not {LE: 0 <= r, GE: 0 >= r, EQ: r == 0}[sense]:
                return
        obj = {pos[v]: c for v, c in model.objective.items() if v in pos}
        const = sum((c * bounds[v][0] for v, c in model.objective.items() if v not in pos), Fraction(0))
        res = lp.solve(len(cont), obj, lp_rows, [bounds[v][0] for v in cont], [bounds[v][1] for v in cont])
        if res.status == "optimal":
            val = res.value + const
            if best[0] is None or val < best[0]:
                best[0] = val

    dfs(bounds)
    return best[0]


def _x_assignments(n: int):
    inner = (1 << n) - 2
    for bits in range(1 << inner):
        vals = {X(0): Fraction(0), X((1 << n) - 1): Fraction(1)}
        for j in range(inner):
            vals[X(j + 1)] = Fraction(bits >> j & 1)
        yield vals


def class_feasible_games(model: IlpModel, n: int) -> list:
    """Games whose incidence vector satisfies the class constraints (q, w by exact LP)."""
    xs = {X(S) for S in range(1 << n)}
    extra = {"q"} | {f"w_{i + 1}" for i in range(n)}
    rows = model.rows_for(xs | extra)
    sub = IlpModel(variables={v: k for v, k in model.variables.items() if v in xs | extra},
                   constraints=rows)
    out = []
    for vals in _x_assignments(n):
        if not any(v in sub.variables for v in extra):
            if sub.check(vals):
                continue
        elif completion_ranges(sub, vals, []) is None:
            continue
        out.append(game_of(vals, n))
    return out


@dataclass
class SemanticsReport:
    n: int
    cls: str
    feasible: int
    expected: int
    class_match: bool
    index_failures: list = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self):
        return self.class_match and not self.index_failures


def verify_model_semantics(n: int, cls: str, indices=None, ordered: bool = True,
                           proper: bool = False, strong: bool = False) -> SemanticsReport:
    """Class constraints admit exactly the class games; index blocks force p = P(g)."""
    if n > 3:
        raise ValueError("semantic verification is exhaustive and limited to n <= 3")
    sigma = tuple([Fraction(1, n)] * n)
    base = InverseInstance(sigma, index_id("chow"), cls, "L1", proper, strong, ordered)
    model = build_ilp(base)
    got = set(class_feasible_games(model, n))
    want = set(class_games(base, n))
    rep = SemanticsReport(n, cls, len(got), len(want), got == want)
    if indices is None:
        indices = default_indices(n)
    for spec in indices:
        idx = index_id(spec)
        inst = InverseInstance(sigma, idx, cls, "L1", proper, strong, ordered)
        try:
            model = build_ilp(inst)
        except ValueError:
            continue
        targets = [f"p_{i + 1}" for i in range(n)]
        for g in class_games(inst, n):
            rep.checked += 1
            truth = power_index(g, idx).values
            leaves = completion_ranges(model, incidence(g), targets)
            if leaves is None:
                rep.index_failures.append((str(idx), g.win.hex(), "no completion"))
                continue
            for leaf in leaves:
                got_p = [leaf[t] for t in targets]
                if any(r != (v, v) for r, v in zip(got_p, truth)):
                    rep.index_failures.append((str(idx), g.win.hex(), got_p))
                    break
    return rep


def default_indices(n: int):
    from .indices import ssi_semivalue
    return ["ssi", "tijs", ssi_semivalue(n), "pbinomial:1/3", "bz", "swing", "colprev", "colini",
            "rae", "kb", "phi", "chow", "js", "pgi", "dp", "shift", "sdp"]


def objective_matches(inst: InverseInstance, g: Game, alpha=None) -> bool:
    """The model's optimum with x fixed to g equals ||P(g) - sigma||.

    In normalized mode the check is feasibility: feasible iff deviation <= alpha.
    """
    model = build_ilp(inst, alpha=alpha)
    if inst.index.normalized:
        feasible = completion_ranges(model, incidence(g), []) is not None
        return feasible == (deviation(g, inst) <= to_fraction(alpha))
    return min_objective(model, incidence(g)) == deviation(g, inst)


# bisection on alpha for normalized indices

def exhaustive_oracle(inst: InverseInstance, n: int, alpha):
    """Some class game with deviation <= alpha, or None."""
    for g in class_games(inst, n):
        try:
            if deviation(g, inst) <= alpha:
                return g
        except (ZeroDivisionError, UndefinedIndex):
            continue
    return None


def enumeration_solver(model: IlpModel):
    """Tiny-model stand-in for an external solver: first feasible x, or None."""
    n = model.meta["n"]
    for g in class_feasible_games(model, n):
        if completion_ranges(model, incidence(g), []) is not None:
            return incidence(g)
    return None


def ilp_oracle(solver=enumeration_solver, tijs_encoding="vetoer"):
    """Feasibility oracle that builds the alpha-model and hands it to solver.

    solver(model) returns a dict containing the x_S values or None; an
    external solver can be wrapped via emit_lp/parse of its solution file.
    """
    def oracle(inst, n, alpha):
        vals = solver(build_ilp(inst, n, alpha, tijs_encoding))
        if vals is None:
            return None
        g = game_of(vals, n)
        try:
            if deviation(g, inst) <= alpha:
                return g
        except (ZeroDivisionError, UndefinedIndex):
            pass
        raise RuntimeError("solver returned an assignment that does not meet alpha")
    return oracle


def bisection_normalized(inst: InverseInstance, n: int | None = None, tol=Fraction(1, 1024),
                         oracle=exhaustive_oracle) -> InverseSolution:
    """Bracket min ||P^(g) - sigma|| in (lo, hi] by bisection on alpha."""
    n = inst.n if n is None else n
    if not inst.index.normalized:
        raise ValueError("bisection needs a normalized index (upper end of the search is unknown otherwise)")
    tol = to_fraction(tol)
    lo = Fraction(0)
    hi = Fraction(2) if inst.norm == "L1" else Fraction(1)
    g = oracle(inst, n, hi)
    if g is None:
        raise RuntimeError("oracle found no game at the trivial upper bound")
    best = g
    hi = deviation(g, inst)
    # alpha = 0 first: exact attainment is common and saves the whole search
    g = oracle(inst, n, Fraction(0))
    if g is not None:
        return InverseSolution(Fraction(0), [g], "bisection", (Fraction(0), Fraction(0)))
    while hi - lo > tol:
        mid = (lo + hi) / 2
        g = oracle(inst, n, mid)
        if g is None:
            lo = mid
        else:
            best, hi = g, deviation(g, inst)
    return InverseSolution(hi, [best], "bisection", (lo, hi))
