"""Quality functions, approximation bounds and empirical sweeps for shortenings."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .game_core import Game, enumerate_games
from .indices import (SHIFT_TAGS, IndexId, NormalizationOfZero, UndefinedIndex, expected_property,
                      index_id, normalize, power_index, ssi_semivalue)
from .parametric import pbinomial_negative_witness
from .rational import to_fraction
from .shortening import ShorteningId

F = Fraction

# f1(k), f2(k); semivalues are handled separately since they carry c1, c2
QUALITY_TABLE = {
    "tijs": (lambda k: F(0), lambda k: F(1)),
    "bz": (lambda k: F(1), lambda k: F(k + 1)),
    "swing": (lambda k: F(1), lambda k: F(k + 1)),
    "rae": (lambda k: F(1), lambda k: F(k + 1)),
    "colprev": (lambda k: F(2), lambda k: F(2 * k + 1)),
    "colini": (lambda k: F(2), lambda k: F(2 * k + 1)),
    "pgi": (lambda k: F(k + 1), lambda k: F((k + 1) * (k + 5), 4)),
    "dp": (lambda k: F(k + 2), lambda k: F(k * k + 6 * k + 9, 4)),
    "shift": (lambda k: F(k + 3, 2), lambda k: F(k * k + 3 * k + 2, 2)),
    "sdp": (lambda k: F(2 * k + 1), lambda k: F(2 * k * k + k + 1)),
}

REJECTED = {
    "js": "no quality functions exist (parametric counterexample)",
    "kb": "bounded index, approximation question is moot",
    "phi": "bounded index, approximation question is moot",
    "chow": "bounded index, approximation question is moot",
    "ssi": "open; use the probe instead",
}

# indices the sweep runs over when no explicit list is given
SWEEP_TAGS = ("tijs", "bz", "swing", "rae", "colprev", "colini", "pgi", "dp", "shift", "sdp",
              "semivalue")


class NoQualityFunctions(ValueError):
    pass


class HypothesisViolation(ValueError):
    pass


@dataclass(frozen=True)
class QualityFunctions:
    index: IndexId
    f1: Fraction
    f2: Fraction
    k: int


def quality(idx, k: int, c1=None, c2=None) -> tuple[Fraction, Fraction]:
    """(f1(k), f2(k)) for an index; bounded semivalues use c2/c1."""
    idx = index_id(idx)
    if k < 1:
        raise ValueError("k must be positive")
    tag = idx.tag
    if tag == "pbinomial":
        if idx.p != F(1, 2):
            raise NoQualityFunctions("p-binomial with p != 1/2 has no quality functions for k-rounding")
        tag = "bz"
    if tag == "semivalue":
        if c1 is None or c2 is None:
            c1, c2 = min(idx.params), max(idx.params)
        c1, c2 = to_fraction(c1), to_fraction(c2)
        if c1 <= 0:
            raise NoQualityFunctions("semivalue weights must be bounded away from zero")
        r = c2 / c1
        return r, r * (k + 1)
    if tag in REJECTED:
        raise NoQualityFunctions(f"{tag}: {REJECTED[tag]}")
    if tag not in QUALITY_TABLE:
        raise NoQualityFunctions(tag)
    f1, f2 = QUALITY_TABLE[tag]
    return f1(k), f2(k)


def canonical_f2(f1, k: int) -> Fraction:
    return k * to_fraction(f1) + 1


def shortening_for(idx, k: int) -> ShorteningId:
    idx = index_id(idx)
    return ShorteningId("up", k) if idx.tag == "tijs" else ShorteningId("k", k)


def epsilon_of(g: Game, k: int, idx) -> Fraction:
    """Share of total index mass carried by voters k+1..n (tight epsilon)."""
    v = power_index(g, index_id(idx).absolute()).values
    total = sum(v)
    if total == 0:
        raise NormalizationOfZero("total power is zero")
    return sum(v[k:]) / total


def l1(a, b) -> Fraction:
    return sum((abs(x - y) for x, y in zip(a, b)), F(0))


@dataclass
class BoundCheck:
    index: str
    k: int
    epsilon: Fraction | None
    absolute_bound: Fraction | None = None
    actual_absolute: Fraction | None = None
    normalized_bound: Fraction | None = None
    actual_normalized: Fraction | None = None
    skipped: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        good = True
        if self.absolute_bound is not None:
            good &= self.actual_absolute <= self.absolute_bound
        if self.normalized_bound is not None:
            good &= self.actual_normalized <= self.normalized_bound
        return good

    def ratios(self):
        def r(a, b):
            if a is None or b is None:
                return None
            if b == 0:
                return F(0) if a == 0 else None
            return a / b
        return r(self.actual_absolute, self.absolute_bound), r(self.actual_normalized, self.normalized_bound)


def _safe_index(g: Game, idx: IndexId):
    try:
        return power_index(g, idx).values
    except (ZeroDivisionError, UndefinedIndex):
        return None


def approximation_bounds(g: Game, k: int, idx) -> BoundCheck:
    """Absolute and normalized approximation bounds for one shortening, with tight epsilon."""
    idx = index_id(idx).absolute()
    f1, f2 = quality(idx, k)
    h = shortening_for(idx, k).apply(g)
    pg = _safe_index(g, idx)
    out = BoundCheck(str(idx), k, None)
    if pg is None:
        out.skipped.append("index undefined on g")
        return out
    total = sum(pg)
    if total == 0:
        out.skipped.append("zero total power")
        return out
    eps = sum(pg[k:]) / total
    out.epsilon = eps
    ph = _safe_index(h, idx)
    if ph is None:
        out.skipped.append("index undefined on the shortened game")
        return out
    out.absolute_bound = (k * f1 + 1) * eps * total
    out.actual_absolute = l1(ph, pg)
    if h.is_constant:
        out.skipped.append("shortened game is constant")
        return out
    th = sum(ph)
    if th == 0:
        out.skipped.append("zero total power after shortening")
        return out
    out.normalized_bound = (f2 + k * f1 + 1) * eps
    out.actual_normalized = l1([x / th for x in ph], [x / total for x in pg])
    return out


def local_approximability(g: Game, k: int, idx) -> dict:
    """Per-voter and total counting-sum changes against f1*eps*Cbar and f2*eps*Cbar."""
    idx = index_id(idx).absolute()
    f1, f2 = quality(idx, k)
    pg = _safe_index(g, idx)
    h = shortening_for(idx, k).apply(g)
    ph = _safe_index(h, idx)
    if pg is None or ph is None or sum(pg) == 0:
        return {"skipped": True, "ok": True}
    total = sum(pg)
    eps = sum(pg[k:]) / total
    cond1 = all(abs(ph[i] - pg[i]) <= f1 * eps * total for i in range(k))
    cond2 = abs(sum(ph) - total) <= f2 * eps * total
    return {"skipped": False, "cond1": cond1, "cond2": cond2, "ok": cond1 and cond2}


def _sweep_index(tag: str, n: int) -> IndexId:
    return ssi_semivalue(n) if tag == "semivalue" else index_id(tag)


@dataclass
class SweepReport:
    n: int
    index: str
    cls: str
    games: int = 0
    inadmissible: int = 0
    checks: int = 0
    skipped_normalized: int = 0
    violations: list = field(default_factory=list)
    local_violations: list = field(default_factory=list)
    max_ratio_absolute: Fraction = F(0)
    max_ratio_normalized: Fraction = F(0)

    @property
    def ok(self):
        return not self.violations and not self.local_violations

    def lines(self):
        """JSON-lines friendly summary records."""
        return [{"game": v[0], "k": v[1], "index": self.index, "epsilon": str(v[2]),
                 "bound": str(v[3]), "actual": str(v[4])} for v in self.violations]


def _sweep_chunk(args):
    n, tag, cls, local, start, step = args
    idx = _sweep_index(tag, n)
    games = list(enumerate_games(n, cls))[start::step]
    rep = SweepReport(n, str(idx), cls)
    for g in games:
        if idx.tag in SHIFT_TAGS and not g.is_complete:
            rep.inadmissible += 1
            continue
        rep.games += 1
        for k in range(1, n):
            c = approximation_bounds(g, k, idx)
            rep.checks += 1
            if c.normalized_bound is None:
                rep.skipped_normalized += 1
            if not c.ok:
                rep.violations.append((g.win.hex(), k, c.epsilon, (c.absolute_bound, c.normalized_bound),
                                       (c.actual_absolute, c.actual_normalized)))
            ra, rn = c.ratios()
            if ra is not None:
                rep.max_ratio_absolute = max(rep.max_ratio_absolute, ra)
            if rn is not None:
                rep.max_ratio_normalized = max(rep.max_ratio_normalized, rn)
            if local and not local_approximability(g, k, idx)["ok"]:
                rep.local_violations.append((g.win.hex(), k))
    return rep


def empirical_bound_sweep(n: int, idx="bz", cls: str = "simple", local: bool = False,
                          workers: int = 1) -> SweepReport:
    """Check both approximation bounds for every class game on n voters and every k < n."""
    tag = idx if isinstance(idx, str) and idx == "semivalue" else index_id(idx).tag
    if tag != "semivalue":
        quality(idx, 1)  # reject indices without quality functions early
    if workers <= 1:
        return _sweep_chunk((n, tag if tag == "semivalue" else str(index_id(idx)), cls, local, 0, 1))
    name = tag if tag == "semivalue" else str(index_id(idx))
    jobs = [(n, name, cls, local, s, workers) for s in range(workers)]
    with ProcessPoolExecutor(workers) as ex:
        parts = list(ex.map(_sweep_chunk, jobs))
    out = SweepReport(n, parts[0].index, cls)
    for p in parts:
        out.games += p.games
        out.inadmissible += p.inadmissible
        out.checks += p.checks
        out.skipped_normalized += p.skipped_normalized
        out.violations += p.violations
        out.local_violations += p.local_violations
        out.max_ratio_absolute = max(out.max_ratio_absolute, p.max_ratio_absolute)
        out.max_ratio_normalized = max(out.max_ratio_normalized, p.max_ratio_normalized)
    return out


# lower bounds for the inverse problem

def _as_sigma(sigma) -> list[Fraction]:
    s = [to_fraction(x) for x in sigma]
    if any(x < 0 for x in s):
        raise ValueError("sigma must be nonnegative")
    return s


def lambda_min(sigma_prefix, cls: str, k: int, idx, include_constants: bool = True) -> Fraction:
    """Minimal L1 distance between sigma' and normalized index vectors of class games on k voters.

    Constant games have no normalized vector; with include_constants they
    contribute distance ||sigma'||_1 (the zero vector).
    """
    s = _as_sigma(sigma_prefix)
    if len(s) != k:
        raise ValueError("sigma prefix must have length k")
    idx = index_id(idx).absolute()
    best = sum(s) if include_constants else None
    for g in enumerate_games(k, cls):
        try:
            v = normalize(power_index(g, idx)).values
        except (ZeroDivisionError, UndefinedIndex):
            continue
        d = l1(s, v)
        if best is None or d < best:
            best = d
    if best is None:
        raise ValueError("no class game has a normalized index vector")
    return best


LOWER_BOUND_HYPOTHESES = ("positive", "null_voter", "null_voter_removable")


def check_hypotheses(idx) -> list[str]:
    """Names of failed hypotheses for the general lower bound (empty means fine)."""
    idx = index_id(idx)
    bad = [h for h in LOWER_BOUND_HYPOTHESES if expected_property(idx, h) is not True]
    try:
        quality(idx, 1)
    except NoQualityFunctions:
        bad.append("quality_functions")
    return bad


@dataclass
class LowerBound:
    value: Fraction
    path: str  # "no-tail" (sigma vanishes beyond k) or "tail"
    alpha: Fraction
    lam: Fraction
    f1: Fraction
    f2: Fraction


def approximation_lower_bound(sigma, k: int, idx="bz", cls: str = "simple") -> LowerBound:
    """Lower bound on ||P^(g) - sigma||_1 over all class games g on len(sigma) voters."""
    s = _as_sigma(sigma)
    if sum(s) != 1:
        raise ValueError("sigma must sum to 1")
    n = len(s)
    if not 0 < k < n:
        raise ValueError("need 0 < k < n")
    bad = check_hypotheses(idx)
    if bad:
        raise HypothesisViolation(", ".join(bad))
    f1, f2 = quality(idx, k)
    head = s[:k]
    alpha = 1 - sum(head)
    lam = lambda_min(head, cls, k, idx)
    if alpha == 0 and k > 1:
        value = min(F(2) / f2, 2 * lam / (f2 + k * f1 + 3))
        return LowerBound(value, "no-tail", alpha, lam, f1, f2)
    beta = f2 + k * f1 + 1
    if min((lam + alpha) / (beta + 2), 1 / f2) < alpha:
        raise HypothesisViolation("alpha too large for the tail bound's precondition")
    value = min(2 * (1 / f2 - alpha), F(2) / (beta + 2) * lam - F(2 * beta + 2) / (beta + 2) * alpha)
    return LowerBound(value, "tail", alpha, lam, f1, f2)


def tightness_vs_original(k: int, eps) -> bool:
    """(2k+1)e/(1-(k+1)e) + e > (2k+2)e for e in (0, 1/(k+1))."""
    e = to_fraction(eps)
    if not 0 < e < F(1, k + 1):
        raise ValueError("eps out of range")
    return (2 * k + 1) * e / (1 - (k + 1) * e) + e > (2 * k + 2) * e


def constant_guard_failures(n: int, idx, cls: str = "simple") -> list:
    """Games where eps' < 1/f2(k) and P(g) != 0 but the shortening is constant."""
    idx = index_id(idx).absolute()
    bad = []
    for g in enumerate_games(n, cls):
        pg = _safe_index(g, idx)
        if pg is None or sum(pg) == 0:
            continue
        for k in range(1, n):
            _, f2 = quality(idx, k)
            eps = sum(pg[k:]) / sum(pg)
            if eps < 1 / f2 and shortening_for(idx, k).apply(g).is_constant:
                bad.append((g.win.hex(), k))
    return bad


def pk_conjecture_probe(p, n: int, k: int, cls: str = "simple", idx=None) -> dict:
    """Largest normalized deviation / eps' under (p,k)-rounding; measured, not asserted."""
    p = to_fraction(p)
    idx = index_id(idx if idx is not None else f"pbinomial:{p}").absolute()
    rnd = ShorteningId("pk", k, p)
    worst, worst_game, zero_eps_moves = F(0), None, 0
    count = 0
    for g in enumerate_games(n, cls):
        pg = _safe_index(g, idx)
        h = rnd.apply(g)
        if pg is None or sum(pg) == 0 or h.is_constant:
            continue
        ph = _safe_index(h, idx)
        if ph is None or sum(ph) == 0:
            continue
        count += 1
        eps = sum(pg[k:]) / sum(pg)
        dev = l1([x / sum(ph) for x in ph], [x / sum(pg) for x in pg])
        if eps == 0:
            zero_eps_moves += dev != 0
            continue
        if dev / eps > worst:
            worst, worst_game = dev / eps, g
    return {"p": p, "n": n, "k": k, "index": str(idx), "games": count, "max_ratio": worst,
            "argmax": worst_game.win.hex() if worst_game else None, "zero_eps_moves": zero_eps_moves}


def witness_ratio_sequence(p=F(1, 3), k: int = 2, l: int = 1, n_list=(11, 21, 31)) -> dict:
    """Delta/xi along the parametric family: unbounded growth rules out quality functions."""
    return pbinomial_negative_witness(k, l, p, n_list)
