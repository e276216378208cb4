"""Power indices induced by counting functions, computed exactly.

Each index is a sum over coalitions of a nonnegative counting value
C_i(v, S).  ``counting_value`` is the literal per-coalition definition and
serves as the reference; ``power_index`` groups the same sums by coalition
size so sweeps over thousands of games stay fast.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from itertools import permutations

from .game_core import Game, enumerate_games, members, popcount, remove_null_voters, add_null_voter
from .rational import fmt, to_fraction

TAGS = (
    "ssi", "tijs", "semivalue", "pbinomial", "bz", "swing", "colprev", "colini",
    "rae", "kb", "phi", "chow", "js", "pgi", "dp", "shift", "sdp",
)
MWC_TAGS = {"pgi", "dp"}
SHIFT_TAGS = {"shift", "sdp"}
INCREMENTAL_TAGS = ("swing", "bz", "rae", "ssi", "pbinomial", "chow", "kb", "colprev", "js")


class UndefinedIndex(ValueError):
    """The index has no value on this game (e.g. ColPrev without winning coalitions)."""


class NormalizationOfZero(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class IndexId:
    tag: str
    normalized: bool = False
    params: tuple = ()  # (p,) for pbinomial, the p-vector for semivalue

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown index {self.tag!r}")
        if self.tag == "pbinomial":
            if len(self.params) != 1 or not 0 < self.params[0] < 1:
                raise ValueError("pbinomial needs one parameter p in (0,1)")
        if self.tag == "semivalue":
            if not self.params or any(p < 0 for p in self.params):
                raise ValueError("semivalue needs a nonnegative p-vector")

    @property
    def p(self) -> Fraction:
        return self.params[0]

    def absolute(self) -> "IndexId":
        return IndexId(self.tag, False, self.params)

    def normalize(self) -> "IndexId":
        return IndexId(self.tag, True, self.params)

    def __str__(self):
        s = self.tag
        if self.params:
            s += ":" + ",".join(fmt(p) for p in self.params)
        return s


def index_id(spec: str | IndexId, normalized: bool = False) -> IndexId:
    """Parse 'bz', 'pbinomial:1/3' or 'semivalue:1/3,1/6,1/3'."""
    if isinstance(spec, IndexId):
        return spec.normalize() if normalized else spec
    tag, _, rest = spec.strip().lower().partition(":")
    params = tuple(to_fraction(x) for x in rest.split(",")) if rest else ()
    return IndexId(tag, normalized, params)


def ssi_semivalue(n: int) -> IndexId:
    """The semivalue whose p-vector reproduces the Shapley-Shubik index."""
    return IndexId("semivalue", False, tuple(Fraction(1, n * comb(n - 1, j)) for j in range(n)))


@dataclass(frozen=True)
class PowerVector:
    index: IndexId
    values: tuple = field(default_factory=tuple)

    @property
    def normalized(self):
        return self.index.normalized

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def total(self):
        return sum(self.values, Fraction(0))

    def to_json(self):
        return {"index": str(self.index), "normalized": self.normalized,
                "values": [fmt(v) for v in self.values]}


def _size_weight(idx: IndexId, n: int):
    """Weight of a swing in a coalition of size s, for the semivalue family."""
    if idx.tag == "ssi":
        nf = factorial(n)
        return lambda s: Fraction(factorial(s - 1) * factorial(n - s), nf)
    if idx.tag == "semivalue":
        pv = idx.params
        if len(pv) != n:
            raise ValueError(f"semivalue p-vector has length {len(pv)}, game has {n} voters")
        if sum(pv[j] * comb(n - 1, j) for j in range(n)) != 1:
            raise ValueError("semivalue p-vector must satisfy sum p_j C(n-1,j) = 1")
        return lambda s: pv[s - 1]
    if idx.tag == "pbinomial":
        p = idx.p
        return lambda s: p ** (s - 1) * (1 - p) ** (n - s)
    if idx.tag == "bz":
        return lambda s: Fraction(1, 2 ** (n - 1))
    if idx.tag == "swing":
        return lambda s: Fraction(1)
    raise KeyError(idx.tag)


def _check_admissible(g: Game, idx: IndexId):
    if g.is_constant:
        return
    if not g.is_boolean:
        raise ValueError("power indices are defined on Boolean games (or the two constants)")
    if idx.tag in MWC_TAGS and not g.is_simple:
        raise ValueError(f"{idx.tag} needs a simple game")
    if idx.tag in SHIFT_TAGS and not g.is_complete:
        raise ValueError(f"{idx.tag} needs a complete game with order 1 >= 2 >= ... >= n")


def _mwc(g: Game):
    if g.is_constant:
        return (0,) if g.win[0] else ()
    return g.minimal_winning


def _smwc(g: Game):
    if g.is_constant:
        return (0,) if g.win[0] else ()
    return g.shift_minimal_winning


def _num_losing(g):
    return (1 << g.n) - g.num_winning


def counting_value(g: Game, idx, i: int, S: int) -> Fraction:
    """C_i(g, S) exactly as defined, one coalition at a time."""
    idx = index_id(idx)
    _check_admissible(g, idx)
    n, win = g.n, g.win
    t = idx.tag
    ins = bool(S >> i & 1)
    s = popcount(S)
    swing = ins and win[S] and not win[S ^ (1 << i)]
    if t in ("ssi", "semivalue", "pbinomial", "bz", "swing"):
        return _size_weight(idx, n)(s) if swing else Fraction(0)
    if t == "tijs":
        return Fraction(1) if S == g.full and swing else Fraction(0)
    if t == "colprev":
        if g.num_winning == 0:
            raise UndefinedIndex("ColPrev undefined without winning coalitions")
        return Fraction(1, g.num_winning) if swing else Fraction(0)
    if t == "colini":
        if _num_losing(g) == 0:
            raise UndefinedIndex("ColIni undefined without losing coalitions")
        hit = not ins and not win[S] and win[S | (1 << i)]
        return Fraction(1, _num_losing(g)) if hit else Fraction(0)
    if t == "rae":
        hit = (ins and win[S]) or (not ins and not win[S])
        return Fraction(1, 2 ** n) if hit else Fraction(0)
    if t == "kb":
        if g.num_winning == 0:
            raise UndefinedIndex("KB undefined without winning coalitions")
        return Fraction(1, g.num_winning) if ins and win[S] else Fraction(0)
    if t == "phi":
        tot = sum(popcount(T) for T in range(1 << n) if win[T])
        if tot == 0:
            raise UndefinedIndex("PHI undefined without nonempty winning coalitions")
        return Fraction(1, tot) if ins and win[S] else Fraction(0)
    if t == "chow":
        return Fraction(1) if ins and win[S] else Fraction(0)
    if t == "js":
        if not swing:
            return Fraction(0)
        crit = [j for j in members(S) if not win[S ^ (1 << j)]]
        return Fraction(1, len(crit))
    if t in ("pgi", "dp"):
        if not ins or S not in set(_mwc(g)):
            return Fraction(0)
        return Fraction(1) if t == "pgi" else Fraction(1, s)
    if t in ("shift", "sdp"):
        if not ins or S not in set(_smwc(g)):
            return Fraction(0)
        return Fraction(1) if t == "shift" else Fraction(1, s)
    raise KeyError(t)


def _swing_counts_by_size(g: Game):
    """cnt[i][s] = number of coalitions of size s in which i is critical."""
    n = g.n
    cnt = [[0] * (n + 1) for _ in range(n)]
    crit = g.critical
    for S in range(1 << n):
        c = crit[S]
        if c:
            s = popcount(S)
            for i in members(c):
                cnt[i][s] += 1
    return cnt


def _winning_counts(g: Game):
    n = g.n
    wi = [0] * n
    for S in range(1 << n):
        if g.win[S]:
            for i in members(S):
                wi[i] += 1
    return wi


def _absolute(g: Game, idx: IndexId) -> list[Fraction]:
    n, t = g.n, idx.tag
    if t in ("ssi", "semivalue", "pbinomial", "bz", "swing"):
        weight = _size_weight(idx, n)
        cnt = _swing_counts_by_size(g)
        return [sum((weight(s) * c for s, c in enumerate(row) if c), Fraction(0)) for row in cnt]
    if t == "tijs":
        crit = g.critical[g.full]
        return [Fraction(crit >> i & 1) for i in range(n)]
    if t == "colprev":
        if g.num_winning == 0:
            raise UndefinedIndex("ColPrev undefined without winning coalitions")
        eta = [sum(row) for row in _swing_counts_by_size(g)]
        return [Fraction(e, g.num_winning) for e in eta]
    if t == "colini":
        nl = _num_losing(g)
        if nl == 0:
            raise UndefinedIndex("ColIni undefined without losing coalitions")
        win = g.win
        out = [0] * n
        for S in range(1 << n):
            if not win[S]:
                for i in range(n):
                    b = 1 << i
                    if not S & b and win[S | b]:
                        out[i] += 1
        return [Fraction(c, nl) for c in out]
    if t == "rae":
        wi = _winning_counts(g)
        # i in S in W, or i outside S outside W: |W_i| + (|L| - |L with i|)
        li = [(1 << (n - 1)) - (g.num_winning - w) for w in wi]  # losing sets without i
        return [Fraction(w + l, 2 ** n) for w, l in zip(wi, li)]
    if t in ("kb", "phi", "chow"):
        wi = _winning_counts(g)
        if t == "chow":
            return [Fraction(w) for w in wi]
        tot = g.num_winning if t == "kb" else sum(wi)
        if tot == 0:
            raise UndefinedIndex(f"{t} undefined without (nonempty) winning coalitions")
        return [Fraction(w, tot) for w in wi]
    if t == "js":
        crit = g.critical
        acc = [[0] * (n + 1) for _ in range(n)]
        for S in range(1 << n):
            c = crit[S]
            if c:
                k = popcount(c)
                for i in members(c):
                    acc[i][k] += 1
        return [sum((Fraction(a, k) for k, a in enumerate(row) if a), Fraction(0)) for row in acc]
    if t in ("pgi", "dp", "shift", "sdp"):
        coalitions = _mwc(g) if t in MWC_TAGS else _smwc(g)
        acc = [Fraction(0)] * n
        for S in coalitions:
            v = Fraction(1) if t in ("pgi", "shift") else Fraction(1, popcount(S))
            for i in members(S):
                acc[i] += v
        return acc
    raise KeyError(t)


def power_index(g: Game, idx) -> PowerVector:
    idx = index_id(idx)
    _check_admissible(g, idx)
    vals = _absolute(g, idx)
    pv = PowerVector(idx.absolute(), tuple(vals))
    return normalize(pv) if idx.normalized else pv


def power_index_naive(g: Game, idx) -> PowerVector:
    """Literal double sum over voters and coalitions (reference implementation)."""
    idx = index_id(idx)
    vals = [sum((counting_value(g, idx, i, S) for S in range(1 << g.n)), Fraction(0))
            for i in range(g.n)]
    pv = PowerVector(idx.absolute(), tuple(vals))
    return normalize(pv) if idx.normalized else pv


def normalize(v) -> PowerVector:
    if not isinstance(v, PowerVector):
        v = PowerVector(IndexId("swing"), tuple(to_fraction(x) for x in v))
    tot = v.total()
    if tot == 0:
        raise NormalizationOfZero("total power is zero")
    return PowerVector(v.index.normalize(), tuple(x / tot for x in v.values))


def turn_losing(g: Game, T: int) -> Game:
    t = bytearray(g.win)
    t[T] = 0
    return Game(g.n, bytes(t))


def update_on_mwc_removal(g: Game, T: int, idx, current) -> PowerVector:
    """Power of the game where the minimal winning coalition T becomes losing.

    Uses only local information around T instead of a full recomputation.
    """
    idx = index_id(idx)
    if idx.normalized:
        raise ValueError("incremental updates work on absolute indices")
    if idx.tag not in INCREMENTAL_TAGS:
        raise ValueError(f"no incremental formula for {idx.tag}")
    if not g.is_simple or T not in set(g.minimal_winning):
        raise ValueError("T must be a minimal winning coalition of a simple game")
    if T == g.full:
        raise ValueError("removing N would leave a non-Boolean game")
    n = g.n
    cur = list(current.values if isinstance(current, PowerVector) else current)
    t = popcount(T)
    on = [bool(T >> i & 1) for i in range(n)]
    tag = idx.tag
    W = g.num_winning
    out = list(cur)
    if tag in ("swing", "bz", "rae", "ssi", "pbinomial"):
        if tag == "swing":
            minus = plus = Fraction(1)
        elif tag == "bz":
            minus = plus = Fraction(1, 2 ** (n - 1))
        elif tag == "rae":
            minus = plus = Fraction(1, 2 ** n)
        elif tag == "ssi":
            minus = Fraction(factorial(t - 1) * factorial(n - t), factorial(n))
            plus = Fraction(factorial(t) * factorial(n - 1 - t), factorial(n))
        else:
            p = idx.p
            minus = p ** (t - 1) * (1 - p) ** (n - t)
            plus = p ** t * (1 - p) ** (n - t - 1)
        out = [c - minus if on[i] else c + plus for i, c in enumerate(cur)]
    elif tag == "chow":
        out = [c - 1 if on[i] else c for i, c in enumerate(cur)]
    elif tag in ("kb", "colprev"):
        r = Fraction(W, W - 1)
        d = Fraction(1, W - 1)
        if tag == "kb":
            out = [r * c - d if on[i] else r * c for i, c in enumerate(cur)]
        else:
            out = [r * c - d if on[i] else r * c + d for i, c in enumerate(cur)]
    elif tag == "js":
        # T itself stops contributing 1/t to each member.  For j outside T,
        # T+j gains j as a critical voter next to C_j = {i in T: T+j-i loses}.
        out = [c - Fraction(1, t) if on[i] else c for i, c in enumerate(cur)]
        for j in range(n):
            if on[j]:
                continue
            U = T | (1 << j)
            Cj = [i for i in members(T) if not g.win[U ^ (1 << i)]]
            c = len(Cj)
            out[j] += Fraction(1, c + 1)
            for i in Cj:
                out[i] += Fraction(1, c + 1) - Fraction(1, c)
    return PowerVector(idx, tuple(out))


def update_on_mwc_removal_literal(g: Game, T: int, idx, current) -> PowerVector:
    """The printed Johnston recursion (-1/|T| on T, +1/(|T|+1) off T), kept for comparison."""
    idx = index_id(idx)
    if idx.tag != "js":
        return update_on_mwc_removal(g, T, idx, current)
    t = popcount(T)
    vals = current.values if isinstance(current, PowerVector) else current
    return PowerVector(idx, tuple(
        c - Fraction(1, t) if T >> i & 1 else c + Fraction(1, t + 1) for i, c in enumerate(vals)
    ))


EQUAL_DIVISION = {"swing": "js", "pgi": "dp", "shift": "sdp"}


def equal_division_transform(idx) -> IndexId:
    idx = index_id(idx)
    if idx.tag not in EQUAL_DIVISION:
        raise ValueError(f"{idx.tag} has no equal-division partner")
    return IndexId(EQUAL_DIVISION[idx.tag], idx.normalized)


def equal_division_value(g: Game, idx, i: int, S: int) -> Fraction:
    """Equal-division version of a counting function at (i, S)."""
    idx = index_id(idx)
    vals = [counting_value(g, idx, j, S) for j in range(g.n)]
    if vals[i] <= 0:
        return Fraction(0)
    pos = sum(1 for j in members(S) if vals[j] > 0)
    return max(vals) / pos


# Verified property table for the absolute indices on simple games:
# (symmetric, positive, efficient, null_voter, null_voter_removable).
# Shift and SDP use the fixed order 1 >= ... >= n for shifts, so equivalent
# voters can get different values, e.g. majority of three gives Shift (0,1,1).
PROPERTY_TABLE = {
    "ssi": (True, True, True, True, True),
    "tijs": (True, False, False, True, True),
    "semivalue": (True, True, False, True, None),
    "pbinomial": (True, True, False, True, True),
    "bz": (True, True, False, True, True),
    "swing": (True, True, False, True, False),
    "colprev": (True, True, False, True, True),
    "colini": (True, True, False, True, True),
    "rae": (True, True, False, False, True),
    "kb": (True, True, False, False, True),
    "phi": (True, True, True, False, False),
    "chow": (True, True, False, False, False),
    "js": (True, True, False, True, False),
    "pgi": (True, True, False, True, True),
    "dp": (True, True, False, True, True),
    "shift": (False, True, False, True, True),
    "sdp": (False, True, False, True, True),
}
PROPERTIES = ("symmetric", "positive", "efficient", "null_voter", "null_voter_removable")


def expected_property(idx, prop: str):
    idx = index_id(idx)
    return PROPERTY_TABLE[idx.tag][PROPERTIES.index(prop)]


def _games_for(idx: IndexId, n: int):
    games = enumerate_games(n, "simple")
    if idx.tag in SHIFT_TAGS:
        return [g for g in games if g.is_complete]
    return list(games)


def check_property(idx, prop: str, n: int):
    """Exhaustively test a property over simple games on n voters.

    Returns (holds, counterexample) where counterexample is a game (or pair
    of games) violating the property, or None.
    """
    idx = index_id(idx)
    if prop not in PROPERTIES:
        raise ValueError(f"unknown property {prop!r}")
    if n > 4:
        raise ValueError("property checks are exhaustive and limited to n <= 4")
    if idx.tag == "semivalue" and prop == "null_voter_removable":
        raise ValueError("a single p-vector does not define the index on other voter counts")
    games = _games_for(idx, n)
    if prop == "symmetric":
        pool = set(games)
        for g in games:
            P = power_index(g, idx).values
            for perm in permutations(range(n)):
                h = g.permuted(perm)
                if h not in pool:
                    continue  # outside the admissible class (complete order for shift indices)
                Q = power_index(h, idx).values
                if any(Q[perm[i]] != P[i] for i in range(n)):
                    return False, (g, perm)
        return True, None
    if prop == "positive":
        for g in games:
            P = power_index(g, idx).values
            if any(x < 0 for x in P) or all(x == 0 for x in P):
                return False, g
        return True, None
    if prop == "efficient":
        for g in games:
            if sum(power_index(g, idx).values) != 1:
                return False, g
        return True, None
    if prop == "null_voter":
        for g in games:
            P = power_index(g, idx).values
            if any(P[i] != 0 for i in g.null_voters):
                return False, g
        return True, None
    # null_voter_removable: compare each game with its null-voter-free reduction,
    # and each game on n-1 voters with a null voter appended
    pairs = []
    for g in games:
        nulls = set(g.null_voters)
        if nulls:
            pairs.append((g, remove_null_voters(g), [i for i in range(n) if i not in nulls]))
    if n >= 2:
        for h in _games_for(idx, n - 1):
            pairs.append((add_null_voter(h), h, list(range(n - 1))))
    for big, small, keep in pairs:
        P = power_index(big, idx).values
        Q = power_index(small, idx).values
        if [P[i] for i in keep] != list(Q):
            return False, (big, small)
    return True, None
