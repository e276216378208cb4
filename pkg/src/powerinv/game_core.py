"""Binary voting games on n voters stored as full win tables.

Voters are numbered 0..n-1 internally; voter i is bit i of a coalition mask.
Everything user-facing that prints voters 1-based says so explicitly.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import permutations

from . import lp
from .rational import to_fraction

MAX_N = 24
ENUM_LIMITS = {"boolean": 4, "simple": 5, "complete": 5, "weighted": 5}


def mask_of(voters) -> int:
    m = 0
    for i in voters:
        m |= 1 << i
    return m


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class Game:
    """A game v: 2^N -> {0,1}, immutable.

    ``win`` is a bytes object of length 2**n with win[S] in {0, 1}.
    """

    def __init__(self, n: int, win):
        if not 1 <= n <= MAX_N:
            raise ValueError(f"n must be in 1..{MAX_N}, got {n}")
        win = bytes(1 if w else 0 for w in win) if not isinstance(win, bytes) else win
        if len(win) != 1 << n:
            raise ValueError("win table must have length 2**n")
        if any(b > 1 for b in win):
            raise ValueError("win table entries must be 0 or 1")
        self.n = n
        self.win = win

    # construction helpers
    @classmethod
    def from_winning(cls, n, winning):
        t = bytearray(1 << n)
        for S in winning:
            if S >> n:
                raise ValueError(f"coalition {S} has bits above voter {n - 1}")
            t[S] = 1
        return cls(n, bytes(t))

    @classmethod
    def from_minimal(cls, n, minimal):
        """Upward closure of the given coalitions."""
        t = bytearray(1 << n)
        for S in minimal:
            t[S] = 1
        for i in range(n):
            bit = 1 << i
            for S in range(1 << n):
                if S & bit and t[S ^ bit]:
                    t[S] = 1
        return cls(n, bytes(t))

    @classmethod
    def constant(cls, n, value: bool):
        return cls(n, bytes([1 if value else 0]) * (1 << n))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def __eq__(self, other):
        return isinstance(other, Game) and self.n == other.n and self.win == other.win

    def __hash__(self):
        return hash((self.n, self.win))

    def __repr__(self):
        return f"Game(n={self.n}, winning={self.winning()})"

    def __call__(self, S: int) -> int:
        return self.win[S]

    def winning(self) -> list[int]:
        return [S for S, w in enumerate(self.win) if w]

    def losing(self) -> list[int]:
        return [S for S, w in enumerate(self.win) if not w]

    # class flags
    @cached_property
    def is_boolean(self) -> bool:
        return self.win[0] == 0 and self.win[self.full] == 1

    @cached_property
    def is_monotone(self) -> bool:
        win = self.win
        for i in range(self.n):
            bit = 1 << i
            for S in range(1 << self.n):
                if S & bit and win[S ^ bit] > win[S]:
                    return False
        return True

    @cached_property
    def is_simple(self) -> bool:
        return self.is_boolean and self.is_monotone

    @cached_property
    def is_constant(self) -> bool:
        return len(set(self.win)) == 1

    def desirable(self, i: int, j: int) -> bool:
        """True when voter i is at least as desirable as voter j."""
        bi, bj = 1 << i, 1 << j
        win = self.win
        for S in range(1 << self.n):
            if S & (bi | bj):
                continue
            if win[S | bj] > win[S | bi]:
                return False
        return True

    @cached_property
    def is_complete(self) -> bool:
        """Complete with respect to the fixed order 0 >= 1 >= ... >= n-1."""
        if not self.is_simple:
            return False
        return all(self.desirable(i, i + 1) for i in range(self.n - 1))

    @cached_property
    def is_complete_any_order(self) -> bool:
        """Desirability is total, i.e. some relabeling makes the game complete."""
        if not self.is_simple:
            return False
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if not (self.desirable(i, j) or self.desirable(j, i)):
                    return False
        return True

    @cached_property
    def is_proper(self) -> bool:
        full = self.full
        return not any(self.win[S] and self.win[full ^ S] for S in range(1 << self.n))

    @cached_property
    def is_strong(self) -> bool:
        full = self.full
        return not any(not self.win[S] and not self.win[full ^ S] for S in range(1 << self.n))

    # coalition structure
    @cached_property
    def critical(self) -> tuple[int, ...]:
        """critical[S] = mask of voters i in S with S winning and S - i losing."""
        win = self.win
        out = [0] * (1 << self.n)
        bits = [1 << i for i in range(self.n)]
        for S in range(1 << self.n):
            if win[S]:
                c = 0
                for b in bits:
                    if S & b and not win[S ^ b]:
                        c |= b
                out[S] = c
        return tuple(out)

    @cached_property
    def minimal_winning(self) -> tuple[int, ...]:
        _require_simple(self)
        crit = self.critical
        return tuple(S for S in range(1 << self.n) if self.win[S] and crit[S] == S)

    @cached_property
    def maximal_losing(self) -> tuple[int, ...]:
        _require_simple(self)
        full = self.full
        out = []
        for S in range(1 << self.n):
            if self.win[S]:
                continue
            rest = full ^ S
            if all(self.win[S | (1 << i)] for i in members(rest)):
                out.append(S)
        return tuple(out)

    def right_shifts(self, S: int) -> list[int]:
        """Direct right-shifts: swap i for i+1 when i+1 is absent; drop the last voter."""
        out = []
        n = self.n
        for i in range(n - 1):
            if S >> i & 1 and not S >> (i + 1) & 1:
                out.append(S ^ (1 << i) ^ (1 << (i + 1)))
        if S >> (n - 1) & 1:
            out.append(S ^ (1 << (n - 1)))
        return out

    def left_shifts(self, S: int) -> list[int]:
        """Direct left-shifts: swap i+1 for i when i is absent; add the last voter."""
        out = []
        n = self.n
        for i in range(n - 1):
            if S >> (i + 1) & 1 and not S >> i & 1:
                out.append(S ^ (1 << i) ^ (1 << (i + 1)))
        if not S >> (n - 1) & 1:
            out.append(S | (1 << (n - 1)))
        return out

    @cached_property
    def shift_minimal_winning(self) -> tuple[int, ...]:
        if not self.is_complete:
            raise ValueError("shift-minimal coalitions need a complete game (order 1 >= ... >= n)")
        win = self.win
        return tuple(
            S for S in range(1 << self.n)
            if win[S] and not any(win[T] for T in self.right_shifts(S))
        )

    @cached_property
    def shift_maximal_losing(self) -> tuple[int, ...]:
        if not self.is_complete:
            raise ValueError("shift-maximal coalitions need a complete game (order 1 >= ... >= n)")
        win = self.win
        return tuple(
            S for S in range(1 << self.n)
            if not win[S] and all(win[T] for T in self.left_shifts(S))
        )

    @cached_property
    def null_voters(self) -> tuple[int, ...]:
        _require_simple(self)
        used = 0
        for S in self.minimal_winning:
            used |= S
        return tuple(i for i in range(self.n) if not used >> i & 1)

    @cached_property
    def vetoers(self) -> tuple[int, ...]:
        _require_simple(self)
        full = self.full
        return tuple(i for i in range(self.n) if not self.win[full ^ (1 << i)])

    @cached_property
    def num_winning(self) -> int:
        return sum(self.win)

    def flags(self) -> dict:
        return classify(self)

    def permuted(self, perm) -> "Game":
        """Relabel voters: voter i becomes voter perm[i]."""
        t = bytearray(1 << self.n)
        for S in range(1 << self.n):
            if self.win[S]:
                T = 0
                for i in members(S):
                    T |= 1 << perm[i]
                t[T] = 1
        return Game(self.n, bytes(t))


def _require_simple(g: Game):
    if not g.is_simple:
        raise ValueError("operation requires a simple game")


def from_weighted(q, w) -> Game:
    q = to_fraction(q)
    w = [to_fraction(x) for x in w]
    n = len(w)
    if not 1 <= n <= MAX_N:
        raise ValueError(f"n must be in 1..{MAX_N}, got {n}")
    if q <= 0:
        raise ValueError("quota must be positive")
    if any(x < 0 for x in w):
        raise ValueError("weights must be nonnegative")
    if sum(w) < q:
        raise ValueError("w(N) < q: the grand coalition would lose")
    # subset sums by dynamic programming over the lowest set bit
    sums = [Fraction(0)] * (1 << n)
    for S in range(1, 1 << n):
        low = S & -S
        sums[S] = sums[S ^ low] + w[low.bit_length() - 1]
    return Game(n, bytes(1 if s >= q else 0 for s in sums))


def classify(g: Game) -> dict:
    return {
        "boolean": g.is_boolean,
        "simple": g.is_simple,
        "complete": g.is_complete,
        "proper": g.is_proper,
        "strong": g.is_strong,
    }


def minimal_winning(g: Game):
    return set(g.minimal_winning)


def maximal_losing(g: Game):
    return set(g.maximal_losing)


def shift_minimal_winning(g: Game):
    return set(g.shift_minimal_winning)


def dual(g: Game) -> Game:
    full = g.full
    return Game(g.n, bytes(1 - g.win[full ^ S] for S in range(1 << g.n)))


class ReducedKind(enum.Enum):
    ALL_LOSING = "all_losing"
    ALL_WINNING = "all_winning"
    BOOLEAN = "boolean"  # a genuine Boolean game on the remaining voters
    IRREGULAR = "irregular"  # only possible when g is not monotone


@dataclass(frozen=True)
class ReducedGame:
    kind: ReducedKind
    game: Game | None  # the table over voters k..n-1 (always filled)


def reduced_table(g: Game, A: int, k: int) -> bytes:
    """win table of W_A over the last n-k voters (bit j <-> voter k+j)."""
    return bytes(g.win[A | (B << k)] for B in range(1 << (g.n - k)))


def reduced_game(g: Game, A: int, k: int) -> ReducedGame:
    if not 0 < k < g.n:
        raise ValueError("need 0 < k < n")
    if A >> k:
        raise ValueError("A must be a subset of the first k voters")
    t = reduced_table(g, A, k)
    h = Game(g.n - k, t)
    if not any(t):
        kind = ReducedKind.ALL_LOSING
    elif all(t):
        kind = ReducedKind.ALL_WINNING
    elif h.is_boolean:
        kind = ReducedKind.BOOLEAN
    else:
        kind = ReducedKind.IRREGULAR
    return ReducedGame(kind, h)


def null_voters(g: Game):
    return set(g.null_voters)


def vetoers(g: Game):
    return set(g.vetoers)


def remove_null_voters(g: Game) -> Game:
    nulls = set(g.null_voters)
    keep = [i for i in range(g.n) if i not in nulls]
    if not keep:
        raise ValueError("every voter is null")
    m = len(keep)
    t = bytearray(1 << m)
    for S in range(1 << m):
        T = 0
        for j, i in enumerate(keep):
            if S >> j & 1:
                T |= 1 << i
        t[S] = g.win[T]
    return Game(m, bytes(t))


def add_null_voter(g: Game) -> Game:
    """Append a null voter as voter n."""
    return Game(g.n + 1, g.win + g.win)


@dataclass(frozen=True)
class WeightedRepr:
    quota: Fraction
    weights: tuple[Fraction, ...]

    def game(self) -> Game:
        return from_weighted(self.quota, self.weights)


def is_weighted(g: Game, ordered: bool = False, bound=None) -> WeightedRepr | None:
    """Find [q; w] with w(S) >= q on minimal winning and w(T) <= q-1 on maximal losing.

    ordered=True additionally asks for w_0 >= w_1 >= ... (only sensible for
    games complete in the fixed order).  ``bound`` optionally caps q and w(N)
    (used for Big-M certificates); the LP then minimizes w(N).
    """
    if not g.is_complete_any_order:
        return None
    n = g.n
    rows = []
    for S in g.minimal_winning:
        rows.append(({i: 1 for i in members(S)} | {n: -1}, lp.GE, 0))
    for T in g.maximal_losing:
        rows.append(({i: 1 for i in members(T)} | {n: -1}, lp.LE, -1))
    rows.append(({n: 1}, lp.GE, 1))
    if ordered:
        for i in range(n - 1):
            rows.append(({i: 1, i + 1: -1}, lp.GE, 0))
    objective = {i: 1 for i in range(n)}
    if bound is not None:
        rows.append(({n: 1}, lp.LE, bound))
        rows.append(({i: 1 for i in range(n)}, lp.LE, bound))
    res = lp.solve(n + 1, objective, rows)
    if res.status != "optimal":
        return None
    rep = WeightedRepr(res.x[n], tuple(res.x[:n]))
    assert rep.game() == g
    return rep


def _monotone_tables(n: int) -> list[int]:
    """All monotone Boolean functions on n variables as truth-table ints."""
    if n == 0:
        return [0, 1]
    prev = _monotone_tables(n - 1)
    half = 1 << (n - 1)
    out = []
    for f0 in prev:
        for f1 in prev:
            if f0 & ~f1 == 0:
                out.append(f0 | (f1 << half))
    return out


def _table_to_game(n: int, t: int) -> Game:
    return Game(n, bytes((t >> S) & 1 for S in range(1 << n)))


@lru_cache(maxsize=None)
def _enumerate(n: int, cls: str) -> tuple[Game, ...]:
    if cls == "boolean":
        inner = (1 << n) - 2
        games = []
        for bits in range(1 << inner):
            t = bytearray(1 << n)
            t[(1 << n) - 1] = 1
            for j in range(inner):
                t[j + 1] = bits >> j & 1
            games.append(Game(n, bytes(t)))
        return tuple(games)
    if cls == "simple":
        full = (1 << (1 << n)) - 1
        return tuple(_table_to_game(n, t) for t in _monotone_tables(n) if t not in (0, full))
    if cls == "complete":
        return tuple(g for g in _enumerate(n, "simple") if g.is_complete_any_order)
    if cls == "weighted":
        return tuple(g for g in _enumerate(n, "complete") if is_weighted(g) is not None)
    raise ValueError(f"unknown class {cls!r}")


def enumerate_games(n: int, cls: str = "simple"):
    """Every labeled game of the class on n voters."""
    if cls not in ENUM_LIMITS:
        raise ValueError(f"unknown class {cls!r}")
    if not 1 <= n <= ENUM_LIMITS[cls]:
        raise ValueError(f"enumeration of {cls} games supports n <= {ENUM_LIMITS[cls]}")
    return iter(_enumerate(n, cls))


def relabelings(n: int):
    return permutations(range(n))


# JSON and text forms

def game_to_json(g: Game) -> dict:
    return {"n": g.n, "winning": g.winning()}


def game_from_json(obj: dict) -> Game:
    if "quota" in obj:
        return from_weighted(obj["quota"], obj["weights"])
    n = int(obj["n"])
    if not 1 <= n <= MAX_N:
        raise ValueError(f"n must be in 1..{MAX_N}")
    return Game.from_winning(n, [int(S) for S in obj["winning"]])


def parse_weighted(text: str) -> WeightedRepr:
    """'[q;w1,...,wn]' with integer or p/q entries."""
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]") and ";" in s):
        raise ValueError(f"not a weighted game: {text!r}")
    q, w = s[1:-1].split(";", 1)
    weights = tuple(to_fraction(x) for x in w.split(",") if x.strip())
    return WeightedRepr(to_fraction(q), weights)


def parse_game(text: str) -> Game:
    """A '[q;w...]' shorthand or a JSON object in either game format."""
    s = text.strip()
    if s.startswith("["):
        return parse_weighted(s).game()
    return game_from_json(json.loads(s))
