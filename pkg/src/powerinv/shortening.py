"""Shortening functions: collapse each reduced game W_A (A within the first k
voters) to all-winning or all-losing, making voters k+1..n null.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .game_core import Game, is_weighted
from .rational import to_fraction


@dataclass(frozen=True)
class ShorteningId:
    tag: str  # "k", "pk" or "up"
    k: int
    p: Fraction | None = None

    def apply(self, g: Game) -> Game:
        if self.tag == "k":
            return k_rounding(g, self.k)
        if self.tag == "pk":
            return pk_rounding(g, self.p, self.k)
        if self.tag == "up":
            return k_up_rounding(g, self.k)
        raise ValueError(self.tag)


def _check(g: Game, k: int):
    if not 1 <= k < g.n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={g.n}")


def reduced_sizes(g: Game, k: int) -> list[int]:
    """|W_A| for every A within the first k voters (A as a k-bit mask)."""
    win = g.win
    m = g.n - k
    return [sum(win[A | (B << k)] for B in range(1 << m)) for A in range(1 << k)]


def _collapse(g: Game, k: int, keep) -> Game:
    sizes = reduced_sizes(g, k)
    m = g.n - k
    t = bytearray(1 << g.n)
    for A, size in enumerate(sizes):
        if keep(size):
            for B in range(1 << m):
                t[A | (B << k)] = 1
    return Game(g.n, bytes(t))


def k_rounding(g: Game, k: int, ties_win: bool = False) -> Game:
    """Majority collapse; a tie (|W_A| equal to half) loses unless ties_win."""
    _check(g, k)
    half = 1 << (g.n - k)
    if ties_win:
        return _collapse(g, k, lambda s: 2 * s >= half)
    return _collapse(g, k, lambda s: 2 * s > half)


def pk_rounding(g: Game, p, k: int) -> Game:
    """Collapse to losing when |W_A| <= p * 2^(n-k)."""
    _check(g, k)
    p = to_fraction(p)
    if not 0 < p < 1:
        raise ValueError("p must lie in (0,1)")
    thr = p * (1 << (g.n - k))
    return _collapse(g, k, lambda s: s > thr)


def k_up_rounding(g: Game, k: int) -> Game:
    """Collapse to winning as soon as W_A is nonempty."""
    _check(g, k)
    return _collapse(g, k, lambda s: s > 0)


def is_k_pure(g: Game, k: int) -> bool:
    """Every reduced game over the first k voters is constant."""
    m = g.n - k
    return all(s in (0, 1 << m) for s in reduced_sizes(g, k))


def switches(g: Game, h: Game) -> int:
    return sum(a != b for a, b in zip(g.win, h.win))


def check_preservation(g: Game, k: int) -> dict:
    """Which class implications survive k-rounding.

    Returns {name: (premise, conclusion)}; an implication holds when the
    premise is false or the conclusion true.
    """
    h = k_rounding(g, k)
    if h.is_constant:
        raise ValueError("k-rounding produced a constant game")
    gw = g.is_simple and is_weighted(g) is not None
    return {
        "simple": (g.is_simple, h.is_simple),
        "complete": (g.is_complete, h.is_complete),
        "complete_any_order": (g.is_complete_any_order, h.is_complete_any_order),
        "weighted": (gw, gw and is_weighted(h) is not None),
        "proper": (g.is_proper, h.is_proper),
        "strong_simple": (g.is_strong and g.is_simple, h.is_strong and h.is_simple),
    }


def preservation_holds(report: dict) -> bool:
    return all(c or not p for p, c in report.values())
