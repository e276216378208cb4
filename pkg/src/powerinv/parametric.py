"""The weighted family v^{k,l}_{n,m} and closed-form index values on it.

Voters come in three types: the first k-l voters (type 1), the block
T = (k-l, k] (type 2), and the n "ocean" voters k+1..k+n (type 3).
Minimal winning coalitions are the l-subsets of [k] other than T, plus T
together with any m ocean voters.

G1 is v_{n,m}, G2 is v_{n,n+1} (T plus ocean never wins) and G3 is v_{n,0}
(T alone wins).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from math import comb, factorial

from .game_core import Game, WeightedRepr, mask_of
from .rational import decide_ge, exp_interval, sqrt_interval, to_fraction

WHICH = ("G1", "G2", "G3")


@dataclass(frozen=True)
class ParametricParams:
    k: int
    l: int
    m: int
    n: int

    def __post_init__(self):
        if not 1 <= self.l <= self.k - 1:
            raise ValueError("need 1 <= l <= k-1")
        if self.n < 1:
            raise ValueError("need n >= 1")
        if not 0 <= self.m <= self.n + 1:
            raise ValueError("need 0 <= m <= n+1")

    @property
    def voters(self):
        return self.k + self.n

    @property
    def T(self) -> int:
        return mask_of(range(self.k - self.l, self.k))

    def variant(self, which: str) -> "ParametricParams":
        if which == "G1":
            return self
        if which == "G2":
            return replace(self, m=self.n + 1)
        if which == "G3":
            return replace(self, m=0)
        raise ValueError(which)

    def multiplicities(self):
        return (self.k - self.l, self.l, self.n)


@dataclass(frozen=True)
class TypedPowerTriple:
    t1: Fraction
    t2: Fraction
    t3: Fraction

    def expand(self, pp: ParametricParams) -> list[Fraction]:
        a, b, c = pp.multiplicities()
        return [self.t1] * a + [self.t2] * b + [self.t3] * c

    def total(self, pp: ParametricParams) -> Fraction:
        a, b, c = pp.multiplicities()
        return a * self.t1 + b * self.t2 + c * self.t3

    def normalized(self, pp: ParametricParams) -> "TypedPowerTriple":
        s = self.total(pp)
        return TypedPowerTriple(self.t1 / s, self.t2 / s, self.t3 / s)

    def distance(self, other: "TypedPowerTriple", pp: ParametricParams) -> Fraction:
        a, b, c = pp.multiplicities()
        return a * abs(self.t1 - other.t1) + b * abs(self.t2 - other.t2) + c * abs(self.t3 - other.t3)


@dataclass(frozen=True)
class Deltas:
    d12: tuple  # per voter type, |P(G1) - P(G2)|
    d13: tuple  # per voter type, |P(G1) - P(G3)|
    xi: Fraction


def build_game(pp: ParametricParams) -> Game:
    if pp.voters > 20:
        raise ValueError("k+n must be at most 20")
    k, l, m, n = pp.k, pp.l, pp.m, pp.n
    T = pp.T
    mins = [mask_of(U) for U in combinations(range(k), l) if mask_of(U) != T]
    if m <= n:
        mins += [T | mask_of(V) for V in combinations(range(k, k + n), m)]
    return Game.from_minimal(k + n, mins)


def weighted_repr(pp: ParametricParams) -> WeightedRepr:
    k, l, m, n = pp.k, pp.l, pp.m, pp.n
    if m == n + 1:
        q = l * l + 1
        w = [l + 1] * (k - l) + [l] * l + [0] * n
    elif m == 0:
        q = l
        w = [1] * k + [0] * n
    else:
        b = (l - 2) * m + n + 1
        a = (l - 1) * m + n + 1
        q = l * b + m
        w = [a] * (k - l) + [b] * l + [1] * n
    return WeightedRepr(Fraction(q), tuple(Fraction(x) for x in w))


def rounding_case(pp: ParametricParams) -> str:
    """Which game k-rounding produces: 'G3' (m -> 0) or 'G2' (m -> n+1)."""
    return "G3" if pp.m <= pp.n // 2 else "G2"


def _binom_tail(n, p, lo, hi):
    """sum_{j=lo}^{hi} C(n,j) p^j (1-p)^(n-j)"""
    return sum((comb(n, j) * p ** j * (1 - p) ** (n - j) for j in range(max(lo, 0), min(hi, n) + 1)),
               Fraction(0))


def psi_p_closed_form(pp: ParametricParams, which: str, p) -> TypedPowerTriple:
    p = to_fraction(p)
    k, l, n = pp.k, pp.l, pp.n
    q = 1 - p
    base = comb(k - 1, l - 1) * p ** (l - 1) * q ** (k - l)
    if which == "G2":
        return TypedPowerTriple(base + p ** l * q ** (k - l - 1),
                                (comb(k - 1, l - 1) - 1) * p ** (l - 1) * q ** (k - l),
                                Fraction(0))
    if which == "G3":
        return TypedPowerTriple(base, base, Fraction(0))
    m = pp.m
    if not 1 <= m <= n:
        raise ValueError("G1 formulas need 1 <= m <= n")
    below = _binom_tail(n, p, 0, m - 1)
    above = _binom_tail(n, p, m, n)
    t1 = base + p ** l * q ** (k - l - 1) * below
    t2 = (comb(k - 1, l - 1) - 1) * p ** (l - 1) * q ** (k - l) + p ** (l - 1) * q ** (k - l) * above
    t3 = p ** l * q ** (k - l) * comb(n - 1, m - 1) * p ** (m - 1) * q ** (n - m)
    return TypedPowerTriple(t1, t2, t3)


def psi_p_deltas(pp: ParametricParams, p) -> Deltas:
    """Closed forms for the per-type differences and xi = n * Delta^3."""
    p = to_fraction(p)
    k, l, m, n = pp.k, pp.l, pp.m, pp.n
    q = 1 - p
    below = _binom_tail(n, p, 0, m - 1)
    above = _binom_tail(n, p, m, n)
    d3 = p ** l * q ** (k - l) * comb(n - 1, m - 1) * p ** (m - 1) * q ** (n - m)
    d12 = (p ** l * q ** (k - l - 1) * above, p ** (l - 1) * q ** (k - l) * above, d3)
    d13 = (p ** l * q ** (k - l - 1) * below, p ** (l - 1) * q ** (k - l) * below, d3)
    return Deltas(d12, d13, n * d3)


def johnston_closed_form(k: int, n: int, m: int, which: str = "G1") -> TypedPowerTriple:
    """Absolute Johnston index on v^{k,1}_{n,m} (types: [1,k), {k}, ocean)."""
    if k < 2:
        raise ValueError("need k >= 2")
    if which == "G2":
        # T = {k} plus ocean never wins: voter k is null, the rest act alone
        return TypedPowerTriple(Fraction(2 ** (n + 1)), Fraction(0), Fraction(0))
    if which == "G3":
        # T alone wins: all of [k] act alone, symmetrically
        return TypedPowerTriple(Fraction(2 ** n), Fraction(2 ** n), Fraction(0))
    if not 1 <= m <= n:
        raise ValueError("G1 formulas need 1 <= m <= n")
    t1 = 2 ** n + sum(comb(n, j) for j in range(m))
    t2 = sum(comb(n, j) for j in range(m + 1, n + 1)) + Fraction(comb(n, m), m + 1)
    t3 = Fraction(comb(n - 1, m - 1), m + 1)
    return TypedPowerTriple(Fraction(t1), Fraction(t2), t3)


def ssi_closed_form(pp: ParametricParams, which: str) -> TypedPowerTriple:
    k, l, n = pp.k, pp.l, pp.n
    if which == "G3":
        return TypedPowerTriple(Fraction(1, k), Fraction(1, k), Fraction(0))
    if which == "G2":
        c = comb(k - 1, l)
        return TypedPowerTriple(Fraction(1, k) + Fraction(1, k * c),
                                Fraction(1, k) - Fraction(k - l, k * l * c),
                                Fraction(0))
    m = pp.m
    if not 1 <= m <= n:
        raise ValueError("G1 formulas need 1 <= m <= n")
    N = factorial(n + k)
    t3 = Fraction(comb(n - 1, m - 1) * factorial(l + m - 1) * factorial(n + k - l - m), N)
    r = Fraction(sum(comb(n, j) * factorial(l + j) * factorial(n + k - l - j - 1) for j in range(m)), N)
    t1 = Fraction(1, k) + r
    t2 = (1 - (k - l) * t1 - n * t3) / l
    return TypedPowerTriple(t1, t2, t3)


# finite inequalities behind the negative results

def tail_bounds_check(n: int, m: int, delta) -> dict:
    """Check the binomial-coefficient, tail and product bounds at (n, m, delta).

    The coefficient bound uses the given m.  The tail bounds use their own
    prescribed m, and the product bound is only evaluated when m is one of
    the two central values.  Every entry is decided exactly or by certified
    enclosure.
    """
    delta = to_fraction(delta)
    if not 0 <= delta < Fraction(1, 2):
        raise ValueError("delta must lie in [0, 1/2)")
    out = {}
    if 1 <= m <= n:
        # C(n-1,m-1) <= 2^(n-1)/sqrt(n)  <=>  C^2 n <= 4^(n-1)
        out["binomial"] = comb(n - 1, m - 1) ** 2 * n <= 4 ** (n - 1)
    if delta > 0:
        mu = -(-(n + 1) // 2)
        p = Fraction(1, 2) + delta
        tail = _binom_tail(n, p, mu, n)
        x = 2 * n * delta * delta
        out["upper_tail"] = decide_ge(lambda b: tail + exp_interval(-x, b), lambda b: 1)
        md = n // 2
        p = Fraction(1, 2) - delta
        tail = _binom_tail(n, p, 0, md - 1)
        x = 2 * n * delta * delta - 2 * delta
        out["lower_tail"] = decide_ge(lambda b: tail + exp_interval(-x, b), lambda b: 1)
    if n >= 3 and m in (-(-(n + 1) // 2), n // 2):
        ok = True
        for p in (Fraction(1, 2) + delta, Fraction(1, 2) - delta):
            lhs = p ** (m - 1) * (1 - p) ** (n - m)
            # lhs <= 4 (1-4d^2)^((n-3)/2) / 2^(n-1), squared
            ok &= lhs * lhs * 4 ** (n - 1) <= 16 * (1 - 4 * delta * delta) ** (n - 3)
        out["product"] = ok
    return out


def johnston_negative_check(k: int, ntilde: int) -> dict:
    """Distances between G1 and its two roundings for the Johnston index."""
    n = 2 * ntilde + 1
    m = ntilde + 1
    pp = ParametricParams(k, 1, m, n)
    g1, g2, g3 = (johnston_closed_form(k, n, m, w) for w in WHICH)
    xi = n * g1.t3
    d12 = g1.distance(g2, pp)
    d13 = g1.distance(g3, pp)

    def root(bits):
        return sqrt_interval(Fraction(ntilde, 2), bits)

    out = {
        "n": n,
        "m": m,
        "xi": xi,
        "dist12": d12,
        "dist13": d13,
        "abs12": decide_ge(lambda b: d12, lambda b: (k * root(b) + 1) * xi),
        "abs13": decide_ge(lambda b: d13, lambda b: ((k - 1) * root(b) + 1) * xi),
    }
    n1, n2, n3 = g1.normalized(pp), g2.normalized(pp), g3.normalized(pp)
    out["norm12"] = n1.distance(n2, pp)
    out["norm13"] = n1.distance(n3, pp)
    out["norm_ok"] = min(out["norm12"], out["norm13"]) >= Fraction(1, 5 * k)
    share = xi / g1.total(pp)
    out["xi_share"] = share
    if ntilde >= 2:
        # share <= sqrt(2)/((3k-3) sqrt(ntilde))  <=>  share^2 (3k-3)^2 ntilde <= 2
        out["xi_share_ok"] = share * share * (3 * k - 3) ** 2 * ntilde <= 2
    return out


def pbinomial_negative_witness(k: int, l: int, p, n_list) -> dict:
    p = to_fraction(p)
    if p == Fraction(1, 2):
        raise ValueError("p = 1/2 is excluded: xi need not vanish")
    ratios, xis, bound_ok = [], [], []
    q = 1 - p
    for n in n_list:
        m = -(-(n + 1) // 2) if p > Fraction(1, 2) else n // 2
        pp = ParametricParams(k, l, m, n)
        d = psi_p_deltas(pp, p)
        delta = d.d12[0] if p > Fraction(1, 2) else d.d13[0]
        ratios.append(delta / d.xi)
        xis.append(d.xi)
        g1 = psi_p_closed_form(pp, "G1", p).total(pp)
        cap = k * p ** (l - 1) * q ** (k - l - 1) + d.xi
        bound_ok.append(all(
            abs(g1 - psi_p_closed_form(pp, w, p).total(pp)) <= cap for w in ("G2", "G3")
        ))
    return {
        "n_list": list(n_list),
        "ratios": ratios,
        "xis": xis,
        "ratio_increasing": all(a < b for a, b in zip(ratios, ratios[1:])),
        "xi_decreasing": all(a > b for a, b in zip(xis, xis[1:])),
        "total_change_bound": all(bound_ok),
    }
