"""A small exact two-phase simplex over Fractions.

Rows are sparse dicts, pivoting uses Bland's rule, so the method terminates
and every reported optimum is exact.  Intended for the tiny systems that show
up here (weightedness tests, Big-M certificates, forcing checks), not for
anything large.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

LE, GE, EQ = "<=", ">=", "="


@dataclass
class LpResult:
    status: str  # "optimal", "infeasible", "unbounded"
    value: Fraction | None = None
    x: list[Fraction] = field(default_factory=list)

    @property
    def feasible(self):
        return self.status != "infeasible"


class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r, c, obj):
        row = self.rows[r]
        piv = row[c]
        if piv != 1:
            inv = 1 / piv
            for j in row:
                row[j] *= inv
            self.rhs[r] *= inv
        b = self.rhs[r]
        for k, other in enumerate(self.rows):
            if k == r:
                continue
            f = other.get(c)
            if f:
                for j, v in row.items():
                    nv = other.get(j, 0) - f * v
                    if nv:
                        other[j] = nv
                    else:
                        other.pop(j, None)
                self.rhs[k] -= f * b
        coeffs, z0 = obj
        f = coeffs.get(c)
        if f:
            for j, v in row.items():
                nv = coeffs.get(j, 0) - f * v
                if nv:
                    coeffs[j] = nv
                else:
                    coeffs.pop(j, None)
            obj[1] = z0 + f * b
        self.basis[r] = c

    def run(self, obj, allowed):
        """Minimize obj = [reduced costs dict, value]; returns False if unbounded."""
        while True:
            coeffs = obj[0]
            enter = None
            for j in sorted(coeffs):
                if coeffs[j] < 0 and j in allowed:
                    enter = j
                    break
            if enter is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                a = row.get(enter)
                if a is not None and a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], enter, obj)


def solve(nvars, objective, rows, lower=None, upper=None, maximize=False):
    """Solve min/max objective.x subject to rows and bounds.

    objective: dict col -> coef (may be empty for a pure feasibility check).
    rows: iterable of (dict col -> coef, sense, rhs).
    lower: per-variable lower bounds (default 0; None means free).
    upper: per-variable upper bounds (None means +inf).
    """
    lower = [Fraction(0)] * nvars if lower is None else list(lower)
    upper = [None] * nvars if upper is None else list(upper)

    # column map: x_j = shift_j + sum(sign * y_col)
    cols = []  # for each original var: list of (col, sign)
    shift = []
    ncol = 0
    for j in range(nvars):
        if lower[j] is None:
            cols.append([(ncol, 1), (ncol + 1, -1)])
            shift.append(Fraction(0))
            ncol += 2
        else:
            cols.append([(ncol, 1)])
            shift.append(Fraction(lower[j]))
            ncol += 1

    std = []
    for coeffs, sense, rhs in rows:
        r = {}
        b = Fraction(rhs)
        for j, a in coeffs.items():
            if not a:
                continue
            a = Fraction(a)
            b -= a * shift[j]
            for c, s in cols[j]:
                r[c] = r.get(c, 0) + s * a
        r = {c: v for c, v in r.items() if v}
        std.append((r, sense, b))
    for j in range(nvars):
        if upper[j] is not None:
            if lower[j] is None:
                r = {cols[j][0][0]: Fraction(1), cols[j][1][0]: Fraction(-1)}
            else:
                r = {cols[j][0][0]: Fraction(1)}
            std.append((r, LE, Fraction(upper[j]) - shift[j]))

    trows, rhs, basis = [], [], []
    artificial = set()
    for r, sense, b in std:
        if not r:
            ok = (sense == LE and b >= 0) or (sense == GE and b <= 0) or (sense == EQ and b == 0)
            if not ok:
                return LpResult("infeasible")
            continue
        if b < 0:
            r = {c: -v for c, v in r.items()}
            b = -b
            sense = {LE: GE, GE: LE, EQ: EQ}[sense]
        r = dict(r)
        if sense == LE:
            r[ncol] = Fraction(1)
            basis.append(ncol)
            ncol += 1
        else:
            if sense == GE:
                r[ncol] = Fraction(-1)
                ncol += 1
            r[ncol] = Fraction(1)
            artificial.add(ncol)
            basis.append(ncol)
            ncol += 1
        trows.append(r)
        rhs.append(b)

    tab = _Tableau(trows, rhs, basis)
    allowed = set(range(ncol))

    if artificial:
        coeffs = {}
        z0 = Fraction(0)
        for i, r in enumerate(trows):
            if basis[i] in artificial:
                z0 += rhs[i]
                for c, v in r.items():
                    if c not in artificial:
                        coeffs[c] = coeffs.get(c, 0) - v
        obj = [{c: v for c, v in coeffs.items() if v}, z0]
        tab.run(obj, allowed)
        if obj[1] != 0:
            return LpResult("infeasible")
        # drive remaining artificials out of the basis
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] in artificial:
                cand = [c for c in tab.rows[i] if c not in artificial]
                if cand:
                    tab.pivot(i, min(cand), [{}, Fraction(0)])
                    i += 1
                else:
                    del tab.rows[i], tab.rhs[i], tab.basis[i]
                continue
            i += 1
        for r in tab.rows:
            for c in artificial:
                r.pop(c, None)
        allowed -= artificial

    cost = {}
    sign = -1 if maximize else 1
    const = Fraction(0)
    for j, a in objective.items():
        if not a:
            continue
        a = Fraction(a) * sign
        const += a * shift[j]
        for c, s in cols[j]:
            cost[c] = cost.get(c, 0) + s * a
    coeffs = dict(cost)
    z0 = Fraction(0)
    for i, r in enumerate(tab.rows):
        cb = cost.get(tab.basis[i])
        if cb:
            z0 += cb * tab.rhs[i]
            for c, v in r.items():
                coeffs[c] = coeffs.get(c, 0) - cb * v
    for i in range(len(tab.rows)):
        coeffs.pop(tab.basis[i], None)
    obj = [{c: v for c, v in coeffs.items() if v}, z0]
    if not tab.run(obj, allowed):
        return LpResult("unbounded")

    y = [Fraction(0)] * ncol
    for i, c in enumerate(tab.basis):
        y[c] = tab.rhs[i]
    x = []
    for j in range(nvars):
        x.append(shift[j] + sum(s * y[c] for c, s in cols[j]))
    value = (obj[1] + const) * sign
    return LpResult("optimal", value, x)
