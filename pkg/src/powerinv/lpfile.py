"""Linear model container plus a deterministic CPLEX-LP writer and reader."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .rational import is_terminating

BIN, CONT = "bin", "cont"
LE, GE, EQ = "<=", ">=", "="

# variable families in emission order
KIND_ORDER = ("x", "y", "z", "zm", "mu", "a", "q", "w", "p", "d", "dp")
TERMS_PER_LINE = 8


def var_key(name: str):
    parts = name.split("_")
    return (KIND_ORDER.index(parts[0]), tuple(int(p) for p in parts[1:]))


@dataclass
class IlpModel:
    variables: dict = field(default_factory=dict)  # name -> BIN | CONT
    constraints: list = field(default_factory=list)  # (name, {var: coef}, sense, rhs)
    objective: dict = field(default_factory=dict)  # empty means pure feasibility
    big_m: Fraction | None = None
    meta: dict = field(default_factory=dict)
    _counts: dict = field(default_factory=dict, repr=False)

    def var(self, name: str, kind: str = CONT) -> str:
        old = self.variables.get(name)
        if old is not None and old != kind:
            raise ValueError(f"{name} declared as {old} and {kind}")
        self.variables[name] = kind
        return name

    def add(self, family: str, terms, sense: str, rhs=0):
        """Add sum(coef*var) sense rhs; terms is an iterable of (coef, var)."""
        coeffs = {}
        for c, v in terms:
            if v not in self.variables:
                raise KeyError(f"undeclared variable {v}")
            coeffs[v] = coeffs.get(v, 0) + Fraction(c)
        coeffs = {v: c for v, c in coeffs.items() if c != 0}
        rhs = Fraction(rhs)
        if not coeffs:
            ok = {LE: 0 <= rhs, GE: 0 >= rhs, EQ: rhs == 0}[sense]
            if not ok:
                raise ValueError(f"constant row {family} is infeasible")
            return
        k = self._counts.get(family, 0) + 1
        self._counts[family] = k
        self.constraints.append((f"{family}_{k}", coeffs, sense, rhs))

    def rows_for(self, names):
        """Constraints touching only the given variable names."""
        names = set(names)
        return [r for r in self.constraints if set(r[1]) <= names]

    def check(self, values: dict) -> list[str]:
        """Names of violated constraints under a full assignment."""
        bad = []
        for name, coeffs, sense, rhs in self.constraints:
            lhs = sum(c * values[v] for v, c in coeffs.items())
            if not {LE: lhs <= rhs, GE: lhs >= rhs, EQ: lhs == rhs}[sense]:
                bad.append(name)
        return bad


def _decimal(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    sign = "-" if x < 0 else ""
    x = abs(x)
    k = 0
    while (x * 10 ** k).denominator != 1:
        k += 1
    digits = str((x * 10 ** k).numerator).rjust(k + 1, "0")
    return f"{sign}{digits[:-k]}.{digits[-k:]}"


def _scale(coeffs: dict, rhs: Fraction):
    vals = list(coeffs.values()) + [rhs]
    if all(is_terminating(v) for v in vals):
        return coeffs, rhs
    m = lcm(*(v.denominator for v in vals))
    return {k: v * m for k, v in coeffs.items()}, rhs * m


def _terms(coeffs: dict) -> list[str]:
    out = []
    for i, v in enumerate(sorted(coeffs, key=var_key)):
        c = coeffs[v]
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = v if mag == 1 else f"{_decimal(mag)} {v}"
        if i == 0:
            out.append(body if sign == "+" else f"- {body}")
        else:
            out.append(f"{sign} {body}")
    return out


def _wrap(head: str, parts: list[str]) -> list[str]:
    lines = []
    for j in range(0, max(len(parts), 1), TERMS_PER_LINE):
        chunk = " ".join(parts[j:j + TERMS_PER_LINE])
        lines.append((head if j == 0 else "   ") + " " + chunk if chunk else head)
    return lines


def emit_lp(model: IlpModel) -> str:
    lines = ["Minimize"]
    if model.objective:
        obj = {k: Fraction(v) for k, v in model.objective.items()}
        if not all(is_terminating(v) for v in obj.values()):
            raise ValueError("objective coefficients must be terminating decimals")
        lines += _wrap(" obj:", _terms(obj))
    else:
        lines.append(" obj:")
    lines.append("Subject To")
    for name, coeffs, sense, rhs in model.constraints:
        coeffs, rhs = _scale(coeffs, rhs)
        lines += _wrap(f" {name}:", _terms(coeffs) + [sense, _decimal(rhs)])
    names = sorted(model.variables, key=var_key)
    lines.append("Bounds")
    for v in names:
        if model.variables[v] == CONT:
            lines.append(f" {v} >= 0")
    lines.append("Binary")
    for v in names:
        if model.variables[v] == BIN:
            lines.append(f" {v}")
    lines.append("End")
    return "\n".join(lines) + "\n"


_HEAD = re.compile(r"^\s*([A-Za-z][\w.]*):(.*)$")


def _parse_expr(tokens):
    coeffs = {}
    sign, coef = 1, None
    for t in tokens:
        if t in "+-":
            sign = 1 if t == "+" else -1
        elif re.fullmatch(r"-?\d+(\.\d+)?", t):
            coef = Fraction(t)
        else:
            coeffs[t] = coeffs.get(t, 0) + sign * (coef if coef is not None else 1)
            sign, coef = 1, None
    return coeffs


def parse_lp(text: str) -> IlpModel:
    """Read back text produced by emit_lp (the subset of LP syntax it uses)."""
    model = IlpModel()
    section = None
    rows = []  # (name, tokens)
    obj_tokens = []
    binaries, conts = [], []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line in ("Minimize", "Subject To", "Bounds", "Binary", "End"):
            section = line
            continue
        if section == "Minimize":
            m = _HEAD.match(line)
            obj_tokens += (m.group(2) if m else line).split()
        elif section == "Subject To":
            m = _HEAD.match(line)
            if m:
                rows.append((m.group(1), m.group(2).split()))
            else:
                rows[-1][1].extend(line.split())
        elif section == "Bounds":
            v, op, val = line.split()
            if op != ">=" or val != "0":
                raise ValueError(f"unsupported bound line {line!r}")
            conts.append(v)
        elif section == "Binary":
            binaries.extend(line.split())
    for v in conts:
        model.variables[v] = CONT
    for v in binaries:
        model.variables[v] = BIN
    model.objective = _parse_expr(obj_tokens)
    for name, toks in rows:
        sense_at = next(j for j, t in enumerate(toks) if t in (LE, GE, EQ))
        coeffs = _parse_expr(toks[:sense_at])
        for v in coeffs:
            model.variables.setdefault(v, CONT)
        model.constraints.append((name, coeffs, toks[sense_at], Fraction(toks[sense_at + 1])))
    return model
