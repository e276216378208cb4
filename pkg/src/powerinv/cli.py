"""Command-line front end: ``powerinv <command> ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bounds, inverse, parametric, suites
from .game_core import ENUM_LIMITS, enumerate_games, game_to_json, parse_game
from .indices import NormalizationOfZero, UndefinedIndex, index_id, normalize, power_index
from .lpfile import emit_lp
from .rational import fmt, fmt_vector, parse_vector, to_fraction
from .shortening import k_rounding, k_up_rounding, pk_rounding


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _text_or_file(arg: str) -> str:
    p = Path(arg)
    if len(arg) < 4096 and p.is_file():
        return p.read_text()
    return arg


def _game(arg):
    try:
        return parse_game(_text_or_file(arg))
    except (ValueError, KeyError, TypeError) as e:
        raise UsageError(f"bad game {arg!r}: {e}") from e


def _sigma(arg):
    text = _text_or_file(arg).strip()
    try:
        if text.startswith("[") or text.startswith("{"):
            try:
                obj = json.loads(text)
            except json.JSONDecodeError:
                return parse_vector(text)
            if isinstance(obj, dict):
                obj = obj["sigma"]
            return [to_fraction(x) for x in obj]
        return parse_vector(text)
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as e:
        raise UsageError(f"bad sigma {arg!r}: {e}") from e


def _index(spec, normalized=False):
    try:
        return index_id(spec, normalized)
    except ValueError as e:
        raise UsageError(str(e)) from e


def _dump(obj):
    print(json.dumps(obj, sort_keys=True))


def _threads(args):
    if args.threads is not None:
        return args.threads
    env = os.environ.get("POWERINV_THREADS")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        raise UsageError(f"POWERINV_THREADS must be an integer, got {env!r}")


def cmd_index(args):
    g = _game(args.game)
    idx = _index(args.index)
    v = power_index(g, idx)
    if args.normalized:
        v = normalize(v)
    print(fmt_vector(v.values))
    return 0


def cmd_round(args):
    g = _game(args.game)
    if args.up and args.p is not None:
        raise UsageError("--p and --up are exclusive")
    if not 1 <= args.k < g.n:
        raise UsageError(f"need 1 <= k < n, got k={args.k}")
    if args.up:
        h = k_up_rounding(g, args.k)
    elif args.p is not None:
        h = pk_rounding(g, to_fraction(args.p), args.k)
    else:
        h = k_rounding(g, args.k)
    _dump(game_to_json(h))
    return 0


def cmd_bound(args):
    sigma = _sigma(args.sigma)
    try:
        lb = bounds.approximation_lower_bound(sigma, args.k, _index(args.index), args.cls)
    except ValueError as e:  # includes unmet hypotheses
        raise UsageError(str(e)) from e
    print(fmt(lb.value))
    if args.verbose:
        print(f"path={lb.path} alpha={fmt(lb.alpha)} lambda={fmt(lb.lam)} f1={fmt(lb.f1)} f2={fmt(lb.f2)}")
    return 0


def _instance(args):
    sigma = _sigma(args.sigma)
    if args.n is not None and args.n != len(sigma):
        raise UsageError(f"--n {args.n} does not match sigma of length {len(sigma)}")
    try:
        return inverse.InverseInstance(tuple(sigma), _index(args.index, not args.absolute), args.cls,
                                       args.norm, args.proper, args.strong, not args.any_order)
    except ValueError as e:
        raise UsageError(str(e)) from e


def cmd_inverse(args):
    inst = _instance(args)
    if inst.n > 5:
        raise UsageError("exact inverse search is limited to n <= 5")
    if args.method == "exhaustive":
        sol = inverse.exhaustive_inverse(inst)
    else:
        if not inst.index.normalized:
            raise UsageError("bisection needs a normalized index")
        sol = inverse.bisection_normalized(inst, tol=to_fraction(args.tol))
    print(sol.dumps())
    return 0


def cmd_emit_ilp(args):
    inst = _instance(args)
    alpha = None if args.alpha is None else to_fraction(args.alpha)
    try:
        model = inverse.build_ilp(inst, alpha=alpha, tijs_encoding=args.tijs_encoding)
    except ValueError as e:
        raise UsageError(str(e)) from e
    text = emit_lp(model)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_parametric(args):
    try:
        pp = parametric.ParametricParams(args.k, args.l, args.m, args.n)
    except ValueError as e:
        raise UsageError(str(e)) from e
    idx = _index(args.index)
    if pp.voters > 16:
        raise UsageError("brute force needs k+n <= 16")
    if idx.tag == "js" and pp.l != 1:
        raise UsageError("the Johnston closed form needs l=1")
    ok = True
    for which in parametric.WHICH:
        if which == "G1" and not 1 <= pp.m <= pp.n:
            continue
        q = pp.variant(which)
        if idx.tag == "js":
            form = parametric.johnston_closed_form(pp.k, pp.n, pp.m, which)
        elif idx.tag == "ssi":
            form = parametric.ssi_closed_form(pp, which)
        elif idx.tag in ("pbinomial", "bz"):
            p = idx.params[0] if idx.tag == "pbinomial" else to_fraction("1/2")
            form = parametric.psi_p_closed_form(pp, which, p)
        else:
            raise UsageError("closed forms exist for js, ssi, bz and pbinomial:p")
        brute = power_index(parametric.build_game(q), idx).values
        match = tuple(form.expand(pp)) == tuple(brute)
        ok &= match
        print(f"{which} closed {fmt(form.t1)} {fmt(form.t2)} {fmt(form.t3)}"
              f" brute {fmt_vector(brute)} {'match' if match else 'MISMATCH'}")
    return 0 if ok else 1


def cmd_enumerate(args):
    limit = ENUM_LIMITS[args.cls]
    if not 1 <= args.n <= limit:
        raise UsageError(f"{args.cls} enumeration is limited to 1 <= n <= {limit}")
    games = enumerate_games(args.n, args.cls)
    if args.count:
        print(sum(1 for _ in games))
    else:
        for g in games:
            _dump(game_to_json(g))
    return 0


def cmd_verify(args):
    kw = {}
    if args.suite == "sweep":
        kw["workers"] = _threads(args)
    if args.suite not in suites.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(suites.SUITES)}")
    results = suites.run(args.suite, **kw)
    failed = 0
    for name, ok, detail in results:
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return 1 if failed else 0


def _add_instance_args(p):
    p.add_argument("--sigma", required=True, help="'(3/4,1/4,0)', a JSON list, or a file holding either")
    p.add_argument("--index", default="bz")
    p.add_argument("--absolute", action="store_true", help="compare sigma with the absolute index")
    p.add_argument("--class", dest="cls", default="simple", choices=inverse.CLASSES)
    p.add_argument("--norm", default="l1", type=str.lower, choices=("l1", "linf"))
    p.add_argument("--n", type=int)
    p.add_argument("--proper", action="store_true")
    p.add_argument("--strong", action="store_true")
    p.add_argument("--any-order", action="store_true", help="complete/weighted games in any voter order")


def build_parser():
    ap = _Parser(prog="powerinv", description="Power indices, roundings and inverse problems on simple games.")
    ap.add_argument("--threads", type=int, help="worker processes for sweeps (default $POWERINV_THREADS or 1)")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("index", help="power index of a game")
    p.add_argument("--game", required=True, help="'[q;w1,...]', JSON, or a JSON file")
    p.add_argument("--index", required=True)
    p.add_argument("--normalized", action="store_true")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("round", help="k-rounding and its variants")
    p.add_argument("--game", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p")
    p.add_argument("--up", action="store_true")
    p.set_defaults(func=cmd_round)

    p = sub.add_parser("bound", help="lower bound on the approximation distance")
    p.add_argument("--sigma", required=True)
    p.add_argument("--index", default="bz")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--class", dest="cls", default="simple")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("inverse", help="solve an inverse instance exactly")
    _add_instance_args(p)
    p.add_argument("--method", default="exhaustive", choices=("exhaustive", "bisect"))
    p.add_argument("--tol", default="1/1024")
    p.set_defaults(func=cmd_inverse)

    p = sub.add_parser("emit-ilp", help="write the integer program as LP text")
    _add_instance_args(p)
    p.add_argument("--alpha", help="bisection level; enables the feasibility form")
    p.add_argument("--tijs-encoding", default="vetoer", choices=("vetoer", "unique-mwc"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_emit_ilp)

    p = sub.add_parser("parametric", help="closed forms against brute force on the three-type family")
    for name in ("k", "l", "m", "n"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--index", default="js")
    p.set_defaults(func=cmd_parametric)

    p = sub.add_parser("enumerate", help="list or count games of a class")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--class", dest="cls", default="simple", choices=("boolean", "simple", "complete", "weighted"))
    p.add_argument("--count", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", help="run a named invariant suite")
    p.add_argument("--suite", required=True)
    p.set_defaults(func=cmd_verify)
    return ap


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"powerinv: {e}", file=sys.stderr)
        return 2
    except (NormalizationOfZero, UndefinedIndex) as e:
        print(f"powerinv: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
