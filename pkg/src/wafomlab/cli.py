"""wafomlab command line: eval, enumerate, search, integrate, bounds.

Errors go to stderr as ``wafomlab:error:<kind>: <message>`` with exit code 1.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .abelian import GroupSpec
from .enumerator import weight_enumerator
from .errors import PreconditionError, WafomError
from .netfile import parse_net_file
from .netgen import span
from .qmc import BUILTIN, discretized_qmc, make_function
from .search import OBJECTIVES, SearchConfig, run_search, success_probability_bound
from .wafom import (
    alpha, evaluate, existence_bound, existence_threshold, lower_bound, lower_bound_threshold,
    min_weight_ceiling, order_constants, order_window, unconditional_lower_bound,
)

THREADS_ENV = "WAFOMLAB_THREADS"


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _load(path: str):
    return span(parse_net_file(path))


def _gamma(text: str | None):
    if text is None:
        return None
    vals = [float(t) for t in text.split(",")]
    return vals[0] if len(vals) == 1 else vals


def cmd_eval(args) -> str:
    report = evaluate(_load(args.net), exact=args.exact, with_min_weight=args.min_weight)
    if args.json:
        return _dump(report.to_json_dict())
    wafom = repr(report.wafom)
    if report.wafom_fraction is not None:
        wafom += f" ({report.wafom_fraction})"
    rows = [("moduli", ",".join(map(str, report.moduli))), ("s", report.s), ("n", report.n),
            ("num_points", report.num_points), ("wafom", wafom), ("wafom_log_b", report.wafom_log_b),
            ("method", report.method)]
    if report.min_weight is not None:
        rows.append(("min_weight", report.min_weight))
    for key in ("lower_bound", "existence_bound"):
        if getattr(report, key) is not None:
            rows.append((key, getattr(report, key)))
    return "\n".join(f"{k}: {v}" for k, v in rows)


def cmd_enumerate(args) -> str:
    return weight_enumerator(_load(args.net), args.truncate).to_text().rstrip("\n")


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get(THREADS_ENV)
    if not env:
        return 1
    try:
        return max(1, int(env))
    except ValueError:
        raise PreconditionError(f"{THREADS_ENV}={env!r} is not an integer") from None


def cmd_search(args) -> str:
    cfg = SearchConfig(GroupSpec.parse(args.moduli), args.s, args.n, args.d, args.trials, args.seed,
                       args.objective, args.target_min_weight, args.c, args.min_weight)
    return _dump(run_search(cfg, threads=_threads(args)).to_json_dict())


def cmd_integrate(args) -> str:
    pg = _load(args.net)
    f = make_function(args.function, pg.s, _gamma(args.gamma))
    out = discretized_qmc(pg, f).to_json_dict()
    out.update(function=f.name, num_points=pg.order, s=pg.s, n=pg.n, moduli=list(pg.group.moduli))
    return _dump(out)


def _try(fn, *a, **kw):
    """(value, None) or (None, reason) for a bound whose hypothesis may fail."""
    try:
        return fn(*a, **kw), None
    except PreconditionError as exc:
        return None, str(exc)


def cmd_bounds(args) -> str:
    group = GroupSpec.parse(args.moduli)
    b, s, d = group.order, args.s, args.d
    if s < 1 or d < 1:
        raise PreconditionError("s and d must be >= 1")
    if args.c <= 0:
        raise PreconditionError(f"c must be positive, got {args.c}")
    lower_bound_threshold(args.C)  # rejects C <= 1/2 outright
    p_b = group.smallest_prime_factor
    D, E, c_star, C_star = order_constants(b)
    skipped = {}
    out = {
        "base": b, "moduli": list(group.moduli), "s": s, "d": d, "c": args.c, "C": args.C,
        "p_b": p_b, "alpha_b": alpha(b),
        "order_constants": {"D": D, "E": E, "c": c_star, "C": C_star},
        "min_weight_ceiling": min_weight_ceiling(s, d),
        "unconditional_lower_bound": unconditional_lower_bound(b, s, d),
        "existence_threshold": existence_threshold(b, s, alpha(b), args.c),
        "lower_bound_threshold": lower_bound_threshold(args.C),
    }
    out["lower_bound"], why = _try(lower_bound, b, s, d, args.C)
    if why:
        skipped["lower_bound"] = why
    out["existence_bound"], why = _try(existence_bound, b, p_b, s, d, c=args.c)
    if why:
        skipped["existence_bound"] = why
    window, why = _try(order_window, b, s, d)
    out["order_window"] = None if window is None else {
        "lower_exponent": window.lower_exponent, "upper_exponent": window.upper_exponent}
    if why:
        skipped["order_window"] = why
    if (args.n is None) != (args.M is None):
        raise PreconditionError("--n and --M must be given together")
    if args.n is not None:
        if args.M < 1:
            raise PreconditionError("M must be >= 1")
        out["success_probability_bound"] = success_probability_bound(b, p_b, s, args.n, d, args.M)
        out["n"], out["M"] = args.n, args.M
    out["skipped"] = skipped
    return _dump(out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wafomlab", description="WAFOM of subgroups and digital nets")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="WAFOM of the subgroup spanned by a net file")
    e.add_argument("--net", required=True)
    e.add_argument("--exact", action="store_true", help="also compute the exact rational value")
    e.add_argument("--min-weight", action="store_true", help="compute the minimum Dick weight of the dual")
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_eval)

    w = sub.add_parser("enumerate", help="Dick-weight enumerator of the dual")
    w.add_argument("--net", required=True)
    w.add_argument("--truncate", type=int, default=None, metavar="D")
    w.set_defaults(func=cmd_enumerate)

    r = sub.add_parser("search", help="seeded random search over spans of d random matrices")
    r.add_argument("--moduli", required=True, help="e.g. 2 or 2,3")
    r.add_argument("--s", type=int, required=True)
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--d", type=int, required=True)
    r.add_argument("--trials", type=int, required=True)
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("--objective", choices=OBJECTIVES, default="min-wafom")
    r.add_argument("--target-min-weight", type=int, default=None, metavar="M")
    r.add_argument("--min-weight", action="store_true", help="record the minimum weight of every trial")
    r.add_argument("--c", type=float, default=1.0)
    r.add_argument("--threads", type=int, default=None, help=f"defaults to ${THREADS_ENV} or 1")
    r.set_defaults(func=cmd_search)

    q = sub.add_parser("integrate", help="discretized QMC of a built-in test function")
    q.add_argument("--net", required=True)
    q.add_argument("--function", required=True, choices=sorted(BUILTIN))
    q.add_argument("--gamma", default=None, help="weight(s) for prod_centered, comma separated")
    q.set_defaults(func=cmd_integrate)

    k = sub.add_parser("bounds", help="lower, existence and order bounds at given parameters")
    k.add_argument("--moduli", required=True)
    k.add_argument("--s", type=int, required=True)
    k.add_argument("--d", type=int, required=True)
    k.add_argument("--c", type=float, default=1.0)
    k.add_argument("--C", type=float, default=1.0)
    k.add_argument("--n", type=int, default=None)
    k.add_argument("--M", type=int, default=None)
    k.set_defaults(func=cmd_bounds)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.func(args)
    except WafomError as exc:
        print(f"wafomlab:error:{exc.kind}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError) as exc:
        print(f"wafomlab:error:invalid: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"wafomlab:error:io: {exc}", file=sys.stderr)
        return 1
    print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
