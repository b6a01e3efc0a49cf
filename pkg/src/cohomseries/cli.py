"""Command line interface: ``python3 -m cohomseries <command> ...``."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .catalog import (
    ConfigurationMatrix,
    DegreeSeries,
    ToricAmbient,
    catalog_entry,
    diagnostic_entry,
    hs_ci,
    hs_toric,
    load_variety,
)
from .oracle import DEFAULT_PRIME, Exact, chi_ci, koszul_cohomology
from .rational import ParseError, parse_rational, print_poly, print_rational
from .series import (
    ExpansionLimitError,
    StabilizationError,
    expand_ordered,
    parse_filter,
    parse_plan,
    parse_window,
)
from .verify import OracleOptions, emit_figure, exit_code, render_csv, render_grid, verify_entry, verify_euler

GRAMMAR = """\
expressions  sums and products of monomials in t1..tr (or t when r = 1),
             integer coefficients, ^k powers, and one denominator of
             (1 - monomial)^k factors:  "(1-t1*t2)/((1-t1)^2*(1-t2)^3)"
plans        expansion order, first variable first:  "t2=0,t1=inf"
windows      inclusive per-variable bounds:           "t1=-6..6,t2=-6..6"
filters      linear constraints, comma separated:     "1*t1+1*t2>=0"
bundles      comma separated integers:                "1,2"
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.strip().strip("()").split(","))
    except ValueError:
        raise UsageError(f"bad bundle {text!r}") from None


def _lookup(vid: str):
    try:
        return catalog_entry(vid)
    except KeyError:
        return diagnostic_entry(vid)


def _describe(i: int, ds: DegreeSeries) -> str:
    parts = []
    if not ds.constant.is_zero():
        parts.append(print_poly(ds.constant))
    for t in ds.terms:
        filt = f" | {t.filter}" if t.filter else ""
        parts.append(f"{t.coefficient:+d} * ({print_rational(t.rational)}, {t.plan}{filt})")
    for fam in ds.families:
        lo = "-inf" if fam.n_lo is None else fam.n_lo
        hi = "inf" if fam.n_hi is None else fam.n_hi
        filt = f" | {fam.filter}" if fam.filter else ""
        parts.append(f"{fam.coefficient:+d} * sum_{{n={lo}..{hi}}} (terms(n), {fam.plan}{filt})")
    body = " ".join(parts) if parts else "0"
    sign = "-" if ds.sign < 0 else ""
    part = "" if ds.part == "all" else f" [{ds.part} part]"
    return f"CS^{i} = {sign}[{body}]{part}"


def cmd_hs(args) -> int:
    if args.catalog:
        spec = _lookup(args.catalog)
        print(f"{spec.variety_id}: dim {spec.dim}, picard rank {spec.picard_rank}, K = {list(spec.canonical)}")
        for i in sorted(spec.degrees):
            print(_describe(i, spec.degrees[i]))
        return 0
    v = load_variety(args.variety)
    f = hs_ci(v) if isinstance(v, ConfigurationMatrix) else hs_toric(v)
    print(print_rational(f))
    return 0


def cmd_expand(args) -> int:
    window = parse_window(args.window)
    r = window.nvars
    f = parse_rational(args.expr, r)
    plan = parse_plan(args.plan, r)
    filt = parse_filter(args.filter, r) if args.filter else None
    w = expand_ordered(f, plan, window, filt)
    fmt = args.format or ("line" if r == 1 else "grid")
    if fmt == "line" and r == 1:
        (lo, hi), = window.bounds
        print(" ".join(str(w[(e,)]) for e in range(lo, hi + 1)))
    elif fmt == "grid" and r == 2:
        sys.stdout.write(render_grid(w))
    else:
        sys.stdout.write(render_csv(w))
    return 0


def _config(path: str) -> ConfigurationMatrix:
    v = load_variety(path)
    if isinstance(v, ToricAmbient):
        raise UsageError("this command needs a configuration matrix, not a toric ambient")
    return v


def cmd_chi(args) -> int:
    cfg = _config(args.variety)
    m = _ints(args.bundle)
    if len(m) != cfg.picard_rank:
        raise UsageError(f"bundle needs {cfg.picard_rank} entries")
    print(chi_ci(cfg, m))
    return 0


def cmd_oracle(args) -> int:
    cfg = _config(args.variety)
    m = _ints(args.bundle)
    if len(m) != cfg.picard_rank:
        raise UsageError(f"bundle needs {cfg.picard_rank} entries")
    res = koszul_cohomology(cfg, m, args.prime, args.seed, args.seeds)
    cells = [str(v.value) if isinstance(v, Exact) else f"{v.lo}..{v.hi}" for v in res.values]
    print(" ".join(cells))
    return 0 if res.all_exact() else 3


def cmd_euler(args) -> int:
    cfg = _config(args.variety)
    rep = verify_euler(cfg, parse_window(args.window))
    print(f"{rep.status}: {len(rep.mismatches)} mismatches over {rep.points} points")
    for x in rep.mismatches[:10]:
        print(f"  m={x['m']}: series {x['series']}, chi {x['oracle']}")
    return exit_code(rep.status)


def cmd_verify(args) -> int:
    opts = OracleOptions(prime=args.prime, seed=args.seed, num_seeds=args.seeds)
    window = parse_window(args.window)
    spec = _lookup(args.entry)
    rep = verify_entry(args.entry, window, opts, spec=spec)
    text = rep.to_json()
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    print(f"{rep.entry} on {rep.window}: {rep.status}")
    for i, st in sorted(rep.statuses.items()):
        print(f"  h^{i}: {st}")
    print(f"  mismatches {len(rep.mismatches)}, indeterminate points {len(rep.indeterminate)} of {rep.points}")
    for x in rep.mismatches[:10]:
        print(f"  m={x['m']} i={x['degree']}: series {x['series']}, oracle {x['oracle']}")
    for e in rep.errors:
        print(f"  error: {e}")
    return exit_code(rep.status)


def cmd_figure(args) -> int:
    window = parse_window(args.range)
    sys.stdout.write(emit_figure(args.entry, args.coh, window, args.format))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cohomseries", description="line bundle cohomology generating functions",
                epilog=GRAMMAR, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("hs", help="Hilbert series of a variety or the terms of a catalog entry")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--variety")
    g.add_argument("--catalog")
    s.set_defaults(func=cmd_hs)

    s = sub.add_parser("expand", help="iterated Laurent expansion on a window")
    s.add_argument("--expr", required=True)
    s.add_argument("--plan", required=True)
    s.add_argument("--window", required=True)
    s.add_argument("--filter")
    s.add_argument("--format", choices=("csv", "grid", "line"))
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("chi", help="Euler characteristic from the Koszul alternating sum")
    s.add_argument("--variety", required=True)
    s.add_argument("--bundle", required=True)
    s.set_defaults(func=cmd_chi)

    s = sub.add_parser("oracle", help="cohomology dimensions via the Koszul spectral sequence")
    s.add_argument("--variety", required=True)
    s.add_argument("--bundle", required=True)
    s.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--seeds", type=int, default=2)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("euler", help="check the signed corner sum against chi")
    s.add_argument("--variety", required=True)
    s.add_argument("--window", required=True)
    s.set_defaults(func=cmd_euler)

    s = sub.add_parser("verify", help="compare a catalog entry with the oracle")
    s.add_argument("--entry", required=True)
    s.add_argument("--window", required=True)
    s.add_argument("--report")
    s.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--seeds", type=int, default=2)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("figure", help="text grid or CSV of one cohomology degree")
    s.add_argument("--entry", required=True)
    s.add_argument("--coh", type=int, required=True)
    s.add_argument("--range", required=True)
    s.add_argument("--format", choices=("grid", "csv"), default="grid")
    s.set_defaults(func=cmd_figure)
    return p


def cli_main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("no command given")
        return args.func(args)
    except (UsageError, ParseError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        print(parser.format_usage(), file=sys.stderr)
        print(GRAMMAR, file=sys.stderr, end="")
        return 1
    except (StabilizationError, ExpansionLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())
