"""Command-line entry point: ``hodnet construct|points|criterion|integrate|table``.

Exit codes: 0 success, 2 usage error, 3 work budget refused, 4 malformed
input file.  ``--config FILE`` reads ``key = value`` lines (keys are flag
names) that act as defaults under explicit flags.  ``HODNET_THREADS`` sets
the thread count recorded with each run.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from ._kernels import BACKEND
from .cbc import DEFAULT_BUDGET, BudgetExceeded, ConstructionResult, cbc_construct_fast, cbc_construct_naive
from .criterion import CriterionParams, Weights, criterion_B, criterion_B_dual_oracle
from .galois import parse_poly
from .interlace import interlace_net
from .pointset import (
    MalformedInputError,
    PointSet,
    generate_points,
    load_bin,
    load_csv,
    save_bin,
    save_csv,
)
from .randomize import rmse_experiment, test_function
from .tables import Column, fmt3, known_tables, parse_m_range, run_sweep, run_table, to_csv

EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_MALFORMED = 4


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# shared plumbing


def thread_count() -> int:
    raw = os.environ.get("HODNET_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"HODNET_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError("HODNET_THREADS must be a positive integer")
    return n


def read_config(path) -> dict:
    cfg = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        cfg[key.strip().lstrip("-").replace("-", "_")] = val.strip()
    return cfg


def provenance(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "config_file", "command") and not callable(v)}
    return {
        "command": args.command,
        "config": cfg,
        "version": __version__,
        "backend": BACKEND,
        "threads": thread_count(),
    }


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _positive(name, value, minimum=1):
    if value < minimum:
        raise UsageError(f"--{name} must be >= {minimum}")


def _load_net(path) -> ConstructionResult:
    try:
        text = Path(path).read_text()
    except FileNotFoundError:
        raise MalformedInputError(f"net file not found: {path}") from None
    try:
        return ConstructionResult.from_json(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise MalformedInputError(f"{path}: not a construction result ({exc})") from None


def _load_points(path) -> PointSet:
    p = Path(path)
    if not p.exists():
        raise MalformedInputError(f"points file not found: {path}")
    with open(p, "rb") as fh:
        head = fh.read(1)
    return load_csv(p) if head == b"#" else load_bin(p)


def _weights(args, s):
    base_dir = Path(args.config_file).parent if getattr(args, "config_file", None) else None
    try:
        return Weights.parse(str(args.weights), s, base_dir=base_dir)
    except FileNotFoundError as exc:
        raise MalformedInputError(str(exc)) from None


def _write_json(path, doc):
    text = json.dumps(doc, indent=2)
    if path in (None, "-"):
        print(text)
    else:
        Path(path).write_text(text + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_construct(args):
    _require(args, "m", "s", "out")
    _positive("s", args.s)
    _positive("m", args.m)
    _positive("alpha", args.alpha)
    _positive("d", args.d)
    W = _weights(args, args.s)
    p = parse_poly(args.p, args.b) if args.p else None
    lam = args.lam
    if args.mode == "fast" and not W.is_product:
        raise UsageError("the fast search needs product weights; use --mode naive")
    fn = cbc_construct_fast if args.mode == "fast" else cbc_construct_naive
    res = fn(args.b, args.m, args.s, args.alpha, args.d, W, p=p, lam=lam, budget=args.budget)
    extra = {"provenance": provenance(args)} if args.provenance else {}
    Path(args.out).write_text(res.to_json(**extra) + "\n")
    print(f"B_final = {res.B_final:.17g}")
    if res.bound is not None:
        print(f"bound (lambda={res.bound['lambda']}) = {res.bound['value']:.17g}")
    return 0


def cmd_points(args):
    _require(args, "net", "out")
    res = _load_net(args.net)
    pts = generate_points(res.lattice)
    if args.interlaced:
        pts = interlace_net(res.d, pts)
    comments = [json.dumps(provenance(args))] if args.provenance else []
    if args.format == "csv":
        save_csv(pts, args.out, comments=comments)
    else:
        save_bin(pts, args.out)
        if comments:
            Path(str(args.out) + ".provenance.json").write_text(comments[0] + "\n")
    print(f"wrote {pts.n_points} points of dimension {pts.dim} to {args.out}")
    return 0


def _criterion_inputs(args):
    if (args.net is None) == (args.points is None):
        raise UsageError("give exactly one of --net and --points")
    if args.net is not None:
        res = _load_net(args.net)
        alpha = args.alpha if args.alpha is not None else res.alpha
        d = args.d if args.d is not None else res.d
        pts = generate_points(res.lattice)
        if args.weights is None:
            W = res.weights
        else:
            W = _weights(args, pts.dim // d)
        return res, pts, alpha, d, W
    pts = _load_points(args.points)
    alpha = 2 if args.alpha is None else args.alpha
    d = 1 if args.d is None else args.d
    if pts.dim % d:
        raise UsageError(f"point dimension {pts.dim} is not a multiple of d={d}")
    if args.weights is None:
        args.weights = "1"
    W = _weights(args, pts.dim // d)
    return None, pts, alpha, d, W


def cmd_criterion(args):
    res, pts, alpha, d, W = _criterion_inputs(args)
    params = CriterionParams(pts.b, alpha, d)
    value = criterion_B(pts, W, params)
    doc = {"B": value, "b": pts.b, "m": pts.m, "s": pts.dim // d, "alpha": alpha, "d": d, "weights": W.descriptor()}
    if args.oracle:
        if res is None:
            raise UsageError("--oracle needs --net (the oracle works on the lattice)")
        try:
            val, tail = criterion_B_dual_oracle(res.lattice, W, params, digit_cap=args.digit_cap)
        except ValueError as exc:
            raise BudgetExceeded(str(exc)) from None
        doc["oracle"] = {"value": val, "tail_bound": tail}
    if args.provenance:
        doc["provenance"] = provenance(args)
    if args.out:
        _write_json(args.out, doc)
    print(f"B = {value:.17g}")
    if args.oracle:
        print(f"dual-net sum = {doc['oracle']['value']:.17g}  (tail bound {doc['oracle']['tail_bound']:.3g})")
    return 0


FUNCTIONS = {"test1", "constant"}


def cmd_integrate(args):
    if args.shifts < 2:
        raise UsageError("--shifts must be at least 2")
    if (args.net is None) == (args.points is None):
        raise UsageError("give exactly one of --net and --points")
    if args.net is not None:
        res = _load_net(args.net)
        net = interlace_net(res.d, generate_points(res.lattice))
    else:
        net = _load_points(args.points)
        if args.d is not None and args.d > 1:
            net = interlace_net(args.d, net)
    s = net.dim
    if args.function == "test1":
        f = test_function(s)
    elif args.function == "constant":
        f = lambda x: [1.0] * len(x)  # noqa: E731
    else:
        raise UsageError(f"unknown function {args.function!r}; choose from {sorted(FUNCTIONS)}")
    rep = rmse_experiment(net, f, r=args.shifts, seed=args.seed)
    extra = {"m": net.m, "s": s, "function": args.function}
    if args.provenance:
        extra["provenance"] = provenance(args)
    if args.out:
        Path(args.out).write_text(rep.to_json(**extra) + "\n")
    print(f"Q = {rep.Q_bar:.17g}")
    print(f"rmse = {rep.rmse:.17g}  (r = {rep.r}, seed = {rep.seed})")
    return 0


def cmd_table(args):
    m_values = parse_m_range(args.m_range) if args.m_range is not None else None
    if args.table is not None:
        if args.table not in known_tables():
            raise UsageError(f"unknown table {args.table}; known: {known_tables()}")
        kw = {} if m_values is None else {"m_values": m_values}
        header, rows = run_table(args.table, r=args.shifts, seed=args.seed, **kw)
    else:
        _require(args, "s")
        if args.method not in ("plps", "sobol"):
            raise UsageError("--method must be plps or sobol")
        col = Column(args.quantity, args.method, args.s, args.alpha, args.d, str(args.weights or "1"))
        header, rows = run_sweep(col, m_values or [], r=args.shifts, seed=args.seed)
    comments = [json.dumps(provenance(args))] if args.provenance else []
    text = to_csv(header, rows, comments)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.human:
        print(" ".join(f"{h:>12}" for h in header), file=sys.stderr)
        for row in rows:
            cells = [fmt3(v) if isinstance(v, float) else ("" if v is None else str(v)) for v in row]
            print(" ".join(f"{c:>12}" for c in cells), file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(sp):
    sp.add_argument("--config", dest="config_file", help="key = value defaults")
    sp.add_argument("--provenance", action="store_true", help="embed the full configuration in outputs")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hodnet", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"hodnet {__version__}")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("construct", help="search a polynomial lattice rule by CBC")
    _common(c)
    c.add_argument("--b", type=int, default=2)
    c.add_argument("--m", type=int)
    c.add_argument("--s", type=int)
    c.add_argument("--alpha", type=int, default=2)
    c.add_argument("--d", type=int, default=2)
    c.add_argument("--weights", default="1")
    c.add_argument("--p", help="modulus, e.g. 'x^4+x+1' or an integer encoding")
    c.add_argument("--mode", choices=("fast", "naive"), default="fast")
    c.add_argument("--lambda", dest="lam", type=float)
    c.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    c.add_argument("--out")
    c.set_defaults(func=cmd_construct)

    p = sub.add_parser("points", help="write the points of a constructed rule")
    _common(p)
    p.add_argument("--net")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--interlaced", dest="interlaced", action="store_true", default=True)
    g.add_argument("--raw", dest="interlaced", action="store_false")
    p.add_argument("--format", choices=("csv", "bin"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_points)

    k = sub.add_parser("criterion", help="evaluate B on a rule or point file")
    _common(k)
    k.add_argument("--net")
    k.add_argument("--points")
    k.add_argument("--alpha", type=int)
    k.add_argument("--d", type=int)
    k.add_argument("--weights")
    k.add_argument("--oracle", action="store_true", help="also sum over the dual net (small rules only)")
    k.add_argument("--digit-cap", type=int)
    k.add_argument("--out")
    k.set_defaults(func=cmd_criterion)

    i = sub.add_parser("integrate", help="randomly shifted QMC estimate with an rmse")
    _common(i)
    i.add_argument("--net")
    i.add_argument("--points")
    i.add_argument("--d", type=int, help="interlace a point file by this factor first")
    i.add_argument("--function", default="test1")
    i.add_argument("--shifts", type=int, default=50)
    i.add_argument("--seed", type=int, default=0)
    i.add_argument("--out")
    i.set_defaults(func=cmd_integrate)

    t = sub.add_parser("table", help="regenerate a benchmark table or a custom sweep as CSV")
    _common(t)
    t.add_argument("--table", type=int)
    t.add_argument("--m-range", help="e.g. 4:15")
    t.add_argument("--quantity", choices=("B", "rmse"), default="B")
    t.add_argument("--method", default="plps")
    t.add_argument("--s", type=int)
    t.add_argument("--alpha", type=int, default=2)
    t.add_argument("--d", type=int, default=2)
    t.add_argument("--weights")
    t.add_argument("--shifts", type=int, default=50)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--human", action="store_true", help="also print a 3-digit table to stderr")
    t.add_argument("--out")
    t.set_defaults(func=cmd_table)
    return ap


def _apply_config(parser, argv):
    """Re-parse with config-file values installed as subcommand defaults."""
    args = parser.parse_args(argv)
    if getattr(args, "config_file", None):
        cfg = read_config(args.config_file)
        sub = parser._subparsers._group_actions[0].choices[args.command]  # noqa: SLF001
        known = {a.dest: a for a in sub._actions}  # noqa: SLF001
        defaults = {}
        for key, raw in cfg.items():
            if key not in known or key in ("func", "config_file", "help"):
                raise UsageError(f"config key {key!r} is not an option of '{args.command}'")
            act = known[key]
            if isinstance(act, argparse._StoreTrueAction):  # noqa: SLF001
                defaults[key] = raw.lower() in ("1", "true", "yes", "on")
            elif isinstance(act, argparse._StoreFalseAction):  # noqa: SLF001
                defaults[key] = raw.lower() not in ("1", "true", "yes", "on")
            elif act.type is not None:
                defaults[key] = act.type(raw)
            else:
                defaults[key] = raw
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    return args


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        if not getattr(args, "command", None):
            raise UsageError("choose a command: construct, points, criterion, integrate, table")
        thread_count()
        return args.func(args)
    except UsageError as exc:
        print(f"hodnet: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"hodnet: refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except MalformedInputError as exc:
        print(f"hodnet: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except ValueError as exc:
        print(f"hodnet: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
