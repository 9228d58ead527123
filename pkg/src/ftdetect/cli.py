"""Command-line entry point: ``ftdetect <command> ...``.

Exit codes: 0 success or valid, 1 invalid verdict / infeasible, 2 usage or
input format error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import detection, periodic, share_bound, solver
from .graph import GraphError, Kind, load_graph

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    pass


def fmt(x: Fraction, decimal: bool = False) -> str:
    x = Fraction(x)
    if decimal:
        return f"{float(x):.6g}"
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text.rstrip("\n"))


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: {exc}") from None


def _graph(args):
    if not args.graph:
        raise InputError("--graph is required")
    try:
        return load_graph(args.graph)
    except OSError as exc:
        raise InputError(f"cannot read {args.graph}: {exc.strerror}") from None


def _detectors(args, graph):
    """Detector set from ``--detectors``: a JSON file or a comma-separated vertex list."""
    if not args.detectors:
        raise InputError("--detectors is required with --graph")
    kind = Kind.parse(args.kind)
    spec = args.detectors
    if Path(spec).suffix == ".json" or Path(spec).is_file():
        data = _read_json(spec)
        if isinstance(data, dict):
            if "kind" in data and args.kind_given is False:
                kind = Kind.parse(data["kind"])
            vertices = data.get("detectors", [])
        else:
            vertices = data
    else:
        try:
            vertices = [int(x) for x in spec.replace(" ", "").split(",") if x]
        except ValueError:
            raise InputError(f"bad detector list {spec!r}") from None
    return detection.DetectorSet.of(graph, kind, vertices)


def _pattern(args):
    if args.builtin:
        pats = periodic.builtin_patterns()
        if args.builtin not in pats:
            raise InputError(f"unknown builtin {args.builtin!r}; choose from {', '.join(pats)}")
        return args.builtin, pats[args.builtin]
    if args.pattern:
        try:
            return args.pattern, periodic.load_pattern(args.pattern)
        except OSError as exc:
            raise InputError(f"cannot read {args.pattern}: {exc.strerror}") from None
    return None, None


def cmd_verify(args) -> int:
    name, pat = _pattern(args)
    kind = Kind.parse(args.kind)
    if pat is not None:
        verdict = periodic.verify_infinite(pat, kind, args.redundancy)
        subject = {"pattern": name, "density": fmt(periodic.density(pat), args.decimal)}
    else:
        g = _graph(args)
        ds = _detectors(args, g)
        kind = ds.kind
        check = detection.verify_by_deletion if args.by_deletion else detection.verify
        verdict = check(ds, args.redundancy)
        subject = {"graph": args.graph, "detectors": ds.vertices}
    payload = {**verdict.to_json(), **subject, "kind": kind.value,
               "redundancy": args.redundancy}
    text = verdict.status
    if not verdict.valid:
        text += f": {verdict.reason} {list(verdict.witness)}"
    _emit(args, payload, text)
    return EXIT_OK if verdict.valid else EXIT_INVALID


def cmd_density(args) -> int:
    name, pat = _pattern(args)
    if pat is not None:
        d = periodic.density(pat)
        payload = {"pattern": name, "density": fmt(d, args.decimal)}
    else:
        g = _graph(args)
        ds = _detectors(args, g)
        d = detection.density(ds)
        payload = {"graph": args.graph, "density": fmt(d, args.decimal)}
    _emit(args, payload, f"density = {fmt(d, args.decimal)}")
    return EXIT_OK


def cmd_share(args) -> int:
    name, pat = _pattern(args)
    if pat is not None:
        ds = periodic.lift_to_torus(pat, *periodic.faithful_copies(pat), kind=args.kind)
    else:
        ds = _detectors(args, _graph(args))
    g = ds.graph
    try:
        xs = [args.vertex] if args.vertex is not None else ds.vertices
        shares = {x: detection.share(ds, x) for x in xs}
        avg = detection.average_share(ds) if ds.vertices else None
    except detection.UndefinedShare as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    lines = [f"share({g.label(x)}) = {fmt(s, args.decimal)}" for x, s in shares.items()]
    if avg is not None:
        lines.append(f"average share = {fmt(avg, args.decimal)}, "
                     f"density = {fmt(detection.density(ds), args.decimal)}")
    payload = {"shares": {g.label(x): fmt(s, args.decimal) for x, s in shares.items()},
               "average_share": None if avg is None else fmt(avg, args.decimal),
               "density": fmt(detection.density(ds), args.decimal)}
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_solve(args) -> int:
    g = _graph(args)
    kind = Kind.parse(args.kind)
    if args.export_cnf:
        Path(args.export_cnf).write_text(solver.to_dimacs(g, kind, args.redundancy, args.size))
    mode = solver.Mode(args.mode)
    if mode is solver.Mode.DECISION and args.size is None:
        raise InputError("--mode decision needs --size")
    req = solver.SolveRequest(g, kind, args.redundancy, mode, args.size)
    sol = solver.solve(req, args.method)
    payload = {"kind": kind.value, "redundancy": args.redundancy, "mode": mode.value,
               "feasible": sol.feasible, "size": sol.size,
               "witness": list(sol.witness),
               "density": fmt(Fraction(sol.size, g.n), args.decimal) if sol.feasible else None}
    if sol.all_witnesses is not None:
        payload["all_witnesses"] = [list(w) for w in sol.all_witnesses]
    if sol.feasible:
        text = (f"minimum size = {sol.size} (density {payload['density']})\n"
                f"witness: {' '.join(g.label(v) for v in sol.witness)}")
        if mode is solver.Mode.DECISION:
            text = f"feasible with size <= {args.size}\nwitness: " + \
                   " ".join(g.label(v) for v in sol.witness)
    else:
        text = "infeasible"
    _emit(args, payload, text)
    return EXIT_OK if sol.feasible else EXIT_INVALID


def cmd_bound(args) -> int:
    kind = Kind.parse(args.kind)
    if args.threshold is not None:
        threshold = Fraction(args.threshold)
        report = share_bound.classify_high_share(kind, threshold, workers=args.workers)
        payload = report.to_json()
        lines = [f"windows with share > {fmt(threshold)}: {len(report.entries)} "
                 f"({len(report.classes())} up to symmetry)",
                 "share values: " + ", ".join(fmt(v) for v in sorted(report.values)),
                 f"every window has >= 2 adjacent detectors with class max <= "
                 f"{fmt(share_bound.AVERAGING_CLASS_MAX)}: {'yes' if report.all_ok else 'NO'}"]
        for e in report.classes():
            lines += ["", f"share {fmt(e.share)}; adjacent detectors:"]
            lines += [f"  {o}: class max {fmt(v)}" for o, v in e.neighbor_class_max.items()]
            lines.append(e.patch.to_ascii())
        _emit(args, payload, "\n".join(lines))
        return EXIT_OK if report.all_ok else EXIT_INVALID
    try:
        cert = share_bound.certified_max_share(kind, args.constraint, workers=args.workers)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    text = (f"max share = {fmt(cert.max_share, args.decimal)}, "
            f"density lower bound = {fmt(cert.density_bound, args.decimal)}\n\n"
            + cert.render(limit=args.limit))
    _emit(args, cert.to_json(), text)
    return EXIT_OK


def cmd_search(args) -> int:
    kind = Kind.parse(args.kind)
    rows, cols = args.period
    try:
        pats = periodic.pattern_search(rows, cols, kind, args.redundancy, args.max_detectors,
                                       workers=args.workers)
    except detection.BudgetExceeded as exc:
        raise InputError(str(exc)) from None
    payload = {"period": [rows, cols], "kind": kind.value, "redundancy": args.redundancy,
               "count": len(pats), "patterns": [p.to_json() for p in pats]}
    if pats:
        lines = [f"{len(pats)} minimum patterns, density "
                 f"{fmt(periodic.density(pats[0]), args.decimal)}"]
        for p in pats[: args.limit]:
            lines += ["", p.to_ascii()]
    else:
        lines = ["no valid pattern"]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if pats else EXIT_INVALID


def cmd_builtins(args) -> int:
    pats = periodic.builtin_patterns()
    payload = {name: {**p.to_json(), "ascii": p.to_ascii().split()} for name, p in pats.items()}
    lines = []
    for name, p in pats.items():
        lines += [f"# {name}  {p.period_rows}x{p.period_cols}  "
                  f"density {fmt(periodic.density(p), args.decimal)}", p.to_ascii()]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ftdetect",
        description="Fault-tolerant detection systems (OLD sets, identifying codes) "
                    "on finite graphs and the king's grid.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--decimal", action="store_true",
                        help="print rationals as decimals (6 significant digits)")

    def kind_arg(p, required=False):
        p.add_argument("--kind", choices=["open", "closed"], default=None if required else "open",
                       required=required)

    def source(p):
        p.add_argument("--graph", help="graph JSON file")
        p.add_argument("--detectors", help="detector JSON file or comma-separated vertices")
        p.add_argument("--pattern", help="ASCII periodic pattern file")
        p.add_argument("--builtin", help="name of a built-in pattern")

    p = sub.add_parser("verify", parents=[common], help="check a detector set or pattern")
    source(p)
    kind_arg(p)
    p.add_argument("--redundancy", type=int, default=0)
    p.add_argument("--by-deletion", action="store_true",
                   help="check by deleting every detector subset (small sets only)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("density", parents=[common], help="exact density")
    source(p)
    kind_arg(p)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("share", parents=[common], help="exact detector shares")
    source(p)
    kind_arg(p)
    p.add_argument("--vertex", type=int)
    p.set_defaults(func=cmd_share)

    p = sub.add_parser("solve", parents=[common], help="minimum detection system")
    p.add_argument("--graph", required=True)
    kind_arg(p)
    p.add_argument("--redundancy", type=int, default=0, choices=[0, 1, 2])
    p.add_argument("--mode", choices=["exact", "all", "decision"], default="exact")
    p.add_argument("--size", type=int)
    p.add_argument("--method", choices=["bnb", "brute"], default="bnb")
    p.add_argument("--export-cnf", metavar="FILE")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bound", parents=[common], help="certified share maximum on K")
    kind_arg(p, required=True)
    p.add_argument("--threshold", help="classify windows whose share exceeds this rational")
    p.add_argument("--constraint", help="core cells, e.g. '???/?XX/???'")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--limit", type=int, default=None, help="argmax windows to print")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("search", parents=[common], help="minimum periodic patterns")
    p.add_argument("--period", type=int, nargs=2, metavar=("ROWS", "COLS"), required=True)
    kind_arg(p)
    p.add_argument("--redundancy", type=int, default=1)
    p.add_argument("--max-detectors", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--limit", type=int, default=10, help="patterns to print")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("builtins", parents=[common], help="list built-in patterns")
    p.set_defaults(func=cmd_builtins)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help exits 0, usage errors 2
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    args.kind_given = "--kind" in (argv if argv is not None else sys.argv[1:])
    try:
        return args.func(args)
    except (InputError, GraphError, periodic.PatternFormatError, periodic.NonFaithfulLift,
            detection.BudgetExceeded, IndexError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
