"""The ``isingocc`` command line.

Exit codes: 0 success, 1 a certificate or verification FAILED, 2 usage
error, 3 verification INCONCLUSIVE.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import certify, graphs, ising, localviews, lp, scan
from .numerics import (
    DomainError,
    Interval,
    critical_B,
    format_decimal,
    format_rational,
    lambda_c,
    parse_rational,
)

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _range_spec(text: str) -> list[Fraction]:
    """``start:stop:step`` (inclusive) or a comma-separated list of rationals."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("range must be start:stop:step")
        start, stop, step = (_rational(p) for p in parts)
        if step <= 0:
            raise argparse.ArgumentTypeError("range step must be positive")
        out = []
        x = start
        while x <= stop:
            out.append(x)
            x += step
        return out
    return [_rational(p) for p in text.split(",") if p.strip()]


class _Printer:
    def __init__(self, args):
        self.json = getattr(args, "json", False)
        self.digits = getattr(args, "decimal", None)

    def num(self, x) -> str:
        if isinstance(x, Interval):
            if self.digits is not None:
                return f"[{format_decimal(x.lo, self.digits)}, {format_decimal(x.hi, self.digits)}]"
            return str(x)
        if self.digits is not None:
            return format_decimal(x, self.digits)
        return format_rational(x)

    def emit(self, payload, lines: Sequence[str]) -> None:
        if self.json:
            print(json.dumps(payload, indent=2))
        else:
            for line in lines:
                print(line)


def _graph_arg(text: str) -> graphs.Graph:
    if text in graphs.NAMED_GRAPHS:
        return graphs.named_graph(text)
    try:
        return graphs.decode_graph6(text)
    except graphs.Graph6Error as exc:
        raise UsageError(f"--graph: not a known name or graph6 string: {exc}") from None


def _load_catalog(args) -> list[graphs.Graph]:
    if getattr(args, "graphs", None):
        return graphs.read_graph6_file(args.graphs)
    return graphs.cubic_catalog(args.n_max)


# -- subcommands -------------------------------------------------------------------


def cmd_z(args, out: _Printer) -> int:
    g = _graph_arg(args.graph)
    z = ising.partition_function(g, args.B, args.lam)
    out.emit({"Z": out.num(z)}, [out.num(z)])
    return EXIT_OK


def cmd_occ(args, out: _Printer) -> int:
    g = _graph_arg(args.graph)
    a = ising.occupancy_fraction(g, args.B, args.lam)
    out.emit({"occupancy": out.num(a)}, [out.num(a)])
    return EXIT_OK


def cmd_coeffs(args, out: _Printer) -> int:
    g = _graph_arg(args.graph)
    cs = ising.magnetization_coefficients(g, args.B)
    out.emit({"coefficients": [out.num(c) for c in cs]}, [f"{k} {out.num(c)}" for k, c in enumerate(cs)])
    return EXIT_OK


def cmd_lambda_c(args, out: _Printer) -> int:
    enc = lambda_c(args.delta, args.B, args.eps)
    payload = {"delta": args.delta, "B": out.num(args.B), "enclosure": out.num(enc)}
    out.emit(payload, [out.num(enc)])
    return EXIT_OK


def cmd_views(args, out: _Printer) -> int:
    views = localviews.enumerate_views()
    if args.action == "list":
        out.emit(
            {"views": [{"id": i, "label": v.label} for i, v in enumerate(views)]},
            [f"{i} {v.label}" for i, v in enumerate(views)],
        )
        return EXIT_OK
    if args.graph is None or args.B is None or args.lam is None:
        raise UsageError("views dist needs --graph, --B and --lam")
    dist = localviews.empirical_distribution(_graph_arg(args.graph), args.B, args.lam)
    pairs = [(i, views[i].label, p) for i, p in enumerate(dist) if p]
    out.emit(
        {"distribution": {str(i): out.num(p) for i, _, p in pairs}},
        [f"{i} {label} {out.num(p)}" for i, label, p in pairs],
    )
    return EXIT_OK


def cmd_lp(args, out: _Printer) -> int:
    views = localviews.enumerate_views()
    if args.exclude_k4:
        views = localviews.views_without_triangle()
    try:
        sol = lp.solve_exact(lp.build_program(views, args.J, args.B, args.lam, args.sense))
    except lp.InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_FAILED
    support = [(views[i].label, sol.primal[i]) for i in sol.support]
    payload = {
        "sense": sol.program.sense.value,
        "value": out.num(sol.value),
        "support": {label: out.num(x) for label, x in support},
        "dual": {k: out.num(v) for k, v in sol.dual.items()},
    }
    lines = [f"value {out.num(sol.value)}"]
    lines += [f"support {label} {out.num(x)}" for label, x in support]
    lines += [f"dual y_{k} {out.num(v)}" for k, v in sol.dual.items()]
    out.emit(payload, lines)
    return EXIT_OK


def cmd_cert(args, out: _Printer) -> int:
    if args.action == "regions":
        regs = certify.load_regions(args.catalog)
        out.emit(
            {"regions": {n: r.description for n, r in regs.items()}},
            [f"{n}  {r.description}" for n, r in regs.items()],
        )
        return EXIT_OK
    if args.action == "point":
        return _cert_point(args, out)
    return _cert_verify(args, out)


def _cert_point(args, out: _Printer) -> int:
    if args.B is None or args.lam is None:
        raise UsageError("cert point needs --B and --lam")
    if args.region:
        recipe = certify.load_regions(args.catalog)[args.region].recipe
        triples = list(recipe.triples)
        sense, candidate = recipe.sense, recipe.candidate
    else:
        candidate = args.candidate
        sense = lp.Sense.MAX if candidate == "K33" else lp.Sense.MIN
        triples = [certify.discover_triple(args.B, args.lam, sense)]
    views = localviews.views_without_triangle() if sense is lp.Sense.MIN else localviews.enumerate_views()
    for triple in triples:
        try:
            cert = certify.dual_from_triple(triple, args.B, args.lam, sense=sense, candidate=candidate)
        except certify.SingularSystemError:
            continue
        slacks = certify.check_point(cert, views, args.B, args.lam)
        ok = certify.slacks_feasible(slacks, sense)
        payload = {
            "triple": [v.label for v in triple],
            "sense": sense.value,
            "candidate": candidate,
            "y_p": out.num(cert.yp),
            "y": {str(j): out.num(v) for j, v in cert.y.items()},
            "slacks": {v.label: out.num(s) for v, s in zip(views, slacks)},
            "feasible": ok,
        }
        if ok or triple is triples[-1]:
            lines = [f"triple {' '.join(v.label for v in triple)}", f"y_p {out.num(cert.yp)}"]
            lines += [f"y_{j} {out.num(v)}" for j, v in cert.y.items()]
            lines += [f"slack {v.label} {out.num(s)}" for v, s in zip(views, slacks)]
            lines.append("FEASIBLE" if ok else "INFEASIBLE")
            out.emit(payload, lines)
            return EXIT_OK if ok else EXIT_FAILED
    print("every tight system is singular at this point", file=sys.stderr)
    return EXIT_FAILED


def _cert_verify(args, out: _Printer) -> int:
    regs = certify.load_regions(args.catalog)
    if args.all:
        names = list(regs)
    elif args.region:
        names = [args.region]
    else:
        raise UsageError("cert verify needs --region NAME or --all")
    reports = []
    for name in names:
        if name not in regs:
            raise UsageError(f"unknown region {name!r}; known: {', '.join(regs)}")
        reports.append(
            certify.verify_region(
                regs[name], min_width=args.min_width, max_boxes=args.max_boxes, jobs=args.jobs
            )
        )
    out.emit({"reports": [r.to_json() for r in reports]}, [r.summary() for r in reports])
    statuses = {r.status for r in reports}
    if certify.Status.FAILED in statuses:
        return EXIT_FAILED
    if certify.Status.INCONCLUSIVE in statuses:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_scan(args, out: _Printer) -> int:
    if args.mode == "curve":
        regs = certify.load_regions(args.catalog)
        chosen = [r for n, r in regs.items() if n.startswith("Rmin")] if not args.regions else [
            regs[n] for n in args.regions.split(",")
        ]
        samples = args.b_samples or [Fraction(i, 100) for i in range(1, 32)]
        pts = scan.curve_containment(samples, chosen, args.eps)
        payload = {
            "points": [
                {
                    "B": out.num(p.B),
                    "enclosure": out.num(p.enclosure),
                    "contained": p.contained,
                    "regions": list(p.regions),
                }
                for p in pts
            ]
        }
        lines = [
            f"{out.num(p.B)} {out.num(p.enclosure)} {'contained' if p.contained else 'NOT contained'} "
            f"{','.join(p.regions)}"
            for p in pts
        ]
        out.emit(payload, lines)
        return EXIT_OK if all(p.contained for p in pts) else EXIT_FAILED
    catalog = _load_catalog(args)
    if args.goose:
        catalog.append(graphs.named_graph("Goose"))
    grid = scan.unit_grid(args.grid)
    records = scan.scan_grid(catalog, grid, grid, jobs=args.jobs)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            scan.write_scan_csv(records, fh)
    counts: dict[str, int] = {}
    for r in records:
        counts[r.argmin.label] = counts.get(r.argmin.label, 0) + 1
    out.emit(
        {"points": len(records), "argmin_counts": counts, "out": args.out},
        [f"points {len(records)}"] + [f"argmin {k} {v}" for k, v in sorted(counts.items())],
    )
    return EXIT_OK


def cmd_graphs(args, out: _Printer) -> int:
    if args.action == "count":
        counts = {n: len(graphs.generate_cubic(n)) for n in range(4, args.n_max + 1, 2)}
        out.emit({"counts": counts}, [f"{n} {c}" for n, c in counts.items()])
        return EXIT_OK
    if args.action == "generate":
        if args.n is None:
            raise UsageError("graphs generate needs --n")
        gs = graphs.generate_cubic(args.n)
        if args.out:
            graphs.write_graph6_file(args.out, gs)
        out.emit({"graph6": [graphs.encode_graph6(g) for g in gs]}, [graphs.encode_graph6(g) for g in gs])
        return EXIT_OK
    # canon: canonical graph6 and catalog name for each input graph
    if args.graphs:
        gs = graphs.read_graph6_file(args.graphs)
    elif args.graph:
        gs = [_graph_arg(args.graph)]
    else:
        raise UsageError("graphs canon needs --graph or --graphs")
    rows = [(graphs.canonical_graph6(g), graphs.graph_name(g) or "") for g in gs]
    out.emit({"canonical": [{"graph6": a, "name": b} for a, b in rows]}, [f"{a} {b}".rstrip() for a, b in rows])
    return EXIT_OK


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--decimal", type=int, metavar="DIGITS", help="display decimals instead of p/q")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")

    p = argparse.ArgumentParser(prog="isingocc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def point(sp, need_lam=True):
        sp.add_argument("--graph", required=True, help="catalog name (K4, K33, Petersen, Goose, Prism) or graph6")
        sp.add_argument("--B", type=_rational, required=True)
        if need_lam:
            sp.add_argument("--lam", type=_rational, required=True)

    sp = sub.add_parser("z", parents=[common], help="partition function")
    point(sp)
    sp.set_defaults(func=cmd_z)
    sp = sub.add_parser("occ", parents=[common], help="occupancy fraction")
    point(sp)
    sp.set_defaults(func=cmd_occ)
    sp = sub.add_parser("coeffs", parents=[common], help="coefficients c_k(B)")
    point(sp, need_lam=False)
    sp.set_defaults(func=cmd_coeffs)

    sp = sub.add_parser("lambda-c", parents=[common], help="enclosure of the critical field")
    sp.add_argument("--delta", type=int, default=3)
    sp.add_argument("--B", type=_rational, required=True)
    sp.add_argument("--eps", type=_rational, default=Fraction(1, 10**9))
    sp.set_defaults(func=cmd_lambda_c)

    sp = sub.add_parser("views", parents=[common], help="local views")
    sp.add_argument("action", choices=["list", "dist"])
    sp.add_argument("--graph")
    sp.add_argument("--B", type=_rational)
    sp.add_argument("--lam", type=_rational)
    sp.set_defaults(func=cmd_views)

    sp = sub.add_parser("lp", parents=[common], help="occupancy linear program")
    sp.add_argument("action", choices=["solve"])
    sp.add_argument("--B", type=_rational, required=True)
    sp.add_argument("--lam", type=_rational, required=True)
    sp.add_argument("--sense", choices=["min", "max"], default="min")
    sp.add_argument("--exclude-k4", action="store_true", help="drop the triangle view")
    sp.add_argument("--J", type=_int_list, default=lp.DEFAULT_J)
    sp.set_defaults(func=cmd_lp)

    sp = sub.add_parser("cert", parents=[common], help="dual certificates")
    sp.add_argument("action", choices=["point", "verify", "regions"])
    sp.add_argument("--B", type=_rational)
    sp.add_argument("--lam", type=_rational)
    sp.add_argument("--candidate", choices=["K4", "K33"], default="K4")
    sp.add_argument("--region")
    sp.add_argument("--all", action="store_true", help="verify every catalog region")
    sp.add_argument("--catalog", help="region catalog JSON (default: bundled)")
    sp.add_argument("--min-width", type=_rational, default=certify.DEFAULT_MIN_WIDTH)
    sp.add_argument("--max-boxes", type=int, default=certify.DEFAULT_MAX_BOXES)
    sp.set_defaults(func=cmd_cert)

    sp = sub.add_parser("scan", parents=[common], help="grid scans and the critical curve")
    sp.add_argument("mode", nargs="?", choices=["grid", "curve"], default="grid")
    sp.add_argument("--n-max", type=int, default=12)
    sp.add_argument("--grid", type=int, default=100, help="grid points i/GRID for 0 < i < GRID")
    sp.add_argument("--goose", action="store_true", help="add the Goose graph to the catalog")
    sp.add_argument("--graphs", help="graph6 catalog file instead of generated graphs")
    sp.add_argument("--out", help="CSV output path")
    sp.add_argument("--b-samples", type=_range_spec, help="start:stop:step or a list")
    sp.add_argument("--regions", help="comma-separated region names (default: all min regions)")
    sp.add_argument("--catalog", help="region catalog JSON (default: bundled)")
    sp.add_argument("--eps", type=_rational, default=Fraction(1, 10**9))
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("graphs", parents=[common], help="cubic graph generation and canonical forms")
    sp.add_argument("action", choices=["count", "generate", "canon"])
    sp.add_argument("--n", type=int)
    sp.add_argument("--n-max", type=int, default=12)
    sp.add_argument("--graph")
    sp.add_argument("--graphs", help="graph6 file")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_graphs)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, _Printer(args))
    except (UsageError, KeyError, DomainError, ValueError, graphs.Graph6Error) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"isingocc {args.command}: error: {msg}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
