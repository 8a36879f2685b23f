"""Command line interface: ``gcmates analyze|mates|snf|experiment|g6``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .experiment import append_csv, run_experiment
from .graph import Graph, Graph6Error, adjacency_matrix, emit_graph6, parse_graph6
from .linalg import invariant_factors, snf
from .mates import (
    ContradictionReport,
    IncompleteFactorization,
    MateVerifier,
    NotControllable,
    OrderMismatch,
    mate_bound,
    search_mates,
)
from .walk import classify_Fn, w_hat, walk_matrix

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_CONTRADICTION = 0, 1, 2, 3


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------- matrix text


def parse_matrix_text(text: str) -> list[list[int]]:
    """First line ``rows cols``, then whitespace-separated integer rows."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InputError("empty matrix file")
    header = lines[0].split()
    try:
        rows, cols = map(int, header)
    except ValueError:
        raise InputError(f"line 1: expected 'rows cols', got {lines[0]!r}") from None
    if len(lines) - 1 != rows:
        raise InputError(f"expected {rows} matrix rows, found {len(lines) - 1}")
    out = []
    for k, ln in enumerate(lines[1:], start=2):
        try:
            row = [int(tok) for tok in ln.split()]
        except ValueError as exc:
            raise InputError(f"line {k}: {exc}") from None
        if len(row) != cols:
            raise InputError(f"line {k}: expected {cols} entries, got {len(row)}")
        out.append(row)
    return out


def format_matrix_text(m: list[list[int]]) -> str:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    return "\n".join([f"{rows} {cols}"] + [" ".join(map(str, r)) for r in m]) + "\n"


def _read_graph(source: str) -> Graph:
    """A graph6 string, or a file holding a graph6 line or an adjacency matrix."""
    if os.path.isfile(source):
        with open(source) as fh:
            text = fh.read()
        first = text.strip().splitlines()[0] if text.strip() else ""
        if len(first.split()) == 2 and all(t.isdigit() for t in first.split()):
            try:
                return Graph.from_matrix(parse_matrix_text(text))
            except ValueError as exc:
                raise InputError(f"{source}: {exc}") from None
        source = first
    try:
        return parse_graph6(source)
    except Graph6Error as exc:
        raise InputError(f"graph6 {source!r}: {exc}") from None


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2))


# ---------------------------------------------------------------- analyze


def analyze_report(g: Graph) -> dict:
    cls = classify_Fn(g)
    report = {
        "n": g.n,
        "graph6": emit_graph6(g) if g.n <= 62 else None,
        "controllable": cls.controllable,
        "snf_W": [str(x) for x in cls.d],
        "in_Fn": cls.in_Fn,
        "degenerate_order": cls.degenerate_order,
    }
    report["snf_W_hat"] = [str(x) for x in invariant_factors(w_hat(g))]
    if cls.in_Fn:
        try:
            b = mate_bound(g)
        except IncompleteFactorization as exc:
            b = exc.report
        report.update(b.to_json())
    else:
        report.update({"dn": str(cls.d_n), "bound": None, "admissible_levels": None})
    return report


def cmd_analyze(args) -> int:
    g = _read_graph(args.input)
    if args.dump_walk:
        sys.stdout.write(format_matrix_text(walk_matrix(g)))
        return EXIT_OK
    report = analyze_report(g)
    if args.json:
        _print_json(report)
        return EXIT_OK
    print(f"n: {report['n']}")
    print(f"controllable: {report['controllable']}")
    print(f"SNF(W): {' '.join(report['snf_W'])}")
    print(f"SNF(W_hat): {' '.join(report['snf_W_hat'])}")
    verdict = str(report["in_Fn"])
    if report["degenerate_order"]:
        verdict += " (degenerate order)"
    print(f"in F_n: {verdict}")
    print(f"d_n: {report['dn']}")
    if report["in_Fn"]:
        fac = " * ".join(f"{p}^{k}" if k > 1 else p for p, k in report["factorization"].items())
        if not report["factorization_complete"]:
            fac += f" * [unfactored {report['unfactored_cofactor']}]"
        print(f"factorization: {fac}")
        if report["admissible_levels"] is not None:
            print(f"admissible levels: {' '.join(report['admissible_levels'])}")
        print(f"mate bound: {report['bound'] if report['bound'] is not None else 'unavailable'}")
    return EXIT_OK


# ------------------------------------------------------------------ mates


def _cert_line(cert) -> str:
    status = "accepted" if cert.accepted else "rejected"
    iso = " isomorphic" if cert.isomorphic else ""
    lvl = "-" if cert.level is None else cert.level
    failed = [k for k, v in cert.checks.items() if v is False]
    tail = f" failed: {', '.join(failed)}" if failed else ""
    return f"{emit_graph6(cert.mate)} {status} level {lvl}{iso}{tail}"


def cmd_mates_verify(args) -> int:
    g, h = _read_graph(args.graph), _read_graph(args.mate)
    cert = MateVerifier(g).verify(h)
    if args.json:
        _print_json(cert.to_json())
    else:
        print(_cert_line(cert))
    return EXIT_OK


def cmd_mates_search(args) -> int:
    g = _read_graph(args.graph)
    errors: list[Graph6Error] = []

    def on_error(exc: Graph6Error) -> None:
        errors.append(exc)
        print(f"warning: {exc}", file=sys.stderr)

    with open(args.candidates) as fh:
        try:
            certs = search_mates(g, fh, on_error=on_error)
        except ContradictionReport as exc:
            print(f"contradiction: {exc}", file=sys.stderr)
            if args.json:
                _print_json({"contradiction": str(exc), "certificates": [c.to_json() for c in exc.certificates]})
            return EXIT_CONTRADICTION
    if args.json:
        _print_json({"mates": [c.to_json() for c in certs], "decode_errors": [str(e) for e in errors]})
    else:
        for c in certs:
            print(_cert_line(c))
        print(f"{len(certs)} mate(s)")
    return EXIT_PARSE if errors else EXIT_OK


# -------------------------------------------------------------------- snf


def cmd_snf(args) -> int:
    with open(args.matrix) as fh:
        m = parse_matrix_text(fh.read())
    if len(m) != len(m[0]):
        raise InputError("snf needs a square matrix")
    res = snf(m)
    print(" ".join(map(str, res.d)))
    if args.transforms:
        print("U:")
        sys.stdout.write(format_matrix_text(res.U))
        print("V:")
        sys.stdout.write(format_matrix_text(res.V))
    return EXIT_OK


# ------------------------------------------------------------- experiment


def cmd_experiment(args) -> int:
    try:
        p = Fraction(args.p)
    except ValueError:
        raise InputError(f"bad probability {args.p!r}") from None
    if not 0 <= p <= 1 or args.n < 1 or args.samples < 1:
        raise InputError("need n >= 1, samples >= 1 and 0 <= p <= 1")
    stats = run_experiment(args.n, args.samples, p, args.seed, args.threads)
    if args.csv:
        try:
            append_csv(args.csv, stats)
        except OSError as exc:
            print(f"error: cannot write {args.csv}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    if args.json:
        _print_json(stats.to_json())
    else:
        print(f"n={stats.n} samples={stats.samples} p={stats.p} seed={stats.seed}")
        print(f"controllable: {stats.controllable_count} ({stats.controllable_fraction:.4f})")
        print(f"in F_n: {stats.fn_count} ({stats.fn_fraction:.4f})")
        print(f"elapsed: {stats.elapsed:.2f}s")
    return EXIT_OK


# --------------------------------------------------------------------- g6


def cmd_g6(args) -> int:
    if args.action == "decode":
        g = _read_graph(args.input)
        sys.stdout.write(format_matrix_text(adjacency_matrix(g)))
    else:
        if os.path.isfile(args.input):
            with open(args.input) as fh:
                text = fh.read()
        else:
            text = sys.stdin.read() if args.input == "-" else args.input
        try:
            g = Graph.from_matrix(parse_matrix_text(text))
        except InputError:
            raise
        except ValueError as exc:
            raise InputError(str(exc)) from None
        print(emit_graph6(g))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gcmates", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="walk-matrix SNF, F_n membership and mate bound")
    p.add_argument("input", help="graph6 string or file (graph6 line or adjacency matrix)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--dump-walk", action="store_true", help="print W(G) in matrix text format")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("mates", help="verify or search generalized cospectral mates")
    msub = p.add_subparsers(dest="mates_command", required=True, parser_class=_Parser)
    v = msub.add_parser("verify")
    v.add_argument("graph")
    v.add_argument("mate")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_mates_verify)
    s = msub.add_parser("search")
    s.add_argument("graph")
    s.add_argument("--candidates", required=True, help="newline-delimited graph6 file")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_mates_search)

    p = sub.add_parser("snf", help="Smith normal form of a matrix file")
    p.add_argument("matrix")
    p.add_argument("--transforms", action="store_true")
    p.set_defaults(func=cmd_snf)

    p = sub.add_parser("experiment", help="random-graph census of controllable and F_n graphs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--p", default="1/2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--csv")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("g6", help="graph6 <-> adjacency matrix text")
    p.add_argument("action", choices=["encode", "decode"])
    p.add_argument("input", help="decode: graph6 string/file; encode: matrix file or '-'")
    p.set_defaults(func=cmd_g6)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, Graph6Error, NotControllable, OrderMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
