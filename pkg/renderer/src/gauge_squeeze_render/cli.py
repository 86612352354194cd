"""Command-line renderer for gauge-squeeze CSV datasets.

Exit codes: 0 success, 1 usage error, 2 schema mismatch, 3 empty dataset,
4 incompatible plot kind.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .parsing import EmptyDataset, SchemaError, parse_csv
from .render import IncompatibleKind, render_heatmap, render_lines, render_wigner

USAGE_ERROR = 1
SCHEMA_ERROR = 2
EMPTY_ERROR = 3
KIND_ERROR = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gauge-squeeze-render", description=__doc__)
    parser.add_argument("--version", action="version",
                        version=f"gauge-squeeze-render {__version__}")
    parser.add_argument("--kind", choices=["heatmap", "lines", "wigner"],
                        help="plot kind (required unless --dump-parsed)")
    parser.add_argument("--input", required=True, help="gauge-squeeze CSV dataset")
    parser.add_argument("--output", help="image path (.png, .svg, .pdf)")
    parser.add_argument("--column", help="observable column (default: squeeze_db if present)")
    parser.add_argument("--xlabel", help="x-axis label override")
    parser.add_argument("--ylabel", help="y-axis label override")
    parser.add_argument("--db-limit", action="store_true",
                        help="shade the region below the 3 dB squeezing limit")
    parser.add_argument("--sql-line", action="store_true",
                        help="draw the standard-quantum-limit reference at variance 1/2")
    parser.add_argument("--dump-parsed", action="store_true",
                        help="re-emit the parsed table (header + data rows) and exit")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        table = parse_csv(args.input)
    except SchemaError as exc:
        print(f"gauge-squeeze-render: schema mismatch: {exc}", file=sys.stderr)
        return SCHEMA_ERROR
    except EmptyDataset as exc:
        print(f"gauge-squeeze-render: empty dataset: {exc}", file=sys.stderr)
        return EMPTY_ERROR
    if args.dump_parsed:
        sys.stdout.write("\n".join(table.raw_lines) + "\n")
        return 0
    if not args.kind or not args.output:
        parser.print_usage(sys.stderr)
        print("gauge-squeeze-render: error: --kind and --output are required "
              "unless --dump-parsed", file=sys.stderr)
        return USAGE_ERROR
    try:
        if args.kind == "heatmap":
            best = render_heatmap(table, args.output, column=args.column,
                                  xlabel=args.xlabel, ylabel=args.ylabel)
            _print_optimum(best, args.column or _default_col(table))
        elif args.kind == "lines":
            best = render_lines(table, args.output, column=args.column,
                                db_limit=args.db_limit, sql_line=args.sql_line,
                                xlabel=args.xlabel, ylabel=args.ylabel)
            if best is not None:
                _print_optimum(best, args.column or _default_col(table))
        else:
            render_wigner(table, args.output, xlabel=args.xlabel, ylabel=args.ylabel)
    except IncompatibleKind as exc:
        print(f"gauge-squeeze-render: incompatible kind: {exc}", file=sys.stderr)
        return KIND_ERROR
    except SchemaError as exc:
        print(f"gauge-squeeze-render: schema mismatch: {exc}", file=sys.stderr)
        return SCHEMA_ERROR
    print(f"wrote {args.output}")
    return 0


def _default_col(table) -> str:
    from .render import default_observable

    try:
        return default_observable(table)
    except SchemaError:
        return "value"


def _print_optimum(best, column: str) -> None:
    if best is None:
        return
    parts = [f"axis1={best['axis1']!r}"]
    if "axis2" in best and best.get("axis2") is not None:
        parts.append(f"axis2={best['axis2']!r}")
    parts.append(f"{column}={best[column]!r}")
    print("optimum: " + " ".join(parts))


if __name__ == "__main__":
    sys.exit(main())
