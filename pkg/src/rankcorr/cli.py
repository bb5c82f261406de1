"""Command-line interface: ``rankcorr correlate | simulate | study``.

Exit status: 0 success, 1 degenerate data or other statistical error,
2 input/output or parse error, 3 invalid flags.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from .dgp import FAMILIES, DgpSpec, calibrate_alpha, simulate
from .errors import InvalidSpec, RankCorrError
from .estimators import CoefficientId
from .inference import analyze
from .study import QUICK_MC, QUICK_NS, StudySpec, run_study

EXIT_OK, EXIT_STAT, EXIT_IO, EXIT_USAGE = 0, 1, 2, 3
DELIMITERS = (",", ";", "\t")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _level(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid level {text!r}") from None
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"level must lie in (0, 1), got {text}")
    return value


def _finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"number must be finite, got {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _coefficient(text: str) -> CoefficientId:
    try:
        return CoefficientId(text)
    except ValueError:
        choices = ", ".join(c.value for c in CoefficientId)
        raise argparse.ArgumentTypeError(f"unknown coefficient {text!r} (choose from {choices})") from None


def _target(text: str):
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError("target must look like COEFFICIENT=VALUE, e.g. tau=0.4")
    return _coefficient(name), _finite(value)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rankcorr", description="Rank correlations with asymptotic inference.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser(
        "correlate",
        help="coefficients, intervals and tests for a two-column CSV",
        description="With --mode ts the row order of the file is taken as the time order.",
    )
    p.add_argument("input", help="two-column numeric CSV ('-' for stdin); header optional")
    p.add_argument("--coefficient", action="append", type=_coefficient, help="repeatable; default tau")
    p.add_argument("--mode", choices=("iid", "ts"), default="iid")
    p.add_argument("--level", type=_level, default=0.90)
    p.add_argument("--fisher", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--null", type=_finite, default=0.0, help="null value of the general test")
    p.add_argument("--bandwidth", type=_positive_int, default=None)
    p.add_argument("--format", choices=("json", "csv", "table"), default="json")
    p.add_argument("--out")

    p = sub.add_parser("simulate", help="write a simulated sample as CSV")
    _dgp_flags(p)
    p.add_argument("--n", type=_positive_int, default=200)
    p.add_argument("--prerun", type=int, default=None)
    p.add_argument("--out")

    p = sub.add_parser("study", help="Monte Carlo size/power or coverage study")
    _dgp_flags(p)
    p.add_argument("--n", type=_positive_int, action="append", help="repeatable; default 50, 200, 800")
    p.add_argument("--coefficient", action="append", type=_coefficient, help="repeatable; default tau")
    p.add_argument("--task", choices=("size_power", "coverage"), default="size_power")
    p.add_argument("--mc", type=_positive_int, default=1000)
    p.add_argument("--quick", action="store_true", help=f"MC={QUICK_MC}, n in {QUICK_NS}")
    p.add_argument("--level", type=_level, default=0.90)
    p.add_argument("--fisher", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--mode", choices=("iid", "ts"), default="iid")
    p.add_argument("--null-mode", choices=("independence", "general"), default="independence")
    p.add_argument("--bandwidth", type=_positive_int, default=None)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--format", choices=("csv", "table"), default="csv")
    p.add_argument("--out")
    return parser


def _dgp_flags(p):
    p.add_argument("--dgp", required=True, choices=sorted(FAMILIES))
    group = p.add_mutually_exclusive_group()
    group.add_argument("--alpha", type=_finite, default=None)
    group.add_argument("--target", type=_target, default=None, help="calibrate alpha, e.g. tau=0.4")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pi-x", type=_finite, default=0.5)
    p.add_argument("--pi-y", type=_finite, default=0.5)


# ---------------------------------------------------------------------------
# CSV input


def _sniff_delimiter(lines) -> str:
    sample = "\n".join(lines[:20])
    try:
        return csv.Sniffer().sniff(sample, delimiters="".join(DELIMITERS)).delimiter
    except csv.Error:
        counts = {d: sample.count(d) for d in DELIMITERS}
        best = max(counts, key=counts.get)
        return best if counts[best] else ","


def _cell(text: str, lineno: int) -> float:
    try:
        value = float(text.strip())
    except ValueError:
        raise InputError(f"line {lineno}: non-numeric value {text.strip()!r}") from None
    if not math.isfinite(value):
        raise InputError(f"line {lineno}: missing or non-finite value {text.strip()!r}")
    return value


def read_pairs(text: str):
    """Parse a two-column numeric CSV into arrays ``(x, y)``.

    A first row whose cells are not numbers is treated as a header. Empty,
    NaN and infinite cells are errors; blank lines are skipped.
    """
    lines = text.splitlines()
    numbered = [(i + 1, line) for i, line in enumerate(lines) if line.strip()]
    if not numbered:
        raise InputError("input is empty")
    delimiter = _sniff_delimiter([line for _, line in numbered])
    rows = list(csv.reader([line for _, line in numbered], delimiter=delimiter))
    start = 0
    first = [c.strip() for c in rows[0]]
    if len(first) == 2 and not any(_is_number(c) for c in first):
        start = 1
    xs, ys = [], []
    for (lineno, _), row in zip(numbered[start:], rows[start:]):
        if len(row) != 2:
            raise InputError(f"line {lineno}: expected 2 columns, found {len(row)}")
        xs.append(_cell(row[0], lineno))
        ys.append(_cell(row[1], lineno))
    if len(xs) < 2:
        raise InputError("need at least two data rows")
    return np.array(xs), np.array(ys)


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _emit(text: str, out: str | None):
    if not text.endswith("\n"):
        text += "\n"
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {out}: {exc}") from None


def _number(v) -> str:
    v = float(v)
    return str(int(v)) if v.is_integer() and abs(v) < 2**53 else repr(v)


# ---------------------------------------------------------------------------
# subcommands


def _correlate(args) -> int:
    x, y = read_pairs(_read_input(args.input))
    if args.bandwidth is not None and args.bandwidth >= x.size:
        raise UsageError(f"--bandwidth must be smaller than n={x.size}")
    coefficients = args.coefficient or [CoefficientId.TAU]
    results = [
        analyze(
            x, y, c, mode=args.mode, level=args.level, use_fisher=args.fisher,
            null_value=args.null, bandwidth=args.bandwidth, fisher_fallback=True,
        )
        for c in coefficients
    ]
    for r in results:
        for note in r.notes:
            print(f"note: {note}", file=sys.stderr)
    docs = [r.to_dict() for r in results]
    if args.format == "json":
        text = json.dumps(docs[0] if len(docs) == 1 else docs, indent=2)
    else:
        header = ["coefficient", "n", "estimate", "variance", "variance_mode", "ci_lower", "ci_upper",
                  "level", "fisher", "t_general", "p_general", "t_independence", "p_independence"]
        table = [
            [d["coefficient"], d["n"], d["estimate"], d["variance"], d["variance_mode"],
             d["ci"]["lower"], d["ci"]["upper"], d["ci"]["level"], d["ci"]["fisher"],
             d["test_general"]["statistic"], d["test_general"]["p"],
             d["test_independence"]["statistic"], d["test_independence"]["p"]]
            for d in docs
        ]
        text = _csv_text(header, table) if args.format == "csv" else _aligned(header, table)
    _emit(text, args.out)
    return EXIT_OK


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _aligned(header, rows) -> str:
    def fmt(v):
        if isinstance(v, bool):
            return "yes" if v else "no"
        if isinstance(v, float):
            return f"{v:.6g}"
        return str(v)

    cells = [header] + [[fmt(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells)


def _resolve_alpha(args) -> float:
    if args.target is not None:
        cid, value = args.target
        return calibrate_alpha(args.dgp, cid, value)
    return 0.0 if args.alpha is None else args.alpha


def _spec(args, n: int) -> DgpSpec:
    try:
        return DgpSpec(
            args.dgp, _resolve_alpha(args), n, args.seed,
            prerun=getattr(args, "prerun", None), pi_x=args.pi_x, pi_y=args.pi_y,
        )
    except InvalidSpec as exc:
        raise UsageError(str(exc)) from None


def _simulate(args) -> int:
    sample = simulate(_spec(args, args.n))
    rows = [[_number(a), _number(b)] for a, b in zip(sample.x, sample.y)]
    _emit(_csv_text(["x", "y"], rows), args.out)
    return EXIT_OK


def _study(args) -> int:
    ns = tuple(args.n) if args.n else ((QUICK_NS if args.quick else (50, 200, 800)))
    mc = QUICK_MC if args.quick else args.mc
    template = _spec(args, max(ns))
    target = args.target[1] if args.target is not None else None
    try:
        spec = StudySpec(
            template, ns=ns, coefficients=tuple(c.value for c in (args.coefficient or [CoefficientId.TAU])),
            task=args.task, mc=mc, level=args.level, fisher=args.fisher,
            variance_mode="hac" if args.mode == "ts" else "iid", null_mode=args.null_mode,
            seed=args.seed, target=target, bandwidth=args.bandwidth,
        )
    except InvalidSpec as exc:
        raise UsageError(str(exc)) from None
    result = run_study(spec, workers=args.workers)
    _emit(result.to_csv() if args.format == "csv" else result.to_table(), args.out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    handler = {"correlate": _correlate, "simulate": _simulate, "study": _study}[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        print(f"rankcorr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"rankcorr: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except RankCorrError as exc:
        print(f"rankcorr: error: {exc}", file=sys.stderr)
        return EXIT_STAT


if __name__ == "__main__":
    sys.exit(main())
