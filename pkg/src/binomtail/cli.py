"""``binomtail`` command line: evaluate bounds, run verification suites, emit figure data."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction
from io import StringIO

from .bounds import BOUND_IDS, evaluate_bound
from .enclosure import DEFAULT_PRECISION, MAX_PRECISION
from .errors import DomainError
from .figures import DEFAULT_SAMPLES, FIG2_X_MIN, FIGURES, COLUMNS, FigureSpec, figure_rows, write_csv
from .formatting import format_enclosure, format_width
from .report import rational_str
from .verify import RUNNERS, SUITES

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_DOMAIN = 2
EXIT_USAGE = 64
EXIT_IO = 74

PRECISION_ENV = "BINOM_BOUNDS_PRECISION"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {value}")
    return value


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="binomtail", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--precision", type=_positive_int, default=None,
                        help=f"working precision in bits (env {PRECISION_ENV}, default {DEFAULT_PRECISION})")
    common.add_argument("--out", default="-", help="output file, '-' for stdout")

    ev = sub.add_parser("eval", parents=[common], help="evaluate one bound")
    ev.add_argument("--bound", required=True, choices=BOUND_IDS)
    ev.add_argument("--n", type=_positive_int, required=True)
    ev.add_argument("--k", type=int)
    ev.add_argument("--p", help="probability as a/b or an exact decimal")
    ev.add_argument("--t", type=int)
    ev.add_argument("--variant", choices=("a", "b", "c"))
    ev.add_argument("--alpha", type=_rational, help="alpha = np for plusone-small-p")
    ev.add_argument("--format", choices=("csv", "json"), help="default is plain text")

    ve = sub.add_parser("verify", parents=[common], help="run a verification suite")
    ve.add_argument("--suite", required=True, choices=SUITES)
    ve.add_argument("--n-max", type=_positive_int, required=True)
    ve.add_argument("--jobs", type=_positive_int, default=os.cpu_count() or 1)
    ve.add_argument("--format", choices=("csv", "json"), default="json")
    ve.add_argument("--timing", action="store_true", help="record wall time (makes output run-dependent)")

    fi = sub.add_parser("figure", parents=[common], help="emit figure data")
    fi.add_argument("figure", choices=FIGURES)
    fi.add_argument("--n", type=_positive_int)
    fi.add_argument("--samples", type=_positive_int, default=DEFAULT_SAMPLES)
    fi.add_argument("--x-min", type=_rational, default=FIG2_X_MIN, help="first x for fig2")
    fi.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def resolve_precision(flag: int | None) -> int:
    if flag is None:
        env = os.environ.get(PRECISION_ENV)
        if not env:
            return DEFAULT_PRECISION
        try:
            flag = int(env)
        except ValueError:
            raise UsageError(f"{PRECISION_ENV}={env!r} is not an integer")
    if not 16 <= flag <= MAX_PRECISION:
        raise UsageError(f"precision {flag} outside [16..{MAX_PRECISION}]")
    return flag


def _emit(text: str, out: str):
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _bound_record(bv) -> dict:
    enc = bv.value
    rec = {
        "bound": bv.bound_id,
        "value": format_enclosure(enc),
        "exact": rational_str(enc.lo) if enc.is_exact else None,
        "enclosure": enc.to_json(),
        "valid": bv.valid,
        "strict": bv.strict,
        "event": bv.event.value,
    }
    if bv.note:
        rec["note"] = bv.note
    return rec


def cmd_eval(args, bits: int) -> int:
    bv = evaluate_bound(args.bound, args.n, p=args.p, k=args.k, t=args.t, alpha=args.alpha,
                        variant=args.variant, bits=bits)
    rec = _bound_record(bv)
    if args.format == "json":
        text = json.dumps(rec, sort_keys=True, indent=1) + "\n"
    elif args.format == "csv":
        enc = rec.pop("enclosure")
        rec.update(lo=enc["lo"], hi=enc["hi"], bits=enc["bits"], exact=rec["exact"] or "", note=rec.get("note", ""))
        fields = ["bound", "value", "exact", "lo", "hi", "bits", "valid", "strict", "event", "note"]
        buf = StringIO()
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerow(rec)
        text = buf.getvalue()
    else:
        enc = bv.value
        lines = [f"bound: {bv.bound_id}"]
        if enc.is_exact:
            lines.append(f"value: {rec['value']} (exact {rec['exact']})")
        else:
            lines.append(f"value: {rec['value']}")
            lines.append(f"enclosure: [{rec['enclosure']['lo']}, {rec['enclosure']['hi']}] "
                         f"width {format_width(enc.width)} at {enc.precision_bits} bits")
        lines.append(f"valid: {str(bv.valid).lower()}")
        lines.append(f"strict: {str(bv.strict).lower()}")
        lines.append(f"event: {bv.event.value}")
        if bv.note:
            lines.append(f"note: {bv.note}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def _report_csv(report) -> str:
    buf = StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["check", "params", "verdict", "witness"])
    for c in report.cells:
        writer.writerow([c.check, json.dumps(c.params, sort_keys=True), c.verdict.value,
                         json.dumps(c.witness, sort_keys=True)])
    return buf.getvalue()


def cmd_verify(args, bits: int) -> int:
    try:
        report = RUNNERS[args.suite](args.n_max, bits, args.jobs, args.timing)
    except DomainError as err:
        raise UsageError(str(err))
    text = report.dumps() if args.format == "json" else _report_csv(report)
    _emit(text, args.out)
    summary = sys.stderr if args.out == "-" else sys.stdout
    print(report.summary_line(), file=summary)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_figure(args, bits: int) -> int:
    spec = FigureSpec(args.figure, args.n, args.samples, bits, args.x_min)
    if args.format == "json":
        cols = COLUMNS[spec.figure_id]
        rows = [dict(zip(cols, row)) for row in figure_rows(spec)]
        _emit(json.dumps({"figure": spec.figure_id, "n": spec.n, "rows": rows}, indent=1) + "\n", args.out)
    elif args.out == "-":
        write_csv(spec, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_csv(spec, fh)
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "figure": cmd_figure}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as stop:  # --help, or a usage error already reported
        return stop.code
    try:
        bits = resolve_precision(args.precision)
        return COMMANDS[args.command](args, bits)
    except UsageError as err:
        print(f"binomtail: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as err:
        print(f"binomtail: domain error: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as err:
        print(f"binomtail: I/O error: {err}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
