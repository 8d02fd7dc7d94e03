"""CSV data behind the three figures: tail bounds, +1 bounds and the monotone power curves."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from . import bounds as B
from .enclosure import DEFAULT_PRECISION, Enclosure, power
from .errors import DomainError
from .exact import BinomialSpec, prob_exceeds_mean
from .formatting import format_enclosure, format_rational, format_width

FIGURES = ("fig1", "fig2", "fig3")
DEFAULT_N = {"fig1": 10, "fig3": 20}
DEFAULT_SAMPLES = 1000
FIG2_STEP = Fraction(1, 100)
FIG2_X_MIN = Fraction(101, 100)

COLUMNS = {
    "fig1": ["p", "exact_gt_mean", "gm14", "pr16", "doerr_g", "rt11", "width"],
    "fig2": ["x", "pow_x", "pow_xm1", "pow_xmhalf", "pair_avg", "width"],
    "fig3": ["p", "plusone_a", "plusone_b", "plusone_c", "pelekis_k", "width"],
}


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    n: int | None = None
    sample_count: int = DEFAULT_SAMPLES
    precision_bits: int = DEFAULT_PRECISION
    x_min: Fraction = FIG2_X_MIN

    def __post_init__(self):
        if self.figure_id not in FIGURES:
            raise DomainError(f"unknown figure {self.figure_id!r}; expected one of {', '.join(FIGURES)}")
        if self.sample_count < 2:
            raise DomainError(f"sample count must be at least 2, got {self.sample_count}")
        if self.figure_id != "fig2":
            if self.n is None:
                object.__setattr__(self, "n", DEFAULT_N[self.figure_id])
            if self.n < 1:
                raise DomainError(f"n={self.n} must be positive")
        if Fraction(self.x_min) < 1:
            raise DomainError(f"x_min={self.x_min} must be at least 1")


def _try(fn):
    """Formula value, or None where the formula itself is undefined."""
    try:
        return fn()
    except DomainError:
        return None


def _row(first: str, values: list) -> list[str]:
    cells = [first]
    width = 0
    for v in values:
        if v is None:
            cells.append("")
        elif isinstance(v, Enclosure):
            cells.append(format_enclosure(v))
            width = max(width, v.width)
        else:
            cells.append(format_rational(v))
    cells.append(format_width(width))
    return cells


def fig1_rows(n: int, samples: int, bits: int):
    for i in range(samples + 1):
        p = Fraction(i, samples)
        k = BinomialSpec(n, p).floor_mean
        lattice = (n * p).denominator == 1
        values = [
            prob_exceeds_mean(BinomialSpec(n, p)) if lattice else None,
            B.bound_greenberg_mohri(n, p, bits).value,
            B.bound_pelekis_ramon(n, p, bits).value,
            _try(lambda: B.bound_g(n, k, bits).value),
            _try(lambda: B.bound_rigollet_tong(n, p, bits).value),
        ]
        yield _row(format_rational(p), values)


def fig3_rows(n: int, samples: int, bits: int):
    for i in range(samples + 1):
        p = Fraction(i, samples)
        k = BinomialSpec(n, p).floor_mean
        values = [_try(lambda v=v: B.bound_plusone(n, k, v, bits).value) for v in "abc"]
        values.append(_try(lambda: B.bound_pelekis_k(n, p, k + 2, bits).value))
        yield _row(format_rational(p), values)


def fig2_rows(samples: int, bits: int, x_min: Fraction = FIG2_X_MIN):
    half = Fraction(1, 2)
    for i in range(samples):
        x = Fraction(x_min) + i * FIG2_STEP
        base = 1 - 1 / x
        a = power(base, x, bits)
        b = power(base, x - 1, bits)
        values = [a, b, power(base, x - half, bits), (a + b) * half]
        yield _row(format_rational(x), values)


def figure_rows(spec: FigureSpec):
    if spec.figure_id == "fig1":
        return fig1_rows(spec.n, spec.sample_count, spec.precision_bits)
    if spec.figure_id == "fig3":
        return fig3_rows(spec.n, spec.sample_count, spec.precision_bits)
    return fig2_rows(spec.sample_count, spec.precision_bits, spec.x_min)


def write_csv(spec: FigureSpec, stream) -> int:
    """Write header plus rows to ``stream``; returns the number of data rows."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(COLUMNS[spec.figure_id])
    count = 0
    for row in figure_rows(spec):
        writer.writerow(row)
        count += 1
    return count


def figure_csv(spec: FigureSpec) -> str:
    buf = io.StringIO()
    write_csv(spec, buf)
    return buf.getvalue()
