import csv
import io
from fractions import Fraction

import pytest

from binomtail import bounds as B
from binomtail.errors import DomainError
from binomtail.exact import BinomialSpec, prob_exceeds_mean
from binomtail.figures import COLUMNS, FigureSpec, figure_csv


def rows_of(spec):
    return list(csv.DictReader(io.StringIO(figure_csv(spec))))


def test_fig1_anchors():
    rows = {r["p"]: r for r in rows_of(FigureSpec("fig1", n=10, sample_count=100))}
    assert rows["0.5"]["exact_gt_mean"] == "0.376953125"
    assert rows["0.55"]["exact_gt_mean"] == ""
    assert rows["0"]["doerr_g"] == "" and rows["1"]["rt11"] == "0.25"
    big = {r["p"]: r for r in rows_of(FigureSpec("fig1", n=100, sample_count=100))}
    assert abs(Fraction(big["0.5"]["exact_gt_mean"]) - Fraction("0.460205381")) < Fraction(5, 10**10)


def test_fig1_columns_and_size():
    text = figure_csv(FigureSpec("fig1", n=10, sample_count=20))
    lines = text.split("\n")
    assert lines[0] == ",".join(COLUMNS["fig1"])
    assert len(lines) == 1 + 21 + 1 and lines[-1] == ""
    assert "\r" not in text


@pytest.mark.parametrize("n", [10, 100])
def test_fig1_bounds_below_truth(n):
    # each valid bound sits below the exact probability of its own event at the
    # same p, and below the gt_mean lattice minimum of its bin for 1/n <= p < 1
    slack = Fraction(1, 10**11)
    for row in rows_of(FigureSpec("fig1", n=n, sample_count=200)):
        p = Fraction(row["p"])
        spec = BinomialSpec(n, p)
        k = spec.floor_mean
        lattice = prob_exceeds_mean(BinomialSpec(n, Fraction(k, n)))
        candidates = [("gm14", B.bound_greenberg_mohri(n, p)), ("pr16", B.bound_pelekis_ramon(n, p))]
        if 1 <= k <= n - 1:
            candidates.append(("doerr_g", B.bound_g(n, k)))
        if p > 0:
            candidates.append(("rt11", B.bound_rigollet_tong(n, p)))
        for col, bv in candidates:
            if not bv.valid:
                continue
            value = Fraction(row[col])
            assert value <= B.event_probability(bv.event, spec) + slack, (col, row["p"])
            if 1 <= k and p < 1:
                assert value <= lattice + slack, (col, row["p"])


def test_fig1_pr16_ceiling():
    for row in rows_of(FigureSpec("fig1", n=100, sample_count=1000)):
        assert Fraction(row["pr16"]) < Fraction("0.35356")


def test_fig2_rows():
    rows = rows_of(FigureSpec("fig2", sample_count=3, x_min=1))
    assert [r["x"] for r in rows] == ["1", "1.01", "1.02"]
    assert rows[0]["pair_avg"] == "0.5" and rows[0]["pow_x"] == "0" and rows[0]["pow_xm1"] == "1"
    default = rows_of(FigureSpec("fig2"))
    assert default[0]["x"] == "1.01" and default[-1]["x"] == "11" and len(default) == 1000


def test_fig3_rows():
    rows = {r["p"]: r for r in rows_of(FigureSpec("fig3", n=20, sample_count=20))}
    assert rows["0.5"]["plusone_c"] == "0.037"
    assert rows["0"]["plusone_a"] == ""
    assert rows["0.95"]["plusone_a"] == ""  # k = 19 > n-2
    assert rows["0.5"]["pelekis_k"] != ""


def test_csv_stable():
    spec = FigureSpec("fig3", n=12, sample_count=50)
    assert figure_csv(spec) == figure_csv(spec)


@pytest.mark.parametrize("kwargs", [{"figure_id": "fig9"}, {"figure_id": "fig1", "sample_count": 1},
                                    {"figure_id": "fig1", "n": 0}, {"figure_id": "fig2", "x_min": Fraction(1, 2)}])
def test_bad_specs(kwargs):
    with pytest.raises(DomainError):
        FigureSpec(**kwargs)
