import json
from fractions import Fraction

import pytest

from binomtail import verify as V
from binomtail.errors import DomainError
from binomtail.exact import BinomialSpec, tail_ge
from binomtail.report import Cell, VerificationReport, Verdict


def bad_cells(report):
    return [c for c in report.cells if c.verdict in (Verdict.VIOLATED, Verdict.INDETERMINATE)]


@pytest.mark.parametrize("name", ["lemma6", "theorem3", "theorem5", "eq2", "soundness"])
def test_suites_pass_small(name):
    report = V.RUNNERS[name](12)
    assert report.passed, bad_cells(report)[:3]
    assert report.summary["cells"] == len(report.cells) > 0


def test_preconditions():
    with pytest.raises(DomainError):
        V.verify_all(2)
    with pytest.raises(DomainError):
        V.verify_eq2(3)
    with pytest.raises(DomainError):
        V.verify_theorem5(2)


def test_lemma6_cells():
    report = V.verify_lemma6(3)
    cells = {(c.check, c.params["n"], c.params["k"], c.params["p"]): c for c in report.cells}
    c31 = cells[("lemma6/lattice", 3, 1, "1/3")]
    assert c31.witness["exact"] == "7/27" and c31.verdict is Verdict.HOLDS
    assert cells[("lemma6/lattice", 2, 1, "1/2")].verdict is Verdict.HOLDS
    assert len(report.select("lemma6/offlattice")) == 5 * (1 + 2)


def test_offlattice_points_stay_in_bin():
    for n in range(2, 30):
        for k in range(1, n):
            pts = V.offlattice_points(n, k)
            assert len(set(pts)) == 5
            assert all(BinomialSpec(n, p).floor_mean == k and (n * p).denominator != 1 for p in pts)


def test_theorem3_equality_and_anchors():
    report = V.verify_theorem3(20)
    equal = [c for c in report.cells if c.verdict is Verdict.HOLDS_WITH_EQUALITY]
    assert [(c.check, c.params) for c in equal] == [("theorem3/lattice", {"n": 2, "k": 1})]
    anchors = {(c.params["n"], c.params["k"]): c.witness["truncated"] for c in report.select("theorem3/anchor")}
    assert anchors == {(9, 4): "0.3655", (10, 4): "0.3668", (11, 4): "0.3678", (10, 5): "0.3769"}


def test_theorem3_middle_cases_strict():
    # the 91 cells n <= 19, k in 3..n-4 are all strictly above 1/4
    cells = [(n, k) for n in range(2, 20) for k in range(3, n - 3)]
    assert len(cells) == 91
    assert all(tail_ge(BinomialSpec(n, Fraction(k, n)), k + 1) > Fraction(1, 4) for n, k in cells)


def test_proof_branches_cover_lattice():
    for n in range(2, 121):
        for k in range(1, n):
            assert V.proof_branch(n, k) != "uncovered", (n, k)
    assert V.proof_branch(2, 1) == "k=n-1"
    assert V.proof_branch(40, 17) == "g(n,k)>1/4 via g(20,3)"


def test_theorem5_anchors():
    report = V.verify_theorem5(12)
    h = {(c.params["n"], c.params["k"]): c.witness["truncated"] for c in report.select("theorem5/h-anchor")}
    assert h == {(6, 1): "0.0391", (9, 2): "0.0392", (9, 3): "0.0392", (10, 4): "0.0442", (10, 5): "0.0394"}
    q = {(c.params["n"], c.params["k"]): c.witness["truncated"] for c in report.select("theorem5/q-anchor")}
    assert q == {(7, 2): "0.1082", (8, 2): "0.1138", (8, 3): "0.1374", (9, 4): "0.1573"}
    minima = sorted(c.witness["truncated"] for c in report.select("theorem5/closed-form-min"))
    assert minima == ["0.0370", "0.0507", "0.0579"]
    q31 = [c for c in report.select("theorem5/lattice") if c.params == {"n": 3, "k": 1}][0]
    assert q31.witness["exact"] == "1/27"


def test_closed_forms():
    for gap in (2, 3, 4):
        for n in range(gap + 1, 40):
            k = n - gap
            assert V.closed_form_q(n, gap) == tail_ge(BinomialSpec(n, Fraction(k, n)), k + 2)


def test_eq2_witnesses_found_by_search():
    found = V.find_shift_witnesses(60)
    assert found == {"violation": (5, 4), "reverse_violation": (4, 3)}
    report = V.verify_eq2(20)
    assert len(report.select("eq2/witness")) == 2
    assert all(c.verdict is Verdict.HOLDS for c in report.select("eq2/witness"))


def test_foundations_small():
    report = V.verify_foundations(12)
    assert report.passed, bad_cells(report)[:3]
    assert report.grid["limits"]["robbins"] == 12
    median = [c for c in report.select("foundations/median-mode") if c.params == {"n": 10, "k": 3}][0]
    assert median.witness == {"median": 3, "unique": True, "mode": 3}
    assert report.count(Verdict.HOLDS_WITH_EQUALITY, "foundations/domination-t0") == len(
        report.select("foundations/domination-t0"))


def test_report_round_trip():
    report = V.verify_all(4)
    text = report.dumps()
    again = VerificationReport.loads(text)
    assert again.dumps() == text
    obj = json.loads(text)
    assert set(obj) == {"suite", "grid", "cells", "summary", "precision", "duration_s"}
    assert obj["duration_s"] is None


def test_loads_rejects_tampered_summary():
    obj = json.loads(V.verify_lemma6(3).dumps())
    obj["summary"]["holds"] += 1
    with pytest.raises(ValueError):
        VerificationReport.loads(json.dumps(obj))


def test_summary_and_pass_rule():
    cells = [Cell("x", {"n": 1}, Verdict.HOLDS), Cell("x", {"n": 2}, Verdict.HOLDS_WITH_EQUALITY)]
    report = VerificationReport("t", {}, cells, 128)
    assert report.passed and report.summary_line().startswith("PASS t: 2 cells")
    report = VerificationReport("t", {}, cells + [Cell("x", {"n": 3}, Verdict.INDETERMINATE)], 128)
    assert not report.passed and report.summary["indeterminate"] == 1


def test_parallel_matches_serial():
    assert V.verify_theorem5(14, jobs=2).dumps() == V.verify_theorem5(14, jobs=1).dumps()


def test_timing_flag():
    assert V.verify_eq2(6, timing=True).duration_s is not None


@pytest.mark.slow
def test_soundness_to_120():
    report = V.verify_soundness(120)
    assert report.passed, bad_cells(report)[:3]
    # equality only where a non-strict claim meets its event exactly
    for c in report.cells:
        if c.verdict is Verdict.HOLDS_WITH_EQUALITY:
            assert c.params["n"] <= 2


@pytest.mark.slow
def test_shape_properties_to_120():
    t3 = V.verify_theorem3(120)
    t5 = V.verify_theorem5(120)
    for report, prefix in ((t3, "theorem3/g-"), (t5, "theorem5/h-")):
        cells = report.select(prefix)
        assert cells and all(c.verdict is Verdict.HOLDS for c in cells if "anchor" not in c.check)
