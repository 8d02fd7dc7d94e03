import json
import subprocess
import sys
from fractions import Fraction

from binomtail.cli import EXIT_DOMAIN, EXIT_FAIL, EXIT_IO, EXIT_OK, EXIT_USAGE, main, resolve_precision


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_g_bound(capsys):
    code, out, _ = run(capsys, "eval", "--bound", "doerr-g", "--n", "20", "--k", "3", "--format", "json")
    assert code == EXIT_OK
    rec = json.loads(out)
    assert Fraction(rec["enclosure"]["lo"]) > Fraction("0.25017") and rec["valid"]
    assert Fraction(rec["enclosure"]["hi"]) < Fraction("0.25018")


def test_eval_plusone_c_text(capsys):
    code, out, _ = run(capsys, "eval", "--bound", "plusone-c", "--n", "10", "--k", "4")
    assert code == EXIT_OK
    assert "value: 0.037 (exact 37/1000)" in out and "event: gt_mean_plus_one" in out


def test_eval_pelekis_csv(capsys):
    code, out, _ = run(capsys, "eval", "--bound", "pelekis-k", "--n", "10", "--p", "1/2", "--t", "6", "--format", "csv")
    assert code == EXIT_OK
    header, row = out.strip().split("\n")
    assert dict(zip(header.split(","), row.split(",")))["exact"] == "3/64"


def test_eval_decimal_p_is_exact(capsys):
    code, out, _ = run(capsys, "eval", "--bound", "rt11", "--n", "10", "--p", "0.05", "--format", "json")
    assert json.loads(out)["exact"] == "1/20"


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "eval", "--bound", "nope", "--n", "3")[0] == EXIT_USAGE
    assert run(capsys, "eval", "--bound", "doerr-g", "--n", "3", "--k", "5")[0] == EXIT_DOMAIN
    code, _, err = run(capsys, "eval", "--bound", "pelekis-k", "--n", "10", "--p", "1/2", "--t", "3")
    assert code == EXIT_DOMAIN and "np < t" in err
    assert run(capsys, "verify", "--suite", "all", "--n-max", "2")[0] == EXIT_USAGE
    missing = tmp_path / "nowhere" / "r.json"
    assert run(capsys, "verify", "--suite", "eq2", "--n-max", "6", "--out", str(missing))[0] == EXIT_IO
    assert run(capsys, "eval", "--bound", "rt11", "--n", "3", "--p", "1/2", "--precision", "4")[0] == EXIT_USAGE
    assert main([]) == EXIT_USAGE
    assert main(["--help"]) == EXIT_OK


def test_verify_writes_report(capsys, tmp_path):
    out = tmp_path / "t3.json"
    code, stdout, _ = run(capsys, "verify", "--suite", "theorem3", "--n-max", "12", "--jobs", "1", "--out", str(out))
    assert code == EXIT_OK
    assert stdout.startswith("PASS theorem3:") and "holds_with_equality=1" in stdout
    assert json.loads(out.read_text())["summary"]["passed"] is True


def test_verify_stdout_summary_on_stderr(capsys):
    code, out, err = run(capsys, "verify", "--suite", "all", "--n-max", "3", "--jobs", "1")
    assert code == EXIT_OK and json.loads(out)["suite"] == "all" and err.startswith("PASS all")


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "eq2", "--n-max", "8", "--jobs", "1", "--format", "csv")
    assert code == EXIT_OK and out.startswith("check,params,verdict,witness\n")


def test_figure_to_file(capsys, tmp_path):
    out = tmp_path / "fig1.csv"
    assert run(capsys, "figure", "fig1", "--n", "10", "--samples", "10", "--out", str(out))[0] == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "p,exact_gt_mean,gm14,pr16,doerr_g,rt11,width"
    assert lines[6].startswith("0.5,0.376953125,")


def test_figure_json(capsys):
    code, out, _ = run(capsys, "figure", "fig2", "--samples", "2", "--x-min", "1", "--format", "json")
    assert code == EXIT_OK and json.loads(out)["rows"][0]["pair_avg"] == "0.5"


def test_precision_precedence(monkeypatch):
    monkeypatch.delenv("BINOM_BOUNDS_PRECISION", raising=False)
    assert resolve_precision(None) == 128
    monkeypatch.setenv("BINOM_BOUNDS_PRECISION", "256")
    assert resolve_precision(None) == 256
    assert resolve_precision(64) == 64


def test_env_precision_used(capsys, monkeypatch):
    monkeypatch.setenv("BINOM_BOUNDS_PRECISION", "64")
    code, out, _ = run(capsys, "eval", "--bound", "doerr-g", "--n", "20", "--k", "3", "--format", "json")
    assert json.loads(out)["enclosure"]["bits"] == 64


def test_failing_report_exits_one(capsys, monkeypatch):
    from binomtail import cli
    from binomtail.report import Cell, VerificationReport, Verdict

    def fake(n_max, bits, jobs, timing):
        return VerificationReport("eq2", {}, [Cell("x", {"n": 1}, Verdict.VIOLATED)], bits)

    monkeypatch.setitem(cli.RUNNERS, "eq2", fake)
    code, _, err = run(capsys, "verify", "--suite", "eq2", "--n-max", "5")
    assert code == EXIT_FAIL and err.startswith("FAIL eq2")


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "binomtail.cli", "eval", "--bound", "gm14", "--n", "4", "--p", "1/2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "value: 0.25" in proc.stdout
