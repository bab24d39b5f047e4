import csv
import io
import json
import subprocess
import sys

import pytest

from cwlap import bessel
from cwlap.cli import RunConfig, main
from cwlap.errors import DomainError


@pytest.fixture
def run(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("CWLAP_CACHE", str(tmp_path / "zeros.csv"))

    def _run(*argv):
        code = main(list(argv))
        out, err = capsys.readouterr()
        return code, out, err

    yield _run
    bessel.configure_cache(None)


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_spectrum(run):
    code, out, _ = run("spectrum", "--count", "6")
    assert code == 0
    table = rows(out)
    assert [(r["m"], r["p"]) for r in table] == [("0", "1"), ("1", "1"), ("1", "1"), ("2", "1"), ("2", "1"), ("0", "2")]
    assert float(table[0]["lambda"]) == pytest.approx(5.783185962946784, abs=1e-12)


def test_spectrum_json_round_trip(run):
    from cwlap.disk_spectrum import SpectrumTable, enumerate_spectrum

    code, out, _ = run("spectrum", "--count", "12", "--format", "json")
    assert code == 0
    assert SpectrumTable.from_json(out) == enumerate_spectrum(12)


def test_body_outputs(run, tmp_path):
    svg, rad = tmp_path / "b.svg", tmp_path / "r.csv"
    code, out, _ = run("body", "--coeff", "a3=0.1,b5=0.02i", "--eps", "0.2", "--svg", str(svg), "--radius-csv", str(rad))
    assert code == 0
    row = rows(out)[0]
    assert float(row["width_min"]) == pytest.approx(2.0, abs=1e-12)
    assert float(row["width_max"]) == pytest.approx(2.0, abs=1e-12)
    assert svg.read_text().startswith("<svg")
    assert rad.read_text().startswith("theta,")


def test_invalid_body_is_usage_error(run):
    code, _, err = run("body", "--coeff", "a3=0.1", "--eps", "0.9")
    assert code == 2 and "epsilon_max" in err
    code, _, err = run("body", "--coeff", "a4=0.1", "--eps", "0.1")
    assert code == 2


def test_expand(run):
    code, out, _ = run("expand", "--kappa", "6", "--coeff", "a3=0.1", "--eps", "0.04", "--format", "json")
    assert code == 0
    data = json.loads(out)[0]
    assert data["lambda_pred"] == pytest.approx(30.469873789154, abs=1e-9)
    assert (data["m"], data["p"], data["branch"]) == (0, 2, "simple")


def test_certify_single_and_suites(run):
    code, out, _ = run("certify", "--k", "3", "--m", "1", "--p", "2")
    assert code == 0 and rows(out)[0]["sign"] == "Negative"
    code, out, _ = run("certify", "--suite", "lemma6")
    assert code == 0 and {r["sign"] for r in rows(out)} <= {"Positive", "Zero"}
    code, out, _ = run("certify", "--suite", "appendix-c", "--m-cap", "10", "--p-cap", "5", "--format", "json")
    assert code == 0 and {c["sign"] for c in json.loads(out)} == {"Negative"}


def test_certify_violation_exit(run, monkeypatch):
    import cwlap.cli as cli
    from cwlap.errors import SuiteViolation

    def failing(strict=True):
        if strict:
            raise SuiteViolation("lemma6 suite: synthetic")
        return []

    monkeypatch.setattr(cli, "lemma6_suite", failing)
    code, _, err = run("certify", "--suite", "lemma6")
    assert code == 1 and "synthetic" in err


def test_certify_usage(run):
    assert run("certify", "--k", "3")[0] == 2
    assert run("certify", "--suite", "lemma6", "--k", "3")[0] == 2
    assert run("certify", "--suite", "bogus")[0] == 2


def test_classify(run, tmp_path):
    target = tmp_path / "cls.csv"
    code, out, _ = run("classify", "--max-kappa", "50", "--output", str(target))
    assert code == 0 and out == ""
    table = rows(target.read_text())
    assert {int(r["kappa"]) for r in table if r["verdict"] == "LocalMin"} == {1, 3, 5, 8, 12, 17, 27, 34, 42}
    assert run("classify", "--max-kappa", "60")[0] == 2


def test_solve(run):
    code, out, _ = run("solve", "--kappa", "1", "--coeff", "a3=0.1", "--eps", "0.02")
    assert code == 0
    row = rows(out)[0]
    assert float(row["lambda_num"]) == pytest.approx(5.783853811727975, abs=1e-9)
    assert float(row["residual"]) < 1e-7


def test_verify_exit_codes(run):
    code, out, _ = run("verify", "--kappa", "1", "--coeff", "a3=0.1", "--eps", "0.04,0.02,0.01")
    assert code == 0
    assert float(rows(out)[0]["slope"]) >= 2.7
    code, _, err = run("verify", "--kappa", "1", "--coeff", "a3=0.1", "--eps", "0.04,0.02,0.01", "--min-order", "9")
    assert code == 1 and "below" in err
    assert run("verify", "--kappa", "1", "--coeff", "a3=0.1", "--eps", "0.01,0.02,0.04")[0] == 2
    assert run("verify", "--kappa", "1", "--coeff", "a3=0.1", "--eps", "x,y,z")[0] == 2


def test_usage_errors(run):
    assert run()[0] == 2
    assert run("nonsense")[0] == 2
    assert run("spectrum")[0] == 2
    assert run("spectrum", "--count", "0")[0] == 2
    assert run("--help")[0] == 0


def test_config_file(run, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\noutput_format = json\n")
    code, out, _ = run("spectrum", "--count", "2", "--config", str(cfg))
    assert code == 0 and json.loads(out)[0]["kappa"] == 1
    code, out, _ = run("spectrum", "--count", "2", "--config", str(cfg), "--format", "csv")
    assert out.startswith("kappa,")
    cfg.write_text("colour = blue\n")
    code, _, err = run("spectrum", "--count", "2", "--config", str(cfg))
    assert code == 2 and "unknown key" in err


def test_run_config_parsing(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("basis_size = 40\nscan_step = 0.02\nsolver_tol=1e-9\n")
    rc = RunConfig.from_file(cfg)
    assert rc.solver_overrides() == {"scan_step": 0.02, "tol": 1e-9, "basis_size": 40}
    cfg.write_text("just words\n")
    with pytest.raises(DomainError):
        RunConfig.from_file(cfg)


def test_cache_env_and_flag(run, tmp_path, monkeypatch):
    env_cache = tmp_path / "zeros.csv"
    # certify always asks the (fresh) zero table; the spectrum itself is memoised
    run("certify", "--k", "3", "--m", "19", "--p", "10")
    assert any(line.startswith("19,10,") for line in env_cache.read_text().splitlines())
    flag_cache = tmp_path / "other.csv"
    run("certify", "--k", "3", "--m", "17", "--p", "9", "--cache", str(flag_cache))
    assert any(line.startswith("17,9,") for line in flag_cache.read_text().splitlines())


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "cwlap.cli", "spectrum", "--count", "3", "--cache", str(tmp_path / "z.csv")],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "kappa,m,p,j,lambda,branch"
