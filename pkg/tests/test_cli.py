import csv
import io
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from fockforge import cli

SCHEMA = json.loads(resources.files("fockforge").joinpath("schemas/output.schema.json").read_text())


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_partition_finite_row(capsys):
    code, out, _ = run(capsys, "partition", "--weight", "1", "--beta", "0.2206356")
    assert code == 0
    (row,) = read_csv(out)
    assert row["status"] == "finite"
    assert float(row["value"]) == pytest.approx(1.5, abs=1e-6)
    assert float(row["truncated"]) == pytest.approx(float(row["value"]), abs=float(row["tail_bound"]))


def test_partition_divergent_row(capsys):
    code, out, _ = run(capsys, "partition", "--weight", "1", "--beta", "0.1103178")
    assert code == 0
    (row,) = read_csv(out)
    assert row["status"] == "divergent" and row["value"] == "" and row["tail_bound"] == ""


def test_partition_range_csv(capsys):
    code, out, _ = run(capsys, "partition", "--weight", "1", "--beta-range", "0.12", "0.5", "10", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "beta,q,status,value,truncated,tail_bound"
    rows = read_csv(out)
    assert len(rows) == 10
    assert [float(r["beta"]) for r in rows] == sorted(float(r["beta"]) for r in rows)
    # q uses scientific notation with 12 significant digits
    assert "e" in rows[0]["q"] and len(rows[0]["q"].split("e")[0].replace(".", "")) == 12


@pytest.mark.parametrize(
    "argv",
    [
        ["partition", "--weight", "1", "--beta", "0"],
        ["partition", "--weight", "1", "--beta", "-0.3"],
        ["partition", "--weight", "0", "--beta", "0.3"],
        ["partition", "--weight", "1", "--beta-range", "0.5", "0.1", "4"],
        ["partition", "--weight", "1", "--beta-range", "0.1", "0.5", "1"],
        ["partition", "--weight", "1"],
        ["partition", "--weight", "1", "--beta", "0.3", "--format", "xml"],
        ["beta-max", "--weight", "0"],
        ["beta-max", "--weights", "a..b"],
        ["verify", "--suite", "nonsense"],
        ["bogus"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_beta_max_rows(capsys):
    code, out, _ = run(capsys, "beta-max", "--weight", "1")
    assert code == 0
    (row,) = read_csv(out)
    assert row["beta_n"].startswith("0.110317800")
    code, out, _ = run(capsys, "beta-max", "--weight", "2")
    assert read_csv(out)[0]["beta_n"].startswith("0.0765872")
    code, out, _ = run(capsys, "beta-max", "--weights", "1..8")
    betas = [float(r["beta_n"]) for r in read_csv(out)]
    assert len(betas) == 8 and all(b < a for a, b in zip(betas, betas[1:]))


def test_spectrum_and_multiplicities(capsys):
    code, out, _ = run(capsys, "spectrum", "-n", "2", "--d", "3")
    rows = read_csv(out)
    assert [float(r["eigenvalue"]) for r in rows] == pytest.approx([12.5663706144, 18.8495559215, 25.1327412287])
    code, out, _ = run(capsys, "multiplicities", "-n", "1", "--m-max", "70")
    rows = read_csv(out)
    assert int(rows[70]["nu"]) == 2**69


@pytest.mark.parametrize(
    "argv",
    [
        ["partition", "-n", "1", "--beta-range", "0.1", "0.5", "5"],
        ["beta-max", "--weights", "1,2,3"],
        ["spectrum", "-n", "1", "--d", "4"],
        ["multiplicities", "-n", "3", "--m-max", "12"],
        ["verify", "--suite", "moments", "--suite", "thermo"],
    ],
)
def test_json_output_validates(argv, capsys):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)


def test_schema_rejects_bad_rows():
    bad = {"command": "partition", "n": 1, "columns": ["beta", "q", "status", "value", "truncated", "tail_bound"],
           "rows": [{"beta": 0.1, "q": 1.2, "status": "divergent", "value": 3.0, "truncated": 1.0, "tail_bound": None}]}
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(bad, SCHEMA)


def test_out_path(tmp_path, capsys):
    target = tmp_path / "rows.csv"
    code, out, _ = run(capsys, "beta-max", "--weights", "1..3", "--out", str(target))
    assert code == 0 and out == ""
    assert len(read_csv(target.read_text())) == 3


def test_verify_suite_selection(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "commutation", "--d", "3", "--N", "4")
    assert code == 0
    rows = read_csv(out)
    assert [r["suite"] for r in rows] == ["commutation"]
    assert rows[0]["status"] == "pass" and "d=3, N=4" in rows[0]["detail"]


def test_verify_moments_reports_catalan(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "moments")
    assert code == 0
    assert "catalan: 1, 2, 5, 14, 42" in out


def test_verify_failure_exit_code_and_dump(monkeypatch, capsys):
    from fockforge import fock, verify

    def broken(rng, **_):
        space = fock.TruncatedFockSpace(1, 2)
        return verify.SuiteResult("broken", False, 1.0, "forced", {"id": fock.identity(space)})

    monkeypatch.setitem(verify.SUITES, "commutation", broken)
    code, out, err = run(capsys, "verify", "--suite", "commutation")
    assert code == 1
    assert "FAIL" in out
    dump = json.loads(err.splitlines()[0])
    assert dump["suite"] == "broken"
    assert dump["operators"]["id"]["entries"] == [[0, 0, 1.0, 0.0], [1, 1, 1.0, 0.0], [2, 2, 1.0, 0.0]]


def test_verify_all_suites_pass_and_is_deterministic(capsys):
    code, first, _ = run(capsys, "verify", "--seed", "42")
    assert code == 0
    assert "FAIL" not in first
    _, second, _ = run(capsys, "verify", "--seed", "42")
    assert first == second


def test_module_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "fockforge", "beta-max", "--weight", "1", "--format", "json"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(result.stdout)["rows"][0]["beta_n"] == pytest.approx(0.110317800076)
