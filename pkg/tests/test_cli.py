"""Command-line surface: formats, determinism, exit codes, schema."""

import json
from pathlib import Path

import jsonschema

from overcolor.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_coeff_csv_rows(capsys):
    code, out = run(capsys, "coeff", "abar", "--s", "2", "--upto", "10", "--format", "csv")
    assert code == 0
    rows = out.split("\r\n")
    assert rows[0] == "0,1"
    assert rows[1] == "1,4"
    assert rows[2] == "2,10"
    assert rows[3] == "3,24"


def test_coeff_other_families(capsys):
    code, out = run(capsys, "coeff", "pbar", "--upto", "4", "--format", "csv")
    assert code == 0
    assert out.split("\r\n")[:5] == ["0,1", "1,2", "2,4", "3,8", "4,14"]
    code, out = run(capsys, "coeff", "power", "--r", "4", "--upto", "3", "--format", "csv")
    assert code == 0
    assert out.split("\r\n")[:4] == ["0,1", "1,-4", "2,2", "3,8"]


def test_verify_dissection_exit_zero(capsys):
    code, out = run(capsys, "verify", "dissection", "edf2", "--upto", "300")
    assert code == 0
    assert "PASS" in out


def test_verify_lemma_strengthen_exits_one(capsys):
    code, out = run(
        capsys, "verify", "lemma", "e2n1", "--k", "1", "--alpha", "1",
        "--upto", "150", "--strengthen",
    )
    assert code == 1


def test_verify_theorem_json_schema(capsys):
    code, out = run(
        capsys, "verify", "theorem", "T1.1", "--primes", "3,5,7", "--m", "1,2",
        "--alpha", "1", "--k", "0,1", "--n-count", "20", "--format", "json",
    )
    assert code == 0
    obj = json.loads(out)
    schema = json.loads(
        (Path(__file__).resolve().parents[1] / "src" / "overcolor" / "report_schema.json").read_text()
    )
    jsonschema.validate(obj, schema)
    assert list(obj.keys()) == [
        "claim", "grid", "truncation", "ring", "checked", "failures", "witnesses",
    ]
    assert obj["failures"] == []
    assert obj["ring"] == "mod2^64"


def test_report_bytes_are_deterministic(capsys):
    args = (
        "verify", "theorem", "T1.5", "--primes", "3,5", "--alpha", "1,3",
        "--beta", "1", "--k", "0", "--n-count", "10", "--format", "json",
    )
    _, first = run(capsys, *args)
    _, second = run(capsys, *args, "--parallel", "3")
    assert first == second


def test_no_floats_in_reports(capsys):
    _, out = run(
        capsys, "verify", "newman", "62", "--r", "1", "--s", "10", "--q", "2",
        "--primes", "3", "--upto", "200", "--format", "json",
    )
    obj = json.loads(out)

    def no_floats(x):
        assert not isinstance(x, float), x
        if isinstance(x, dict):
            for v in x.values():
                no_floats(v)
        elif isinstance(x, list):
            for v in x:
                no_floats(v)

    no_floats(obj)
    # the fitted rational rides along as a fraction string
    assert any(w["hypothesis"] == "alpha" and "/" in w["value"] for w in obj["witnesses"])


def test_usage_errors_exit_two(capsys):
    assert main(["verify", "lemma", "zzz", "--upto", "10"]) == 2
    assert main(["verify", "chain", "thm1.2", "--primes", "5", "--upto", "100"]) == 2
    assert main(["coeff", "power", "--upto", "5"]) == 2


def test_bad_prime_list_rejected(capsys):
    code = main(["verify", "theorem", "T1.1", "--primes", "3,4"])
    assert code == 2


def test_budget_exit_three(capsys):
    code = main([
        "verify", "theorem", "T1.9", "--primes", "13", "--k", "1",
        "--max-truncation", "1000000",
    ])
    assert code == 3


def test_out_file_and_env_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("OVERCOLOR_OUT_DIR", str(tmp_path))
    code = main([
        "verify", "dissection", "edf4", "--upto", "100",
        "--format", "json", "--out", "reports/edf4.json",
    ])
    assert code == 0
    written = tmp_path / "reports" / "edf4.json"
    assert written.exists()
    obj = json.loads(written.read_text())
    assert obj["claim"] == "dissection:edf4"


def test_timing_sidecar_not_in_report(tmp_path, capsys):
    sidecar = tmp_path / "elapsed.txt"
    code, out = run(
        capsys, "--timing-sidecar", str(sidecar),
        "verify", "dissection", "edf2", "--upto", "50", "--format", "json",
    )
    assert code == 0
    assert sidecar.exists()
    assert "elapsed" not in out and "time" not in json.loads(out)["grid"]


def test_eta_check_and_cusp_orders(capsys):
    code, out = run(capsys, "eta-check", "--level", "16", "--eta", "4:6", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["weight"] == "3"
    assert obj["scaled_sum_ok"] and obj["dual_sum_ok"]
    assert obj["character_discriminant"] == -4096
    code, out = run(capsys, "cusp-orders", "--level", "16", "--eta", "4:6", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["all_nonnegative"]
    assert set(obj["orders"].values()) == {"1"}


def test_eta_check_failing_conditions_exit_one(capsys):
    code, _ = run(capsys, "eta-check", "--level", "1", "--eta", "1:1", "--format", "json")
    assert code == 1


def test_hecke_command(capsys):
    code, out = run(capsys, "hecke", "--primes", "3,5", "--upto", "200", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    lam = {w["params"]["p"]: w["value"] for w in obj["witnesses"] if w["hypothesis"] == "lambda"}
    assert lam == {3: 0, 5: -6}


def test_scan_command(capsys):
    code, out = run(
        capsys, "scan", "--family", "abar", "--s", "2", "--modulus", "8",
        "--amax", "6", "--upto", "1000", "--format", "json",
    )
    assert code == 0
    obj = json.loads(out)
    hits = {(w["params"].get("A"), w["params"].get("B")) for w in obj["witnesses"] if w["hypothesis"] == "progression"}
    assert (4, 3) in hits


def test_verify_chain_cli(capsys):
    code, out = run(
        capsys, "verify", "chain", "thm1.2", "--primes", "3,7", "--upto", "300",
        "--format", "text",
    )
    assert code == 0
    assert "PASS" in out


def test_verify_binomial_cli(capsys):
    code, out = run(
        capsys, "verify", "binomial", "--p", "2", "--k", "1,2", "--m", "1",
        "--upto", "200", "--format", "text",
    )
    assert code == 0
    assert "PASS" in out
