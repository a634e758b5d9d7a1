"""Command-line behavior: output shapes, determinism, exit codes."""

import json

import pytest

from shapeinv.cli import main

MORSE = ["--family", "morse", "--m", "2.5", "--invariant", "1", "--d", "1"]


def run(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def test_families_list(capsys):
    rc, out, _ = run(capsys, "families", "list")
    rows = out.strip().splitlines()
    assert rc == 0 and len(rows) == 13
    assert rows[0].startswith("scarf2")
    rc, out, _ = run(capsys, "families", "list", "--extensions")
    assert rc == 0 and len(out.strip().splitlines()) == 24


def test_families_list_json(capsys):
    rc, out, _ = run(capsys, "families", "list", "--extensions", "--json")
    data = json.loads(out)
    assert rc == 0 and len(data) == 24
    kinds = {row["kind"] for row in data}
    assert kinds == {"family", "extension"}
    assert all(set(row) == {"id", "kind", "label"} for row in data)


def test_spectrum_text(capsys):
    rc, out, _ = run(capsys, "spectrum", *MORSE)
    lines = out.strip().splitlines()
    assert rc == 0
    assert lines[0] == "k\tE_k"
    assert lines[1].split("\t") == ["0", "0"]
    assert lines[2].split("\t") == ["1", "4"]
    assert lines[3].split("\t") == ["2", "6"]
    assert len(lines) == 4  # kmax clamps to the admissible ceiling


def test_spectrum_json_deterministic(capsys):
    rc1, out1, _ = run(capsys, "spectrum", *MORSE, "--json")
    rc2, out2, _ = run(capsys, "spectrum", *MORSE, "--json")
    assert rc1 == rc2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["family"] == "morse"
    assert [row["k"] for row in doc["levels"]] == [0, 1, 2]
    assert doc["levels"][1]["energy"] == 4.0


def test_wavefunction_csv(capsys):
    rc, out, _ = run(capsys, "wavefunction", *MORSE, "--k", "1",
                     "--grid", "0.1,4,21")
    lines = out.strip().splitlines()
    assert rc == 0
    assert lines[0].startswith("# family=morse,k=1,norm=")
    assert "imag_residue=" in lines[0]
    assert lines[1] == "x,zeta,V"
    assert len(lines) == 23
    first = lines[2].split(",")
    assert len(first) == 3 and float(first[0]) == pytest.approx(0.1)


def test_wavefunction_json(capsys):
    rc, out, _ = run(capsys, "wavefunction", *MORSE, "--k", "0",
                     "--grid", "0.1,4,11", "--json")
    doc = json.loads(out)
    assert rc == 0
    assert doc["norm"] == pytest.approx(1.0, abs=1e-6)
    assert len(doc["rows"]) == 11 and len(doc["rows"][0]) == 3


def test_verify_si_pass_and_tolerance_failure(capsys):
    rc, out, _ = run(capsys, "verify", "si", "--family", "scarf2",
                     "--m", "3.2", "--invariant", "1", "--d", "0.4")
    assert rc == 0 and "PASS" in out
    rc, out, _ = run(capsys, "verify", "si", "--family", "scarf2",
                     "--m", "3.2", "--invariant", "1", "--d", "0.4",
                     "--tol", "1e-30")
    assert rc == 1 and "FAIL" in out


def test_verify_si_range_violation_exits_2(capsys):
    rc, _, err = run(capsys, "verify", "si", "--family", "scarf2", "--m", "0.4")
    assert rc == 2
    assert "eps" in err


def test_verify_kind_mismatch_exits_2(capsys):
    rc, _, err = run(capsys, "verify", "cond1", "--family", "scarf2",
                     "--m", "3.2", "--invariant", "1", "--d", "0.4")
    assert rc == 2 and "extension" in err
    rc, _, err = run(capsys, "verify", "si", "--extension", "ext-4",
                     "--m", "2.0", "--invariant", "1", "--beta", "2",
                     "--window", "0.75,1.1")
    assert rc == 2


def test_verify_extension_checks(capsys):
    ext4 = ["--extension", "ext-4", "--m", "2.0", "--invariant", "1",
            "--beta", "2", "--window", "0.75,1.1"]
    for check in ("cond2", "cond1", "ext-si"):
        rc, out, _ = run(capsys, "verify", check, *ext4, "--json")
        doc = json.loads(out)
        assert rc == 0 and doc["pass"] is True, check
        assert doc["family"] == "ext-4"


def test_denominator_zero_exits_3(capsys):
    # default window scan finds the 5 - 2x^2 root
    rc, _, err = run(capsys, "verify", "cond2", "--extension", "ext-4",
                     "--m", "2.0", "--invariant", "1", "--beta", "2")
    assert rc == 3
    assert "denominator" in err.lower()


def test_target_validation(capsys):
    rc, _, err = run(capsys, "spectrum", "--m", "2.5")
    assert rc == 2 and "family or extension" in err
    rc, _, err = run(capsys, "spectrum", "--family", "morse",
                     "--extension", "ext-1", "--m", "2.5")
    assert rc == 2
    rc, _, err = run(capsys, "spectrum", "--family", "morse")
    assert rc == 2 and "m is required" in err
    rc, _, err = run(capsys, "spectrum", "--family", "morse", "--m", "2.5",
                     "--invariant", "m1", "--d", "1")
    assert rc == 2 and "invariant" in err.lower()


def test_config_file_flow(capsys, tmp_path):
    cfg = tmp_path / "job.json"
    cfg.write_text(json.dumps({
        "family": "morse",
        "m": [2.5],
        "couplings": [{"invariant": "1", "d": 1.0}],
    }))
    rc, out, _ = run(capsys, "spectrum", "--config", str(cfg))
    assert rc == 0 and out.splitlines()[2].split("\t") == ["1", "4"]
    # inline flags override the document
    rc, out, _ = run(capsys, "spectrum", "--config", str(cfg), "--m", "3.5")
    assert rc == 0 and out.splitlines()[2].split("\t") == ["1", "6"]


def test_config_rejects_unknown_keys(capsys, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{"family": "morse", "m": [2.5], "bogus": 1}')
    rc, _, err = run(capsys, "spectrum", "--config", str(cfg))
    assert rc == 2 and "bogus" in err
    cfg2 = tmp_path / "broken.json"
    cfg2.write_text("{not json")
    rc, _, err = run(capsys, "spectrum", "--config", str(cfg2))
    assert rc == 2
    rc, _, err = run(capsys, "spectrum", "--config", str(tmp_path / "missing.json"))
    assert rc == 2


def test_verify_orthonormal_and_ladder(capsys):
    rc, out, _ = run(capsys, "verify", "orthonormal", *MORSE, "--kmax", "2", "--json")
    doc = json.loads(out)
    assert rc == 0 and doc["levels"] == [0, 1, 2] and doc["pass"] is True
    rc, out, _ = run(capsys, "verify", "ladder", *MORSE, "--k", "1")
    assert rc == 0 and "PASS" in out


def test_oracle_compare(capsys):
    rc, out, _ = run(capsys, "oracle", "compare", *MORSE, "--kmax", "2", "--json")
    doc = json.loads(out)
    assert rc == 0 and doc["pass"] is True
    assert max(row["deviation"] for row in doc["levels"]) <= 5e-3


def test_inadmissible_level_exits_2(capsys):
    rc, _, err = run(capsys, "wavefunction", *MORSE, "--k", "9")
    assert rc == 2 and "admissible" in err
