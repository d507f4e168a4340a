import hashlib
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from instanton_lab.cli import main

GOLDEN = Path(__file__).parent / "golden"

CASES = {
    "nahm_seed_3.json": ["nahm", "--seed", "3"],
    "ym_rend_5.json": ["ym", "--r-end", "5"],
    "instanton_geometry_su2_seed_1.json": ["instanton", "--geometry", "su2", "--seed", "1"],
    "nahm_dim_2_seed_0.json": ["nahm", "--dim", "2", "--seed", "0"],
}


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name, args", CASES.items())
def test_golden_reports_byte_identical(name, args, capsys):
    code, out, _ = run_cli(args, capsys)
    assert code == 0
    assert out == (GOLDEN / name).read_text(encoding="utf-8")


@pytest.mark.parametrize("name", CASES)
def test_golden_hash_covers_body(name):
    text = (GOLDEN / name).read_text(encoding="utf-8")
    doc = json.loads(text)
    start = text.index('"body": ') + len('"body": ')
    end = text.index(',\n  "sha256"')
    body = text[start:end].replace("\n  ", "\n")
    assert hashlib.sha256(body.encode()).hexdigest() == doc["sha256"]
    assert doc["body"]["passed"] is True


def test_golden_reproduced_by_pure_backend_subprocess():
    env = dict(os.environ, INSTANTON_LAB_PURE="1")
    out = subprocess.run([sys.executable, "-m", "instanton_lab", "ym", "--r-end", "5"], env=env,
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout == (GOLDEN / "ym_rend_5.json").read_text(encoding="utf-8")


def test_seed_environment_override(capsys, monkeypatch):
    monkeypatch.setenv("INSTANTON_LAB_SEED", "3")
    _, out, _ = run_cli(["nahm", "--seed", "99"], capsys)
    assert out == (GOLDEN / "nahm_seed_3.json").read_text(encoding="utf-8")


def test_timestamp_outside_hash(capsys):
    _, out, _ = run_cli(["ym", "--r-end", "5", "--timestamp"], capsys)
    doc = json.loads(out)
    gold = json.loads((GOLDEN / "ym_rend_5.json").read_text(encoding="utf-8"))
    assert "timestamp" in doc
    assert doc["sha256"] == gold["sha256"]


def test_out_file(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = run_cli(["ym", "--r-end", "5", "--out", str(target)], capsys)
    assert code == 0 and out == ""
    assert target.read_text(encoding="utf-8") == (GOLDEN / "ym_rend_5.json").read_text(encoding="utf-8")


def test_ym_csv(tmp_path, capsys):
    target = tmp_path / "t.csv"
    run_cli(["ym", "--r-end", "1", "--step", "0.1", "--csv", str(target)], capsys)
    lines = target.read_text().splitlines()
    assert lines[0] == "r,u,v,a" and len(lines) == 11


def test_nahm_csv_round_trip_through_cli(tmp_path, capsys):
    target = tmp_path / "T.csv"
    assert run_cli(["nahm", "--csv", str(target)], capsys)[0] == 0
    code, out, _ = run_cli(["nahm", "--solution", "file", "--solution-file", str(target)], capsys)
    assert code == 0
    assert json.loads(out)["body"]["parameters"]["solution"] == "file"


def test_dump_table(tmp_path, capsys):
    target = tmp_path / "g2.txt"
    code, _, _ = run_cli(["algebra", "--dump-table", "g2", "--table-out", str(target)], capsys)
    assert code == 0
    assert target.read_text().count("\n") >= 14


def test_failing_check_exits_one(capsys):
    # an absurdly coarse finite-difference step cannot meet a 1e-12 tolerance
    code, out, _ = run_cli(["instanton", "--geometry", "su2", "--fd-step", "0.5", "--tol", "1e-12", "--points", "5"],
                           capsys)
    assert code == 1
    assert json.loads(out)["body"]["passed"] is False


@pytest.mark.parametrize(
    "args, message",
    [
        (["instanton", "--geometry", "su2", "--C", "0"], "C must be positive"),
        (["instanton", "--geometry", "su2", "--C", "-1"], "C must be positive"),
        (["instanton", "--geometry", "su3"], "invalid choice"),
        (["instanton"], "required"),
        (["bogus"], "invalid choice"),
        (["nahm", "--solution", "file"], "--solution-file"),
        (["nahm", "--f", "asd:A1=1,A4=7"], "A4 = -(A1+A2+A3)"),
        (["nahm", "--dim", "2", "--f", "asd:A=1"], "does not live"),
        (["ym", "--step", "0"], "step must be positive"),
    ],
)
def test_usage_errors_exit_two(args, message, capsys):
    code, _, err = run_cli(args, capsys)
    assert code == 2
    assert message in err


def test_bad_seed_environment(capsys, monkeypatch):
    monkeypatch.setenv("INSTANTON_LAB_SEED", "abc")
    assert main(["ym", "--r-end", "5"]) != 0


def test_console_script_help():
    out = subprocess.run([sys.executable, "-m", "instanton_lab", "--help"], capture_output=True, text=True)
    assert out.returncode == 0
    for suite in ("algebra", "instanton", "negative", "ym", "nahm", "all"):
        assert suite in out.stdout
