import json
import shlex
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from projcoh import cli, namedmaps

GOLDEN = Path(__file__).parent / "golden"
CASES = [line.split("\t") for line in (GOLDEN / "cases.txt").read_text().splitlines() if line.strip()]


def run(args: str):
    return cli.run(shlex.split(args))


@pytest.mark.parametrize("name,args", CASES, ids=[c[0] for c in CASES])
def test_golden(name, args):
    code, out = run(args)
    assert code == 0
    ext = "tsv" if "--format tsv" in args else "json"
    assert out == (GOLDEN / f"{name}.{ext}").read_text()


@pytest.mark.parametrize("name,args", [c for c in CASES if "tsv" not in c[1]], ids=lambda v: v if "--" not in v else "")
def test_schema(name, args):
    _, out = run(args)
    doc = json.loads(out)
    jsonschema.validate(doc, cli.load_schema(doc["command"]))


def test_every_command_has_a_schema():
    for command in cli.COMMANDS:
        assert cli.load_schema(command)["properties"]["command"]["const"] == command


def test_output_is_deterministic():
    args = "quantize --m 1 --lambda 1/3 --mu 1 --k 2"
    assert run(args) == run(args)


def test_examples():
    doc = json.loads(run("critical-table --m 1 --n 3")[1])
    assert [(p["lambda"], p["mu"]) for p in doc["result"]["pairs"]] == [("0", "1"), ("-1/2", "3/2"), ("-1", "2")]
    doc = json.loads(run("split --m 1 --k 2 --lambda -1/2 --mu 1")[1])
    assert doc["result"]["split"] is True
    doc = json.loads(run("casimir --m 1 --p 1 --delta 0")[1])
    assert doc["result"]["c"] == "1" and doc["result"]["formula_match"] is True


def test_negative_rationals_in_equals_form():
    assert run("split --m 1 --k 2 --lambda=-1/2 --mu 1")[0] == 0


@pytest.mark.parametrize("args", [
    "",
    "nonsense",
    "split --m 1 --k 1 --lambda x --mu 1",
    "split --m 0 --k 1 --lambda 0 --mu 1",
    "betti --module densities --m 1",
    "betti --module field --m 1",
    "betti --module operators --m 1 --p 1 --q 0",
    "betti --module densities --m 2 --lambda 0 --mu 0 --oracle",
    "betti --module densities --m 2 --lambda 0 --mu 0 --max-degree 4",
    "cocycles --m 1 --p 0 --q 1 --delta 1",
    "casimir --m 1 --p 1",
    "homs --m 1 --p 1 --q 0 --delta 1 --format xml",
])
def test_usage_errors_exit_1(args):
    proc = subprocess.run([sys.executable, "-m", "projcoh.cli", *shlex.split(args)], capture_output=True, text=True)
    assert proc.returncode == 1
    assert proc.stdout == ""
    assert "usage" in proc.stderr


def test_violation_exits_2(monkeypatch):
    monkeypatch.setattr(namedmaps, "casimir_formula", lambda m, p, d: 99)
    code, out = run("casimir --m 1 --p 1 --delta 0")
    assert code == 2
    doc = json.loads(out)
    assert doc["violations"][0]["identity"] == "Casimir scalar formula"
    assert doc["result"]["formula_match"] is False


def test_main_entry_point():
    proc = subprocess.run([sys.executable, "-m", "projcoh.cli", "casimir", "--m", "1", "--p", "0", "--delta", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["c"] == "0"


def test_tsv_lines_are_key_value():
    _, out = run("casimir --m 2 --p 1 --delta 1/2 --format tsv")
    rows = [line.split("\t") for line in out.splitlines()]
    assert all(len(r) == 2 for r in rows)
    assert ["result.formula_match", "true"] in rows
