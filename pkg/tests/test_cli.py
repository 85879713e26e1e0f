import json
import os
import subprocess
import sys

import pytest

from synthcone.cli import main

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SPECS = os.path.join(ROOT, "specs")


def _spec(name):
    with open(os.path.join(SPECS, f"{name}.json"), encoding="utf-8") as fh:
        return json.load(fh)


def _write(tmp_path, doc, name="spec.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(path)


def test_list_experiments(capsys):
    assert main(["list-experiments"]) == 0
    names = capsys.readouterr().out.split()
    assert len(names) == 11 and "example_3_1" in names
    assert main(["list-experiments", "--filter", "hausdorff"]) == 0
    assert capsys.readouterr().out.split() == ["hausdorff_conformal"]
    assert main(["list-experiments", "--filter", "zzz"]) == 0
    assert capsys.readouterr().out == ""


def test_run_writes_outputs(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["run", os.path.join(SPECS, "example_3_1.json"), "--out", str(out)]) == 0
    folder = out / _spec("example_3_1")["name"]
    rows = (folder / "results.csv").read_text().splitlines()
    assert rows[0] == "eps,prior_length,reference,abs_error" and len(rows) == 5
    summary = json.loads((folder / "summary.json").read_text())
    assert summary["passed"] is True
    assert "PASS" in capsys.readouterr().out


def test_reruns_are_byte_identical(tmp_path):
    for k in ("a", "b"):
        assert main(["run", os.path.join(SPECS, "blowup_finiteness.json"), "--out", str(tmp_path / k)]) == 0
    name = _spec("blowup_finiteness")["name"]
    for f in ("results.csv", "summary.json"):
        assert (tmp_path / "a" / name / f).read_bytes() == (tmp_path / "b" / name / f).read_bytes()


def test_malformed_specs_exit_2(tmp_path, capsys):
    assert main(["run", _write(tmp_path, "{not json")]) == 2
    doc = _spec("example_3_1")
    del doc["tolerances"]
    assert main(["run", _write(tmp_path, doc)]) == 2
    doc = _spec("example_3_1")
    doc["operation"] = "nonexistent"
    assert main(["run", _write(tmp_path, doc)]) == 2
    assert main(["run", str(tmp_path / "missing.json")]) == 2
    assert "error" in capsys.readouterr().err


def test_stochastic_spec_needs_a_seed(tmp_path):
    doc = _spec("blowup_finiteness")
    doc.pop("seed", None)
    path = _write(tmp_path, doc)
    assert main(["run", path, "--out", str(tmp_path / "o")]) == 2
    assert main(["run", path, "--seed", "3", "--out", str(tmp_path / "o")]) == 0


def test_missing_declared_tolerance_exits_2(tmp_path):
    doc = _spec("example_3_1")
    doc["tolerances"] = {"abs": 1e-9}
    assert main(["run", _write(tmp_path, doc), "--out", str(tmp_path / "o")]) == 2


def test_tolerance_failure_exits_1(tmp_path, capsys):
    doc = _spec("example_3_1")
    doc["tolerances"]["min_split_gap"] = 1.0
    assert main(["run", _write(tmp_path, doc), "--out", str(tmp_path / "o")]) == 1
    err = capsys.readouterr().err
    assert "FAIL" in err and "split_gap" in err and "reference=" in err


def test_batch_with_jobs(tmp_path):
    batch = {"schema": "synthcone/1",
             "experiments": [_spec("example_3_1"), _spec("local_ratio"), _spec("ln_law")]}
    assert main(["run", _write(tmp_path, batch), "--jobs", "2", "--out", str(tmp_path / "o")]) == 0
    assert sorted(os.listdir(tmp_path / "o")) == sorted(e["name"] for e in batch["experiments"])


def test_bad_arguments():
    assert main(["run"]) == 2
    assert main(["run", os.path.join(SPECS, "example_3_1.json"), "--jobs", "0"]) == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "synthcone", "list-experiments", "--filter", "law"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.split() == ["composition_law", "ln_law"]
