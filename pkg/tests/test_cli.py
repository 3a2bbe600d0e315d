import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from nilfibre.cli import main

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
REGEN = os.environ.get("NILFIBRE_UPDATE_GOLDENS") == "1"

WORKED = ["1,2,3,1,1,3,2", "1,2,1,2", "2,1,2,1,2", "3,4,2,1,2,4,3,1", "2,1,1,1,2",
          "1,2,1,2,1", "2,1,1,2,2", "3,2,1,3,2,1,2"]

GOLDENS = [(c, "enum-components.json", ["enum-components", "--format", "json"]) for c in WORKED]
GOLDENS += [
    ("1,2,3,1,1,3,2", "factorize-c27-first.txt", ["factorize", "--sequence", "C1,C4;C4,C5;C2,C7;C3,C6"]),
    ("1,2,3,1,1,3,2", "factorize-c36-first.txt", ["factorize", "--sequence", "C1,C4;C4,C5;C3,C6;C2,C7"]),
    ("1,2,3,1,1,3,2", "factorize-c36-first.json",
     ["factorize", "--sequence", "C1,C4;C4,C5;C3,C6;C2,C7", "--format", "json"]),
    ("1,2,1,2", "factorize.txt", ["factorize", "--sequence", "C1,C3;C2,C4"]),
    ("1,2,1,2", "invariant-symbolic.json", ["invariant", "--symbolic", "--format", "json"]),
    ("1,2,1,2", "invariant-substituted.txt",
     ["invariant", "--symbolic", "--pair", "C2,C4", "--substitute", "x1,2=1;x1,3=0;x2,4=0"]),
    ("1,2,1,2", "render-initial.tex", ["render", "--format", "latex"]),
    ("1,2,1,2", "reverse-4-6.txt", ["reverse", "--red-set", "4,6"]),
    ("1,2,2,1", "factorize.txt", ["factorize", "--sequence", "C1,C4;C2,C3"]),
    ("3,4,2,1,2,4,3,1", "reverse-11-12-15-16-extreme.json",
     ["reverse", "--red-set", "11,12,15,16", "--extreme", "--format", "json"]),
    ("3,4,2,1,2,4,3,1", "reverse-11-12-15-16.txt", ["reverse", "--red-set", "11,12,15,16"]),
    ("2,1,1,2,2", "render-reverse-4-6-8.txt", ["render", "--red-set", "4,6,8", "--which", "reverse"]),
    ("1,2,1,2", "verify.txt", ["verify"]),
]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("comp, name, argv", GOLDENS, ids=[f"{c}:{n}" for c, n, _ in GOLDENS])
def test_golden(capsys, monkeypatch, comp, name, argv):
    monkeypatch.delenv("NILFIBRE_SEED", raising=False)
    code, out, _ = run(capsys, *argv, "-c", comp)
    assert code == 0
    path = CORPUS / comp.replace(",", "-") / name
    if REGEN:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(out)
    assert out == path.read_text()


def test_enum_components_counts(capsys):
    code, out, _ = run(capsys, "enum-components", "-c", "1,2,3,1,1,3,2", "--format", "json")
    assert code == 0
    docs = json.loads(out)
    assert sorted(tuple(d["redSet"]) for d in docs) == sorted(
        [(7, 7, 7, 8), (7, 8, 8, 8), (7, 7, 8, 11), (7, 8, 8, 11), (7, 8, 10, 11), (7, 8, 11, 13)])
    assert set(docs[0]) == {"redSet", "multiplicities", "linesOne", "linesStar", "excludedRoots",
                            "tableauInfinity", "tableauCollapsed"}


def test_single_column_has_only_the_trivial_component(capsys):
    code, out, _ = run(capsys, "enum-components", "-c", "5", "--format", "json")
    assert code == 0
    docs = json.loads(out)
    assert [d["redSet"] for d in docs] == [[]]


@pytest.mark.parametrize("argv", [
    ["enum-components", "-c", "0,2"],
    ["enum-components", "-c", "1,,2"],
    ["enum-components"],
    ["factorize", "-c", "1,2,1,2", "--sequence", "C1,C3"],
    ["factorize", "-c", "1,2,1,2"],
    ["reverse", "-c", "1,2,1,2", "--red-set", "4,5"],
    ["invariant", "-c", "1,2,1,2", "--pair", "C1,C2"],
    ["invariant", "-c", "3,4,2,1,2,4,3,1", "--symbolic"],
    ["verify", "-c", "1,2,1,2", "--red-set", "9,9"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_bad_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["render", "--which", "sideways", "-c", "1,2"])
    assert exc.value.code == 2


def test_verify_json_report(capsys):
    code, out, _ = run(capsys, "verify", "-c", "3,4,2,1,2,4,3,1", "--red-set", "11,12,15,16",
                       "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert rep["summary"]["ok"] and rep["summary"]["failed"] == 0
    vanish = next(r for r in rep["records"] if r["check"] == "vanishing")
    assert vanish["detail"]["failure_bound"] < 2 ** -40


def test_verify_all_n_parallel_matches_serial(capsys):
    _, serial, _ = run(capsys, "verify", "--all-n", "5", "--format", "json")
    _, parallel, _ = run(capsys, "verify", "--all-n", "5", "--jobs", "2", "--format", "json")
    assert serial == parallel
    assert json.loads(serial)["summary"]["ok"]


def test_runs_manifest_is_stable(capsys, tmp_path):
    argv = ["invariant", "-c", "1,2,1,2", "--seed", "7", "--format", "json", "--runs-dir", str(tmp_path)]
    run(capsys, *argv)
    where = tmp_path / "runs" / "1-2-1-2" / "invariant-7"
    first = json.loads((where / "manifest.json").read_text())
    run(capsys, *argv)
    second = json.loads((where / "manifest.json").read_text())
    assert first["digests"] == second["digests"]
    assert first["seed"] == 7 and first["composition"] == [1, 2, 1, 2]
    assert set(first) == {"composition", "command", "seed", "flags", "version", "timestamp", "digests"}
    assert (where / "output.json").exists()


def test_seed_from_environment(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("NILFIBRE_SEED", "99")
    run(capsys, "invariant", "-c", "1,2,1,2", "--runs-dir", str(tmp_path))
    assert (tmp_path / "runs" / "1-2-1-2" / "invariant-99" / "manifest.json").exists()
    monkeypatch.setenv("NILFIBRE_SEED", "x")
    code, _, err = run(capsys, "invariant", "-c", "1,2,1,2")
    assert code == 2 and "NILFIBRE_SEED" in err


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.tex"
    code, out, _ = run(capsys, "render", "-c", "1,2,1,2", "--format", "latex", "-o", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("\\begin{array}")


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "nilfibre", "enum-components", "-c", "1,2,1,2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "4,4" in res.stdout.replace(" ", "")
