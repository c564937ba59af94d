import io
import json
import subprocess
import sys

import pytest

from diffmodal import cli, lawcheck as lc


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def test_check_sym_passes():
    code, text = run("check", "--model", "sym", "--suite", "all")
    assert code == cli.EXIT_OK
    assert "fail" not in text.split("\n")[-2]


def test_check_diff_differential_fails_with_witness():
    code, text = run("check", "--model", "diff", "--suite", "differential")
    assert code == cli.EXIT_FAIL
    assert "witness" in text


@pytest.mark.parametrize("argv", [
    ("check", "--model", "nosuch"),
    ("check", "--model", "sym+nosuch"),
    ("check", "--model", "sym", "--rig", "Zmod:0"),
    ("check", "--model", "sym", "--suite", "nosuch"),
    ("check", "--model", "sym", "--dim", "0"),
    ("check",),
    ("nosuch",),
])
def test_configuration_errors_exit_2(argv):
    assert run(*argv)[0] == cli.EXIT_CONFIG


def test_check_json_schema():
    code, text = run("check", "--model", "rb", "--dim", "1", "--suite", "bialgebra,comonad", "--json")
    data = json.loads(text)
    assert set(data) == {"model", "rig", "params", "seed", "suites"}
    assert data["model"] == "rb" and data["rig"] == "Q" and data["seed"] == 42
    assert [s["name"] for s in data["suites"]] == ["bialgebra", "comonad"]
    statuses = set()
    for suite in data["suites"]:
        for law in suite["laws"]:
            assert {"name", "anchor", "status", "coverage"} <= set(law)
            statuses.add(law["status"])
            if law["status"] == lc.FAIL:
                assert {"label", "lhs", "rhs"} <= set(law["witness"])
    assert lc.FAIL in statuses and code == cli.EXIT_FAIL


def test_text_and_json_agree():
    argv = ("check", "--model", "diff", "--suite", "differential", "--rig", "Z")
    _, text = run(*argv)
    _, raw = run(*argv, "--json")
    data = json.loads(raw)
    for suite in data["suites"]:
        for law in suite["laws"]:
            line = next(l for l in text.splitlines() if l.split()[1:2] == [law["name"]])
            assert line.split()[0] == law["status"]


def test_defaults_and_environment(monkeypatch):
    _, raw = run("check", "--model", "sym", "--suite", "comonad", "--json")
    data = json.loads(raw)
    assert data["params"]["dim"] == 2 and data["params"]["degree"] == 3
    assert data["rig"] == "Q" and data["seed"] == 42
    monkeypatch.setenv("MODALITY_SEED", "7")
    monkeypatch.setenv("MODALITY_RIG", "Z")
    data = json.loads(run("check", "--model", "sym", "--suite", "comonad", "--json")[1])
    assert data["seed"] == 7 and data["rig"] == "Z"
    data = json.loads(run("check", "--model", "sym", "--suite", "comonad", "--json", "--seed", "3",
                          "--rig", "Q")[1])
    assert data["seed"] == 3 and data["rig"] == "Q"
    monkeypatch.setenv("MODALITY_SEED", "abc")
    assert run("check", "--model", "sym", "--suite", "comonad")[0] == cli.EXIT_CONFIG


def test_laws_listing():
    code, text = run("laws", "--filter", "d.")
    assert code == cli.EXIT_OK
    assert [l.split()[0] for l in text.splitlines()] == ["d.1", "d.2", "d.3", "d.4", "d.5", "d.nabla"]
    _, text = run("laws")
    assert len(text.splitlines()) == len(lc.catalog())
    entries = json.loads(run("laws", "--json")[1])
    assert [e["name"] for e in entries] == [l.name for l in lc.catalog()]
    assert all(e["anchor"] for e in entries)


def test_classify_rows():
    code, raw = run("classify", "--model", "sym", "--model", "rb-diff", "--dim", "1", "--json")
    assert code == cli.EXIT_OK
    rows = {r["model"]: r["cells"] for r in json.loads(raw)["models"]}
    assert {c["status"] for c in rows["sym"].values()} == {lc.YES}
    rbd = rows["rb-diff"]
    assert rbd["coalgebra"]["status"] == lc.YES
    assert all(rbd[c]["status"] != lc.YES for c in lc.COLUMNS if c != "coalgebra")
    _, text = run("classify", "--model", "sym", "--model", "rb-diff", "--dim", "1")
    assert text.splitlines()[0].split()[0] == "model"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "diffmodal", "check", "--model", "nosuch"],
                          capture_output=True, text=True)
    assert proc.returncode == cli.EXIT_CONFIG
    assert "unknown model" in proc.stderr
