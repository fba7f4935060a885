import json

import pytest

from golden import E7_CURVE_PAIR
from wps import parse_graph, parse_series, weil_poincare
from wps.cli import main


@pytest.fixture
def c2(tmp_path):
    g = tmp_path / "e7.json"
    assert main(["graph", "build", "--type", "E7", "--out", str(g)]) == 0
    a = tmp_path / "a.json"
    assert main(["graph", "blowup", str(g), "--free", "7", "--out", str(a)]) == 0
    b = tmp_path / "b.json"
    assert main(["graph", "blowup", str(a), "--edge", "7", "8", "--out", str(b)]) == 0
    doc = json.loads(b.read_text())
    doc["arrows"] = [{"id": "C1", "at": "9"}]
    b.write_text(json.dumps(doc))
    return b


def test_series_of_built_graph(c2, capsys):
    assert main(["series", str(c2)]) == 0
    out = capsys.readouterr().out.strip()
    assert parse_series(out) == parse_series(E7_CURVE_PAIR)


def test_series_expand_and_oracle(c2, capsys):
    assert main(["series", str(c2), "--expand", "8", "--oracle-check", "10"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert "1 2" in lines
    assert lines[-1].startswith("oracle check passed")


def test_curvette_build(tmp_path, capsys):
    assert main(["graph", "build", "--type", "D4", "--curvette", "2"]) == 0
    g = parse_graph(capsys.readouterr().out)
    assert g.arrows == (("C1", "2"),)
    assert str(weil_poincare(g)) == "(1 - t1)^-3 (1 - t1^2)^2"


def test_reconstruct(tmp_path, capsys):
    s = tmp_path / "s.txt"
    s.write_text(E7_CURVE_PAIR + "\n")
    assert main(["reconstruct", str(s), "--type", "E7"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["outcome"] == "ambiguous-known"
    assert main(["reconstruct", str(s), "--type", "E7", "--mode", "avoid-e7"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["outcome"] == "unique"
    assert doc["candidates"][0]["arrows"][0]["at"] == "2"


def test_reconstruct_illegal_mode(tmp_path, capsys):
    s = tmp_path / "s.txt"
    s.write_text("(1 - t1)^-1\n")
    assert main(["reconstruct", str(s), "--type", "E6", "--mode", "avoid-e7"]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ValueError"


def test_missing_file(capsys):
    assert main(["series", "/nonexistent.json"]) == 1
    assert "cannot read" in json.loads(capsys.readouterr().err)["message"]


def test_usage_errors(capsys):
    assert main(["frobnicate"]) == 2
    assert main(["graph", "blowup", "x.json"]) == 2


def test_explore(tmp_path, capsys):
    out = tmp_path / "e.json"
    assert main(["explore", "--type", "E7", "--max-blowups", "2", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["certified"] is False
    assert main(["explore", "--type", "E7", "--max-blowups", "2", "--mode", "avoid-e2"]) == 0
    assert json.loads(capsys.readouterr().out)["certified"] is True


def test_check(capsys):
    assert main(["check", "--cases", "3"]) == 0
    assert capsys.readouterr().out.count("ok") == 5
