import io
import json

import pytest

from adjspace.catalog import n_branched_line, system_to_json
from adjspace.cli import main


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


@pytest.fixture
def three(tmp_path):
    path = tmp_path / "s.json"
    assert run("catalog", "n_branched_line", 3, "--emit", path)[0] == 0
    return path


def test_catalog_then_analyze(three, tmp_path):
    code, text = run("analyze", three, "--json", tmp_path / "r.json",
                     "--dot-y", tmp_path / "y.dot", "--dot-c", tmp_path / "c.dot")
    assert code == 0
    assert "Hausdorff: false" in text
    assert "Y-pairs: 3" in text
    assert "connected: true" in text and "T1: true" in text
    assert "component graph edges: 1-2, 1-3, 2-3" in text
    report = json.loads((tmp_path / "r.json").read_text())
    assert report["y_pair_count"] == 3
    assert (tmp_path / "y.dot").read_text().count(" -- ") == 3
    assert (tmp_path / "c.dot").read_text().count(" -- ") == 3


def test_analyze_single_component(tmp_path):
    path = tmp_path / "one.json"
    run("catalog", "single_line", "--emit", path)
    code, text = run("analyze", path)
    assert code == 0 and "Hausdorff: true" in text


def test_validate(three, tmp_path):
    assert run("validate", three) == (0, "valid\n")
    data = system_to_json(n_branched_line(2))
    del data["regions"]["2,1"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, text = run("validate", bad)
    assert code == 1
    assert "A2" in text and "[witness -1]" in text
    assert run("analyze", bad)[0] == 1


def test_usage_errors(tmp_path, capsys):
    assert run("validate", tmp_path / "missing.json")[0] == 2
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert run("validate", junk)[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("mine", "--lemma", "t1", "--max-points", 9)[0] == 2
    assert run("catalog", "n_branched_line", 0)[0] == 2
    assert "error:" in capsys.readouterr().err


def test_hajicek(tmp_path):
    sys_path = tmp_path / "p.json"
    run("catalog", "n_branched_line", 2, "--emit", sys_path)
    subset = tmp_path / "v.json"
    subset.write_text(json.dumps({"sets": {"1": ["(-inf,inf)"]}}))
    code, text = run("hajicek", sys_path, "--subset", subset)
    assert code == 0
    data = json.loads(text)
    assert data["is_h_submanifold"] and data["boundary_eq_y"]


def test_uniqueness(three):
    code, text = run("uniqueness", three, "--grid", "-1,0,1")
    assert code == 0
    assert text.startswith("3 set(s)")
    assert "canonical images among them: 1, 2, 3" in text
    assert run("uniqueness", three, "--grid", "a,b")[0] == 2


def test_pou_check(tmp_path):
    sys_path = tmp_path / "s.json"
    run("catalog", "n_branched_line", 2, "--emit", sys_path)
    cover = tmp_path / "cover.json"
    cover.write_text(json.dumps([{"sets": {"1": ["(-inf,inf)"]}}, {"sets": {"2": ["(-inf,inf)"]}}]))
    half = [{"left_tail": "1/2", "right_tail": "1/2"}] * 2
    cand = tmp_path / "cand.json"
    cand.write_text(json.dumps([half, half]))
    code, text = run("pou-check", sys_path, "--cover", cover, "--candidate", cand)
    assert code == 0 and text.startswith("reject: support") and "[0,2]" in text
    cand.write_text(json.dumps([[{"left_tail": 1, "right_tail": 1},
                                 {"left_tail": 0, "right_tail": 0}]] * 2))
    code, text = run("pou-check", sys_path, "--cover", cover, "--candidate", cand)
    assert code == 2 and "ill-formed" in text


def test_mine(tmp_path):
    code, text = run("mine", "--lemma", "connectedness", "--max-points", 4)
    assert code == 0 and "counterexamples: 0" in text
    code, text = run("mine", "--lemma", "connectedness", "--max-points", 4,
                     "--drop-hypothesis", "nonempty_regions", "--json", tmp_path / "m.json")
    assert code == 0 and "counterexamples: 1" in text
    assert json.loads((tmp_path / "m.json").read_text())["dropped"] == "nonempty_regions"


def test_catalog_stdout():
    code, text = run("catalog", "doubled_plane")
    assert code == 0 and json.loads(text)["spaces"] == [{"dim": 2}, {"dim": 2}]
