import io

import pytest

from wernick.cli import EXIT_OK, EXIT_UNSOLVED, EXIT_USAGE, RunConfig, main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_list_one():
    code, text = run("list", "4")
    assert code == EXIT_OK and text == "4. A, B, G — S\n"


def test_list_by_triple():
    assert run("list", "G,B,A")[1] == "4. A, B, G — S\n"


@pytest.mark.parametrize("status, n", [("S", 72), ("U", 26), ("R", 3), ("L", 23), ("Unknown", 15)])
def test_list_by_status(status, n):
    code, text = run("list", "--status", status)
    assert code == EXIT_OK and len(text.splitlines()) == n


def test_solve_writes_artifacts(tmp_path):
    code, text = run("solve", "7", "--instances", "10", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert "verification: 10/10 passed" in text
    names = {p.name for p in tmp_path.iterdir()}
    assert names == {"config.txt", "plan.txt", "verification.txt", "steps.txt", "construction.gcl", "figure.svg"}
    assert "instances=10\n" in (tmp_path / "config.txt").read_text()


def test_solve_unsolvable():
    code, text = run("solve", "138", "--instances", "1")
    assert code == EXIT_UNSOLVED and "not solved" in text


def test_solve_a_triple_outside_the_catalog():
    code, _ = run("verify", "A,Ma,Na", "--instances", "5")
    assert code == EXIT_OK and run("list", "A,Ma,Na")[1] == ""


@pytest.mark.parametrize("argv", [
    ["solve", "A,B,Zz"],
    ["solve", "200"],
    ["solve"],
    ["frob"],
    ["solve", "7", "--jobs", "0"],
    ["solve", "7", "--rule-order", "nope"],
    ["solve", "7", "--kb", "/nonexistent/kb"],
    ["list", "--status", "X"],
])
def test_usage_errors(argv):
    assert run(*argv)[0] == EXIT_USAGE


def test_render_text():
    code, text = run("render", "4", "--format", "text")
    assert code == EXIT_OK
    assert text.splitlines()[-1].startswith("2. ") and "construct the point C such that" in text.splitlines()[-1]


def test_batch_summary(tmp_path):
    code, text = run("batch", "--only", "R", "--instances", "3", "--out", str(tmp_path))
    rows = [l for l in text.splitlines() if not l.startswith("#")]
    assert code == EXIT_OK and len(rows) == 3
    assert all(r.split("|")[1] == "no" for r in rows)
    assert "# problems=3 solved=0 verified=0" in text
    assert (tmp_path / "summary.txt").read_text() == text


def test_check_kb_small():
    code, text = run("check-kb", "--instances", "5")
    assert code == EXIT_OK and "261 facts x 5 triangles" in text and " 0 violations" in text


def test_config_echo():
    cfg = RunConfig(rule_order=["ratio", "line"], out="x")
    lines = cfg.echo().splitlines()
    assert "rule_order=ratio,line" in lines and "out=x" in lines and "kb_path=" in lines
