import json

import pytest

from inclogic.cli import main

CYCLE = """
universe: 0 1 2
relation </2: (0,1) (1,2) (2,0)
"""
LINE = """
universe: 0 1 2
relation </2: (0,1) (1,2) (0,2)
"""


@pytest.fixture
def files(tmp_path):
    cycle = tmp_path / "cycle.mod"
    cycle.write_text(CYCLE)
    line = tmp_path / "line.mod"
    line.write_text(LINE)
    empty = tmp_path / "empty.team"
    empty.write_text("<empty-domain>\n")
    return {"cycle": str(cycle), "line": str(line), "empty": str(empty),
            "tmp": tmp_path}


def test_eval_cycle_true(files, capsys):
    code = main(["eval", "--model", files["cycle"], "--team", files["empty"],
                 "--formula", "E x. E y. (y <= x & y < x)"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "true"


def test_eval_line_false(files, capsys):
    code = main(["eval", "--model", files["line"], "--team", files["empty"],
                 "--formula", "E x. E y. (y <= x & y < x)"])
    assert code == 1
    assert capsys.readouterr().out.strip() == "false"


def test_eval_engine_both(files):
    code = main(["eval", "--model", files["cycle"], "--team", files["empty"],
                 "--engine", "both",
                 "--formula", "E x. E y. (y <= x & y < x)"])
    assert code == 0


def test_eval_max_subteam(files, capsys):
    team = files["tmp"] / "t.team"
    team.write_text("x,y\n1,2\n2,1\n3,1\n")
    model = files["tmp"] / "m.mod"
    model.write_text("universe: 1 2 3\n")
    code = main(["--format", "records", "eval", "--model", str(model),
                 "--team", str(team), "--formula", "x <= y", "--max-subteam"])
    assert code == 1
    record = json.loads(capsys.readouterr().out)
    assert record["verdict"] is False
    assert sorted(map(tuple, record["max_subteam"])) == [("1", "2"), ("2", "1")]


def test_eval_records_mode(files, capsys):
    code = main(["--format", "records", "eval", "--model", files["cycle"],
                 "--team", files["empty"],
                 "--formula", "E x. E y. (y <= x & y < x)"])
    assert code == 0
    record = json.loads(capsys.readouterr().out)
    assert record["verdict"] is True


def test_eval_unbound_variable_errors(files, capsys):
    code = main(["eval", "--model", files["cycle"], "--team", files["empty"],
                 "--formula", "x = x"])
    assert code == 2


def test_parse_and_errors(files, capsys):
    assert main(["parse", "--formula", "x,y <= u,v"]) == 0
    assert main(["parse", "--formula", "x,y <= u"]) == 2


def test_nf(files, capsys):
    assert main(["nf", "--formula", "x <= y"]) == 0
    out = capsys.readouterr().out
    assert out.strip() == "E w. E u. A y1. w <= u & (w = x & u = y)"


def test_check_corpus_script(files, capsys, tmp_path):
    from inclogic.suites import corpus_scripts
    name, text = corpus_scripts()[0]
    path = tmp_path / name
    path.write_text(text)
    assert main(["check", str(path)]) == 0
    assert "accepted" in capsys.readouterr().out

    bad = tmp_path / "bad.ndp"
    bad.write_text("1: |- x = y by eqI(t = x)\nqed 1\n")
    assert main(["check", str(bad)]) == 1


def test_implies_exit_codes(files):
    assert main(["implies", "--gamma", "x<=y;y<=z", "--phi", "x<=z"]) == 0
    assert main(["implies", "--gamma", "x<=y", "--phi", "y<=x"]) == 1
    # one element can never falsify a goal atom: search exhausts, verdict unknown
    assert main(["implies", "--gamma", "x<=y", "--phi", "u<=v",
                 "--rows", "1", "--elems", "1"]) == 3
    assert main(["implies", "--gamma", "x<=", "--phi", "x<=x"]) == 2


def test_approx(files, capsys):
    code = main(["approx", "--formula", "A x. x = x",
                 "--model", files["cycle"], "--n", "1"])
    assert code == 0
    out = capsys.readouterr().out
    assert "size:" in out and "approx-stable" in out
    assert main(["approx", "--formula", "x = x"]) == 2  # not a sentence


def test_corpus_quick(files, capsys):
    assert main(["corpus", "--quick"]) == 0
    out = capsys.readouterr().out
    assert out.count("[PASS]") == 9
