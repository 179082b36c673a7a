import io
import json

import pytest

from ccskp.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_rel(capsys):
    code, out, _ = run(capsys, "rel", "|L a[0]", "|R +R b[1]")
    assert code == 0 and out.strip() == "CONNECTED+INDEPENDENT"
    code, out, _ = run(capsys, "rel", "+L a[0]", "|R b[1]", "--json")
    assert json.loads(out)["relation"] == "NOT-CONNECTED"


def test_explore_json(capsys):
    code, out, _ = run(capsys, "explore", "0", "--json")
    data = json.loads(out)
    assert code == 0 and len(data["nodes"]) == 1 and data["edges"] == []
    code, out, _ = run(capsys, "explore", "a | ('a + b)", "--json")
    data = json.loads(out)
    assert (len(data["nodes"]), len(data["edges"])) == (7, 8)
    assert {"src", "dst", "label", "key", "kind"} <= set(data["edges"][0])


def test_explore_dot_and_depth(capsys):
    code, out, _ = run(capsys, "explore", "a.b.c", "--dot", "--max-depth", "1")
    assert code == 0 and out.startswith("digraph") and out.count("->") == 1


def test_bisim(capsys):
    code, out, _ = run(capsys, "bisim", "--kind", "kp", "a", "a+a")
    assert code == 0 and out.startswith("EQUIVALENT")
    code, out, _ = run(capsys, "bisim", "--kind", "fr", "a[3]", "a[5]", "--json")
    data = json.loads(out)
    assert code == 1 and data["equivalent"] is False and data["trace"]


def test_axioms_events_keyorder(capsys):
    code, out, _ = run(capsys, "axioms", "a | 'a")
    assert code == 0 and "SP: ok" in out
    code, out, _ = run(capsys, "events", "(a.b|'b.c)\\b", "--json")
    data = json.loads(out)
    assert code == 0 and len(data["events"]) == 3 and len(data["immediate"]) == 2
    code, out, _ = run(capsys, "keyorder", "a[0].b[1].c", "--json")
    data = json.loads(out)
    assert data["order"] == [[0, 1]] and data["maximal"] == [1]


def test_random_term(capsys):
    code, out, _ = run(capsys, "--seed", "4", "parse", "--random", "5", "--json")
    first = json.loads(out)
    assert code == 0 and first["standard"]
    code, again, _ = run(capsys, "parse", "--random", "5", "--seed", "4", "--json")
    assert json.loads(again) == first


@pytest.mark.parametrize("argv", [
    ("parse", "a |"),
    ("parse", "a[1] | b[1]"),
    ("bisim", "a[0].b[0]", "a"),
    ("rel", "<a[1], a[1]>", "a[0]"),
    ("step", "a[0].b[0]"),
    ("explore",),
])
def test_bad_input_exits_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_step_session(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("0\n\nundo\nundo\nbogus\n99\nq\n"))
    code, out, _ = run(capsys, "step", "a | ('a + b)")
    assert code == 0
    first = out.split("\n\n")[1]
    assert sum(1 for line in first.splitlines() if "->" in line) == 4
    assert "nothing to undo" in out
    assert "enter a move number" in out


def test_step_relations_and_order(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("0\n0\n"))
    code, out, _ = run(capsys, "step", "a.b")
    assert code == 0
    assert "vs a[0]: CONNECTED+DEPENDENT" in out
    assert "key order: 0<1" in out
