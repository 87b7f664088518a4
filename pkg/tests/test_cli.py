import json
import subprocess
import sys

import pytest

from boundquiver import fixtures
from boundquiver.cli import EXIT_INPUT, EXIT_NO, EXIT_OK, EXIT_UNKNOWN, main, run
from boundquiver.presentation import parse, serialize


def report(argv):
    text, code = run(argv)
    data = json.loads(text)
    assert data["exit_code"] == code
    return data, code


@pytest.mark.parametrize("argv, code", [
    (["info", "A"], EXIT_OK),
    (["classify", "A"], EXIT_OK),
    (["classify", "C", "--target", "laura"], EXIT_OK),
    (["classify", "C"], EXIT_NO),
    (["convex", "A", "1,2,3,5"], EXIT_NO),
    (["convex", "A", "2,3,4"], EXIT_OK),
    (["isocheck", "C", "--keep", "1,4"], EXIT_NO),
    (["isocheck", "B", "--keep", "2,3,4,5"], EXIT_OK),
    (["pi1", "B"], EXIT_OK),
    (["pi1", "B", "--strong"], EXIT_NO),
    (["knit", "B", "--budget-nodes", "60", "--budget-module-dim", "16"], EXIT_UNKNOWN),
    (["gldim", "C"], EXIT_OK),
    (["verify", "C", "cluster-left-support"], EXIT_OK),
    (["verify", "A", "convex-iso", "--subset", "2,3,4"], EXIT_OK),
    (["convex", "A", "9"], EXIT_INPUT),
    (["info", "/nonexistent/file.quiv"], EXIT_INPUT),
    (["frobnicate", "A"], EXIT_INPUT),
])
def test_exit_codes(argv, code):
    assert run(argv)[1] == code


def test_report_shape():
    data, _ = report(["info", "A"])
    assert set(data) >= {"command", "input", "results", "budget_notes", "caveats", "exit_code"}
    assert data["input"]["source"] == "builtin:A"
    assert data["results"]["dimension"] == 12


def test_convex_failure_carries_a_witness():
    data, _ = report(["convex", "A", "1,2,3,5"])
    assert "delta*epsilon" in json.dumps(data["results"])


def test_budget_flag_changes_the_outcome():
    _, tight = report(["classify", "A", "--budget-nodes", "5"])
    _, loose = report(["classify", "A"])
    assert (tight, loose) == (EXIT_UNKNOWN, EXIT_OK)


def test_parse_error_is_reported(tmp_path):
    bad = tmp_path / "bad.quiv"
    bad.write_text("vertices 1 2\narrow a: 1 -> 3\n")
    data, code = report(["info", str(bad)])
    assert code == EXIT_INPUT
    assert "unknown vertex" in data["error"]


def test_file_input(tmp_path):
    f = tmp_path / "a.quiv"
    f.write_text(serialize(fixtures.load("A")))
    data, code = report(["info", str(f)])
    assert code == EXIT_OK and data["results"]["dimension"] == 12


def test_emit_quiv_prints_a_presentation():
    text, code = run(["quotient", "A", "--keep", "1,2,3,5", "--emit", "quiv"])
    assert code == EXIT_OK
    p = parse(text)
    assert p.quiver.vertices == ("1", "2", "3", "5")


def test_text_format():
    text, code = run(["classify", "A", "--format", "text"])
    assert code == EXIT_OK
    assert "tilted: yes" in text.splitlines()


def test_dot_file(tmp_path):
    out = tmp_path / "ar.dot"
    _, code = run(["knit", "A", "--dot", str(out)])
    assert code == EXIT_OK
    assert out.read_text().startswith("digraph AR {")


def test_resolution_lists_terms():
    data, _ = report(["resolve", "A", "S1"])
    assert data["results"]["pd"] == 2
    assert len(data["results"]["terms"]) == 3


def test_opposite_round_trip():
    text, _ = run(["opposite", "A", "--emit", "quiv"])
    op = parse(text)
    assert (op.quiver.arrows[0].source, op.quiver.arrows[0].target) == ("2", "1")


def test_pipe_between_processes():
    cmd = [sys.executable, "-m", "boundquiver"]
    first = subprocess.run(cmd + ["quotient", "A", "--keep", "1,2,3,5"],
                           capture_output=True, text=True, check=True)
    second = subprocess.run(cmd + ["classify"], input=first.stdout, capture_output=True, text=True)
    assert second.returncode == EXIT_NO
    verdicts = {c["class"]: c["verdict"] for c in json.loads(second.stdout)["results"]["classes"]}
    assert verdicts["tilted"] == "no"


def test_main_writes_stdout(capsys):
    assert main(["gldim", "A"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["results"]["gldim"] == 2


def test_corpus_command_is_deterministic():
    argv = ["corpus", "seed=5,count=4,vertices=2-3", "--verify", "convex-iso"]
    a, code = run(argv)
    b, _ = run(argv)
    assert a == b and code == EXIT_OK


def test_corpus_spec_errors_are_input_errors():
    assert run(["corpus", "seed=1,colour=red"])[1] == EXIT_INPUT
