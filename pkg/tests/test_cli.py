import hashlib
import io
import json
import subprocess
import sys
from pathlib import Path as FsPath

import jsonschema
import pytest

from conftest import GRAPH_DIR
from leavitt import __version__
from leavitt.cli import COMMANDS, run
from leavitt.graph import parse_graph
from leavitt.lpa import LeavittPathAlgebra
from leavitt.scalar import Field

SCHEMA_DIR = FsPath(__file__).resolve().parent.parent / "docs" / "schemas"
SCHEMAS = {c: json.loads((SCHEMA_DIR / f"{c}.schema.json").read_text()) for c in COMMANDS}


def graph(name):
    return str(GRAPH_DIR / f"{name}.json")


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = run(list(argv), out, err)
    return status, out.getvalue(), err.getvalue()


def report(*argv):
    status, out, _ = invoke(*argv)
    rep = json.loads(out)
    jsonschema.validate(rep, SCHEMAS[rep["command"]])
    return status, rep


# -- the documented examples ---------------------------------------------------


def test_decompose_loop_gf2():
    status, rep = report("decompose", "--graph", graph("loop"), "--field", "gf:2")
    assert status == 0
    assert rep["field"] == "gf:2"
    assert rep["result"]["shape"] == "M_1(K[x,x^-1])"


def test_iso_two_cycle_loop_tail():
    status, rep = report("iso", "--graph", graph("two_cycle"), "--graph", graph("loop_tail"))
    assert status == 0 and rep["result"]["decision"] == "isomorphic"


def test_eval_a2():
    status, rep = report("eval", "--graph", graph("a2"), "--field", "q", "--expr", "e* e")
    assert status == 0 and rep["result"]["normal_form"] == "w"


def test_decompose_exit_graph():
    status, rep = report("decompose", "--graph", graph("rose2"))
    assert status == 2
    assert rep["error"]["kind"] == "precondition"
    assert rep["error"]["witness"] == {"cycle": ["e"], "exit": "f", "position": 0}


# -- every command validates against its schema ----------------------------------

CASES = [
    ("analyze", graph("rose2")),
    ("analyze", graph("tailed_two_cycle")),
    ("decompose", graph("tailed_two_cycle")),
    ("decompose", graph("a2")),
    ("eval", graph("tailed_two_cycle"), "--expr", "t a b + 2 a* t*", "--field", "qi"),
    ("eval", graph("rose2"), "--expr", "e e*"),
    ("monoid", graph("a2"), "--expr", "a_v = a_w"),
    ("monoid", graph("rose2"), "--bound", "2", "--expr", "a_v = 2 a_v"),
    ("monoid", graph("loop"), "--bound", "3"),
    ("witness", graph("rose2"), "--bound", "5"),
    ("witness", graph("loop")),
]


@pytest.mark.parametrize("case", CASES, ids=lambda c: f"{c[0]}-{FsPath(c[1]).stem}")
def test_reports_validate(case):
    cmd, path, *rest = case
    status, rep = report(cmd, "--graph", path, *rest)
    assert status == 0
    assert rep["version"] == __version__
    digest = hashlib.sha256(FsPath(path).read_bytes()).hexdigest()
    assert rep["inputs"] == [{"path": path, "sha256": digest}]


@pytest.mark.parametrize("case", CASES, ids=lambda c: f"{c[0]}-{FsPath(c[1]).stem}")
def test_byte_identical_reruns(case):
    cmd, path, *rest = case
    first = invoke(cmd, "--graph", path, *rest)
    second = invoke(cmd, "--graph", path, *rest)
    assert first == second


# -- command details --------------------------------------------------------------


def test_analyze_rose2():
    _, rep = report("analyze", "--graph", graph("rose2"))
    res = rep["result"]
    assert res["is_no_exit"] is False
    assert res["cycles"][0] == {"edges": ["e"], "base": "v", "exit": {"edge": "f", "position": 0}}


def test_eval_round_trip():
    g = parse_graph(FsPath(graph("tailed_two_cycle")).read_text())
    for field in ("q", "qi", "gf:3"):
        _, rep = report("eval", "--graph", graph("tailed_two_cycle"), "--field", field,
                        "--expr", "3 t a b b* + a* t* - 1/2 v")
        alg = LeavittPathAlgebra(g, Field.from_selector(field))
        res = rep["result"]
        nf = alg.parse(res["normal_form"])
        assert nf == alg.parse(res["expression"])
        assert alg.parse(res["star"]) == nf.star()
        total = alg.zero
        for text in res["degree_components"].values():
            total = total + alg.parse(text)
        assert total == nf


def test_eval_phi_absent_for_exit_graph():
    _, rep = report("eval", "--graph", graph("rose2"), "--expr", "e")
    assert rep["result"]["phi"] is None


def test_monoid_report():
    _, rep = report("monoid", "--graph", graph("rose2"), "--bound", "2", "--expr", "a_v = 0")
    res = rep["result"]
    assert res["relations"] == ["a_v = 2 a_v"]
    assert res["equality"]["verdict"] == "distinct"
    assert res["cancellativity"]["counterexample"] == {"a": "a_v", "b": "0", "c": "a_v"}


def test_witness_report():
    _, rep = report("witness", "--graph", graph("rose2"), "--bound", "3")
    res = rep["result"]
    assert res["nonfinite"]["x_star_x_is_one"] is True
    assert res["nonfinite"]["x_x_star_is_one"] is False
    assert res["nonfinite"]["x_x_star"] == "v - f f*"
    assert res["idempotents"]["idempotent"] and res["idempotents"]["orthogonal"]
    _, rep = report("witness", "--graph", graph("loop"))
    assert rep["result"] == {"nonfinite": None, "idempotents": None}


def test_text_format():
    status, out, _ = invoke("decompose", "--graph", graph("a2"), "--format", "text")
    assert status == 0
    assert "shape: M_2(K)" in out


# -- errors -----------------------------------------------------------------------


def test_missing_file(tmp_path):
    status, out, err = invoke("analyze", "--graph", str(tmp_path / "nope.json"))
    assert status == 1
    assert json.loads(out)["error"]["kind"] == "input"
    assert "cannot read" in err


def test_malformed_graph(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"vertices":["v"],"edges":[["e","v","x"]]}')
    status, rep = report("analyze", "--graph", str(p))
    assert status == 1 and rep["error"]["kind"] == "input"


@pytest.mark.parametrize("argv", [
    ("eval", "--graph", graph("a2")),                                  # no expression
    ("eval", "--graph", graph("a2"), "--expr", "e +"),
    ("iso", "--graph", graph("a2")),                                   # one graph
    ("decompose", "--graph", graph("a2"), "--graph", graph("loop")),   # two graphs
    ("decompose", "--graph", graph("a2"), "--field", "gf:4"),
    ("monoid", "--graph", graph("a2"), "--expr", "a_v"),
    ("monoid", "--graph", graph("a2"), "--bound", "0"),
])
def test_input_errors(argv):
    status, rep = report(*argv)
    assert status == 1 and rep["error"]["kind"] == "input"


def test_iso_with_exit_graph():
    status, rep = report("iso", "--graph", graph("rose2"), "--graph", graph("loop"))
    assert status == 2 and rep["error"]["witness"]["exit"] == "f"


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "leavitt.cli", "eval", "--graph", graph("a2"), "--expr", "e e*"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["normal_form"] == "v"
