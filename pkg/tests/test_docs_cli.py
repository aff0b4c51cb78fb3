import json
import subprocess
import sys

import pytest

from pregeom import docs, gen
from pregeom.cli import main
from pregeom.errors import ValidationError
from pregeom.perm import PermGroup


@pytest.mark.parametrize("build", [gen.fano_pair, gen.points_pairs_S4, gen.f20_case_iia,
                                   lambda: gen.example_gamma_lambda(2, 2)])
def test_binding_roundtrip(build, tmp_path):
    a = build()
    path = tmp_path / "x.binding"
    docs.write_json(docs.binding_doc(a), path)
    b = docs.load_binding(path)
    assert b.geometry == a.geometry and b.group.generators == a.group.generators
    assert docs.binding_doc(b) == docs.binding_doc(a)


def test_binding_with_file_references(tmp_path):
    a = gen.points_pairs_S4()
    (tmp_path / "g.json").write_text(json.dumps(docs.group_doc(a.group)))
    (tmp_path / "p.json").write_text(json.dumps(docs.pregeometry_doc(a.geometry)))
    (tmp_path / "b.binding").write_text(json.dumps({"kind": "binding", "pregeometry": "p.json", "group": "g.json"}))
    b = docs.load_binding(tmp_path / "b.binding")
    assert b.geometry == a.geometry


def test_binding_with_unsorted_ids():
    # element 0 is a line, 1 and 2 points: the group is moved onto dense ids
    pdoc = {"kind": "pregeometry", "types": ["p", "l"],
            "elements": [{"id": 0, "type": "l"}, {"id": 1, "type": "p"}, {"id": 2, "type": "p"}],
            "incidences": [[0, 1], [0, 2]]}
    gdoc = {"kind": "group", "degree": 3, "generators": [[0, 2, 1]]}
    a = docs.binding_from_doc({"kind": "binding", "pregeometry": pdoc, "group": gdoc})
    assert a.geometry.types == ("p", "l")
    assert a.group.generators == ((1, 0, 2),)


@pytest.mark.parametrize("doc", [
    {"kind": "group", "degree": 3, "generators": [[0, 1, 2]], "extra": 1},
    {"kind": "nope"},
    {"kind": "group", "degree": 3, "generators": [[0, 0, 1]]},
    [1, 2],
])
def test_bad_documents(doc):
    with pytest.raises(ValidationError):
        docs.group_from_doc(doc) if isinstance(doc, dict) and doc.get("kind") == "group" else docs.validate_document(doc)


def test_degree_mismatch():
    a = gen.fano_pair()
    doc = {"kind": "binding", "pregeometry": docs.pregeometry_doc(a.geometry),
           "group": docs.group_doc(PermGroup(3, [(1, 2, 0)]))}
    with pytest.raises(ValidationError, match="degree"):
        docs.binding_from_doc(doc)


def test_cli_gen_then_classify(tmp_path, capsys):
    out = tmp_path / "out.binding"
    assert main(["gen", "gamma_lambda", "--p", "2", "--d", "1", "--lambda", "full", "--out", str(out)]) == 0
    capsys.readouterr()
    assert main(["--json", "classify", str(out)]) == 0
    rep = json.loads(capsys.readouterr().out)["report"]
    assert rep["case_tag"] == "iii"
    assert rep["table1_line"]["line"] == "line-iii"
    assert rep["table1_line"]["params"]["k"] == 3 and rep["table1_line"]["params"]["m"] == 2


def test_cli_quotient(tmp_path, capsys):
    src = tmp_path / "k24.binding"
    assert main(["gen", "cyclic_pair", "--m", "4", "--out", str(src)]) == 0
    capsys.readouterr()
    assert main(["--json", "quotient", str(src), "--normal", "(0 2)(1 3)"]) == 0
    rep = json.loads(capsys.readouterr().out)["report"]
    assert rep["fiber_sizes"] == {"1": 2, "2": 4}
    assert rep["part_degrees"] == {"1->2": 4, "2->1": 2}
    assert rep["k_table"] == {"1->2": 1, "2->1": 2}
    q = docs.load_binding(rep["output"])
    assert q.geometry.fiber_sizes() == (2, 4)
    part = tmp_path / "part.json"
    part.write_text(json.dumps([[0, 2], [1, 3], [4], [5], [6], [7]]))
    assert main(["quotient", str(src), "--partition", str(part), "--out", str(tmp_path / "q2.binding")]) == 0


def test_cli_analyze_and_decompose(tmp_path, capsys):
    src = tmp_path / "fano.binding"
    main(["gen", "fano", "--out", str(src)])
    capsys.readouterr()
    assert main(["--json", "analyze", str(src)]) == 0
    rep = json.loads(capsys.readouterr().out)["report"]
    assert rep["in_family"] and rep["type_classes"]["qp"] == ["points", "lines"]
    assert rep["primitive_basic"] and rep["normal_basic"] and rep["case_tag"] == "i"
    assert main(["decompose", str(src)]) == 0
    assert "{points, lines}" in capsys.readouterr().out


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["classify", str(tmp_path / "missing.binding")]) == 2
    src = tmp_path / "s4.binding"
    main(["gen", "points_pairs_S4", "--out", str(src)])
    assert main(["decompose", str(src)]) == 2
    assert main(["quotient", str(src), "--normal", "(0 1)"]) == 2
    big = tmp_path / "a5.binding"
    main(["gen", "line_i_A5", "--out", str(big)])
    assert main(["--max-order", "100", "classify", str(big)]) == 3
    assert main(["gen", "gamma_lambda", "--p", "4"]) == 2
    capsys.readouterr()


def test_cli_census_quick(capsys):
    assert main(["census", "--suite", "quick"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 14


def test_console_script_entry():
    r = subprocess.run([sys.executable, "-m", "pregeom.cli", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "census" in r.stdout
