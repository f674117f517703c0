import json
from pathlib import Path

import pytest

from gkmlegs import cli
from gkmlegs.bundle import projectivize
from gkmlegs.cohomology import c1_tautological, chern, decompose, reduce_presentation
from gkmlegs.corpus import BUILTINS, cp2_base, cp2_tangent, load_builtin
from gkmlegs.io import DocumentError, dumps, loads, parse, serialize

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def round_trip_objects():
    xi = cp2_tangent()
    P = projectivize(xi)
    t = c1_tautological(P)
    return [
        cp2_base().graph,
        cp2_base(),
        xi,
        P,
        chern(xi, 1),
        t * t,
        decompose(P, t * t),
        reduce_presentation(P, [chern(xi, 2), 0, 1]),
    ]


@pytest.mark.parametrize("obj", round_trip_objects(), ids=lambda o: type(o).__name__)
def test_parse_inverts_serialize(obj):
    doc = serialize(obj)
    again = parse(loads(dumps(doc)))
    assert type(again) is type(obj)
    assert again == obj
    assert serialize(again) == doc


def test_every_builtin_serializes():
    for name in BUILTINS:
        obj = load_builtin(name, seed=3)
        assert parse(serialize(obj)) == obj


def test_document_header_checks():
    with pytest.raises(DocumentError, match="kind"):
        parse({"kind": "mystery", "schema_version": 1})
    with pytest.raises(DocumentError, match="schema_version"):
        parse({"kind": "graph", "schema_version": 99, "vertices": ["p"]})
    with pytest.raises(DocumentError, match="missing field"):
        parse({"kind": "labeled-graph", "schema_version": 1, "vertices": ["p"], "edges": []})


def test_bad_json_reports_position():
    with pytest.raises(DocumentError) as info:
        loads('{"kind": "graph",\n  oops}')
    assert info.value.line == 2


def test_golden_cp2_tangent(capsys):
    code, out, _ = run(capsys, "corpus", "emit", "cp2-tangent")
    assert code == 0
    assert out == (GOLDEN / "cp2-tangent.json").read_text()


def test_golden_projectivization(capsys):
    code, out, _ = run(capsys, "projectivize", "builtin:cp2-tangent")
    assert code == 0
    assert out == (GOLDEN / "cp2-tangent-projectivization.json").read_text()
    doc = json.loads(out)
    assert doc["gkm"] is True
    assert doc["graph"]["labels"]["l:p:1|e:e2:1:2"] == [0, 1]


def test_projectivize_golden_file_input_is_idempotent(capsys, tmp_path):
    out_path = tmp_path / "p.json"
    assert run(capsys, "projectivize", str(GOLDEN / "cp2-tangent.json"), "--out", str(out_path))[0] == 0
    assert out_path.read_text() == (GOLDEN / "cp2-tangent-projectivization.json").read_text()


def test_validate_commands(capsys):
    code, out, _ = run(capsys, "validate", "builtin:cp2-base")
    report = json.loads(out)
    assert code == 0 and report["valid"] and report["gkm"] and report["rank"] == 2
    code, out, _ = run(capsys, "validate", "builtin:cp2-tangent", "--format", "pretty")
    assert code == 0 and "GKM: no" in out


def test_validate_corrupted_json(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "graph", ]')
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2
    assert "line 1" in err


def test_validate_invalid_bundle(capsys, tmp_path):
    doc = serialize(cp2_tangent())
    doc["transport"]["p|e2"] = [1, 2]
    doc["transport"]["q|e2"] = [1, 2]
    path = tmp_path / "bad-bundle.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "validate", str(path))
    assert code == 1
    assert "witness" in json.loads(out)["errors"][0]
    code, _, err = run(capsys, "projectivize", str(path))
    assert code == 1 and "witness" in err


def test_rank_one_projectivize_echoes_base(capsys, tmp_path):
    path = tmp_path / "line.json"
    assert run(capsys, "corpus", "emit", "random", "--rank", "1", "--seed", "5", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "projectivize", str(path))
    assert code == 0
    doc = json.loads(out)
    base = json.loads(path.read_text())["base"]
    assert doc["graph"] == base


def test_chern_and_bh_check(capsys):
    code, out, _ = run(capsys, "cohomology", "chern", "builtin:cp2-tangent", "--k", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "class"
    assert doc["values"]["q"] == [
        {"coefficient": 1, "exponents": [1, 0]},
        {"coefficient": -2, "exponents": [0, 1]},
    ]
    code, out, _ = run(capsys, "cohomology", "bh-check", "builtin:cp2-tangent", "--format", "pretty")
    assert code == 0
    assert out.strip() == "residue = 0 at 6/6 vertices"


def test_decompose_and_mu_commands(capsys, tmp_path):
    t2 = tmp_path / "t2.json"
    assert run(capsys, "cohomology", "taut-c1", "builtin:cp2-tangent", "--power", "2", "--out", str(t2))[0] == 0
    code, out, _ = run(capsys, "cohomology", "decompose", "builtin:cp2-tangent", "--class", str(t2))
    assert code == 0
    doc = json.loads(out)
    assert doc["reassembly"] is True
    xi = cp2_tangent()
    assert doc["Q"][0] == (-chern(xi, 2)).to_json()
    assert doc["Q"][1] == chern(xi, 1).to_json()
    dpath = tmp_path / "d.json"
    dpath.write_text(out)
    code, out, _ = run(capsys, "cohomology", "mu", "builtin:cp2-tangent", "--q", str(dpath))
    assert code == 0
    assert json.loads(out)["values"] == json.loads(t2.read_text())["values"]
    # bare {"Q": [...]} input works too
    bare = tmp_path / "bare.json"
    bare.write_text(json.dumps({"Q": doc["Q"]}))
    assert run(capsys, "cohomology", "mu", "builtin:cp2-tangent", "--q", str(bare))[0] == 0


def test_decompose_invalid_class_exit_1(capsys, tmp_path):
    P = projectivize(cp2_tangent())
    doc = {"values": {v: [] for v in P.total.graph.vertices}}
    doc["values"]["l:p:1"] = [{"coefficient": 1, "exponents": [1, 0]}]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "cohomology", "decompose", "builtin:cp2-tangent", "--class", str(path))
    assert code == 1 and "congruence" in err


def test_corpus_list_and_random(capsys):
    code, out, _ = run(capsys, "corpus", "list")
    assert code == 0 and len(json.loads(out)["names"]) >= 4
    a = run(capsys, "corpus", "emit", "random", "--seed", "7", "--rank", "2")[1]
    b = run(capsys, "corpus", "emit", "random", "--seed", "7", "--rank", "2")[1]
    assert a == b
    assert parse(json.loads(a)).rank == 2


def test_unknown_builtin(capsys):
    code, _, err = run(capsys, "corpus", "emit", "nope")
    assert code == 2 and "unknown builtin" in err
