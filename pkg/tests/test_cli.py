import json
import shutil
import subprocess
from importlib import resources

import jsonschema
import pytest

from milef.cli import main
from milef.exactgeom import HPolyhedron, VPolytope, dumps


def schema(name):
    text = resources.files("milef").joinpath(f"schemas/{name}.schema.json").read_text()
    return json.loads(text)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else dumps(obj))
    return p


@pytest.fixture
def segs(tmp_path):
    A = write(tmp_path, "A.json", VPolytope([(0,), (1,)]))
    B = write(tmp_path, "B.json", VPolytope([(0,), (2,)]))
    return A, B


@pytest.fixture
def k4(tmp_path, capsys):
    p = tmp_path / "k4.json"
    code, _, _ = run(capsys, "gen", "--family", "matching", "--n", 4, "--out", p)
    assert code == 0
    return p


def test_rdist_plain_and_json(capsys, segs):
    code, out, _ = run(capsys, "rdist", *segs, "--plain")
    assert code == 0 and out == "1\n"
    code, out, _ = run(capsys, "rdist", *segs)
    doc = json.loads(out)
    jsonschema.validate(doc, schema("rdist"))
    assert doc["value"] == "1"


def test_gap(capsys, tmp_path):
    A = write(tmp_path, "a.json", VPolytope([(0, 0), (1, 0), (0, 1)]))
    B = write(tmp_path, "b.json", VPolytope([(0, 0), (2, 0), (0, 1)]))
    code, out, _ = run(capsys, "gap", "--max", A, B)
    doc = json.loads(out)
    jsonschema.validate(doc, schema("gap"))
    assert code == 0 and doc["value"] == "1"
    code, _, err = run(capsys, "gap", A, B)
    assert code == 1 and "error" in err


def test_gen_verify_and_schema(capsys, k4):
    jsonschema.validate(json.loads(k4.read_text()), schema("gen"))
    code, out, _ = run(capsys, "verify", k4)
    doc = json.loads(out)
    jsonschema.validate(doc, schema("verify"))
    assert code == 0 and doc["status"] == "PASS" and doc["found_count"] == 10


def test_verify_mutation_exit_2(capsys, tmp_path, k4):
    doc = json.loads(k4.read_text())
    Q = doc["milef"]["Q"]
    del Q["ineq_lhs"][6], Q["ineq_rhs"][6]
    bad = write(tmp_path, "bad.json", json.dumps(doc))
    code, out, _ = run(capsys, "verify", bad)
    assert code == 2 and json.loads(out)["status"] == "FAIL"


def test_output_is_byte_identical(capsys, k4, tmp_path):
    outs = []
    for i in range(2):
        p = tmp_path / f"mi{i}.json"
        assert run(capsys, "mihull", k4, "--projected", "--out", p)[0] == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    doc = json.loads(outs[0])
    jsonschema.validate(doc, schema("mihull"))
    assert len(doc["hull"]["vertices"]) == 10


def test_slice_and_lef(capsys, tmp_path):
    from milef.exactgeom import AffineMap
    from milef.formats import milef_to_json
    from milef.milefcore import Milef

    I = AffineMap.identity(1)
    M = Milef(HPolyhedron([[1], [-1]], ["5/2", 0]), I, I)
    p = write(tmp_path, "m.json", json.dumps(milef_to_json(M)))
    code, out, _ = run(capsys, "slice", p, "--delta", "1/8")
    doc = json.loads(out)
    jsonschema.validate(doc, schema("slice"))
    assert code == 0 and doc["family_size"] == 3 and doc["rdist_achieved"] == "0"
    code, out, _ = run(capsys, "lef", p, "--delta", "1/8", "--verify-balas")
    doc = json.loads(out)
    jsonschema.validate(doc, schema("lef"))
    assert code == 0 and doc["report"]["rdist_achieved"] == "0" and doc["report"]["balas_verified"]


def test_width(capsys, tmp_path):
    p = write(tmp_path, "sq.json", HPolyhedron.box([0, 0], [1, 1]))
    code, out, _ = run(capsys, "width", p, "--v-max", 3)
    doc = json.loads(out)
    jsonschema.validate(doc, schema("width"))
    assert code == 0 and doc["width"] == "1" and doc["direction"] == [1, 0] and doc["label"] == "exact"


def test_bimod_matrix_file(capsys, tmp_path):
    good = write(tmp_path, "g.json", json.dumps([[1, 0], [0, 1], [1, 1]]))
    code, out, _ = run(capsys, "bimod", good)
    doc = json.loads(out)
    jsonschema.validate(doc, schema("bimod"))
    assert code == 0 and doc["max_abs_subdet"] == 1
    bad = write(tmp_path, "b.json", json.dumps({"rows": [[3]]}))
    code, out, _ = run(capsys, "bimod", bad)
    assert code == 2 and json.loads(out)["witness"] == [0]


def test_usage_errors(capsys, tmp_path, segs):
    assert run(capsys)[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    code, _, err = run(capsys, "rdist", tmp_path / "missing.json", segs[1])
    assert code == 1 and "cannot read" in err
    junk = write(tmp_path, "junk.json", "{not json")
    assert run(capsys, "rdist", junk, segs[1])[0] == 1
    zero = write(tmp_path, "z.json", '{"type":"VPolytope","ambient_dim":1,"vertices":[["1/0"]],"rays":[]}')
    code, _, err = run(capsys, "rdist", zero, segs[1])
    assert code == 1 and "vertices" in err
    code, _, err = run(capsys, "slice", segs[0], "--delta", "0")
    assert code == 1 and "delta" in err
    code, _, err = run(capsys, "rdist", segs[1], segs[0])
    assert code == 1 and "not contained" in err


def test_resource_cap_exit_3(capsys, tmp_path):
    code, _, err = run(capsys, "gen", "--family", "matching", "--n", 5, "--caps", "max_graph_n=4")
    assert code == 3 and "max_graph_n" in err


def test_caps_env(capsys, monkeypatch):
    monkeypatch.setenv("MILEF_CAPS", "max_graph_n=3")
    code, _, _ = run(capsys, "gen", "--family", "matching", "--n", 4)
    assert code == 3


@pytest.mark.skipif(shutil.which("milef") is None, reason="console script not installed")
def test_console_script(segs):
    r = subprocess.run(["milef", "rdist", *map(str, segs), "--plain"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "1\n"
