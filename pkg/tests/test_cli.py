import json
import subprocess
import sys

import pytest

from depthcalc import fixtures
from depthcalc.cli import SCHEMA, run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip().startswith("{") else out), err


def test_herbrand_wild_quadratic(capsys):
    code, doc, _ = call(capsys, "herbrand", "-i", "fixture:wild-quadratic")
    assert code == 0 and doc["schema"] == SCHEMA
    assert doc["tame"] is False
    assert doc["upper_jumps"] == [["1", 1]]


def test_herbrand_towers(capsys):
    code, doc, _ = call(capsys, "herbrand", "-i", "fixture:cyclotomic-p3-towers")
    assert code == 0
    assert len(doc["towers"]) == 4
    assert all(t["tower_law_holds"] for t in doc["towers"])


def test_depth_torus_strictness(capsys):
    code, doc, _ = call(capsys, "depth-torus", "-i", "fixture:strictness-torus")
    assert code == 0
    assert doc["phi_T"] == "3/2" and doc["dep_std"] == "1"
    assert doc["strict"] is True and doc["phi_bound_holds"] is True
    assert doc["ell_bound"] == 2


def test_ell_bound_and_phi_group(capsys):
    torus = {"components": [fixtures.WILD_QUADRATIC.to_json()]}
    code, doc, _ = call(capsys, "ell-bound", "-i", json.dumps({"torus": torus, "r": "1"}))
    assert code == 0 and doc["ell"] == 2
    code, doc, _ = call(capsys, "phi-group", "-i", json.dumps({"vertex": {"tori": [torus]}}))
    assert code == 0


def test_coinvariants(capsys):
    code, doc, _ = call(capsys, "coinvariants", "-i", '{"rank": 2, "inertia": [[[0,1],[1,0]]]}')
    assert code == 0
    assert doc["coinvariants"]["free_rank"] == 1


def test_sigma_fixed_and_cartan(capsys):
    code, doc, _ = call(capsys, "sigma-fixed", "-i", "fixture:sl2-minus-one")
    assert code == 0 and doc["count"] == 2 and doc["hypotheses_hold"] is False
    code, doc, _ = call(capsys, "cartan", "-i", "fixture:sl2", "--radius", "3")
    assert code == 0 and len(doc["orbits"]) == 4


def test_hecke_with_oracle_and_match(capsys):
    cfg = {"coxeter": {"labels": ["s"], "bonds": []}, "q": "3",
           "products": [[["s"], ["s"]]],
           "oracle": {"p": 3, "ell": 1, "basis": [["s"], []]},
           "match": "fixture:finite-a1-q3", "induction": [6, 2]}
    code, doc, _ = call(capsys, "hecke", "-i", json.dumps(cfg))
    assert code == 0
    assert doc["quadratic"]["ok"] and doc["oracle"]["ok"] and doc["match"]["ok"]
    assert doc["q_from_induction"] == "3"


def test_finite_hecke(capsys):
    code, doc, _ = call(capsys, "finite-hecke", "-i", "fixture:sl2-f3-borel")
    assert code == 0 and doc["group_order"] == 24 and doc["mass_conservation"]
    cfg = {"p": 3, "ell": 2, "ring": "fpt", "subgroup": "congruence", "level": 1,
           "transfer": {"t": 6}, "idempotent": {"m": 2, "r": 1}}
    code, doc, _ = call(capsys, "finite-hecke", "-i", json.dumps(cfg))
    assert code == 0 and doc["transfer"]["ok"] and doc["idempotent"] is True


def test_exit_codes(capsys):
    code, _, err = call(capsys, "herbrand", "-i", '{"p": 4, "e": 1}')
    assert code == 1 and json.loads(err)["error"]["type"] == "validation"
    code, _, err = call(capsys, "finite-hecke", "-i", '{"p": 2, "ell": 5}')
    assert code == 3 and json.loads(err)["error"]["type"] == "resource"
    code, _, _ = call(capsys, "herbrand", "-i", "fixture:no-such-thing")
    assert code == 1


def test_caps_are_configurable(capsys):
    code, _, _ = call(capsys, "finite-hecke", "-i", '{"p": 3, "ell": 1}', "--cap", "10")
    assert code == 3


def test_table_format_and_output_file(capsys, tmp_path):
    path = tmp_path / "out.json"
    code, _, _ = call(capsys, "herbrand", "-i", "fixture:tame-p3-e2", "-o", str(path))
    assert code == 0 and json.loads(path.read_text())["tame"] is True
    code, out, _ = call(capsys, "herbrand", "-i", "fixture:tame-p3-e2", "--format", "table")
    assert code == 0 and "tame" in out


def test_input_from_file_and_stdin(tmp_path):
    path = tmp_path / "in.json"
    path.write_text(json.dumps(fixtures.WILD_QUADRATIC.to_json()))
    for args, stdin in ((["-i", str(path)], None), (["-i", "-"], path.read_text())):
        proc = subprocess.run([sys.executable, "-m", "depthcalc", "herbrand", *args],
                              input=stdin, capture_output=True, text=True)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["upper_jumps"] == [["1", 1]]


@pytest.mark.parametrize("name", [n for n in fixtures.names() if n.startswith("sigma:")])
def test_sigma_fixtures_run(capsys, name):
    code, doc, _ = call(capsys, "sigma-fixed", "-i", f"fixture:{name}", "--radius", "2")
    assert code == 0
    if doc["hypotheses_hold"]:
        assert doc["only_identity"]
