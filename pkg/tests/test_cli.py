import json

import pytest

from grpd.cli import main
from grpd.instance import CORPUS, InputError, corpus_path, load_instance, parse_instance


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def write(tmp_path, data, name="inst.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


SMALL = {
    "name": "small",
    "group": {"elements": ["1", "x"], "table": [["1", "x"], ["x", "1"]]},
    "graph": {"vertices": ["north pole", "équateur", "south"], "edges": [["north pole", "équateur"],
                                                                         ["équateur", "south"]]},
    "action": {"x": {"north pole": "south", "équateur": "équateur", "south": "north pole"}},
    "gpaths": {"down": {"cuts": [0, 1, 2], "pieces": [["north pole", "équateur"], ["équateur", "north pole"]],
                        "connectors": ["x"]}},
}


def test_corpus_loads():
    for name in CORPUS:
        inst = load_instance(corpus_path(name))
        assert inst.name == name


def test_validate_reflection(capsys):
    code, rep, _ = run_cli(capsys, "validate", "--instance", str(corpus_path("reflection-c4")))
    assert code == 0 and rep["ok"] and rep["schema_version"] == 1
    assert rep["result"]["errors"] == []


def test_equiv_example_pair(capsys):
    code, rep, _ = run_cli(capsys, "equiv", "--instance", str(corpus_path("reflection-c4")),
                           "--pair", "stay_vs_reflect")
    assert code == 0
    pair = rep["result"]["pairs"]["stay_vs_reflect"]
    assert pair["equivalent"] and pair["routes_agree"]
    assert "g" in pair["direct_witness"]["elements"]


def test_loops_point_z3(capsys):
    code, rep, _ = run_cli(capsys, "loops", "--instance", str(corpus_path("point-z3")))
    assert code == 0
    classes = rep["result"]["reduced"]["classes"]
    assert rep["result"]["classes"] == 3
    assert all(c["isotropy"]["order"] == 3 and c["isotropy"]["abelian"] for c in classes)


@pytest.mark.parametrize("command", ["orbits", "skeleton", "normalize", "equiv", "loops", "based", "pullback",
                                     "homotopy-check"])
def test_commands_on_every_instance(capsys, command):
    for name in CORPUS:
        code, rep, err = run_cli(capsys, command, "--instance", str(corpus_path(name)), "--grid", "1")
        assert code == 0, (name, err, rep)
        assert rep["command"] == command and rep["grid"] == 1


def test_map_commands(capsys):
    path = str(corpus_path("quotient-c6-c3"))
    code, rep, _ = run_cli(capsys, "morita", "--instance", path)
    assert code == 0 and rep["result"]["maps"]["quotient"]["paths"]["essential_equivalence"]
    code, rep, _ = run_cli(capsys, "lift", "--instance", path, "--gpath", "walk")
    assert code == 0 and rep["result"]["lifts"]["quotient:walk"]["verified"]


def test_labels_round_trip(capsys, tmp_path):
    path = write(tmp_path, SMALL)
    code, rep, _ = run_cli(capsys, "normalize", "--instance", path)
    assert code == 0
    down = rep["result"]["gpaths"]["down"]
    assert down["gpath"]["pieces"] == [["north pole", "équateur"], ["équateur", "north pole"]]
    assert down["straightened"] == ["north pole", "équateur", "south"]
    code, rep, _ = run_cli(capsys, "orbits", "--instance", path)
    assert ["north pole", "south"] in [o["orbit"] for o in rep["result"]["orbits"]]


def test_out_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    code = main(["orbits", "--instance", str(corpus_path("rotation-c6")), "--out", str(out)])
    assert code == 0 and capsys.readouterr().out == ""
    assert json.loads(out.read_text(encoding="utf-8"))["result"]["free"] is True


def test_reports_are_repeatable(capsys):
    args = ["based", "--instance", str(corpus_path("plus-klein"))]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first


def test_violation_exit_code(capsys, tmp_path):
    bad = dict(SMALL, gpaths={"broken": {"cuts": [0, 1, 2], "pieces": [["north pole", "équateur"],
                                                                       ["south", "équateur"]],
                                         "connectors": ["1"]}})
    code, rep, _ = run_cli(capsys, "validate", "--instance", write(tmp_path, bad))
    assert code == 1 and not rep["ok"] and rep["result"]["errors"]


@pytest.mark.parametrize("mutate,needle", [
    (lambda d: d.pop("group"), "group"),
    (lambda d: d.update(action={"y": {}}), "'y'"),
    (lambda d: d.update(schema_version=7), "schema_version"),
    (lambda d: d.update(basepoints={"p": "nowhere"}), "basepoint"),
    (lambda d: d.update(pairs={"q": ["down", "missing"]}), "missing"),
    (lambda d: d["group"].update(table=[["1", "x"], ["x", "x"]]), ""),
    (lambda d: d.update(action={"x": {"north pole": "équateur", "équateur": "north pole", "south": "south"}}), ""),
])
def test_input_errors(capsys, tmp_path, mutate, needle):
    data = json.loads(json.dumps(SMALL))
    mutate(data)
    code, rep, err = run_cli(capsys, "validate", "--instance", write(tmp_path, data))
    assert code == 2 and rep is None
    assert "input error" in err and needle in err


def test_unreadable_inputs(capsys, tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{\n  \"name\": \n}")
    code, _, err = run_cli(capsys, "validate", "--instance", str(p))
    assert code == 2 and "line 3" in err
    code, _, err = run_cli(capsys, "validate", "--instance", str(tmp_path / "absent.json"))
    assert code == 2
    code, _, err = run_cli(capsys, "validate")
    assert code == 2 and "--instance" in err


def test_enumeration_guard(capsys):
    code, _, err = run_cli(capsys, "skeleton", "--instance", str(corpus_path("rotation-c6")), "--grid", "14")
    assert code == 2 and "bound" in err.lower()


def test_unknown_names(capsys):
    code, _, err = run_cli(capsys, "normalize", "--instance", str(corpus_path("point-z3")), "--gpath", "nope")
    assert code == 2 and "nope" in err
    code, _, err = run_cli(capsys, "morita", "--instance", str(corpus_path("point-z3")))
    assert code == 2


def test_parse_instance_directly():
    inst = parse_instance(SMALL)
    assert inst.grid == 2 and len(inst.group) == 2
    with pytest.raises(InputError):
        parse_instance([])
