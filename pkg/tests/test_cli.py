import json

import pytest

from relcoh.cli import OPERATIONS, list_builtins, main, run, run_scenario
from relcoh.errors import ParseError, ValidationError
from relcoh.scenario import builtin_names, builtin_path, load_path, load_text

CATALOG = {"point", "sierpinski", "pseudocircle", "pseudocircle-pair", "cone-map", "arc-embedding",
           "three-set-cover"}

CIRCLE = {"points": ["a", "b", "c", "d"], "hasse_edges": [["c", "a"], ["c", "b"], ["d", "a"], ["d", "b"]]}


def scenario(ops, **extra):
    raw = {"name": "t", "spaces": {"C": CIRCLE}, "sheaves": {"Q": {"space": "C", "constant": 1}},
           "operations": ops}
    raw.update(extra)
    return raw


def write(tmp_path, raw, name="s.json"):
    p = tmp_path / name
    p.write_text(raw if isinstance(raw, str) else json.dumps(raw))
    return p


def test_catalog():
    names = [n for n, _ in list_builtins()]
    assert len(names) >= 7
    assert len(set(names)) == len(names)
    assert CATALOG <= set(names)


@pytest.mark.parametrize("name", builtin_names())
def test_every_builtin_passes(name):
    rep = run(builtin_path(name))
    assert rep.passed, rep.to_table()


def test_builtins_touch_every_operation():
    used = {op["op"] for n in builtin_names() for op in load_path(builtin_path(n)).operations}
    assert used == set(OPERATIONS)


def test_point_reports_one_global_section():
    rep = run(builtin_path("point"))
    assert rep.results[0].dims["H"][0] == 1


def test_pseudocircle_pair_relative_dims():
    rep = run(builtin_path("pseudocircle-pair"))
    first = rep.results[0]
    assert first.dims["H"][:2] == (0, 1)


def test_reports_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["run", "pseudocircle", "--report", str(a)]) == 0
    assert main(["run", "pseudocircle", "--report", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert run(builtin_path("cone-map")).to_table() == run(builtin_path("cone-map")).to_table()


def test_json_output(capsys):
    assert main(["run", "point", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["scenario"] == "point" and doc["passed"]


def test_full_mode_and_larger_bound():
    assert run(builtin_path("pseudocircle"), mode="full").passed
    assert run(builtin_path("pseudocircle-pair"), bound=4).passed


def test_failed_expectation_exits_one(tmp_path, capsys):
    p = write(tmp_path, scenario([{"op": "cohomology", "sheaf": "Q", "expect": {"dims": [1, 0]}}]))
    assert main(["run", str(p)]) == 1
    out = capsys.readouterr().out
    assert "FAIL expected dimensions" in out
    assert "witness" in out


def test_operation_error_is_recorded_not_raised(tmp_path):
    raw = scenario([{"op": "complete-member-homotopy", "cover": "arcs", "sheaf": "Q"}],
                   covers={"arcs": {"space": "C", "members": [["a", "b", "c"], ["a", "b", "d"]]}})
    rep = run_scenario(load_text(json.dumps(raw)))
    assert not rep.passed
    assert rep.results[0].error.startswith("NoFullSet")


def test_broken_json_reports_position(tmp_path, capsys):
    p = write(tmp_path, '{\n  "name": "x",\n  "spaces": {,\n}')
    with pytest.raises(ParseError) as err:
        load_path(p)
    assert err.value.line == 3
    assert main(["run", str(p)]) == 2
    assert "line 3" in capsys.readouterr().err


def test_malformed_restriction_matrix(tmp_path, capsys):
    raw = {"name": "bad", "spaces": {"L": {"points": ["x", "y", "z"], "hasse_edges": [["x", "y"], ["y", "z"]]}},
           "sheaves": {"F": {"space": "L", "stalks": {"x": 1, "y": 1, "z": 1},
                             "restrictions": [{"from": "x", "to": "y", "matrix": [[1]]},
                                              {"from": "y", "to": "z", "matrix": [[1]]},
                                              {"from": "x", "to": "z", "matrix": [[3]]}]}},
           "operations": []}
    with pytest.raises(ValidationError) as err:
        load_text(json.dumps(raw))
    assert err.value.invariant == "functoriality"
    assert main(["run", str(write(tmp_path, raw))]) == 2
    assert "functoriality" in capsys.readouterr().err


def test_unknown_names(tmp_path):
    with pytest.raises(ParseError):
        load_text(json.dumps(scenario([], opens={"U": {"space": "Nope", "points": []}})))
    rep_raw = scenario([{"op": "cohomology", "sheaf": "Missing"}])
    assert main(["run", str(write(tmp_path, rep_raw))]) == 2
    assert main(["run", str(write(tmp_path, scenario([{"op": "frobnicate"}]), "u.json"))]) == 2
    assert main(["run", "no-such-scenario"]) == 2


def test_non_open_set_rejected():
    with pytest.raises(ValidationError):
        load_text(json.dumps(scenario([], opens={"U": {"space": "C", "points": ["c"]}})))


def test_expected_error_passes(tmp_path):
    raw = scenario([{"op": "flabby-pair", "complex": "S", "sub": ["a", "b"], "expect": {"error": "NotFlabby"}}],
                   complexes={"S": {"sheaf": "Q"}})
    assert run_scenario(load_text(json.dumps(raw))).passed


def test_list_and_verify_all(capsys):
    assert main(["list-builtins"]) == 0
    listing = capsys.readouterr().out
    assert all(name in listing for name in CATALOG)
    assert main(["verify-all"]) == 0
    assert capsys.readouterr().out.count("PASS") == len(builtin_names())
