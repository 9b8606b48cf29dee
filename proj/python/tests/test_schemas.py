import json
import pathlib

import jsonschema
import pytest

import uniformis as u

ROOT = pathlib.Path(__file__).resolve().parents[2]
DATA = ROOT / "data"

KIND = {
    "line.json": "space", "plane.json": "space", "plane3.json": "space",
    "cloud_a.json": "cloud", "cloud_b.json": "cloud", "unit_interval.json": "cloud",
    "grid_line.json": "cloud", "grid_ekeland.json": "cloud", "grid_wide.json": "cloud", "grid_plane.json": "cloud",
    "scale_expr.json": "set-expression", "union_expr.json": "set-expression",
    "hull_scale_op.json": "set-operator", "identity_op.json": "set-operator",
    "half_plus_half.json": "operator", "two_branch.json": "operator", "halving_plane.json": "operator",
    "picard_plane.json": "operator", "inward_map.json": "operator", "shift_map.json": "operator",
    "doubling.json": "operator", "constant_map.json": "operator",
    "caristi_potentials.json": "potentials", "abs_potential.json": "potentials",
}


def schema(kind):
    return json.loads((ROOT / "schemas" / f"{kind}.schema.json").read_text())


def test_every_fixture_is_classified():
    assert set(KIND) | {"broken.json"} == {p.name for p in DATA.glob("*.json")}


@pytest.mark.parametrize("name", sorted(KIND))
def test_fixture_matches_schema(name):
    jsonschema.validate(json.loads((DATA / name).read_text()), schema(KIND[name]))


def test_schemas_reject_obvious_mistakes():
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"dimension": 0, "pseudometrics": []}, schema("space"))
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"kind": "affine_branches"}, schema("operator"))
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"op": "ball"}, schema("set-expression"))


def test_cli_trace_lines_match_schema():
    code, out, _ = u.run_cli("solve-picard", "--space", DATA / "line.json", "--operator", DATA / "half_plus_half.json",
                             "--x0", "0", "--trace", "-", "--quiet")
    assert code == 0
    lines = [json.loads(line) for line in out.splitlines() if line.startswith("{")]
    assert lines and lines[-1]["type"] == "summary"
    for rec in lines:
        jsonschema.validate(rec, schema("trace-record"))
