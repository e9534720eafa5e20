import json
from pathlib import Path

import jsonschema
import pytest

from shiftedmanin.bialg import build_double
from shiftedmanin.corpus import (InputError, base_to_json, bialgebra_to_json, data_path, dumps,
                                 load_algebra, load_module, load_rtail, load_schema, module_to_json,
                                 parse_algebra, parse_text, rtail_to_json, triple_to_json)
from shiftedmanin.loopyang import sl2

ROOT = Path(__file__).resolve().parents[1]
SCHEMAS = ["algebra", "module", "report", "rtail"]
KIND_SCHEMA = {"module": "module", "rmatrix_tail": "rtail"}
DATA = sorted(p.name for p in data_path("").iterdir() if p.name.endswith(".json"))


@pytest.mark.parametrize("name", SCHEMAS)
def test_shipped_schemas_are_identical(name):
    top = (ROOT / "schemas" / f"{name}.schema.json").read_text(encoding="utf-8")
    assert json.loads(top) == load_schema(name)
    jsonschema.Draft202012Validator.check_schema(load_schema(name))


@pytest.mark.parametrize("name", DATA)
def test_data_files_validate(name):
    data = json.loads(data_path(name).read_text(encoding="utf-8"))
    schema = KIND_SCHEMA.get(data["kind"], "algebra")
    jsonschema.validate(data, load_schema(schema))


def _regenerate(name):
    text = data_path(name).read_text(encoding="utf-8")
    kind = json.loads(text)["kind"]
    g = sl2()
    if kind == "module":
        return text, dumps(module_to_json(load_module(data_path(name), g)))
    if kind == "rmatrix_tail":
        return text, dumps(rtail_to_json(load_rtail(data_path(name), g)))
    af = load_algebra(data_path(name))
    if "beta" in af.data:
        return text, dumps(base_to_json(af.base()))
    if kind == "bialgebra":
        h = af.bialgebra()
        h2 = parse_algebra(dumps(bialgebra_to_json(h, af.name))).bialgebra()
        # the writer spells out both orders of each bracket, so compare structures
        return (h.algebra.f, h.cobracket.delta), (h2.algebra.f, h2.cobracket.delta)
    return text, None


@pytest.mark.parametrize("name", DATA)
def test_writers_reproduce_shipped_files(name):
    text, again = _regenerate(name)
    if again is None:
        pytest.skip("triples are checked through the double golden file")
    if isinstance(again, str):
        text, again = json.loads(text), json.loads(again)
    assert again == text


def test_e1_double_golden():
    af = load_algebra(data_path("e1.json"))
    out = dumps(triple_to_json(build_double(af.bialgebra()), "e1_double"))
    assert out == data_path("e1_double.json").read_text(encoding="utf-8")


def test_boundary_fields_round_trip():
    h = load_algebra(data_path("yang_n2.json")).bialgebra()
    assert h.algebra.overflow and h.cobracket.overflow
    again = parse_algebra(dumps(bialgebra_to_json(h, "yang_n2"))).bialgebra()
    assert again.algebra.overflow == h.algebra.overflow
    assert again.cobracket.overflow == h.cobracket.overflow


def test_malformed_json_reports_line_and_column():
    with pytest.raises(InputError) as exc:
        parse_text('{\n  "kind": "bialgebra",\n  "basis": [,]\n}', "algebra", "bad.json")
    assert exc.value.where == "bad.json:3:13"


def test_schema_violation_names_field():
    text = json.dumps({"schema_version": 1, "kind": "bialgebra", "basis": [["x", "zero"]]})
    with pytest.raises(InputError) as exc:
        parse_text(text, "algebra", "bad.json")
    assert exc.value.where == "bad.json: field basis/0/1"


def _doc(**extra):
    d = {"schema_version": 1, "kind": "bialgebra", "basis": [["x", 0], ["y", 0]]}
    d.update(extra)
    return json.dumps(d)


def test_duplicate_label():
    with pytest.raises(InputError, match="duplicate label 'x'"):
        parse_algebra(json.dumps({"schema_version": 1, "kind": "bialgebra", "basis": [["x", 0], ["x", 1]]}))


def test_unknown_label_names_field():
    af = parse_algebra(_doc(brackets=[["x", "y", [["z", "1"]]]]), "in.json")
    with pytest.raises(InputError) as exc:
        af.algebra()
    assert exc.value.where == "in.json: field brackets/0/2"


def test_bracket_given_twice():
    af = parse_algebra(_doc(brackets=[["x", "y", [["x", "1"]]], ["x", "y", [["y", "1"]]]]))
    with pytest.raises(InputError, match="twice"):
        af.algebra()


def test_rational_strings():
    af = parse_algebra(_doc(brackets=[["x", "y", [["x", "-3/6"]]]]))
    assert str(af.algebra().f[(0, 1)][0]) == "-1/2"


def test_module_over_wrong_base():
    from shiftedmanin.loopyang import gl1
    with pytest.raises(InputError, match="not 'gl1'"):
        load_module(data_path("ev2.json"), gl1())


def test_triple_round_trip(e1_triple):
    again = parse_algebra(dumps(triple_to_json(e1_triple))).triple()
    assert again.double.f == e1_triple.double.f
    assert again.metric.kappa == e1_triple.metric.kappa
    assert again.plus == e1_triple.plus and again.minus == e1_triple.minus
