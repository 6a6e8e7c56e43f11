"""Loading and validating ring definition files."""
import copy
import json

import pytest

from f2coh.errors import DefinitionFileError
from f2coh.ringfile import (bundled_path, load_bundled, load_definition,
                            parse_definition)

MINI = {
    "truncation": 12,
    "rings": {
        "free": {
            "generators": [["a", 2], ["b", 3]],
            "series": {"denominator": [2, 3]},
            "derivations": {
                "d": {"shift": 1, "values": {"a": "b", "b": "0"}},
            },
        },
        "quot": {
            "generators": [["a", 2], ["b", 3]],
            "relations": ["a*b"],
        },
        "small": {
            "generators": [["x", 2]],
            "steenrod": {"x": ["x", "0", "x^2"]},
        },
    },
    "morphisms": {
        "fold": {
            "source": "small",
            "target": "free",
            "images": {"x": "a"},
        },
    },
    "serre": {
        "base": "free",
        "steps": ["a", "permanent"],
    },
}


def doc():
    return copy.deepcopy(MINI)


def expect(document, fragment):
    """Parse and assert the failure message names the right key path."""
    with pytest.raises(DefinitionFileError) as err:
        parse_definition(document)
    assert fragment in str(err.value), str(err.value)


def test_minimal_document_parses():
    d = parse_definition(doc())
    assert d.truncation == 12
    assert d.ring_names() == ("free", "quot", "small")
    assert d.serre is not None and d.verify is None
    assert len(d.rings["quot"].relations) == 1
    assert str(d.rings["free"].declared_series) == "1/(1-t^2)(1-t^3)"


def test_rings_build_and_cache():
    d = parse_definition(doc())
    q = d.ring("quot")
    assert q.truncation == 12
    assert q.dimension(4) == 1
    assert q.dimension(5) == 0
    assert d.ring("quot") is q
    assert d.ring("quot", 8) is not q


def test_morphism_and_derivation_builders():
    d = parse_definition(doc())
    m = d.morphism("fold", 8)
    assert m.source.truncation == 8
    der = d.derivation("free", "d")
    assert der.shift == 1 and der.name == "d"
    with pytest.raises(DefinitionFileError, match="no derivation 'q'"):
        d.derivation("free", "q")
    with pytest.raises(DefinitionFileError, match="no morphism named 'x'"):
        d.morphism("x")
    with pytest.raises(DefinitionFileError, match="no ring named 'zz'"):
        d.ring("zz")


def test_unknown_toplevel_key():
    d = doc()
    d["extra"] = 1
    expect(d, "unknown keys ['extra']")


def test_required_toplevel_keys():
    expect({"rings": {}}, "'truncation' and 'rings' are required")
    expect({"truncation": True, "rings": {"r": {"generators": [["a", 1]]}}},
           "expected an integer, got bool")
    expect({"truncation": 0, "rings": {}}, "expected an integer >= 1")


def test_missing_generators():
    d = doc()
    del d["rings"]["quot"]["generators"]
    expect(d, "rings.quot: missing required key 'generators'")


def test_bad_generator_entries():
    d = doc()
    d["rings"]["quot"]["generators"] = [["a", 2], ["b"]]
    expect(d, "rings.quot.generators[1]: expected a [name, degree] pair")
    d["rings"]["quot"]["generators"] = [["a", 2], ["a", 3]]
    expect(d, "rings.quot.generators")
    d["rings"]["quot"]["generators"] = [["a", 0]]
    expect(d, "expected an integer >= 1, got 0")


def test_relation_validation():
    d = doc()
    d["rings"]["quot"]["relations"] = ["a*b + b*a"]
    expect(d, "rings.quot.relations[0]: relation reduces to zero")
    d["rings"]["quot"]["relations"] = ["a + b"]
    expect(d, "relation is not homogeneous (term degrees [2, 3])")
    d["rings"]["quot"]["relations"] = ["b^5"]
    expect(d, "relation degree 15 exceeds the truncation bound 12")
    d["rings"]["quot"]["relations"] = ["a*c"]
    expect(d, "rings.quot.relations[0]: cannot parse 'a*c'")


def test_steenrod_row_coverage():
    d = doc()
    d["rings"]["small"]["steenrod"] = {}
    expect(d, "rows must cover the generators exactly (missing ['x']")
    d["rings"]["small"]["steenrod"] = {"x": ["x", "0", "x^2"], "y": ["0"]}
    expect(d, "unknown ['y']")
    d["rings"]["small"]["steenrod"] = {"x": ["x", "0"]}
    expect(d, "rings.small.steenrod.x: expected 3 values (Sq^0 .. Sq^2), got 2")
    d["rings"]["small"]["steenrod"] = {"x": ["x", "0", "0"]}
    expect(d, "Sq^2 of 'x' must be its square")


def test_derivation_validation():
    d = doc()
    d["rings"]["free"]["derivations"]["d"] = {"shift": 1, "values": {"a": "b"}}
    expect(d, "values must cover the generators exactly (missing ['b']")
    d["rings"]["free"]["derivations"]["d"] = {"values": {"a": "b", "b": "0"}}
    expect(d, "rings.free.derivations.d: needs both 'shift' and 'values'")
    d["rings"]["free"]["derivations"]["d"] = {
        "shift": 2, "values": {"a": "b", "b": "0"}}
    expect(d, "rings.free.derivations.d")


def test_morphism_validation():
    d = doc()
    d["morphisms"]["fold"]["source"] = "nope"
    expect(d, "morphisms.fold.source: unknown ring 'nope'")
    d = doc()
    d["morphisms"]["fold"]["images"] = {}
    expect(d, "images must cover the source generators exactly (missing ['x']")
    d = doc()
    d["morphisms"]["fold"]["images"] = {"x": "b"}
    expect(d, "morphisms.fold.images.x: image has degree 3, expected 2")
    d = doc()
    d["morphisms"]["fold"]["images"] = {"x": "a + b"}
    expect(d, "image is not homogeneous (term degrees [2, 3])")


def test_serre_validation():
    d = doc()
    d["serre"]["steps"] = ["permanent", "a"]
    expect(d, "serre.steps[0]: 'permanent' may only close the script")
    d["serre"]["steps"] = []
    expect(d, "serre.steps: the script needs at least one step")
    d["serre"]["steps"] = ["a + a", "permanent"]
    expect(d, "serre.steps[0]: transgression step reduces to zero")
    d["serre"]["steps"] = ["a + b", "permanent"]
    expect(d, "serre.steps[0]: step is not homogeneous")


def test_series_form_validation():
    d = doc()
    d["rings"]["free"]["series"] = {"denominator": [2, 0]}
    expect(d, "rings.free.series.denominator: expected an integer >= 1")
    d["rings"]["free"]["series"] = {"denominator": [2], "top": 1}
    expect(d, "unknown keys ['top']")


def test_load_errors(tmp_path):
    with pytest.raises(DefinitionFileError, match="cannot read"):
        load_definition(tmp_path / "absent.json")
    bad = tmp_path / "bad.json"
    bad.write_text('{"truncation": 12,}')
    with pytest.raises(DefinitionFileError, match="invalid JSON at line 1"):
        load_definition(bad)


def test_roundtrip_through_disk(tmp_path):
    p = tmp_path / "mini.json"
    p.write_text(json.dumps(doc()))
    d = load_definition(p)
    assert d.source == str(p)
    assert d.ring("small").dimension(4) == 1


def test_bundled_file_loads():
    assert bundled_path().exists()
    d = load_bundled()
    assert d.truncation == 48
    assert d.ring_names() == ("bso3cubed", "r0", "r1", "r2", "etatarget")
    assert d.verify is not None and d.serre is not None
    assert d.verify.family == ("r0", "r1", "r2")
    assert len(d.verify.page_series) == 4
    assert [len(d.rings[n].relations) for n in d.verify.family] == [0, 1, 2]


def test_verify_requires_serre():
    d = load_bundled()
    raw = json.loads(bundled_path().read_text())
    del raw["serre"]
    with pytest.raises(DefinitionFileError, match="verify needs a serre script"):
        parse_definition(raw)
    assert d.verify.nilradical_up_to == 24


def test_verify_family_relation_counts():
    raw = json.loads(bundled_path().read_text())
    raw["verify"]["family"] = ["r0", "r2", "r2"]
    with pytest.raises(DefinitionFileError,
                       match="has 2 relations, expected 1"):
        parse_definition(raw)


def test_verify_page_series_count():
    raw = json.loads(bundled_path().read_text())
    raw["verify"]["page_series"] = raw["verify"]["page_series"][:2]
    with pytest.raises(DefinitionFileError,
                       match="one form per transgression step"):
        parse_definition(raw)


def test_verify_element_references():
    raw = json.loads(bundled_path().read_text())
    raw["verify"]["limit_classes"] = ["g4", "missing"]
    with pytest.raises(DefinitionFileError,
                       match="unknown element 'missing'"):
        parse_definition(raw)
    raw = json.loads(bundled_path().read_text())
    raw["verify"]["elements"]["f5"]["expr"] = "w2' + w3'"
    with pytest.raises(DefinitionFileError,
                       match="must be homogeneous and nonzero"):
        parse_definition(raw)
