"""Command-line behaviour: output contracts, exit codes, determinism."""
import contextlib
import copy
import io
import json

import jsonschema
import pytest

from f2coh.cli import main
from f2coh.ringfile import bundled_path

REPORT_SCHEMA = {
    "type": "object",
    "required": ["title", "context", "checks", "counts", "all_passed"],
    "additionalProperties": False,
    "properties": {
        "title": {"type": "string"},
        "context": {"type": "object"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "status", "payload", "note"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": ["pass", "fail", "assumed",
                                        "edge-excluded"]},
                    "payload": {"type": "object"},
                    "note": {"type": "string"},
                },
            },
        },
        "counts": {
            "type": "object",
            "additionalProperties": {"type": "integer", "minimum": 1},
        },
        "all_passed": {"type": "boolean"},
    },
}

SUITE_CHECKS = [
    "definition-file", "relation-forms", "square-tables",
    "composite-square-rule", "q0-identity", "q1-congruence", "q2-congruence",
    "regular-sequence-1", "regular-sequence-2", "page-3-series",
    "page-4-series", "page-6-series", "page-10-series", "fiber-permanence",
    "limit-vs-presentation", "etaprime-well-defined", "etaprime-injective",
    "etaprime-image-series", "nilradical-slices", "q0-matches-square-rule",
    "q0-w16-declared", "q0-descends", "differential-square-zero",
    "h-series-r0", "h-series-r1", "h-series-r2", "edge-window",
    "les-consistency", "bockstein-parity", "bockstein-limit-series",
    "nilpotence-g4", "nilpotence-g8", "nilpotence-g7",
]


def run(argv):
    """Invoke the CLI in process, returning (exit code, stdout)."""
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        code = main(argv)
    return code, out.getvalue()


def bundled_doc():
    return json.loads(bundled_path().read_text())


def write_doc(tmp_path, doc, name="case.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


@pytest.fixture(scope="module")
def small_doc():
    """The bundled document shrunk to the cheapest all-pass bound.

    The order-four witness for g7 lives in degree 28, so that is the
    smallest truncation at which every suite check still passes.
    """
    doc = bundled_doc()
    doc["truncation"] = 28
    doc["verify"]["nilradical"]["up_to"] = 14
    return doc


@pytest.fixture(scope="module")
def bundled_json_run():
    code, out = run(["verify-paper", "--json"])
    return code, json.loads(out)


def test_bundled_suite_passes(bundled_json_run):
    code, doc = bundled_json_run
    assert code == 0
    assert doc["all_passed"] is True
    assert doc["counts"] == {"pass": 29, "assumed": 3, "edge-excluded": 1}


def test_bundled_suite_check_order(bundled_json_run):
    _, doc = bundled_json_run
    assert [c["name"] for c in doc["checks"]] == SUITE_CHECKS


def test_bundled_suite_assumed_checks(bundled_json_run):
    """Exactly three checks rest on declared inputs, none on results."""
    _, doc = bundled_json_run
    assumed = [c["name"] for c in doc["checks"] if c["status"] == "assumed"]
    assert assumed == ["relation-forms", "fiber-permanence",
                       "q0-w16-declared"]


def test_bundled_suite_json_schema(bundled_json_run):
    _, doc = bundled_json_run
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["title"] == "verification suite"
    assert doc["context"]["truncation"] == 48


def test_bundled_suite_key_payloads(bundled_json_run):
    _, doc = bundled_json_run
    by_name = {c["name"]: c for c in doc["checks"]}
    nil = by_name["nilradical-slices"]["payload"]
    assert nil["first_nonzero_degree"] == 7
    assert nil["dims"][:10] == [0, 0, 0, 0, 0, 0, 1, 1, 2, 2]
    assert by_name["nilpotence-g7"]["payload"]["order"] == 4
    assert by_name["nilpotence-g8"]["payload"]["order"] == 2
    assert "order" not in by_name["nilpotence-g4"]["payload"]


def test_hilbert_line():
    code, out = run(["hilbert", "--ring", "r2", "--up-to", "6"])
    assert code == 0
    assert out.splitlines()[0] == "1 0 2 2 3 3 7"


def test_hilbert_declared_form_verdict():
    code, out = run(["hilbert", "--ring", "r0", "--up-to", "8"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "1 0 2 2 3 4 7 6 11"
    assert lines[1].endswith("match")


def test_hilbert_json():
    code, out = run(["hilbert", "--ring", "r1", "--up-to", "6", "--json"])
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["checks"][0]["payload"]["coefficients"] == [1, 0, 2, 2, 3, 3, 7]


def test_nilradical_subcommand():
    code, out = run(["nilradical", "--ring", "r2", "--up-to", "10", "--json"])
    assert code == 0
    doc = json.loads(out)
    by_name = {c["name"]: c for c in doc["checks"]}
    assert by_name["slice-dims"]["payload"]["dims"] == [
        0, 0, 0, 0, 0, 0, 1, 1, 2, 2]
    assert by_name["new-generators"]["payload"]["found"] == [
        "degree 7: 1", "degree 8: 1"]
    assert by_name["ideal-comparison"]["status"] == "pass"


def test_qcohomology_subcommand():
    code, out = run(["qcohomology", "--ring", "r1", "--derivation", "q0",
                     "--up-to", "12", "--json"])
    assert code == 0
    doc = json.loads(out)
    by_name = {c["name"]: c for c in doc["checks"]}
    dims = by_name["dims"]["payload"]["dims"]
    assert dims[:13] == [1, 0, 0, 0, 3, 0, 0, 0, 5, 0, 0, 0, 7]
    assert by_name["declared-series"]["status"] == "pass"


def test_nilpotency_subcommand():
    code, out = run(["nilpotency", "--up-to", "32", "--json"])
    assert code == 0
    doc = json.loads(out)
    by_name = {c["name"]: c for c in doc["checks"]}
    assert by_name["g8"]["payload"]["order"] == 2
    assert by_name["g7"]["payload"]["order"] == 4
    assert "order" not in by_name["g4"]["payload"]


def test_morphism_subcommand():
    code, out = run(["morphism", "--up-to", "12", "--json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["context"]["name"] == "etaprime"
    by_name = {c["name"]: c for c in doc["checks"]}
    assert by_name["well-defined"]["status"] == "pass"
    assert by_name["injective"]["status"] == "pass"
    assert by_name["image-dims"]["payload"]["dims"][:7] == [1, 0, 2, 2, 3, 3, 7]


def test_serre_subcommand():
    code, out = run(["serre", "--up-to", "12", "--json"])
    assert code == 0
    doc = json.loads(out)
    names = [c["name"] for c in doc["checks"]]
    assert names == ["page-2", "page-3", "page-4", "page-6", "page-10",
                     "limit"]
    by_name = {c["name"]: c for c in doc["checks"]}
    assert by_name["limit"]["payload"]["coefficients"][:7] == [
        1, 0, 2, 2, 3, 3, 7]


def test_bockstein_subcommand():
    code, out = run(["bockstein", "--up-to", "16", "--json"])
    assert code == 0
    doc = json.loads(out)
    by_name = {c["name"]: c for c in doc["checks"]}
    assert by_name["page-2"]["payload"]["dims"][:9] == [
        1, 0, 0, 0, 3, 0, 0, 0, 6]
    assert by_name["parity-collapse"]["status"] == "pass"


def test_missing_file_exits_two():
    code, _ = run(["hilbert", "--ring", "r2", "/no/such/file.json"])
    assert code == 2


def test_invalid_json_exits_two(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    code, _ = run(["verify-paper", str(p)])
    assert code == 2


def test_unknown_ring_exits_two():
    code, _ = run(["hilbert", "--ring", "nope", "--up-to", "4"])
    assert code == 2


def test_unknown_subcommand_raises_system_exit():
    with pytest.raises(SystemExit):
        run(["frobnicate"])


def test_inhomogeneous_relation_exits_two(tmp_path, capsys):
    """A one-character typo in a relation is caught at load time."""
    doc = bundled_doc()
    doc["rings"]["r2"]["relations"][1] = "w3'^2*w3'' + w3''^2"
    code, _ = run(["verify-paper", write_doc(tmp_path, doc)])
    err = capsys.readouterr().err
    assert code == 2
    assert "rings.r2.relations[1]" in err
    assert "not homogeneous" in err


def test_small_file_passes_and_is_deterministic(tmp_path, small_doc):
    path = write_doc(tmp_path, small_doc, "small.json")
    first = run(["verify-paper", path])
    second = run(["verify-paper", path])
    assert first[0] == 0
    assert first == second
    assert "PASS" in first[1]


def test_dropped_nilradical_generator_fails(tmp_path, small_doc):
    """Without g8 the declared ideal misses the degree-8 slice."""
    doc = copy.deepcopy(small_doc)
    doc["verify"]["nilradical"]["generators"] = ["g7"]
    code, out = run(["verify-paper", "--json",
                     write_doc(tmp_path, doc, "nog8.json")])
    assert code == 1
    rep = json.loads(out)
    assert rep["all_passed"] is False
    by_name = {c["name"]: c for c in rep["checks"]}
    bad = by_name["nilradical-slices"]
    assert bad["status"] == "fail"
    assert bad["payload"]["first_mismatch_degree"] == 8
    assert bad["payload"]["slice_dim"] == 1
    assert bad["payload"]["ideal_dim"] == 0


def test_verify_paper_text_summary(tmp_path, small_doc):
    path = write_doc(tmp_path, small_doc, "text.json")
    code, out = run(["verify-paper", path])
    assert code == 0
    last = out.strip().splitlines()[-1]
    assert last.startswith("PASS (")
    assert "assumed" in last
