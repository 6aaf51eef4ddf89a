import io
import json

import jsonschema
import pytest

from parspec.cli import run
from parspec.report import RunManifest, decode_complex, dumps, encode, generators, load_schema


def call(argv):
    buf = io.StringIO()
    code = run(argv, stdout=buf)
    return code, (json.loads(buf.getvalue()) if buf.getvalue() else None), buf.getvalue()


def valid(doc):
    jsonschema.validate(doc, load_schema(doc["command"]))
    return doc


@pytest.mark.parametrize("a, klass, elf", [
    ("0.25", "Interior", "ELF"),
    ("0.5", "SpecialHalf", "NotELF"),
    ("0.25+0.25i", "BoundaryCircle", "ELFAfterOneComposition"),
])
def test_validate(a, klass, elf):
    code, doc, _ = call(["validate", "--a", a])
    assert code == 0
    valid(doc)
    assert doc["class"] == klass and doc["elf_verdict"]["status"] == elf


@pytest.mark.parametrize("a, code", [("0.6", 2), ("0", 2), ("0.25000000000001+0.25i", 3)])
def test_validate_exit_codes(a, code):
    assert call(["validate", "--a", a])[0] == code


def test_validate_resolve_flag():
    code, doc, _ = call(["validate", "--a", "0.25000000000001+0.25i", "--resolve", "interior"])
    assert code == 0 and doc["class"] == "Interior"


def test_uci_interior_sampled_only():
    code, doc, _ = call(["uci", "--a", "0.25+0.1i", "--sample-steps", "10"])
    assert code == 0
    valid(doc)
    assert doc["mode"] == "SampledOnly" and doc["r"] == []
    assert doc["strictly_decreasing"] and len(doc["sampled_sup"]) == 10


def test_uci_target_two():
    code, doc, _ = call(["uci", "--a", "0.5", "--target", "2"])
    assert code == 0 and doc["converged_at"] == 1


def test_uci_closed_form_mode_at_half():
    code, doc, _ = call(["uci", "--a", "0.5", "--mode", "paper"])
    assert code == 0 and doc["converged_at"] == 30
    valid(doc)


def test_uci_oracle_without_contraction_exits_4():
    assert call(["uci", "--a", "0.25+0.25i"])[0] == 4


def test_uci_outputs(tmp_path):
    code, _, _ = call(["uci", "--a", "0.25+0.25i", "--no-strict", "--n-max", "12", "--out", str(tmp_path)])
    assert code == 0
    rows = (tmp_path / "uci.csv").read_text().splitlines()
    assert rows[0] == "n,r_n,sampled_sup_n" and len(rows) == 13
    for line in rows[1:]:
        _, r, m = line.split(",")
        assert float(m) <= float(r) + 1e-9
    assert (tmp_path / "uci.svg").read_text().startswith("<svg")
    valid(json.loads((tmp_path / "uci.json").read_text()))
    assert "timestamp" in json.loads((tmp_path / "manifest.json").read_text())


def test_spectrum_special_half():
    code, doc, _ = call(["spectrum", "--a", "0.5", "--n", "16,32", "--diagnostic-n", "16,32"])
    assert code == 0
    valid(doc)
    assert doc["curve"]["variant"] == "SpecialHalf"
    assert decode_complex(doc["curve"]["exponent"]) == 0.5


def test_spectrum_psi_with_same_value_at_one_gives_same_curve():
    base = ["spectrum", "--a", "0.25", "--n", "8", "--no-diagnostic"]
    _, d1, _ = call(base + ["--psi", "1"])
    _, d2, _ = call(base + ["--psi", "0,1"])
    assert d1["curve"] == d2["curve"]


def test_spectrum_boundary_uses_squared_variant():
    code, doc, _ = call(["spectrum", "--a", "0.25+0.25i", "--n", "16", "--diagnostic-n", "16,32"])
    assert code == 0 and doc["curve"]["variant"] == "Squared"
    valid(doc)


def test_spectrum_variant_mismatch_exits_2():
    assert call(["spectrum", "--a", "0.25", "--variant", "special-half", "--n", "8"])[0] == 2


def test_spectrum_budget_exit_code():
    code, _, _ = call(["spectrum", "--a", "0.25", "--n", "1024", "--resolution", "1024",
                       "--no-diagnostic"])
    assert code == 5


def test_spectrum_svg(tmp_path):
    code, _, _ = call(["spectrum", "--a", "0.25", "--n", "24", "--resolution", "8",
                       "--emit", "json,svg", "--no-diagnostic", "--out", str(tmp_path)])
    assert code == 0
    svg = (tmp_path / "spectrum_n24.svg").read_text()
    assert svg.count("<circle") >= 2 and "<polyline" in svg


def test_basin_small(tmp_path):
    code, _, _ = call(["basin", "--resolution", "32", "--out", str(tmp_path)])
    assert code == 0
    doc = valid(json.loads((tmp_path / "basin.json").read_text()))
    assert doc["parameter_disk"]["escaped"] == 0
    assert doc["parameter_disk"]["converged"] == doc["parameter_disk"]["cells"] > 0
    lines = (tmp_path / "basin.csv").read_text().splitlines()
    assert lines[0] == "x,y,status,iterations" and len(lines) == 32 * 32 + 1


def test_basin_single_cell(tmp_path):
    code, _, _ = call(["basin", "--resolution", "1", "--window", "9,11,-1,1", "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "basin.csv").read_text() == "x,y,status,iterations\n10.0,0.0,Escaped,2\n"


def test_audit_zero_samples():
    code, doc, _ = call(["audit", "--samples", "0"])
    assert code == 0
    valid(doc)
    assert doc["suites"]["self_map"]["samples"] == 0
    assert doc["suites"]["farthest_point"]["table"]


def test_audit_deterministic():
    _, _, a = call(["audit", "--samples", "50", "--seed", "11"])
    _, _, b = call(["audit", "--samples", "50", "--seed", "11"])
    _, _, c = call(["audit", "--samples", "50", "--seed", "12"])
    assert a == b and a != c
    valid(json.loads(a))


def test_encode_complex_and_nonfinite():
    assert encode({"z": 1 - 0j}) == {"z": {"re": 1.0, "im": 0.0}}
    assert dumps({"x": -0.0}) == '{\n  "x": 0.0\n}\n'
    with pytest.raises(ValueError):
        dumps({"x": float("nan")})


def test_manifest_epoch(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
    m = RunManifest("audit", {"b": 1, "a": 2})
    assert m.timestamp == "1970-01-01T00:00:00+00:00"
    assert list(m.parameters) == ["a", "b"] and m.parameters["b"] == "1"
    assert "timestamp" not in m.reproducible()


def test_generators_independent_and_reproducible():
    a = [g.random() for g in generators(5, 3)]
    b = [g.random() for g in generators(5, 3)]
    assert a == b and len(set(a)) == 3
    with pytest.raises(ValueError):
        generators(-1, 1)
