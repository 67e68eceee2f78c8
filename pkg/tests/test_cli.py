import json
import subprocess
import sys
import xml.etree.ElementTree as ET
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from polytree.cli import main
from polytree.render import RenderOptions
from polytree.system import fixture_path

GOLDEN = Path(__file__).parent / "golden"


def schema(name: str) -> dict:
    return json.loads(resources.files("polytree.schemas").joinpath(f"{name}.schema.json").read_text())


def run(capsys, *argv) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_validate_ok(capsys):
    code, out = run(capsys, "validate", str(fixture_path("ex22")))
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, schema("validation"))
    assert doc["accepted"]


def test_validate_overlap(capsys):
    code, out = run(capsys, "validate", "fixture:overlap")
    assert code == 1
    doc = json.loads(out)
    jsonschema.validate(doc, schema("validation"))
    assert any(v["axiom"] == "D2" and v["maps"] == [1, 2] for v in doc["violations"])


def test_missing_file(capsys, tmp_path):
    code, _ = run(capsys, "validate", str(tmp_path / "nope.json"))
    assert code == 2


def test_bad_spec_is_usage_error(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"polygon": [[0,0],[1,0],[0,1]], "maps": []}')
    assert main(["validate", str(bad)]) == 2
    assert "m ≥ 2 required" in capsys.readouterr().err


def test_usage_errors(capsys):
    assert main(["frobnicate"]) == 2
    assert main(["tree"]) == 2
    assert main(["tree", "fixture:hata", "--depth", "-1"]) == 2


def test_invalid_system_is_domain_failure(capsys):
    code, _ = run(capsys, "tree", "fixture:disjoint")
    assert code == 1


def test_metrics_ex24(capsys):
    code, out = run(capsys, "metrics", "fixture:ex24", "--depth", "4", "--samples", "100")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, schema("metrics"))
    assert doc["caps"]["cutpoint"] == 33


def test_tree_and_orders(capsys):
    code, out = run(capsys, "tree", "fixture:hata", "--depth", "3")
    doc = json.loads(out)
    jsonschema.validate(doc, schema("tree"))
    assert code == 0 and len(doc["edges"]) == len(doc["nodes"]) - 1
    assert len(doc["ramification_points"]) == 4
    code, out = run(capsys, "orders", "fixture:ex24", "--depth", "3")
    doc = json.loads(out)
    jsonschema.validate(doc, schema("orders"))
    assert doc["caps"] == {"single": 3, "vertex": 9, "cutpoint": 33}


def test_morphism_self(capsys):
    code, out = run(capsys, "morphism", "fixture:ex22", "fixture:ex22", "--samples", "20")
    doc = json.loads(out)
    jsonschema.validate(doc, schema("morphism"))
    assert code == 0 and doc["equivalent"] and doc["beta"] == 1 and doc["beta_prime"] == 1
    assert doc["residuals"]["within_twice_bound"]


def test_morphism_mismatch(capsys):
    code, _ = run(capsys, "morphism", "fixture:ex22", "fixture:hata")
    assert code == 1


def test_morphism_permutation_flag(capsys, tmp_path):
    doc = json.loads(fixture_path("hata").read_text())
    doc["polygon"] = doc["polygon"][2:] + doc["polygon"][:2]
    rotated = tmp_path / "rotated.json"
    rotated.write_text(json.dumps(doc))
    code, _ = run(capsys, "morphism", "fixture:hata", str(rotated), "--samples", "5")
    assert code == 1
    code, out = run(capsys, "morphism", "fixture:hata", str(rotated), "--samples", "5", "--search-permutations")
    assert code == 0 and json.loads(out)["permutation"] == [6, 7, 1, 2, 3, 4, 5]


def test_map_point(capsys):
    code, out = run(capsys, "map-point", "fixture:ex22", "fixture:ex22_variant", "--point", "0,0", "--depth", "12")
    doc = json.loads(out)
    jsonschema.validate(doc, schema("map_point"))
    assert code == 0 and doc["point"] == [0.0, 0.0]
    assert doc["error_bound"] == pytest.approx((3**0.5 / 2) ** 12 * 1.75**0.5)
    assert main(["map-point", "fixture:ex22", "fixture:ex22_variant", "--point", "zero"]) == 2
    assert main(["map-point", "fixture:ex22", "fixture:ex22_variant", "--point", "0.45,0.5"]) == 1


def test_render_depth_zero(capsys):
    code, out = run(capsys, "render", "fixture:ex22", "--depth", "0", "--no-tree")
    root = ET.fromstring(out.encode())
    paths = [e for e in root.iter() if e.tag.endswith("path")]
    assert code == 0 and len(paths) == 1


def test_render_golden(capsys, tmp_path):
    out = tmp_path / "hata.svg"
    assert main(["render", "fixture:hata", "--depth", "10", "--out", str(out)]) == 0
    ET.parse(out)
    assert out.read_bytes() == (GOLDEN / "hata_depth10.svg").read_bytes()


def test_render_budget(capsys):
    assert main(["render", "fixture:hata", "--depth", "40", "--no-tree"]) == 1


def test_render_options_validation():
    with pytest.raises(ValueError):
        RenderOptions(width=10)


def test_out_flag(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out = run(capsys, "validate", "fixture:hata", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["accepted"]


def test_console_script():
    res = subprocess.run(
        [sys.executable, "-m", "polytree.cli", "validate", "fixture:zipper"], capture_output=True, text=True
    )
    assert res.returncode == 0 and json.loads(res.stdout)["accepted"]
