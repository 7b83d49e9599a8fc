import json
import shutil
from pathlib import Path

import jsonschema

from weakconley.cli import main
from weakconley.random_systems import random_isolated_system
from weakconley.report import schema
from weakconley.sampling import samples_to_csv

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
EX1 = "[15/16, 1/16]"
EX2 = "[17/64, 27/64] u [37/64, 47/64]"


def doubling_config(tmp_path, hoods, **extra):
    shutil.copy(CONFIGS / "doubling.csv", tmp_path / "doubling.csv")
    cfg = json.loads((CONFIGS / "example1.json").read_text())
    cfg.pop("report")
    cfg.pop("figure")
    cfg["neighbourhoods"] = [{"name": k, "set": v} for k, v in hoods.items()]
    cfg.update(extra)
    path = tmp_path / "run.json"
    path.write_text(json.dumps(cfg))
    return path


def run(tmp_path, *argv, name="out.json"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, json.loads(out.read_text())


def valid(report):
    jsonschema.validate(report, schema())
    return report


def test_ingest(tmp_path):
    cfg = doubling_config(tmp_path, {"N": EX1})
    code, rep = run(tmp_path, "ingest", "--config", str(cfg))
    assert code == 0
    valid(rep)
    assert rep["kind"] == "ingest"


def test_analyze_examples(tmp_path):
    cfg = doubling_config(tmp_path, {"ex1": EX1, "ex2": EX2})
    code, rep = run(tmp_path, "analyze", "--config", str(cfg))
    assert code == 0
    valid(rep)
    text = json.dumps(rep, ensure_ascii=False)
    assert "λ - 1" in text and "λ^2 - 1" in text


def test_analyze_is_byte_identical(tmp_path):
    cfg = doubling_config(tmp_path, {"ex1": EX1, "ex2": EX2})
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["analyze", "--config", str(cfg), "--out", str(a)]) == 0
    assert main(["analyze", "--config", str(cfg), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_exit_code_for_non_isolating_neighbourhood(tmp_path):
    cfg = doubling_config(tmp_path, {"whole": "whole", "edge": "[31/32, 33/32]"})
    code, rep = run(tmp_path, "analyze", "--config", str(cfg))
    assert code == 3
    valid(rep)


def test_config_errors(tmp_path):
    code, rep = run(tmp_path, "analyze", "--config", str(tmp_path / "missing.json"))
    assert code == 2 and valid(rep)["kind"] == "error"
    cfg = doubling_config(tmp_path, {"N": EX1})
    code, rep = run(tmp_path, "analyze", "--config", str(cfg), "--coeffs", "zp:4")
    assert code == 2 and valid(rep)["kind"] == "error"
    bad = doubling_config(tmp_path, {"N": "[15/16, 1/16"})
    code, _ = run(tmp_path, "analyze", "--config", str(bad))
    assert code == 2


def test_coefficient_override(tmp_path):
    cfg = doubling_config(tmp_path, {"ex2": EX2})
    code, rep = run(tmp_path, "analyze", "--config", str(cfg), "--coeffs", "zp:2")
    assert code == 0
    assert valid(rep)["run"]["coefficients"] == "zp:2"


def test_audit_passes_on_examples(tmp_path):
    cfg = doubling_config(tmp_path, {"ex1": EX1, "ex2": EX2},
                          audit={"trials": 30, "random_systems": 1})
    code, rep = run(tmp_path, "audit", "--config", str(cfg))
    assert code == 0, rep["summary"]["failed"]
    valid(rep)
    assert rep["passed"] and not rep["summary"]["vacuous"]


def test_vacuous_audit(tmp_path):
    cfg = doubling_config(tmp_path, {}, audit={"trials": 0, "random_systems": 0})
    code, rep = run(tmp_path, "audit", "--config", str(cfg))
    assert code == 0
    assert valid(rep)["summary"]["vacuous"] is True


def test_audit_reports_a_corrupt_table(tmp_path):
    cfg = doubling_config(tmp_path, {"ex1": EX1},
                          audit={"trials": 100, "random_systems": 0, "inject_fault": "stale_preimage"})
    code, rep = run(tmp_path, "audit", "--config", str(cfg))
    assert code == 1
    assert valid(rep)["summary"]["failed"] == ["map/dmds_axioms"]
    dmds = next(r for r in rep["results"] if r["name"] == "dmds_axioms")
    assert dmds["details"]["inverse_symmetry"] is False and dmds["details"]["witnesses"]


def test_audit_flags_non_isolating_neighbourhood(tmp_path):
    cfg = doubling_config(tmp_path, {"edge": "[31/32, 33/32]"}, audit={"trials": 10, "random_systems": 0})
    code, rep = run(tmp_path, "audit", "--config", str(cfg))
    assert code == 1
    assert "neighbourhood:edge/weakly_isolating" in valid(rep)["summary"]["failed"]


def test_figure_graph(tmp_path):
    cfg = doubling_config(tmp_path, {"N": EX1}, figure={"neighbourhood": "N"})
    svg = tmp_path / "g.svg"
    assert main(["figure", "--config", str(cfg), "--out", str(svg)]) == 0
    text = svg.read_text()
    assert text.startswith("<svg") or text.startswith("<?xml")
    assert "</svg>" in text


def test_figure_without_samples(tmp_path):
    cfg = doubling_config(tmp_path, {})
    (tmp_path / "doubling.csv").write_text("x0,y0\n")
    svg = tmp_path / "g.svg"
    assert main(["figure", "--config", str(cfg), "--out", str(svg)]) == 0
    assert "</svg>" in svg.read_text()


def test_figure_projection_in_two_dimensions(tmp_path, capsys):
    sys = random_isolated_system(7, dim=2)
    (tmp_path / "s.csv").write_text(samples_to_csv(sys.samples))
    cfg = {"grid": sys.f.grid.to_json(), "samples": "s.csv", "neighbourhoods": []}
    path = tmp_path / "run.json"
    path.write_text(json.dumps(cfg))
    svg = tmp_path / "p.svg"
    assert main(["figure", "--config", str(path), "--out", str(svg)]) == 0
    assert "</svg>" in svg.read_text()
    assert "projection" in capsys.readouterr().err


def test_shipped_configs_parse(tmp_path):
    for name in ("example1.json", "example2.json", "contracting.json"):
        code, rep = run(tmp_path, "analyze", "--config", str(CONFIGS / name), name=name)
        assert code == 0 and valid(rep)


def test_explicit_pair(tmp_path):
    cfg = doubling_config(tmp_path, {})
    obj = json.loads(cfg.read_text())
    obj["neighbourhoods"] = [
        {"name": "hand", "set": EX1, "pair": {"p1": EX1, "p2": "[15/16, 61/64] u [3/64, 1/16]"}},
    ]
    cfg.write_text(json.dumps(obj))
    code, rep = run(tmp_path, "analyze", "--config", str(cfg))
    assert code == 0 and valid(rep)["neighbourhoods"][0]["pair"]["p2"] == "[3/64, 1/16] u [15/16, 61/64]"
    # no exit set: axiom (b) fails, so no index is reported
    obj["neighbourhoods"][0]["pair"]["p2"] = "empty"
    cfg.write_text(json.dumps(obj))
    code, rep = run(tmp_path, "analyze", "--config", str(cfg))
    assert code == 4
    assert valid(rep)["neighbourhoods"][0]["error"]["type"] == "NotWeakPair"
