import json
import os

import pytest

from finitegauge.cli import main

MODELS_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "models")


def model_path(name):
    return os.path.join(MODELS_DIR, f"{name}.json")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_golden_model(capsys):
    code, out, _ = run(capsys, "validate", model_path("trivial-k2-z2"))
    assert code == 0
    assert "valid" in out


def test_validate_reports_violations_with_exit_one(capsys, tmp_path):
    with open(model_path("trivial-k2-z2"), encoding="utf-8") as fh:
        doc = json.load(fh)
    doc["bundle"]["action"] = [[p, p] for p in doc["bundle"]["total"]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc), encoding="utf-8")
    code, out, _ = run(capsys, "validate", str(bad))
    assert code == 1
    assert "freeness" in out


def test_parse_error_exits_65(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{", encoding="utf-8")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 65
    assert "parse error" in err


def test_unknown_theorem_exits_64(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", model_path("trivial-k2-z2"), "--theorem", "prop9"])
    assert exc.value.code == 64


def test_verify_all_theorems_on_one_commutative_and_one_not(capsys):
    for name in ("trivial-k2-z3", "flattwist-k2-s3"):
        for theorem in ("prop1", "prop2", "prop3", "prop4",
                        "curvature", "corollary", "eq1-failure"):
            code, out, _ = run(capsys, "verify", model_path(name), "--theorem", theorem)
            assert code == 0, (name, theorem, out)


def test_verify_report_is_json_and_deterministic(capsys):
    path = model_path("trivial-k2-z2")
    code, out1, _ = run(capsys, "verify", path, "--theorem", "prop1", "--report")
    code2, out2, _ = run(capsys, "verify", path, "--theorem", "prop1", "--report")
    assert code == code2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["ok"] is True and doc["theorem"] == "prop1"
    assert doc["instances"] == len(doc["records"])


def test_curvature_table_shows_frozen_holonomy(capsys):
    code, out, _ = run(capsys, "curvature", model_path("trivial-k3-z2"),
                       "--connection", "holonomy")
    assert code == 0
    row = next(line for line in out.splitlines() if line.startswith("a b c"))
    assert "[a|1 / a|0]" in row and row.endswith("1")
    flat_code, flat_out, _ = run(capsys, "curvature", model_path("trivial-k3-z2"),
                                 "--connection", "flat")
    assert flat_code == 0
    assert "[a|1" not in flat_out


def test_curvature_missing_connection_is_usage_error(capsys):
    code, _, err = run(capsys, "curvature", model_path("trivial-k2-z2"),
                       "--connection", "nope")
    assert code == 64
    assert "no connection named" in err


def test_curvature_file_output_reloads(capsys, tmp_path):
    out_path = tmp_path / "curv.json"
    code, _, _ = run(capsys, "curvature", model_path("trivial-k3-z2"),
                     "--connection", "holonomy", "--format", "file",
                     "-o", str(out_path))
    assert code == 0
    from finitegauge import formats

    mdoc = formats.load_model(model_path("trivial-k3-z2"))
    reloaded = formats.parse_form(mdoc.model, json.loads(out_path.read_text()))
    import finitegauge as fg

    assert reloaded == fg.curvature(mdoc.model, mdoc.connections["holonomy"])


def test_generate_then_validate_roundtrip(capsys, tmp_path):
    out = tmp_path / "gen.json"
    code, _, _ = run(capsys, "generate", "--model", "trivial", "--points", "a,b",
                     "--group", "z3", "-o", str(out))
    assert code == 0
    code, _, _ = run(capsys, "validate", str(out))
    assert code == 0
    # deterministic output
    out2 = tmp_path / "gen2.json"
    run(capsys, "generate", "--model", "trivial", "--points", "a,b",
        "--group", "z3", "-o", str(out2))
    assert out.read_text() == out2.read_text()


def test_generate_twisted_flat_and_invalid(capsys, tmp_path):
    out = tmp_path / "flat.json"
    code, _, err = run(capsys, "generate", "--model", "twisted",
                       "--points", "a,b,c", "--group", "z2",
                       "--twist", "unit", "-o", str(out))
    assert code == 0 and err == ""
    code, _, _ = run(capsys, "validate", str(out))
    assert code == 0

    twist = tmp_path / "twist.json"
    twist.write_text(json.dumps({"pairs": [
        {"edge": ["a", "b"], "set": ["0"]},
        {"edge": ["a", "c"], "set": ["0"]},
        {"edge": ["b", "c"], "set": ["1"]},
    ]}), encoding="utf-8")
    bad = tmp_path / "bad.json"
    code, _, err = run(capsys, "generate", "--model", "twisted",
                       "--points", "a,b,c", "--group", "z2",
                       "--twist", str(twist), "-o", str(bad))
    assert code == 1
    assert "simplex-lifting" in err
    code, _, _ = run(capsys, "validate", str(bad))
    assert code == 1


def test_generate_with_edge_list(capsys, tmp_path):
    out = tmp_path / "path.json"
    code, _, _ = run(capsys, "generate", "--model", "trivial",
                     "--points", "a,b,c", "--group", "z2",
                     "--edges", "a-b,b-c", "-o", str(out))
    assert code == 0
    code, listing, _ = run(capsys, "enumerate", str(out), "--what", "simplices",
                           "--degree", "1")
    assert code == 0
    assert "a c" not in listing


def test_enumerate_connections_and_flat(capsys):
    code, out, _ = run(capsys, "enumerate", model_path("trivial-k2-z2"),
                       "--what", "connections")
    assert code == 0
    assert out.startswith("2 connections")
    code, out, _ = run(capsys, "enumerate", model_path("trivial-k3-z2"),
                       "--what", "flat")
    assert code == 0
    assert out.startswith("4 connections")


def test_enumerate_ceiling_exit_two(capsys):
    code, _, err = run(capsys, "enumerate", model_path("trivial-k3-s3"),
                       "--what", "connections", "--ceiling", "10")
    assert code == 2
    assert "216" in err


def test_ceiling_env_variable(capsys, monkeypatch):
    monkeypatch.setenv("GAUGE_CEILING", "10")
    code, _, err = run(capsys, "enumerate", model_path("trivial-k3-s3"),
                       "--what", "connections")
    assert code == 2
    assert "216" in err


def test_enumerate_simplices_report(capsys):
    code, out, _ = run(capsys, "enumerate", model_path("trivial-k2-z2"),
                       "--what", "simplices", "--degree", "1", "--space", "total",
                       "--report")
    assert code == 0
    doc = json.loads(out)
    assert doc["count"] == 16
