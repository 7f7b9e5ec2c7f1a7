import json
import os
import random

import pytest

import finitegauge as fg
from finitegauge import formats
from finitegauge.forms import random_gauge_form
from finitegauge.golden import golden_models

MODELS_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "models")


def roundtrip_model(mdoc):
    text = formats.dump_model(mdoc)
    loaded = formats.parse_model(json.loads(text))
    assert formats.dump_model(loaded) == text
    return loaded


def test_model_document_roundtrip_bit_exact(golden):
    for _name, bn in golden:
        roundtrip_model(formats.ModelDocument(bn))


def test_roundtrip_with_connections_and_forms(holonomy_example):
    bn, flat, twisted = holonomy_example
    rng = random.Random(23)
    mdoc = formats.ModelDocument(
        bn,
        connections={"flat": flat, "holonomy": twisted},
        forms={
            "alpha": random_gauge_form(bn, 1, rng),
            "omega": fg.connection_to_form(bn, twisted),
            "theta": fg.descend_curvature(bn, twisted),
        },
    )
    loaded = roundtrip_model(mdoc)
    assert loaded.connections["holonomy"].nums == twisted.nums
    assert loaded.forms["omega"].values == mdoc.forms["omega"].values
    assert type(loaded.forms["theta"]) is type(mdoc.forms["theta"])


def test_unknown_fields_rejected(golden):
    doc = json.loads(formats.dump_model(formats.ModelDocument(golden[0][1])))
    doc["extra"] = 1
    with pytest.raises(fg.SchemaError, match="unknown"):
        formats.parse_model(doc)
    doc.pop("extra")
    doc["group"]["comment"] = "hi"
    with pytest.raises(fg.SchemaError, match="unknown"):
        formats.parse_model(doc)


def test_missing_fields_rejected(golden):
    doc = json.loads(formats.dump_model(formats.ModelDocument(golden[0][1])))
    doc.pop("max_lift")
    with pytest.raises(fg.SchemaError, match="missing"):
        formats.parse_model(doc)


def test_axiom_violations_surface_as_invalid_model(golden):
    doc = json.loads(formats.dump_model(formats.ModelDocument(golden[0][1])))
    # make the action collapse: freeness breaks
    doc["bundle"]["action"] = [[p] * len(doc["group"]["elements"])
                               for p in doc["bundle"]["total"]]
    violations = formats.model_violations(doc)
    assert any(v.rule == "freeness" for v in violations)
    with pytest.raises(fg.InvalidModelError):
        formats.parse_model(doc)


def test_group_axiom_violations_reported_first(golden):
    doc = json.loads(formats.dump_model(formats.ModelDocument(golden[0][1])))
    doc["group"]["mul"][0] = doc["group"]["mul"][1]
    violations = formats.model_violations(doc)
    assert violations and violations[0].rule in {"unit", "associativity", "inverses"}


def test_parse_error_carries_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"group": }', encoding="utf-8")
    with pytest.raises(fg.SchemaError, match=r":1:11"):
        formats.load_document(str(path))


def test_relation_pairs_must_be_inside_carrier(golden):
    doc = json.loads(formats.dump_model(formats.ModelDocument(golden[0][1])))
    doc["base_relation"]["pairs"].append(["a", "zz"])
    with pytest.raises(fg.SchemaError):
        formats.parse_model(doc)


def test_shipped_golden_files_match_regeneration():
    from finitegauge.connection import connection_from_arrows
    from finitegauge.torsor import FractionArrow

    for name, bn in golden_models():
        mdoc = formats.ModelDocument(bn)
        if name == "trivial-k3-z2":
            mdoc.connections["flat"] = connection_from_arrows(bn, {
                ("a", "b"): FractionArrow("a|0", "b|0"),
                ("b", "c"): FractionArrow("b|0", "c|0"),
                ("c", "a"): FractionArrow("c|0", "a|0")})
            mdoc.connections["holonomy"] = connection_from_arrows(bn, {
                ("a", "b"): FractionArrow("a|0", "b|0"),
                ("b", "c"): FractionArrow("b|0", "c|0"),
                ("c", "a"): FractionArrow("c|1", "a|0")})
        with open(os.path.join(MODELS_DIR, f"{name}.json"), encoding="utf-8") as fh:
            assert fh.read() == formats.dump_model(mdoc), name


def test_groupoid_document_roundtrip(z3):
    env = fg.envelope(fg.trivial_bundle(["a", "b"], z3))
    text = formats.dump_groupoid(env)
    loaded = formats.parse_groupoid(json.loads(text))
    assert formats.dump_groupoid(loaded) == text
    assert formats.groupoid_violations(json.loads(text)) == []


def test_groupoid_document_detects_broken_tables(z2):
    from finitegauge.groupoid import group_groupoid

    doc = json.loads(formats.dump_groupoid(group_groupoid(z2)))
    doc["inverses"]["1"] = "0"
    assert any(v.rule == "inverse-law" for v in formats.groupoid_violations(doc))


def test_bundle_document_roundtrip(z4):
    b = fg.trivial_bundle(["a", "b"], z4)
    text = formats.dump_bundle(b)
    doc = json.loads(text)
    assert formats.document_kind(doc) == "bundle"
    assert formats.bundle_violations(doc) == []
    loaded = formats.parse_bundle(doc)
    assert formats.dump_bundle(loaded) == text


def test_form_document_roundtrip(holonomy_example):
    bn, _flat, twisted = holonomy_example
    holonomy = fg.curvature(bn, twisted)
    doc = json.loads(formats.dump_form(holonomy))
    reloaded = formats.parse_form(bn, doc)
    assert reloaded == holonomy


def test_document_kind_detection(golden):
    mdoc = json.loads(formats.dump_model(formats.ModelDocument(golden[0][1])))
    assert formats.document_kind(mdoc) == "model"
    with pytest.raises(fg.SchemaError):
        formats.document_kind({"something": 1})
