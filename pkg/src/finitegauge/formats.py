"""Canonical JSON documents: groups, bundles, groupoids, relations, models, forms.

Every document is JSON with a fixed key order.  Dumps are canonical
(two-space indent, sorted name lists, newline-terminated), so dumping
what was just loaded reproduces a canonical file byte for byte.  Parsers
reject unknown fields; structural problems raise :class:`SchemaError`,
broken axioms are returned as violation lists by the ``*_violations``
helpers and raised as :class:`InvalidModelError` by the strict loaders.

The full schema reference lives in ``docs/formats.md``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .connection import Connection, connection_from_arrows
from .errors import (
    BookkeepingError,
    GroupAxiomError,
    InvalidModelError,
    SchemaError,
    Violation,
)
from .forms import BaseForm, GaugeForm, GroupForm
from .groupoid import ArrowSpec, FiniteGroupoid, validate_groupoid
from .groups import FiniteGroup
from .neighbourhood import BundleWithNeighbours, Neighbourhood, validate_neighbour_bundle
from .torsor import FractionArrow, PrincipalBundle, validate_bundle

AnyForm = GroupForm | BaseForm | GaugeForm


@dataclass
class ModelDocument:
    """A model plus its optional named connections and forms."""

    model: BundleWithNeighbours
    connections: dict[str, Connection] = field(default_factory=dict)
    forms: dict[str, AnyForm] = field(default_factory=dict)


# -- schema plumbing ----------------------------------------------------------


def _expect_object(obj: Any, path: str, required: tuple[str, ...],
                   optional: tuple[str, ...] = ()) -> None:
    if not isinstance(obj, dict):
        raise SchemaError(f"{path}: expected an object")
    unknown = sorted(set(obj) - set(required) - set(optional))
    if unknown:
        raise SchemaError(f"{path}: unknown fields {unknown}")
    missing = sorted(set(required) - set(obj))
    if missing:
        raise SchemaError(f"{path}: missing fields {missing}")


def _expect_str_list(obj: Any, path: str) -> list[str]:
    if not isinstance(obj, list) or not all(isinstance(x, str) for x in obj):
        raise SchemaError(f"{path}: expected a list of strings")
    return obj


def _expect_pair_list(obj: Any, path: str) -> list[tuple[str, str]]:
    if not isinstance(obj, list):
        raise SchemaError(f"{path}: expected a list of pairs")
    out = []
    for i, item in enumerate(obj):
        if (not isinstance(item, list) or len(item) != 2
                or not all(isinstance(x, str) for x in item)):
            raise SchemaError(f"{path}[{i}]: expected a pair of strings")
        out.append((item[0], item[1]))
    return out


def load_document(path: str) -> dict:
    """Read a JSON document; syntax errors carry line and column."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SchemaError(f"{path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: top level must be an object")
    return doc


def document_kind(doc: dict) -> str:
    """groupoid, model, or bundle -- decided by the discriminating fields."""
    if "objects" in doc:
        return "groupoid"
    if "total_relation" in doc:
        return "model"
    if "total" in doc:
        return "bundle"
    raise SchemaError("document is none of: groupoid, model, bundle")


def _dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


# -- groups -------------------------------------------------------------------


def _parse_group_table(doc: Any, path: str) -> tuple[list[str], list[list[str]]]:
    _expect_object(doc, path, ("elements", "mul"))
    elements = _expect_str_list(doc["elements"], f"{path}.elements")
    mul = doc["mul"]
    if not isinstance(mul, list):
        raise SchemaError(f"{path}.mul: expected a list of rows")
    rows = []
    for i, row in enumerate(mul):
        rows.append(_expect_str_list(row, f"{path}.mul[{i}]"))
    if len(rows) != len(elements) or any(len(r) != len(elements) for r in rows):
        raise SchemaError(f"{path}.mul: table must be square and match the elements")
    return elements, rows


def parse_group(doc: Any, path: str = "group") -> FiniteGroup:
    elements, rows = _parse_group_table(doc, path)
    return FiniteGroup(elements, rows)


def group_doc(group: FiniteGroup) -> dict:
    names = group.elements
    return {
        "elements": list(names),
        "mul": [[names[v] for v in row] for row in group.table],
    }


# -- bundles ------------------------------------------------------------------


def _parse_bundle_parts(doc: Any, path: str, group: FiniteGroup,
                        base: list[str]) -> PrincipalBundle:
    total = _expect_str_list(doc["total"], f"{path}.total")
    proj_raw = _expect_str_list(doc["proj"], f"{path}.proj")
    if len(proj_raw) != len(total):
        raise SchemaError(f"{path}.proj: must align with total")
    action_raw = doc["action"]
    if not isinstance(action_raw, list) or len(action_raw) != len(total):
        raise SchemaError(f"{path}.action: one row per total point required")
    proj = {}
    for p, b in zip(total, proj_raw):
        if b not in base:
            raise SchemaError(f"{path}.proj: {p!r} projects to unknown {b!r}")
        proj[p] = b
    action = {}
    for i, row in enumerate(action_raw):
        row = _expect_str_list(row, f"{path}.action[{i}]")
        if len(row) != len(group.elements):
            raise SchemaError(f"{path}.action[{i}]: one entry per group element required")
        for g, q in zip(group.elements, row):
            if q not in proj:
                raise SchemaError(f"{path}.action[{i}]: unknown point {q!r}")
            action[(total[i], g)] = q
    try:
        return PrincipalBundle(total, base, group, proj, action)
    except ValueError as exc:
        raise SchemaError(f"{path}: {exc}") from None


def parse_bundle(doc: Any, path: str = "bundle") -> PrincipalBundle:
    """A standalone bundle document: base, group, total, proj, action."""
    _expect_object(doc, path, ("base", "group", "total", "proj", "action"))
    base = _expect_str_list(doc["base"], f"{path}.base")
    group = parse_group(doc["group"], f"{path}.group")
    return _parse_bundle_parts(doc, path, group, base)


def bundle_doc(b: PrincipalBundle) -> dict:
    """Standalone bundle document, canonical order."""
    doc = {"base": list(b.base), "group": group_doc(b.group)}
    doc.update(_bundle_parts_doc(b))
    return doc


def _bundle_parts_doc(b: PrincipalBundle) -> dict:
    return {
        "total": list(b.points),
        "proj": [b.base[b.proj[i]] for i in range(len(b.points))],
        "action": [
            [b.points[b.act_idx(i, g)] for g in range(len(b.group))]
            for i in range(len(b.points))
        ],
    }


def bundle_violations(doc: Any) -> list[Violation]:
    """Axiom violations of a standalone bundle document (schema errors raise)."""
    _expect_object(doc, "bundle", ("base", "group", "total", "proj", "action"))
    base = _expect_str_list(doc["base"], "bundle.base")
    try:
        group = parse_group(doc["group"], "bundle.group")
    except GroupAxiomError as exc:
        return list(exc.violations)
    bundle = _parse_bundle_parts(doc, "bundle", group, base)
    return validate_bundle(bundle)


# -- relations ---------------------------------------------------------------


def _parse_relation(doc: Any, path: str, carrier: tuple[str, ...]) -> Neighbourhood:
    _expect_object(doc, path, ("pairs",))
    pairs = _expect_pair_list(doc["pairs"], f"{path}.pairs")
    try:
        return Neighbourhood(carrier, pairs)
    except ValueError as exc:
        raise SchemaError(f"{path}: {exc}") from None


def _relation_doc(n: Neighbourhood) -> dict:
    return {"pairs": [[a, b] for a, b in n.pairs()]}


# -- model documents ----------------------------------------------------------

_MODEL_FIELDS = ("group", "bundle", "base_relation", "total_relation", "max_lift")
_MODEL_OPTIONAL = ("connections", "forms")


def _parse_model_structure(doc: dict) -> BundleWithNeighbours:
    _expect_object(doc, "model", _MODEL_FIELDS, _MODEL_OPTIONAL)
    group = parse_group(doc["group"], "group")
    _expect_object(doc["bundle"], "bundle", ("base", "total", "proj", "action"))
    base = _expect_str_list(doc["bundle"]["base"], "bundle.base")
    bundle = _parse_bundle_parts(doc["bundle"], "bundle", group, base)
    base_rel = _parse_relation(doc["base_relation"], "base_relation", bundle.base)
    total_rel = _parse_relation(doc["total_relation"], "total_relation", bundle.points)
    max_lift = doc["max_lift"]
    if not isinstance(max_lift, int) or isinstance(max_lift, bool) or max_lift < 1:
        raise SchemaError("max_lift: expected a positive integer")
    return BundleWithNeighbours(bundle, base_rel, total_rel, max_lift=max_lift)


def _parse_connection(bn: BundleWithNeighbours, doc: Any, path: str) -> Connection:
    if not isinstance(doc, list):
        raise SchemaError(f"{path}: expected a list of edge records")
    arrows = {}
    for i, rec in enumerate(doc):
        _expect_object(rec, f"{path}[{i}]", ("edge", "arrow"))
        edge = _expect_str_list(rec["edge"], f"{path}[{i}].edge")
        arrow = _expect_str_list(rec["arrow"], f"{path}[{i}].arrow")
        if len(edge) != 2 or len(arrow) != 2:
            raise SchemaError(f"{path}[{i}]: edge and arrow must be pairs")
        arrows[(edge[0], edge[1])] = FractionArrow(arrow[0], arrow[1])
    try:
        return connection_from_arrows(bn, arrows)
    except (BookkeepingError, ValueError) as exc:
        raise SchemaError(f"{path}: {exc}") from None


def _parse_form(bn: BundleWithNeighbours, doc: Any, path: str) -> AnyForm:
    """A form document; the simplex space and value kind are inferred.

    String values name group elements; pair values are gauge classes.
    Group-valued forms may live on the total space or on the base --
    whichever simplex table matches the records exactly (a document
    matching both would be ambiguous and is rejected).
    """
    _expect_object(doc, path, ("degree", "values"))
    degree = doc["degree"]
    if not isinstance(degree, int) or isinstance(degree, bool) or degree < 0:
        raise SchemaError(f"{path}.degree: expected a non-negative integer")
    records = doc["values"]
    if not isinstance(records, list):
        raise SchemaError(f"{path}.values: expected a list of records")
    simplices: list[tuple[str, ...]] = []
    values: list[Any] = []
    kinds = set()
    for i, rec in enumerate(records):
        _expect_object(rec, f"{path}.values[{i}]", ("simplex", "value"))
        simplex = tuple(_expect_str_list(rec["simplex"], f"{path}.values[{i}].simplex"))
        if len(simplex) != degree + 1:
            raise SchemaError(f"{path}.values[{i}]: simplex must have {degree + 1} vertices")
        value = rec["value"]
        if isinstance(value, str):
            kinds.add("group")
        else:
            value = _expect_str_list(value, f"{path}.values[{i}].value")
            if len(value) != 2:
                raise SchemaError(f"{path}.values[{i}].value: gauge pair needs two points")
            kinds.add("gauge")
            value = FractionArrow(value[0], value[1])
        simplices.append(simplex)
        values.append(value)
    if len(kinds) > 1:
        raise SchemaError(f"{path}: mixed group and gauge values")
    mapping = dict(zip(simplices, values))
    if len(mapping) != len(simplices):
        raise SchemaError(f"{path}: duplicate simplex records")
    try:
        if kinds == {"gauge"}:
            return GaugeForm.from_mapping(bn, degree, mapping)
        on_total = set(mapping) == set(bn.p_simplex_names(degree))
        on_base = set(mapping) == set(bn.m_simplex_names(degree))
        if on_total and on_base:
            raise SchemaError(f"{path}: records match both simplex spaces; ambiguous")
        if on_total:
            return GroupForm.from_mapping(bn, degree, mapping)
        if on_base:
            return BaseForm.from_mapping(bn, degree, mapping)
        raise SchemaError(f"{path}: records cover neither simplex space exactly")
    except (BookkeepingError, ValueError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"{path}: {exc}") from None


def parse_model(doc: dict) -> ModelDocument:
    """Strict load: schema plus every module validator must pass."""
    violations = model_violations(doc)
    if violations:
        raise InvalidModelError(violations)
    bn = _parse_model_structure(doc)
    connections = {}
    if "connections" in doc:
        if not isinstance(doc["connections"], dict):
            raise SchemaError("connections: expected an object of named connections")
        for name in sorted(doc["connections"]):
            connections[name] = _parse_connection(bn, doc["connections"][name],
                                                  f"connections.{name}")
    forms = {}
    if "forms" in doc:
        if not isinstance(doc["forms"], dict):
            raise SchemaError("forms: expected an object of named forms")
        for name in sorted(doc["forms"]):
            forms[name] = _parse_form(bn, doc["forms"][name], f"forms.{name}")
    return ModelDocument(bn, connections, forms)


def load_model(path: str) -> ModelDocument:
    return parse_model(load_document(path))


def model_violations(doc: dict) -> list[Violation]:
    """Axiom violations of a model document (schema errors raise).

    Group axioms come first; if the group table is broken nothing else
    can be interpreted.  Otherwise the bundle and relation axioms are
    collected together.
    """
    _expect_object(doc, "model", _MODEL_FIELDS, _MODEL_OPTIONAL)
    try:
        group = parse_group(doc["group"], "group")
    except GroupAxiomError as exc:
        return list(exc.violations)
    _expect_object(doc["bundle"], "bundle", ("base", "total", "proj", "action"))
    base = _expect_str_list(doc["bundle"]["base"], "bundle.base")
    bundle = _parse_bundle_parts(doc["bundle"], "bundle", group, base)
    out = validate_bundle(bundle)
    base_rel = _parse_relation(doc["base_relation"], "base_relation", bundle.base)
    total_rel = _parse_relation(doc["total_relation"], "total_relation", bundle.points)
    max_lift = doc["max_lift"]
    if not isinstance(max_lift, int) or isinstance(max_lift, bool) or max_lift < 1:
        raise SchemaError("max_lift: expected a positive integer")
    bn = BundleWithNeighbours(bundle, base_rel, total_rel, max_lift=max_lift)
    out.extend(validate_neighbour_bundle(bn))
    return out


def model_doc(mdoc: ModelDocument) -> dict:
    """Canonical document for a model plus its named extras."""
    bn = mdoc.model
    b = bn.bundle
    doc = {
        "group": group_doc(b.group),
        "bundle": {"base": list(b.base), **_bundle_parts_doc(b)},
        "base_relation": _relation_doc(bn.base_nbhd),
        "total_relation": _relation_doc(bn.total_nbhd),
        "max_lift": bn.max_lift,
    }
    if mdoc.connections:
        doc["connections"] = {
            name: connection_records(mdoc.connections[name])
            for name in sorted(mdoc.connections)
        }
    if mdoc.forms:
        doc["forms"] = {
            name: form_doc(mdoc.forms[name]) for name in sorted(mdoc.forms)
        }
    return doc


def connection_records(conn: Connection) -> list[dict]:
    return [
        {"edge": [a, c], "arrow": [arrow.num, arrow.den]}
        for (a, c), arrow in conn.items()
    ]


def form_doc(form: AnyForm) -> dict:
    """Standalone form document: degree plus one record per simplex."""
    records = []
    if isinstance(form, GaugeForm):
        for simplex, arrow in form.items():
            records.append({"simplex": list(simplex), "value": [arrow.num, arrow.den]})
    else:
        for simplex, value in form.items():
            records.append({"simplex": list(simplex), "value": value})
    return {"degree": form.degree, "values": records}


def parse_form(bn: BundleWithNeighbours, doc: Any, path: str = "form") -> AnyForm:
    return _parse_form(bn, doc, path)


# -- groupoid documents --------------------------------------------------------

_GROUPOID_FIELDS = ("objects", "arrows", "compose", "identities", "inverses")


def parse_groupoid(doc: dict) -> FiniteGroupoid:
    _expect_object(doc, "groupoid", _GROUPOID_FIELDS)
    objects = _expect_str_list(doc["objects"], "objects")
    arrows = []
    if not isinstance(doc["arrows"], list):
        raise SchemaError("arrows: expected a list of records")
    for i, rec in enumerate(doc["arrows"]):
        _expect_object(rec, f"arrows[{i}]", ("name", "dom", "cod"))
        if not all(isinstance(rec[k], str) for k in ("name", "dom", "cod")):
            raise SchemaError(f"arrows[{i}]: name, dom, cod must be strings")
        arrows.append(ArrowSpec(rec["name"], rec["dom"], rec["cod"]))
    if not isinstance(doc["compose"], list):
        raise SchemaError("compose: expected a list of triples")
    compose = {}
    for i, triple in enumerate(doc["compose"]):
        entry = _expect_str_list(triple, f"compose[{i}]")
        if len(entry) != 3:
            raise SchemaError(f"compose[{i}]: expected [left, right, result]")
        if (entry[0], entry[1]) in compose:
            raise SchemaError(f"compose[{i}]: duplicate pair ({entry[0]!r}, {entry[1]!r})")
        compose[(entry[0], entry[1])] = entry[2]
    for fieldname in ("identities", "inverses"):
        if not isinstance(doc[fieldname], dict) or not all(
                isinstance(k, str) and isinstance(v, str)
                for k, v in doc[fieldname].items()):
            raise SchemaError(f"{fieldname}: expected an object of names")
    try:
        return FiniteGroupoid(objects, arrows, compose, doc["identities"], doc["inverses"])
    except ValueError as exc:
        raise SchemaError(f"groupoid: {exc}") from None


def groupoid_violations(doc: dict) -> list[Violation]:
    return validate_groupoid(parse_groupoid(doc))


def groupoid_doc(g: FiniteGroupoid) -> dict:
    n = len(g.arrows)
    compose = []
    for f in range(n):
        for h in range(n):
            r = g.compose_idx(f, h)
            if r >= 0:
                compose.append([g.arrows[f], g.arrows[h], g.arrows[r]])
    return {
        "objects": list(g.objects),
        "arrows": [
            {"name": g.arrows[i], "dom": g.objects[g.dom[i]], "cod": g.objects[g.cod[i]]}
            for i in range(n)
        ],
        "compose": compose,
        "identities": {o: g.arrows[g.identity[i]] for i, o in enumerate(g.objects)},
        "inverses": {a: g.arrows[g.inverse[i]] for i, a in enumerate(g.arrows)},
    }


# -- canonical serialisation ---------------------------------------------------


def dump_model(mdoc: ModelDocument) -> str:
    return _dumps(model_doc(mdoc))


def dump_bundle(b: PrincipalBundle) -> str:
    return _dumps(bundle_doc(b))


def dump_groupoid(g: FiniteGroupoid) -> str:
    return _dumps(groupoid_doc(g))


def dump_form(form: AnyForm) -> str:
    return _dumps(form_doc(form))
