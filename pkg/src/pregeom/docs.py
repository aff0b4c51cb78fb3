"""JSON documents for groups, pregeometries, bindings and reports.

Every document has a top-level ``kind``.  Permutations are stored as image
arrays; the cycle notation in ``perm`` is for command-line flags.  In a
binding, the group permutes element ids, which must then be 0..n-1.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import jsonschema

from .action import BoundAction, bind
from .errors import ValidationError
from .geom import Pregeometry
from .perm import PermGroup, check_perm

_perm_array = {"type": "array", "items": {"type": "integer", "minimum": 0}}

GROUP_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"const": "group"},
        "degree": {"type": "integer", "minimum": 0},
        "generators": {"type": "array", "items": _perm_array},
    },
    "required": ["kind", "degree", "generators"],
    "additionalProperties": False,
}

PREGEOMETRY_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"const": "pregeometry"},
        "types": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "elements": {"type": "array", "items": {
            "type": "object",
            "properties": {"id": {"type": "integer"}, "type": {"type": "string"}},
            "required": ["id", "type"],
            "additionalProperties": False}},
        "incidences": {"type": "array", "items": {
            "type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}},
    },
    "required": ["kind", "types", "elements", "incidences"],
    "additionalProperties": False,
}

BINDING_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"const": "binding"},
        "pregeometry": {"oneOf": [{"type": "string"}, PREGEOMETRY_SCHEMA]},
        "group": {"oneOf": [{"type": "string"}, GROUP_SCHEMA]},
    },
    "required": ["kind", "pregeometry", "group"],
    "additionalProperties": False,
}

REPORT_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"const": "report"},
        "command": {"type": "string"},
        "report": {"type": "object"},
    },
    "required": ["kind", "report"],
    "additionalProperties": False,
}

SCHEMAS = {"group": GROUP_SCHEMA, "pregeometry": PREGEOMETRY_SCHEMA,
           "binding": BINDING_SCHEMA, "report": REPORT_SCHEMA}


def validate_document(doc: Any, kind: str | None = None) -> str:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValidationError("document must be an object with a 'kind' field")
    k = doc["kind"]
    if k not in SCHEMAS:
        raise ValidationError(f"unknown document kind {k!r}")
    if kind is not None and k != kind:
        raise ValidationError(f"expected a {kind} document, got {k}")
    try:
        jsonschema.validate(doc, SCHEMAS[k])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(x) for x in exc.absolute_path) or "<root>"
        raise ValidationError(f"{k} document invalid at {where}: {exc.message}") from None
    return k


# -- to documents ----------------------------------------------------------------

def group_doc(G: PermGroup) -> dict:
    return {"kind": "group", "degree": G.degree, "generators": [list(g) for g in G.generators]}


def pregeometry_doc(p: Pregeometry) -> dict:
    return {"kind": "pregeometry", "types": list(p.types),
            "elements": [{"id": x, "type": p.types[t]} for x, t in enumerate(p.type_of)],
            "incidences": [list(e) for e in sorted(p.incidence)]}


def binding_doc(a: BoundAction) -> dict:
    return {"kind": "binding", "pregeometry": pregeometry_doc(a.geometry), "group": group_doc(a.group)}


def report_doc(report: dict, command: str | None = None) -> dict:
    doc: dict[str, Any] = {"kind": "report"}
    if command:
        doc["command"] = command
    doc["report"] = report
    return doc


# -- from documents --------------------------------------------------------------

def group_from_doc(doc: dict) -> PermGroup:
    validate_document(doc, "group")
    n = doc["degree"]
    gens = [check_perm(g, n, i) for i, g in enumerate(doc["generators"])]
    return PermGroup(n, gens, check=False)


def pregeometry_from_doc(doc: dict) -> tuple[Pregeometry, dict[int, int]]:
    validate_document(doc, "pregeometry")
    elements = [(e["id"], e["type"]) for e in doc["elements"]]
    return Pregeometry.from_labelled(doc["types"], elements, [tuple(e) for e in doc["incidences"]])


def _resolve(part: Any, base: Path | None) -> dict:
    if isinstance(part, dict):
        return part
    path = Path(part)
    if base is not None and not path.is_absolute():
        path = base / path
    return read_json(path)


def binding_from_doc(doc: dict, base: Path | None = None) -> BoundAction:
    validate_document(doc, "binding")
    p, mapping = pregeometry_from_doc(_resolve(doc["pregeometry"], base))
    G = group_from_doc(_resolve(doc["group"], base))
    n = p.size
    if G.degree != n:
        raise ValidationError(f"group degree {G.degree} does not match the {n} elements")
    if sorted(mapping) != list(range(n)):
        raise ValidationError("element ids of a bound pregeometry must be 0..n-1")
    # move the group onto dense ids (identity when the document is already dense)
    dense = [mapping[i] for i in range(n)]
    inv = [0] * n
    for ext, d in enumerate(dense):
        inv[d] = ext
    gens = [tuple(dense[g[inv[d]]] for d in range(n)) for g in G.generators]
    return bind(p, PermGroup(n, gens, check=False))


def read_json(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from None


def load_binding(path: str | Path) -> BoundAction:
    path = Path(path)
    return binding_from_doc(read_json(path), path.parent)


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


def write_json(doc: dict, path: str | Path) -> None:
    validate_document(doc)
    Path(path).write_text(dumps(doc), encoding="utf-8")
