"""Versioned JSON documents for every serializable object.

Every document is an object with ``"kind"`` and ``"schema_version"`` next to
the payload of the corresponding ``to_json`` method. Classes, decompositions
and presentation elements also embed what they live on (``"carrier"`` or
``"bundle"``) so that ``parse(serialize(x)) == x``.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from .bundle import LegBundle, Projectivization, projectivize
from .cohomology import (
    CohomologyClass,
    ModuleDecomposition,
    PresentationElement,
    reduce_presentation,
)
from .graph import Graph
from .labeled import LabeledGraph

__all__ = ["SCHEMA_VERSION", "KINDS", "DocumentError", "serialize", "parse", "loads", "dumps", "load_path"]

SCHEMA_VERSION = 1
KINDS = ("graph", "labeled-graph", "leg-bundle", "projectivization", "class", "decomposition", "presentation")


class DocumentError(ValueError):
    """Malformed input: bad JSON, unknown kind or a payload of the wrong shape."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


def _kind_of(obj) -> str:
    # order matters: LabeledGraph before Graph is irrelevant (no subclassing), but
    # Projectivization must not be mistaken for a bundle
    if isinstance(obj, Graph):
        return "graph"
    if isinstance(obj, LabeledGraph):
        return "labeled-graph"
    if isinstance(obj, LegBundle):
        return "leg-bundle"
    if isinstance(obj, Projectivization):
        return "projectivization"
    if isinstance(obj, CohomologyClass):
        return "class"
    if isinstance(obj, ModuleDecomposition):
        return "decomposition"
    if isinstance(obj, PresentationElement):
        return "presentation"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def serialize(obj) -> dict:
    kind = _kind_of(obj)
    doc: dict = {"kind": kind, "schema_version": SCHEMA_VERSION}
    if kind == "class":
        doc["carrier"] = obj.carrier.to_json()
        doc.update(obj.to_json())
    elif kind == "decomposition":
        doc["bundle"] = obj.projectivization.bundle.to_json()
        doc.update(obj.to_json())
    elif kind == "presentation":
        doc["bundle"] = obj.projectivization.bundle.to_json()
        doc.update(obj.to_json())
    else:
        doc.update(obj.to_json())
    return doc


def _check_header(doc) -> str:
    if not isinstance(doc, Mapping):
        raise DocumentError("document must be a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise DocumentError(f"unknown document kind {kind!r}; expected one of {', '.join(KINDS)}")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema_version {version!r} (supported: {SCHEMA_VERSION})")
    return kind


def parse(doc: Mapping, *, carrier: LabeledGraph | None = None) -> Any:
    """Inverse of :func:`serialize`.

    Shape errors raise DocumentError; mathematical failures (congruence,
    transport) propagate as the module errors.
    """
    kind = _check_header(doc)
    try:
        if kind == "graph":
            return Graph.from_json(doc)
        if kind == "labeled-graph":
            return LabeledGraph.from_json(doc)
        if kind == "leg-bundle":
            return LegBundle.from_json(doc)
        if kind == "projectivization":
            return Projectivization.from_json(doc)
        if kind == "class":
            lg = LabeledGraph.from_json(doc["carrier"]) if "carrier" in doc else carrier
            if lg is None:
                raise DocumentError("class document has no carrier")
            return CohomologyClass.from_json(doc, lg)
        P = projectivize(LegBundle.from_json(doc["bundle"]))
        if kind == "decomposition":
            Q = tuple(CohomologyClass.from_json(q, P.base) for q in doc["Q"])
            return ModuleDecomposition(P, Q)
        coeffs = [CohomologyClass.from_json(c, P.base) for c in doc["kappa_coeffs"]]
        return reduce_presentation(P, coeffs)
    except KeyError as exc:
        raise DocumentError(f"{kind} document is missing field {exc.args[0]!r}") from exc
    except (TypeError, AttributeError) as exc:
        raise DocumentError(f"malformed {kind} document: {exc}") from exc


def loads(text: str) -> Any:
    """Decode JSON text, reporting syntax errors with line and column."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc


def dumps(doc: Mapping) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def load_path(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
