"""JSON documents for posets, lattices, algebras, presentations and
inequations.

Every document is a flat object with a ``kind`` field.  Order relations are
saturated on load and written back as Hasse pairs, so serialising a parsed
document gives a normal form that round-trips exactly.
"""
from __future__ import annotations

import json
import re
from typing import Any, Mapping

import jsonschema
import numpy as np

from .lattice import (
    FiniteLattice, Inequation, NotALattice, OrderedAlgebra, TermSyntaxError,
    format_term, lattice_from_poset, parse_inequation,
)
from .order import OrderError, Poset, Preorder, bits, hasse_edges, saturate_order
from .presentations import Presentation


class DocumentError(ValueError):
    """Malformed or schema-violating input; ``path`` and ``line`` locate it
    when they are known."""

    def __init__(self, message: str, path: str = "", line: int | None = None):
        where = []
        if path:
            where.append(f"at {path}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.path, self.line = path, line


_LABELS = {"type": "array", "items": {"type": "string"}}
_PAIRS = {"type": "array", "items": {"type": "array", "items": {"type": "string"},
                                     "minItems": 2, "maxItems": 2}}
_ORDER = {
    "type": "object",
    "properties": {"elements": _LABELS, "leq": _PAIRS},
    "required": ["elements", "leq"],
    "additionalProperties": False,
}


def _doc(kind: str, props: dict, required: list[str]) -> dict:
    return {
        "type": "object",
        "properties": {"kind": {"const": kind}, "name": {"type": "string"}, **props},
        "required": ["kind", *required],
        "additionalProperties": False,
    }


_LATTICE_PROPS = {"elements": _LABELS, "leq": _PAIRS,
                  "bottom": {"type": "string"}, "top": {"type": "string"}}

SCHEMAS: dict[str, dict] = {
    "poset": _doc("poset", {"elements": _LABELS, "leq": _PAIRS}, ["elements", "leq"]),
    "lattice": _doc("lattice", _LATTICE_PROPS, ["elements", "leq"]),
    "algebra": _doc("algebra", {
        "lattice": {"type": "object", "properties": _LATTICE_PROPS,
                    "required": ["elements", "leq"], "additionalProperties": False},
        "ops": {"type": "object", "additionalProperties": {
            "type": "object",
            "properties": {"arity": {"type": "integer", "minimum": 0}, "table": {}},
            "required": ["arity", "table"],
            "additionalProperties": False,
        }},
    }, ["lattice", "ops"]),
    "presentation": _doc("presentation", {
        "type": {"enum": ["dcpo", "suplattice"]},
        "preorder": _ORDER,
        "covers": {"type": "array", "items": {
            "type": "object",
            "properties": {"lhs": {"type": "string"}, "rhs": _LABELS},
            "required": ["lhs", "rhs"],
            "additionalProperties": False,
        }},
    }, ["type", "preorder", "covers"]),
    "inequation": _doc("inequation", {
        "text": {"type": "string"},
        "signature": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
    }, ["text"]),
    "corpus": _doc("corpus", {"entries": {"type": "object"}}, ["entries"]),
}


def _line_of(text: str | None, path: list) -> int | None:
    """Best-effort line of the last object key on ``path``."""
    if not text:
        return None
    keys = [p for p in path if isinstance(p, str)]
    if not keys:
        return None
    m = re.search(r'"%s"\s*:' % re.escape(keys[-1]), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _validate(doc: Any, text: str | None, prefix: str = "$") -> str:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object", prefix)
    kind = doc.get("kind")
    if kind not in SCHEMAS:
        raise DocumentError(f"unknown or missing kind {kind!r}", prefix + ".kind",
                            _line_of(text, ["kind"]))
    err = jsonschema.exceptions.best_match(
        jsonschema.Draft7Validator(SCHEMAS[kind]).iter_errors(doc))
    if err is not None:
        path = list(err.absolute_path)
        where = prefix + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in path)
        if err.validator == "additionalProperties":
            extra = sorted(set(err.instance) - set(err.schema.get("properties", {})))
            path = path + extra[:1]
        raise DocumentError(err.message, where, _line_of(text, path))
    return kind


def _labels_index(labels: list[str], where: str) -> dict[str, int]:
    if len(set(labels)) != len(labels):
        raise DocumentError("element labels must be distinct", where)
    return {s: i for i, s in enumerate(labels)}


def _order(d: Mapping, where: str, poset: bool) -> Preorder:
    labels = list(d["elements"])
    index = _labels_index(labels, where + ".elements")
    pairs = []
    for k, (a, b) in enumerate(d["leq"]):
        for s in (a, b):
            if s not in index:
                raise DocumentError(f"unknown element {s!r}", f"{where}.leq[{k}]")
        pairs.append((index[a], index[b]))
    p = saturate_order(pairs, len(labels), labels)
    if poset:
        if not p.is_antisymmetric():
            raise DocumentError("order is not antisymmetric", where + ".leq")
        return Poset(labels, p.up)
    return p


def _lattice(d: Mapping, where: str) -> FiniteLattice:
    P = _order(d, where, poset=True)
    if P.n == 0:
        raise DocumentError("a lattice needs at least one element", where + ".elements")
    try:
        L = lattice_from_poset(P)
    except NotALattice as exc:
        raise DocumentError(f"not a lattice: {exc}", where) from None
    for key, expect in (("bottom", L.bottom), ("top", L.top)):
        if key in d and d[key] != L.labels[expect]:
            raise DocumentError(f"declared {key} {d[key]!r} but it is {L.labels[expect]!r}",
                                f"{where}.{key}")
    return L


def _table(spec: Mapping, L: FiniteLattice, where: str) -> np.ndarray:
    arity, raw = spec["arity"], spec["table"]
    n = L.n
    index = {s: i for i, s in enumerate(L.labels)}

    def elem(s, at):
        if not isinstance(s, str) or s not in index:
            raise DocumentError(f"unknown element {s!r}", at)
        return index[s]

    out = np.full((n,) * arity, -1, dtype=np.int64)
    # rows form [[a1, .., ak, value], ...]; cannot be confused with the
    # nested form, which has n entries that are strings when arity is 1
    rows = (arity > 0 and isinstance(raw, list) and len(raw) == n ** arity and
            all(isinstance(r, list) and len(r) == arity + 1 and all(isinstance(x, str) for x in r)
                for r in raw))
    if rows:
        for k, r in enumerate(raw):
            args = tuple(elem(x, f"{where}.table[{k}]") for x in r[:-1])
            if out[args] != -1:
                raise DocumentError(f"repeated argument tuple {r[:-1]}", f"{where}.table[{k}]")
            out[args] = elem(r[-1], f"{where}.table[{k}]")
        return out

    def fill(node, prefix, at):
        if len(prefix) == arity:
            out[prefix] = elem(node, at)
            return
        if not isinstance(node, list) or len(node) != n:
            raise DocumentError(f"expected a list of {n} entries", at)
        for i, sub in enumerate(node):
            fill(sub, prefix + (i,), f"{at}[{i}]")

    fill(raw, (), where + ".table")
    return out


def _presentation(d: Mapping, where: str) -> Presentation:
    base = _order(d["preorder"], where + ".preorder", poset=False)
    index = {s: i for i, s in enumerate(base.labels)}
    covers = []
    for k, c in enumerate(d["covers"]):
        at = f"{where}.covers[{k}]"
        for s in [c["lhs"], *c["rhs"]]:
            if s not in index:
                raise DocumentError(f"unknown element {s!r}", at)
        U = 0
        for s in c["rhs"]:
            U |= 1 << index[s]
        covers.append((index[c["lhs"]], U))
    try:
        return Presentation(base, d["type"], tuple(covers))
    except ValueError as exc:
        raise DocumentError(str(exc), where + ".covers") from None


def from_document(doc: Any, text: str | None = None, where: str = "$"):
    """Build the structure described by an already-decoded document."""
    kind = _validate(doc, text, where)
    if kind == "poset":
        return _order(doc, where, poset=True)
    if kind == "lattice":
        return _lattice(doc, where)
    if kind == "algebra":
        L = _lattice(doc["lattice"], where + ".lattice")
        ops = {}
        for name, spec in doc["ops"].items():
            ops[name] = _table(spec, L, f"{where}.ops.{name}")
        try:
            return OrderedAlgebra(L, ops)
        except (OrderError, ValueError) as exc:
            raise DocumentError(str(exc), where + ".ops") from None
    if kind == "presentation":
        return _presentation(doc, where)
    if kind == "inequation":
        try:
            return parse_inequation(doc["text"], doc.get("signature"))
        except TermSyntaxError as exc:
            raise DocumentError(str(exc), where + ".text") from None
    entries = {}
    for name, sub in doc["entries"].items():
        entries[name] = from_document(sub, text, f"{where}.entries.{name}")
    return entries


def parse(text: str):
    """Parse a document; raises :class:`DocumentError` on any problem."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc.msg}", "$", exc.lineno) from None
    return from_document(doc, text)


def load(path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# -- serialisation ----------------------------------------------------------

def _order_doc(p: Preorder) -> dict:
    lab = p.labels
    if p.is_antisymmetric():
        pairs = hasse_edges(p)
    else:
        pairs = [(i, j) for i, j in p.pairs() if i != j]
    return {"elements": list(lab), "leq": [[lab[i], lab[j]] for i, j in pairs]}


def _nested(table: np.ndarray, labels) -> Any:
    if table.ndim == 0:
        return labels[int(table)]
    return [_nested(sub, labels) for sub in table]


def to_document(obj, name: str | None = None) -> dict:
    if isinstance(obj, FiniteLattice):
        doc = {"kind": "lattice", **_order_doc(obj.poset)}
    elif isinstance(obj, OrderedAlgebra):
        if not isinstance(obj.carrier, FiniteLattice):
            raise TypeError("only algebras over lattices can be serialised")
        ops = {k: {"arity": int(t.ndim), "table": _nested(t, obj.carrier.labels)}
               for k, t in sorted(obj.ops.items())}
        doc = {"kind": "algebra", "lattice": _order_doc(obj.carrier.poset), "ops": ops}
    elif isinstance(obj, Presentation):
        if obj.intensional:
            raise TypeError("intensional presentations have no document form")
        lab = obj.base.labels
        doc = {"kind": "presentation", "type": obj.kind, "preorder": _order_doc(obj.base),
               "covers": [{"lhs": lab[x], "rhs": [lab[y] for y in bits(U)]}
                          for x, U in obj.covers]}
    elif isinstance(obj, Inequation):
        doc = {"kind": "inequation", "text": inequation_text(obj)}
        extra = {s: a for s, a in _symbol_arities(obj).items()
                 if s not in ("join", "meet", "bot", "top")}
        if extra:
            doc["signature"] = dict(sorted(extra.items()))
    elif isinstance(obj, Poset):
        doc = {"kind": "poset", **_order_doc(obj)}
    elif isinstance(obj, dict):
        doc = {"kind": "corpus", "entries": {k: to_document(v) for k, v in obj.items()}}
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")
    if name is not None:
        doc = {"kind": doc.pop("kind"), "name": name, **doc}
    return doc


def _symbol_arities(ineq: Inequation) -> dict[str, int]:
    out = {}
    stack = [ineq.lhs, ineq.rhs]
    while stack:
        t = stack.pop()
        if hasattr(t, "symbol"):
            out[t.symbol] = len(t.args)
            stack.extend(t.args)
    return out


def inequation_text(ineq: Inequation) -> str:
    names = ineq.var_names or tuple(f"x{i}" for i in range(ineq.nvars))
    return f"(leq {format_term(ineq.lhs, names)} {format_term(ineq.rhs, names)})"


def dumps(doc, indent: int = 0, width: int = 78) -> str:
    """Indented JSON that keeps short arrays and objects on one line."""
    flat = json.dumps(doc, ensure_ascii=False)
    if len(flat) + indent <= width or not isinstance(doc, (list, dict)) or not doc:
        return flat
    pad = " " * (indent + 2)
    if isinstance(doc, list):
        items = [pad + dumps(v, indent + 2, width) for v in doc]
        return "[\n" + ",\n".join(items) + "\n" + " " * indent + "]"
    items = [f"{pad}{json.dumps(k, ensure_ascii=False)}: {dumps(v, indent + 2, width)}"
             for k, v in doc.items()]
    return "{\n" + ",\n".join(items) + "\n" + " " * indent + "}"


def serialize(obj, name: str | None = None) -> str:
    return dumps(to_document(obj, name)) + "\n"

