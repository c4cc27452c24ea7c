"""JSON instance files with exact rational text.

Example::

    {
      "elements": [{"id": "a"}, {"id": "b", "label": "1/2"}],
      "mu": {"a": "1/2", "b": "1/2"},
      "nu": {"b": "1"},
      "relation": {"pairs": [["a", "b"]]},
      "cost": [["0", "1"], ["1", "0"]],
      "potential": {"a": "0", "b": "1"},
      "flags": {"auto_close": false}
    }

``relation`` is one of ``{"pairs": [...], "include_diagonal": true}``,
``{"generator": "chain"}`` (elements in listed order) or
``{"generator": "threshold", "gap": "1", "strict": true}`` (needs labels on
every element). Pair lists get the diagonal added unless ``include_diagonal``
is false. Missing weights and potential values are zero. Numbers are written
as ``"p/q"`` strings or JSON integers; JSON floats are refused.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import ParseError, ValidationError
from .potentials import Measure, Potential
from .relations import (CostMatrix, GroundSet, Relation, preorder_witness, require_preorder,
                        transitive_reflexive_closure)

__all__ = ["Instance", "parse_instance", "emit_instance", "format_rational", "parse_rational"]

_TOP_KEYS = {"elements", "mu", "nu", "relation", "cost", "potential", "flags"}
_REQUIRED = ("elements", "mu", "nu", "relation")


@dataclass(frozen=True)
class Instance:
    ground: GroundSet
    mu: Measure
    nu: Measure
    relation: Relation
    cost: Optional[CostMatrix] = None
    potential: Optional[Potential] = None
    auto_close: bool = False
    closed: bool = field(default=False, compare=False)


def format_rational(value) -> str:
    """``"p/q"``, with the denominator dropped when it is 1."""
    return str(Fraction(value))


def parse_rational(text, where: str = "value") -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise ParseError(f"{where}: expected rational text like \"3/4\", got {text!r}")
    try:
        value = Fraction(text) if isinstance(text, int) else Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"{where}: malformed rational {text!r}") from None
    if isinstance(text, str) and any(ch in text for ch in ".eE"):
        raise ParseError(f"{where}: decimal notation {text!r} is not allowed; write p/q")
    return value


def _reject_float(token):
    raise ParseError(f"float literal {token} is not allowed; write rationals as \"p/q\" strings")


def _expect(obj, kind, where):
    if not isinstance(obj, kind):
        name = {dict: "object", list: "array", str: "string", bool: "boolean"}.get(kind, str(kind))
        raise ParseError(f"{where}: expected {name}, got {type(obj).__name__}")
    return obj


def _check_keys(obj, allowed, where):
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise ParseError(f"{where}: unknown field(s) {', '.join(unknown)}")


def _weights(obj, ground, where):
    _expect(obj, dict, where)
    known = set(ground.points)
    for key in obj:
        if key not in known:
            raise ParseError(f"{where}.{key}: unknown element")
    return {k: parse_rational(v, f"{where}.{k}") for k, v in obj.items()}


def _relation(node, ground, where):
    _expect(node, dict, where)
    if "generator" in node:
        gen = node["generator"]
        if gen == "chain":
            _check_keys(node, {"generator"}, where)
            return Relation.chain(ground)
        if gen == "threshold":
            _check_keys(node, {"generator", "gap", "strict"}, where)
            if ground.labels is None:
                raise ParseError(f"{where}: threshold generator needs a label on every element")
            gap = parse_rational(node.get("gap", 0), f"{where}.gap")
            strict = _expect(node.get("strict", True), bool, f"{where}.strict")
            return Relation.threshold(ground, gap, strict=strict)
        raise ParseError(f"{where}.generator: unknown generator {gen!r}")
    _check_keys(node, {"pairs", "include_diagonal"}, where)
    if "pairs" not in node:
        raise ParseError(f"{where}: need either \"pairs\" or \"generator\"")
    pairs = _expect(node["pairs"], list, f"{where}.pairs")
    diag = _expect(node.get("include_diagonal", True), bool, f"{where}.include_diagonal")
    known = set(ground.points)
    for k, pair in enumerate(pairs):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ParseError(f"{where}.pairs[{k}]: expected [x, y]")
        for p in pair:
            if p not in known:
                raise ParseError(f"{where}.pairs[{k}]: unknown element {p!r}")
    return Relation.from_pairs(ground, [tuple(p) for p in pairs], include_diagonal=diag)


def parse_instance(text, *, auto_close: Optional[bool] = None,
                   require_preorder_relation: bool = True) -> Instance:
    """Parse and validate an instance.

    ``auto_close`` overrides the file's ``flags.auto_close`` when given. With
    closure off, a non-preorder relation raises ``RelationNotPreorder`` unless
    ``require_preorder_relation`` is false (used by diagnostics).
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc.reason} at byte {exc.start}") from None
    try:
        doc = json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    _expect(doc, dict, "$")
    _check_keys(doc, _TOP_KEYS, "$")
    for key in _REQUIRED:
        if key not in doc:
            raise ParseError(f"$: missing field {key!r}")

    elements = _expect(doc["elements"], list, "$.elements")
    ids, labels = [], []
    for k, el in enumerate(elements):
        where = f"$.elements[{k}]"
        _expect(el, dict, where)
        _check_keys(el, {"id", "label"}, where)
        if "id" not in el:
            raise ParseError(f"{where}: missing id")
        ids.append(_expect(el["id"], str, f"{where}.id"))
        labels.append(parse_rational(el["label"], f"{where}.label") if "label" in el else None)
    has_labels = [lab is not None for lab in labels]
    if any(has_labels) and not all(has_labels):
        raise ValidationError("every point has exactly one label",
                              "labels must be given for all elements or for none")
    ground = GroundSet(tuple(ids), tuple(labels) if ids and all(has_labels) else None)

    mu = Measure.from_mapping(ground, _weights(doc["mu"], ground, "$.mu"))
    nu = Measure.from_mapping(ground, _weights(doc["nu"], ground, "$.nu"))

    flags = _expect(doc.get("flags", {}), dict, "$.flags")
    _check_keys(flags, {"auto_close"}, "$.flags")
    file_close = _expect(flags.get("auto_close", False), bool, "$.flags.auto_close")
    close = file_close if auto_close is None else auto_close

    relation = _relation(doc["relation"], ground, "$.relation")
    closed = False
    if preorder_witness(relation) is not None:
        if close:
            relation = transitive_reflexive_closure(relation)
            closed = True
        elif require_preorder_relation:
            require_preorder(relation)

    cost = None
    if "cost" in doc:
        grid = _expect(doc["cost"], list, "$.cost")
        n = len(ground)
        if len(grid) != n or any(not isinstance(row, list) or len(row) != n for row in grid):
            raise ParseError(f"$.cost: expected a {n}x{n} array")
        cost = CostMatrix(ground, [[parse_rational(v, f"$.cost[{i}][{j}]") for j, v in enumerate(row)]
                                   for i, row in enumerate(grid)])

    potential = None
    if "potential" in doc:
        values = _weights(doc["potential"], ground, "$.potential")
        potential = Potential(ground, tuple(values.get(p, Fraction(0)) for p in ground.points))

    return Instance(ground, mu, nu, relation, cost, potential, file_close, closed)


def _weight_map(measure):
    return {p: format_rational(w) for p, w in zip(measure.ground.points, measure.weights) if w}


def emit_instance(inst: Instance) -> str:
    """Serialise an instance; ``parse_instance`` of the output gives it back."""
    ground = inst.ground
    elements = []
    for k, p in enumerate(ground.points):
        el = {"id": p}
        if ground.labels is not None:
            el["label"] = format_rational(ground.labels[k])
        elements.append(el)
    rel = inst.relation
    diag_full = all(rel.incidence[i, i] for i in range(len(ground)))
    relation = {"pairs": [list(pq) for pq in rel.pairs(include_diagonal=not diag_full)],
                "include_diagonal": diag_full}
    doc = {"elements": elements, "mu": _weight_map(inst.mu), "nu": _weight_map(inst.nu),
           "relation": relation}
    if inst.cost is not None:
        doc["cost"] = [[format_rational(v) for v in row] for row in inst.cost.entries]
    if inst.potential is not None:
        doc["potential"] = {p: format_rational(v)
                            for p, v in zip(ground.points, inst.potential.values)}
    doc["flags"] = {"auto_close": inst.auto_close}
    return json.dumps(doc, indent=2) + "\n"
