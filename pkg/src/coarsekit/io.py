"""JSON instance files: schema check first, then the type's own invariants."""
from __future__ import annotations

import json
from pathlib import Path

import jsonschema

from .errors import ValidationError
from .graphs import FiniteGroup, Graph
from .measures import ProbabilityMeasure
from .metric import Cover, FiniteMetricSpace
from .pou import PartitionOfUnity, PropertyAWitness, SparseL1Vector

_INT = {"type": "integer", "minimum": 0}
_NUM = {"type": "number"}

SCHEMAS = {
    "space": {
        "type": "object",
        "required": ["n", "dist"],
        "properties": {
            "n": _INT,
            "dist": {"type": "array", "items": {"type": "array", "items": _NUM}},
            "labels": {"type": "array", "items": {"type": "string"}},
        },
    },
    "graph": {
        "type": "object",
        "required": ["n", "edges"],
        "properties": {
            "n": _INT,
            "edges": {"type": "array", "items": {"type": "array", "items": _INT, "minItems": 2, "maxItems": 2}},
        },
    },
    "group": {
        "type": "object",
        "required": ["order", "table", "identity", "generators"],
        "properties": {
            "order": {"type": "integer", "minimum": 1},
            "table": {"type": "array", "items": {"type": "array", "items": _INT}},
            "identity": _INT,
            "generators": {"type": "array", "items": _INT},
        },
    },
    "cover": {
        "type": "object",
        "required": ["elements"],
        "properties": {
            "elements": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["label", "points"],
                    "properties": {"label": {"type": "string"}, "points": {"type": "array", "items": _INT}},
                },
            }
        },
    },
    "pou": {
        "type": "object",
        "required": ["labels", "values"],
        "properties": {
            "labels": {"type": "array", "items": {"type": "string"}},
            "values": {
                "type": "object",
                "patternProperties": {"^[0-9]+$": {"type": "object", "additionalProperties": _NUM}},
                "additionalProperties": False,
            },
        },
    },
    "witness": {
        "type": "object",
        "required": ["S_bound", "A"],
        "properties": {
            "S_bound": _NUM,
            "A": {
                "type": "object",
                "patternProperties": {
                    "^[0-9]+$": {
                        "type": "array",
                        "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                    }
                },
                "additionalProperties": False,
            },
        },
    },
    "measure": {
        "type": "object",
        "required": ["weights"],
        "properties": {"weights": {"type": "array", "items": _NUM}},
    },
}

KINDS = tuple(SCHEMAS)


def check_schema(data, kind: str) -> None:
    try:
        jsonschema.validate(data, SCHEMAS[kind])
    except jsonschema.ValidationError as exc:
        pointer = "/" + "/".join(str(p) for p in exc.absolute_path)
        raise ValidationError(f"{kind} file: schema violation at {pointer}: {exc.message}") from None


def read_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ValidationError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from None


def space_from_json(data) -> FiniteMetricSpace:
    check_schema(data, "space")
    if len(data["dist"]) != data["n"] or any(len(row) != data["n"] for row in data["dist"]):
        raise ValidationError(f"dist must be {data['n']} x {data['n']}")
    return FiniteMetricSpace(data["dist"], labels=data.get("labels"))


def graph_from_json(data) -> Graph:
    check_schema(data, "graph")
    return Graph(data["n"], data["edges"])


def group_from_json(data) -> FiniteGroup:
    check_schema(data, "group")
    if len(data["table"]) != data["order"]:
        raise ValidationError(f"table has {len(data['table'])} rows, order is {data['order']}")
    return FiniteGroup(data["table"], data["identity"], data["generators"])


def cover_from_json(data, space: FiniteMetricSpace) -> Cover:
    check_schema(data, "cover")
    return Cover(space, [(e["label"], e["points"]) for e in data["elements"]])


def pou_from_json(data, space: FiniteMetricSpace) -> PartitionOfUnity:
    check_schema(data, "pou")
    vals = data["values"]
    extra = sorted(int(k) for k in vals if int(k) >= space.n)
    if extra:
        raise ValidationError(f"values for points {extra} outside the space")
    return PartitionOfUnity(space, [SparseL1Vector(vals.get(str(x), {})) for x in range(space.n)], data["labels"])


def witness_from_json(data, space: FiniteMetricSpace) -> PropertyAWitness:
    check_schema(data, "witness")
    A = tuple(frozenset((int(y), int(k)) for y, k in data["A"].get(str(x), [])) for x in range(space.n))
    w = PropertyAWitness(A, float(data["S_bound"]))
    w.validate(space)
    return w


def measure_from_json(data, space: FiniteMetricSpace) -> ProbabilityMeasure:
    check_schema(data, "measure")
    return ProbabilityMeasure(space, data["weights"])


def parse_instance(path, kind: str, space: FiniteMetricSpace | None = None):
    """Load and validate an instance file of the given kind."""
    if kind not in SCHEMAS:
        raise ValueError(f"unknown instance kind {kind!r}; expected one of {KINDS}")
    data = read_json(path)
    if kind == "space":
        return space_from_json(data)
    if kind == "graph":
        return graph_from_json(data)
    if kind == "group":
        return group_from_json(data)
    if space is None:
        raise ValueError(f"{kind} files need the ambient space")
    return {
        "cover": cover_from_json,
        "pou": pou_from_json,
        "witness": witness_from_json,
        "measure": measure_from_json,
    }[kind](data, space)


def label_key(label) -> str:
    return label if isinstance(label, str) else json.dumps(label, default=list)


def space_to_json(X: FiniteMetricSpace) -> dict:
    out = {"n": X.n, "dist": X.dist.tolist()}
    if X.labels is not None:
        out["labels"] = list(X.labels)
    return out


def graph_to_json(G: Graph) -> dict:
    return {"n": G.n, "edges": [list(e) for e in G.edges]}


def group_to_json(G: FiniteGroup) -> dict:
    return {
        "order": G.order,
        "table": G.table.tolist(),
        "identity": G.identity,
        "generators": list(G.generators),
    }


def cover_to_json(U: Cover) -> dict:
    return {"elements": [{"label": label_key(lab), "points": sorted(pts)} for lab, pts in U.elements]}


def pou_to_json(f: PartitionOfUnity) -> dict:
    return {
        "labels": [label_key(lab) for lab in f.labels],
        "values": {str(x): {label_key(k): float(w) for k, w in v.items()} for x, v in enumerate(f.values)},
    }


def witness_to_json(w: PropertyAWitness) -> dict:
    return {"S_bound": w.S_bound, "A": {str(x): sorted([y, k] for y, k in Ax) for x, Ax in enumerate(w.A)}}


def measure_to_json(mu: ProbabilityMeasure) -> dict:
    return {"weights": mu.weights.tolist()}


def write_json(path, data) -> None:
    Path(path).write_text(json.dumps(data, indent=1) + "\n")
