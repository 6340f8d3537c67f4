"""Instance files: parsing, canonical serialization, and conversion to domain objects.

Formats::

    {"kind": "matrix", "entries": [["1", "2/3"], [0, 1]]}
    {"kind": "category", "objects": ["a", "b"], "hom": {"a->b": 2},
     "flags": {"skeletal": true, "idempotents_trivial": true}}
    {"kind": "poset", "elements": ["a", "b"], "covers": [["a", "b"]]}
    {"kind": "metric", "points": {"x1": [0, 0], "x2": [1, 0]}, "norm": "l2"}
    {"kind": "metric", "distances": [[0, 1], [1, 0]], "symmetric": true}

Category hom pairs that are omitted default to 0, except the diagonal which
defaults to 1.  An optional ``"options"`` object carries per-instance
settings (``scalar``, ``t``, ``merge_tol``, ``max_n``).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .category import FiniteCategory, Poset
from .linalg import SquareMatrix
from .metric import FiniteMetricSpace
from .scalars import format_rational, to_fraction

KINDS = ("matrix", "category", "poset", "metric")


class InstanceError(ValueError):
    """Malformed instance file."""


@dataclass
class InstanceSpec:
    kind: str
    payload: dict
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InstanceError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        for t in self.options.get("t", []):
            if not t > 0:
                raise InstanceError(f"t values must be positive, got {t!r}")


def _require(data, key, kind):
    if key not in data:
        raise InstanceError(f"{kind} instance needs a {key!r} field")
    return data[key]


def parse_instance(data) -> InstanceSpec:
    """Build an :class:`InstanceSpec` from decoded JSON (a dict) or a JSON string."""
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InstanceError("instance must be a JSON object")
    kind = data.get("kind")
    options = dict(data.get("options", {}))
    if "t" in options:
        options["t"] = [float(t) for t in options["t"]]
    try:
        if kind == "matrix":
            rows = _require(data, "entries", kind)
            entries = [[to_fraction(x) for x in row] for row in rows]
            if any(len(r) != len(entries) for r in entries):
                raise InstanceError("matrix entries must form a square array")
            payload = {"entries": entries}
            if "index" in data:
                payload["index"] = [str(x) for x in data["index"]]
        elif kind == "category":
            objects = [str(o) for o in _require(data, "objects", kind)]
            hom = {}
            for key, count in dict(data.get("hom", {})).items():
                if "->" not in key:
                    raise InstanceError(f"hom key {key!r} must look like 'a->b'")
                a, b = (s.strip() for s in key.split("->", 1))
                if not isinstance(count, int) or isinstance(count, bool):
                    raise InstanceError(f"hom count for {key!r} must be an integer")
                hom[(a, b)] = count
            for o in objects:
                hom.setdefault((o, o), 1)
            flags = dict(data.get("flags", {}))
            payload = {
                "objects": objects,
                "hom": hom,
                "flags": {
                    "skeletal": bool(flags.get("skeletal", False)),
                    "idempotents_trivial": bool(flags.get("idempotents_trivial", False)),
                },
            }
        elif kind == "poset":
            payload = {
                "elements": [str(e) for e in _require(data, "elements", kind)],
                "covers": [[str(a), str(b)] for a, b in data.get("covers", [])],
            }
        elif kind == "metric":
            if "points" in data:
                pts = data["points"]
                if isinstance(pts, dict):
                    labels, coords = list(pts.keys()), list(pts.values())
                else:
                    labels, coords = [f"x{i + 1}" for i in range(len(pts))], list(pts)
                payload = {
                    "points": {str(k): [float(c) for c in v] for k, v in zip(labels, coords)},
                    "norm": data.get("norm", "l2"),
                }
            elif "distances" in data:
                rows = [[float(x) for x in r] for r in data["distances"]]
                payload = {
                    "distances": rows,
                    "labels": [str(x) for x in data.get("labels", [f"x{i + 1}" for i in range(len(rows))])],
                    "symmetric": bool(data.get("symmetric", True)),
                    "triangle_checked": bool(data.get("triangle_checked", True)),
                }
            else:
                raise InstanceError("metric instance needs 'points' or 'distances'")
        else:
            raise InstanceError(f"unknown kind {kind!r}; expected one of {KINDS}")
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, InstanceError):
            raise
        raise InstanceError(str(exc)) from exc
    return InstanceSpec(kind, payload, options)


def serialize_instance(spec: InstanceSpec) -> dict:
    """Canonical JSON-ready form; ``parse_instance(serialize_instance(s)) == s``."""
    p = spec.payload
    out: dict = {"kind": spec.kind}
    if spec.kind == "matrix":
        out["entries"] = [[format_rational(x) for x in r] for r in p["entries"]]
        if "index" in p:
            out["index"] = list(p["index"])
    elif spec.kind == "category":
        out["objects"] = list(p["objects"])
        out["hom"] = {f"{a}->{b}": k for (a, b), k in p["hom"].items()}
        out["flags"] = dict(p["flags"])
    elif spec.kind == "poset":
        out["elements"] = list(p["elements"])
        out["covers"] = [list(c) for c in p["covers"]]
    else:
        out.update({k: v for k, v in p.items()})
    if spec.options:
        out["options"] = dict(spec.options)
    return out


def dumps_instance(spec: InstanceSpec) -> str:
    return json.dumps(serialize_instance(spec), sort_keys=True, indent=2)


def load_instance(path) -> InstanceSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc}") from exc
    return parse_instance(text)


def to_matrix(spec: InstanceSpec) -> SquareMatrix:
    entries = spec.payload["entries"]
    if spec.options.get("scalar") == "float":
        entries = [[float(x) for x in r] for r in entries]
    index = spec.payload.get("index")
    return SquareMatrix.from_rows(entries, index)


def to_category(spec: InstanceSpec) -> FiniteCategory:
    p = spec.payload
    return FiniteCategory(
        tuple(p["objects"]),
        {k: v for k, v in p["hom"].items() if v},
        skeletal=p["flags"]["skeletal"],
        idempotents_trivial=p["flags"]["idempotents_trivial"],
    )


def to_poset(spec: InstanceSpec) -> Poset:
    return Poset(tuple(spec.payload["elements"]), tuple(tuple(c) for c in spec.payload["covers"]))


def to_metric(spec: InstanceSpec) -> FiniteMetricSpace:
    p = spec.payload
    if "points" in p:
        return FiniteMetricSpace.from_coordinates(list(p["points"].values()), tuple(p["points"]), p["norm"])
    return FiniteMetricSpace.from_distances(
        p["distances"], tuple(p["labels"]), p["symmetric"], p["triangle_checked"]
    )


def category_instance(C: FiniteCategory) -> InstanceSpec:
    return InstanceSpec("category", {
        "objects": list(C.objects),
        "hom": {(a, b): C.hom_count(a, b) for a in C.objects for b in C.objects if C.hom_count(a, b)},
        "flags": {"skeletal": C.skeletal, "idempotents_trivial": C.idempotents_trivial},
    })


def poset_instance(P: Poset) -> InstanceSpec:
    return InstanceSpec("poset", {"elements": list(P.elements), "covers": [list(c) for c in P.covers]})


def metric_instance(X: FiniteMetricSpace) -> InstanceSpec:
    return InstanceSpec("metric", {
        "distances": [list(r) for r in X.distances],
        "labels": [str(p) for p in X.points],
        "symmetric": X.symmetric,
        "triangle_checked": X.triangle_checked,
    })


def matrix_instance(M: SquareMatrix) -> InstanceSpec:
    return InstanceSpec("matrix", {"entries": [[Fraction(x) for x in r] for r in M.rows]})
