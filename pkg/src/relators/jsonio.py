"""JSON documents for every structure the package builds.

Loaders validate as they go, so a loaded object is always a checked one.
Dumpers produce plain lists and dicts with arrays sorted by id.  Documents
may carry a ``"kind"`` tag; :func:`load` infers it from the keys otherwise.
"""

import json

import numpy as np

from .base import Base, parse_base
from .distributors import Distributor, Span, validate_distributor
from .errors import DuplicateEntry, IncompleteTable, PreconditionViolated, ValidationError
from .groupoid import FinGroupoid, GpdFunctor, Verdict, validate_functor, validate_groupoid
from .groups import Group
from .internal import (
    InternalDistributor,
    InternalFunctor,
    InternalGroupoid,
    validate_internal_distributor,
    validate_internal_functor,
    validate_internal_groupoid,
)


def jsonable(x):
    """Convert tuples, numpy scalars, ranges and tuple-keyed dicts to plain JSON values."""
    if isinstance(x, dict):
        return {(",".join(map(str, k)) if isinstance(k, tuple) else str(k)): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, range)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, Verdict):
        return verdict_to_json(x)
    if hasattr(x, "to_json"):
        return x.to_json()
    return x


def dumps(doc):
    """Canonical text: sorted keys, compact separators, trailing newline."""
    return json.dumps(jsonable(doc), sort_keys=True, separators=(",", ":")) + "\n"


def verdict_to_json(v):
    return {"ok": bool(v.ok), "witness": jsonable(v.witness)}


# ------------------------------------------------------------- groupoids


def groupoid_to_json(G):
    return {
        "kind": "groupoid",
        "objects": G.n_objects,
        "arrows": [{"id": f, "dom": G.dom[f], "cod": G.cod[f]} for f in G.arrows],
        "compose": [[g, f, G.mul(g, f)] for f in G.arrows for g in G.out_arrows[G.cod[f]]],
        "identities": list(G.identity),
        "inverses": list(G.inverse),
    }


def _require_keys(doc, keys, what):
    missing = [k for k in keys if k not in doc]
    if missing:
        raise IncompleteTable(f"{what} document lacks {', '.join(missing)}", missing=missing)


def groupoid_from_json(doc):
    _require_keys(doc, ("objects", "arrows", "compose", "identities"), "groupoid")
    arrows = doc["arrows"]
    ids = [int(a["id"]) for a in arrows]
    if len(set(ids)) != len(ids):
        dup = next(i for i in ids if ids.count(i) > 1)
        raise DuplicateEntry(f"arrow id {dup} given twice", id=dup)
    if ids != list(range(len(ids))):
        raise IncompleteTable("arrow ids must be 0..n-1 in order", ids=ids)
    return validate_groupoid(
        doc["objects"],
        [a["dom"] for a in arrows],
        [a["cod"] for a in arrows],
        doc["compose"],
        doc["identities"],
        doc.get("inverses"),
    )


def functor_to_json(F, endpoints=True):
    doc = {"kind": "functor", "obj_map": list(F.obj_map), "arr_map": list(F.arr_map)}
    if endpoints:
        doc["source"] = groupoid_to_json(F.source)
        doc["target"] = groupoid_to_json(F.target)
    return doc


def functor_from_json(doc, source=None, target=None):
    _require_keys(doc, ("obj_map", "arr_map"), "functor")
    source = source if source is not None else groupoid_from_json(doc["source"])
    target = target if target is not None else groupoid_from_json(doc["target"])
    return validate_functor(doc["obj_map"], doc["arr_map"], source, target)


# ---------------------------------------------------------- distributors


def _element_names(S):
    labels = S.labels
    if all(isinstance(x, str) for x in labels) and len(set(labels)) == len(labels):
        return list(labels)
    return [f"s{i}" for i in S.elements]


def distributor_to_json(S):
    names = _element_names(S)
    return {
        "kind": "distributor",
        "A": groupoid_to_json(S.source),
        "B": groupoid_to_json(S.target),
        "fibers": {f"{b},{a}": [names[s] for s in S.fiber(b, a)] for (b, a) in S.fibers},
        "left": sorted([alpha, names[s], names[r]] for (alpha, s), r in S.left.items()),
        "right": sorted([names[s], beta, names[r]] for (s, beta), r in S.right.items()),
    }


def distributor_from_json(doc, source=None, target=None):
    _require_keys(doc, ("A", "B", "fibers", "left", "right"), "distributor")
    A = source if source is not None else groupoid_from_json(doc["A"])
    B = target if target is not None else groupoid_from_json(doc["B"])
    fibers = {}
    for key, members in doc["fibers"].items():
        try:
            b, a = (int(v) for v in key.split(","))
        except ValueError:
            raise IncompleteTable(f"fiber key {key!r} is not 'b,a'", key=key) from None
        if (b, a) in fibers:
            raise DuplicateEntry(f"fiber {key!r} given twice", key=key)
        if not (0 <= b < B.n_objects and 0 <= a < A.n_objects):
            raise PreconditionViolated(f"fiber {key!r} is not over objects of B and A", key=key)
        fibers[b, a] = [str(m) for m in members]
    names = []
    for key in sorted(fibers):
        names.extend(fibers[key])
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise DuplicateEntry(f"element name {dup!r} used twice", name=dup)
    index = {n: i for i, n in enumerate(names)}

    def elem(x):
        if isinstance(x, str):
            if x not in index:
                raise PreconditionViolated(f"unknown element {x!r}", name=x)
            return index[x]
        return int(x)

    left = [(int(alpha), elem(s), elem(r)) for alpha, s, r in doc["left"]]
    right = [(elem(s), int(beta), elem(r)) for s, beta, r in doc["right"]]
    sizes = {k: len(v) for k, v in fibers.items() if v}
    return validate_distributor(A, B, sizes, left, right, labels=names)


def span_to_json(span):
    return {
        "kind": "span",
        "apex": groupoid_to_json(span.apex),
        "A": groupoid_to_json(span.A),
        "B": groupoid_to_json(span.B),
        "left": functor_to_json(span.left, endpoints=False),
        "right": functor_to_json(span.right, endpoints=False),
    }


def span_from_json(doc):
    _require_keys(doc, ("apex", "A", "B", "left", "right"), "span")
    E = groupoid_from_json(doc["apex"])
    A, B = groupoid_from_json(doc["A"]), groupoid_from_json(doc["B"])
    return Span(functor_from_json(doc["left"], E, A), functor_from_json(doc["right"], E, B))


# ------------------------------------------------------------------ bases


def base_to_json(base):
    if not base.is_gset:
        return {"base": "finset"}
    return {"base": "gset", "group": base.group.to_json()}


def base_from_json(doc):
    if isinstance(doc, str):
        return parse_base(doc)
    if doc.get("base") == "finset":
        return Base()
    if doc.get("base") == "gset":
        g = doc["group"]
        if isinstance(g, str):
            return parse_base(f"gset:{g}")
        return Base(Group(g["table"], identity=g.get("identity", 0)))
    raise PreconditionViolated(f"unknown base {doc!r}")


def object_to_json(X):
    return {"n": X.n, "action": X.action.tolist()}


def object_from_json(base, doc):
    if "action" in doc:
        return base.object(action=doc["action"])
    return base.object(int(doc["n"]))


def internal_groupoid_to_json(C):
    return {
        "kind": "internal_groupoid",
        **base_to_json(C.base),
        "C0": object_to_json(C.C0),
        "C1": object_to_json(C.C1),
        **{k: getattr(C, k).values.tolist() for k in ("d", "c", "e", "m", "tau")},
    }


def internal_groupoid_from_json(doc, base=None):
    base = base if base is not None else base_from_json(doc)
    C0, C1 = object_from_json(base, doc["C0"]), object_from_json(base, doc["C1"])
    return validate_internal_groupoid(base, C0, C1, doc["d"], doc["c"], doc["e"], doc["m"], doc["tau"])


def internal_functor_to_json(F):
    return {
        "kind": "internal_functor",
        "source": internal_groupoid_to_json(F.source),
        "target": internal_groupoid_to_json(F.target),
        "F0": F.F0.values.tolist(),
        "F1": F.F1.values.tolist(),
    }


def internal_functor_from_json(doc):
    C, D = internal_groupoid_from_json(doc["source"]), internal_groupoid_from_json(doc["target"])
    return validate_internal_functor(C, D, doc["F0"], doc["F1"])


def internal_distributor_to_json(S):
    return {
        "kind": "internal_distributor",
        "A": internal_groupoid_to_json(S.A),
        "B": internal_groupoid_to_json(S.B),
        "S0": object_to_json(S.S0),
        **{k: getattr(S, k).values.tolist() for k in ("L", "R", "lam", "rho")},
    }


def internal_distributor_from_json(doc):
    A, B = internal_groupoid_from_json(doc["A"]), internal_groupoid_from_json(doc["B"])
    S0 = object_from_json(A.base, doc["S0"])
    return validate_internal_distributor(A, B, S0, doc["L"], doc["R"], doc["lam"], doc["rho"])


# ---------------------------------------------------------------- dispatch

LOADERS = {
    "groupoid": groupoid_from_json,
    "functor": functor_from_json,
    "distributor": distributor_from_json,
    "span": span_from_json,
    "internal_groupoid": internal_groupoid_from_json,
    "internal_functor": internal_functor_from_json,
    "internal_distributor": internal_distributor_from_json,
}


def infer_kind(doc):
    if not isinstance(doc, dict):
        raise PreconditionViolated("document is not a JSON object")
    if "kind" in doc:
        if doc["kind"] not in LOADERS:
            raise PreconditionViolated(f"unknown kind {doc['kind']!r}")
        return doc["kind"]
    keys = set(doc)
    if {"apex", "left", "right"} <= keys:
        return "span"
    if "fibers" in keys:
        return "distributor"
    if "S0" in keys:
        return "internal_distributor"
    if {"F0", "F1"} <= keys:
        return "internal_functor"
    if "C0" in keys:
        return "internal_groupoid"
    if {"obj_map", "arr_map"} <= keys:
        return "functor"
    if "arrows" in keys:
        return "groupoid"
    raise PreconditionViolated("cannot tell what the document describes")


def load(doc):
    """``(kind, object)`` for a parsed document."""
    kind = infer_kind(doc)
    return kind, LOADERS[kind](doc)


def to_json(obj):
    """Serialize any supported structure."""
    if isinstance(obj, FinGroupoid):
        return groupoid_to_json(obj)
    if isinstance(obj, GpdFunctor):
        return functor_to_json(obj)
    if isinstance(obj, Distributor):
        return distributor_to_json(obj)
    if isinstance(obj, Span):
        return span_to_json(obj)
    if isinstance(obj, InternalGroupoid):
        return internal_groupoid_to_json(obj)
    if isinstance(obj, InternalFunctor):
        return internal_functor_to_json(obj)
    if isinstance(obj, InternalDistributor):
        return internal_distributor_to_json(obj)
    if isinstance(obj, Verdict):
        return verdict_to_json(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def read(path):
    """Load a structure from a JSON file; returns ``(kind, object)``."""
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not JSON ({exc.msg} at line {exc.lineno})") from None
    return load(doc)
