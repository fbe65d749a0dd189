import json

import pytest
from hypothesis import given, settings, strategies as st

from relators import jsonio
from relators.base import parse_base
from relators.distributors import is_distributor_iso
from relators.errors import DuplicateEntry, IncompleteTable, NotInvertible, PreconditionViolated
from relators.generators import gen_distributor, gen_functor, gen_internal_pair, gen_span, make_rng

seeds = st.integers(0, 2**32 - 1)


def test_groupoid_round_trip(z2):
    doc = jsonio.groupoid_to_json(z2)
    kind, G = jsonio.load(json.loads(jsonio.dumps(doc)))
    assert kind == "groupoid" and G == z2


def test_kind_is_inferred(z2):
    doc = jsonio.groupoid_to_json(z2)
    del doc["kind"]
    assert jsonio.infer_kind(doc) == "groupoid"
    with pytest.raises(PreconditionViolated):
        jsonio.infer_kind({"nothing": 1})


def test_bad_groupoid_documents(z2):
    doc = jsonio.groupoid_to_json(z2)
    doc["arrows"].append(dict(doc["arrows"][0]))
    with pytest.raises(DuplicateEntry):
        jsonio.load(doc)
    doc = jsonio.groupoid_to_json(z2)
    del doc["compose"]
    with pytest.raises(IncompleteTable):
        jsonio.load(doc)
    doc = jsonio.groupoid_to_json(z2)
    doc["compose"] = [[0, 0, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]]
    doc.pop("inverses")
    with pytest.raises(NotInvertible):
        jsonio.load(doc)


def test_named_elements(z2):
    doc = {
        "A": jsonio.groupoid_to_json(z2),
        "B": jsonio.groupoid_to_json(z2),
        "fibers": {"0,0": ["e", "g"]},
        "left": [[0, "e", "e"], [0, "g", "g"], [1, "e", "g"], [1, "g", "e"]],
        "right": [["e", 0, "e"], ["g", 0, "g"], ["e", 1, "g"], ["g", 1, "e"]],
    }
    kind, S = jsonio.load(doc)
    assert kind == "distributor" and list(S.labels) == ["e", "g"]
    assert jsonio.distributor_to_json(S)["fibers"] == {"0,0": ["e", "g"]}


def test_dumps_is_canonical():
    assert jsonio.dumps({"b": 1, "a": (1, 2)}) == '{"a":[1,2],"b":1}\n'


@given(seeds)
def test_functor_and_span_round_trip(seed):
    F = gen_functor(make_rng(seed))
    _, F2 = jsonio.load(json.loads(jsonio.dumps(jsonio.to_json(F))))
    assert F2 == F
    sp = gen_span(make_rng(seed, 1))
    _, sp2 = jsonio.load(jsonio.to_json(sp))
    assert sp2.left == sp.left and sp2.right == sp.right


@given(seeds)
def test_distributor_round_trip(seed):
    S = gen_distributor(make_rng(seed))
    _, S2 = jsonio.load(json.loads(jsonio.dumps(jsonio.to_json(S))))
    assert is_distributor_iso(S, S2, list(S.elements))


@settings(max_examples=10)
@given(seeds, st.sampled_from(["finset", "gset:z2", "gset:s3"]))
def test_internal_round_trip(seed, name):
    S, _ = gen_internal_pair(make_rng(seed), parse_base(name))
    doc = json.loads(jsonio.dumps(jsonio.to_json(S)))
    kind, S2 = jsonio.load(doc)
    assert kind == "internal_distributor"
    assert jsonio.to_json(S2) == jsonio.to_json(S)
