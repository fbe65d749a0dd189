import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import discrete_distributor, regular_biset
from relators.composition import (
    canonical_comparison,
    check_associativity,
    check_units,
    compose_distributors,
    compose_spans,
    reflect_span,
)
from relators.distributors import Span, check_two_sided, elements_span, identity_span, is_distributor_iso
from relators.errors import PreconditionViolated
from relators.generators import gen_composable, gen_distributor, gen_span, make_rng
from relators.groupoid import GpdFunctor, discrete, group_groupoid, is_iso, iso_over_base, to_terminal
from relators.groups import cyclic

seeds = st.integers(0, 2**32 - 1)


def test_compose_with_identity_span(z2_biset):
    sp = elements_span(z2_biset)
    left = compose_spans(identity_span(sp.A), sp)
    right = compose_spans(sp, identity_span(sp.B))
    for comp in (left, right):
        assert (comp.apex.n_objects, comp.apex.n_arrows) == (sp.apex.n_objects, sp.apex.n_arrows)
        assert iso_over_base(comp.pairing, sp.pairing) is not None


def test_spans_must_share_middle(z2_biset):
    sp = elements_span(z2_biset)
    with pytest.raises(PreconditionViolated):
        compose_spans(sp, identity_span(discrete(2)))


def test_discrete_five(five_pair):
    S, T = five_pair
    TS = compose_distributors(S, T)
    assert TS.sizes() == {(0, 0): 5}
    assert oracles.coend_sizes(S, T) == {(0, 0): 5}


def test_regular_biset_composite(z2, z2_biset):
    TS = compose_distributors(z2_biset, z2_biset)
    assert TS.sizes() == {(0, 0): 2}
    assert sum(len(m) for m in TS.members) == 4
    phi = [TS.class_of[0, s] for s in range(2)]
    assert is_distributor_iso(z2_biset, TS, phi)


def test_reflect_examples(z2_biset):
    r = reflect_span(elements_span(z2_biset))
    assert r.distributor.sizes() == z2_biset.sizes() and is_iso(r.unit)
    Z2 = group_groupoid(cyclic(2))
    r = reflect_span(Span(to_terminal(Z2), to_terminal(Z2)))
    assert r.distributor.sizes() == {(0, 0): 1}
    D = discrete(2)
    r = reflect_span(Span(to_terminal(D), to_terminal(D)))
    assert r.distributor.sizes() == {(0, 0): 2}


def test_comparison_examples(five_pair, z2_biset):
    S, T = five_pair
    c = canonical_comparison(S, T)
    assert sorted(c.mapping) == list(range(5))
    c = canonical_comparison(z2_biset, z2_biset)
    assert c.verdict["bijective"] and c.verdict["route1_sizes"] == {"0,0": 2}
    empty = discrete_distributor(discrete(1), discrete(2), {})
    _, T = five_pair
    c = canonical_comparison(empty, T)
    assert c.mapping == () and c.route2.n_elements == 0


def test_associativity_and_units_on_bisets(z2_biset):
    v = check_associativity(z2_biset, z2_biset, z2_biset)
    assert v and len(v.witness["mapping"]) == 2
    assert check_units(z2_biset)


def test_reflection_of_a_span_with_a_non_trivial_group():
    # S3 acting on nothing but itself: the reflection has a single element
    from relators.groups import symmetric

    G = group_groupoid(symmetric(3))
    r = reflect_span(Span(to_terminal(G), to_terminal(G)))
    assert r.distributor.n_elements == 1


@given(seeds)
def test_coend_sizes_match_oracle(seed):
    S, T = gen_composable(make_rng(seed))
    assert compose_distributors(S, T).sizes() == oracles.coend_sizes(S, T)


@given(seeds)
def test_comparison_is_an_isomorphism(seed):
    S, T = gen_composable(make_rng(seed))
    c = canonical_comparison(S, T)
    assert c.route1.sizes() == c.route2.sizes()


@given(seeds)
def test_reflection_is_two_sided_with_final_unit(seed):
    from relators.factorization import is_final

    sp = gen_span(make_rng(seed))
    r = reflect_span(sp)
    assert check_two_sided(r.span)
    assert is_final(r.unit)


@given(seeds)
def test_associativity(seed):
    S, T, U = gen_composable(make_rng(seed), length=3)
    assert check_associativity(S, T, U)


@given(seeds)
def test_units(seed):
    assert check_units(gen_distributor(make_rng(seed)))
