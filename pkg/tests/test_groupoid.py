import pytest
from hypothesis import given, strategies as st

import oracles
from relators.errors import DuplicateEntry, IncompleteTable, NotFunctorial, NotInvertible
from relators.generators import gen_functor, gen_groupoid, make_rng
from relators.groupoid import (
    GpdFunctor,
    check_groupoid,
    comma_category,
    discrete,
    disjoint_union,
    group_groupoid,
    identity_functor,
    indiscrete,
    is_eso,
    is_full,
    iso_over_base,
    opposite,
    pi0,
    product,
    relabel,
    to_terminal,
    validate_functor,
    validate_groupoid,
)
from relators.groups import cyclic, klein_four

seeds = st.integers(0, 2**32 - 1)


def test_discrete_three_is_valid():
    G = validate_groupoid(3, [0, 1, 2], [0, 1, 2], [[0, 0, 0], [1, 1, 1], [2, 2, 2]], [0, 1, 2])
    assert (G.n_objects, G.n_arrows) == (3, 3)


def test_z2_table_is_valid():
    G = validate_groupoid(1, [0, 0], [0, 0], [[0, 0, 0], [1, 0, 1], [0, 1, 1], [1, 1, 0]], [0])
    assert G.inverse == (0, 1)


def test_idempotent_is_not_invertible():
    with pytest.raises(NotInvertible) as err:
        validate_groupoid(1, [0, 0], [0, 0], [[0, 0, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]], [0])
    assert err.value.witness.get("f", err.value.witness.get("arrow")) == 1


def test_duplicate_and_missing_composites_rejected():
    with pytest.raises(DuplicateEntry):
        validate_groupoid(1, [0], [0], [[0, 0, 0], [0, 0, 0]], [0])
    with pytest.raises(IncompleteTable):
        validate_groupoid(1, [0, 0], [0, 0], [[0, 0, 0], [1, 0, 1], [0, 1, 1]], [0])


def test_z4_onto_z2_is_a_functor():
    Z4, Z2 = group_groupoid(cyclic(4)), group_groupoid(cyclic(2))
    F = validate_functor([0], [0, 1, 0, 1], Z4, Z2)
    # all 16 composable pairs, by enumeration
    assert all(F.arr_map[Z4.mul(g, f)] == Z2.mul(F.arr_map[g], F.arr_map[f]) for g in range(4) for f in range(4))
    assert is_full(F) and is_eso(F)


def test_z2_to_z3_is_not_functorial():
    Z2, Z3 = group_groupoid(cyclic(2)), group_groupoid(cyclic(3))
    with pytest.raises(NotFunctorial) as err:
        validate_functor([0], [0, 1], Z2, Z3)
    assert (err.value.g, err.value.f) == (1, 1)


def test_comma_examples(z2):
    c = comma_category(0, identity_functor(z2))
    assert c.n_objects == 2 and len(pi0(c.groupoid)) == 1
    inc = GpdFunctor(discrete(1), discrete(2), [0], [0])
    assert comma_category(1, inc).n_objects == 0
    A = disjoint_union(z2, indiscrete(2))
    c = comma_category(0, to_terminal(A))
    assert (c.groupoid.n_objects, c.groupoid.n_arrows) == (A.n_objects, A.n_arrows)


def test_pi0_examples(z2):
    assert list(pi0(discrete(4))) == [(0,), (1,), (2,), (3,)]
    assert list(pi0(indiscrete(3))) == [(0, 1, 2)]
    assert len(pi0(disjoint_union(z2, discrete(1)))) == 2


def test_opposite_and_product(z2):
    op = opposite(z2)
    assert (op.n_objects, op.n_arrows) == (1, 2)
    assert all(op.mul(g, f) == z2.mul(f, g) for g in range(2) for f in range(2))
    P = product(discrete(2), discrete(3))
    assert (P.n_objects, P.n_arrows) == (6, 6)
    K = product(z2, z2)
    assert (K.n_objects, K.n_arrows) == (1, 4)
    klein = group_groupoid(klein_four())
    # every element squares to the identity, as in the Klein group
    assert all(K.mul(f, f) == K.identity[0] for f in range(4))
    assert sorted(K.mul(g, f) for g in range(4) for f in range(4)) == sorted(
        klein.mul(g, f) for g in range(4) for f in range(4)
    )


def test_full_eso_examples(z2):
    inc = GpdFunctor(discrete(1), discrete(2), [0], [0])
    assert is_full(inc)
    v = is_eso(inc)
    assert not v and v.witness["object"] == 1
    idf = identity_functor(z2)
    assert is_full(idf) and is_eso(idf)


def test_iso_over_base_examples():
    from relators.distributors import elements_span
    from conftest import discrete_distributor

    S = discrete_distributor(discrete(2), discrete(2), {(0, 0): 2, (1, 1): 1})
    span = elements_span(S)
    m1 = span.pairing
    phi = iso_over_base(m1, m1)
    assert phi is not None and list(phi.obj_map) == list(range(m1.source.n_objects))
    E = m1.source
    H, ren = relabel(E, [1, 0, 2], list(range(E.n_arrows)))
    inv = [0] * 3
    for x, y in enumerate(ren.obj_map):
        inv[y] = x
    m2 = GpdFunctor(H, m1.target, [m1.obj_map[inv[y]] for y in range(3)],
                    [m1.arr_map[f] for f in range(E.n_arrows)])
    assert iso_over_base(m1, m2) is not None
    T = discrete_distributor(discrete(2), discrete(2), {(0, 0): 1, (1, 1): 2})
    assert iso_over_base(m1, elements_span(T).pairing) is None


@given(seeds)
def test_generated_groupoids_validate(seed):
    G = gen_groupoid(make_rng(seed))
    assert check_groupoid(G)
    assert list(pi0(G)) == list(oracles.pi0_blocks(G))


@given(seeds)
def test_full_and_eso_match_definitions(seed):
    F = gen_functor(make_rng(seed))
    assert bool(is_full(F)) == oracles.full(F)
    assert bool(is_eso(F)) == oracles.eso(F)


@given(seeds)
def test_validate_round_trip_of_tables(seed):
    G = gen_groupoid(make_rng(seed))
    H = validate_groupoid(G.n_objects, G.dom, G.cod, G.compose_table(), G.identity)
    assert H == G
