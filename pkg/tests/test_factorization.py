import pytest
from hypothesis import given, strategies as st

import oracles
from relators.errors import MultipleFillers, PreconditionViolated
from relators.factorization import (
    LiftingSquare,
    comprehensive_factorization,
    dfib_lift,
    is_discrete_fibration,
    is_discrete_opfibration,
    is_final,
    is_initial,
    orthogonal_filler,
)
from relators.generators import gen_functor, make_rng
from relators.groupoid import (
    GpdFunctor,
    action_projection,
    discrete,
    disjoint_union,
    group_groupoid,
    identity_functor,
    indiscrete,
    is_eso,
    is_full,
    is_iso,
    iso_over_base,
    pi0,
    relabel,
    to_terminal,
)
from relators.groups import cyclic

seeds = st.integers(0, 2**32 - 1)


def regular_action(G):
    return [[G.mul(g, x) for x in G.elements] for g in G.elements]


@pytest.fixture
def z4_to_z2():
    Z4, Z2 = group_groupoid(cyclic(4)), group_groupoid(cyclic(2))
    return GpdFunctor(Z4, Z2, [0], [0, 1, 0, 1])


@pytest.fixture
def z2_projection():
    return action_projection(cyclic(2), regular_action(cyclic(2)))


def inclusion():
    return GpdFunctor(discrete(1), discrete(2), [0], [0])


def test_discrete_fibration_examples(z4_to_z2, z2_projection):
    assert is_discrete_fibration(identity_functor(indiscrete(3)))
    assert z2_projection.source.n_arrows == 4
    assert is_discrete_fibration(z2_projection)
    v = is_discrete_fibration(z4_to_z2)
    assert not v and v.witness["arrow"] == 0 and v.witness["lifts"] == 2
    assert is_discrete_opfibration(z2_projection)
    assert not is_discrete_opfibration(z4_to_z2)


def test_final_examples(z4_to_z2):
    assert is_final(identity_functor(group_groupoid(cyclic(3))))
    v = is_final(inclusion())
    assert not v and v.witness == {"object": 1, "components": 0}
    assert is_final(z4_to_z2)
    assert is_initial(z4_to_z2)


def test_dfib_lift(z2_projection):
    E = z2_projection.source
    assert dfib_lift(z2_projection, 0, 1) == E.identity[1]
    alpha = dfib_lift(z2_projection, 1, 0)
    assert E.arr_labels[alpha] == (1, 1) and (E.dom[alpha], E.cod[alpha]) == (1, 0)
    with pytest.raises(PreconditionViolated):
        dfib_lift(GpdFunctor(group_groupoid(cyclic(4)), group_groupoid(cyclic(2)), [0], [0, 1, 0, 1]), 0, 0)


def test_factor_identity():
    A = disjoint_union(group_groupoid(cyclic(2)), indiscrete(2))
    fr = comprehensive_factorization(identity_functor(A))
    assert is_iso(fr.final_part) and is_iso(fr.dfib_part)


def test_factor_to_terminal():
    A = disjoint_union(group_groupoid(cyclic(3)), indiscrete(2), discrete(1))
    fr = comprehensive_factorization(to_terminal(A))
    M = fr.middle
    assert M.n_objects == len(pi0(A)) == 3
    assert M.n_arrows == M.n_objects


def test_factor_discrete_into_z2():
    F = GpdFunctor(discrete(2), group_groupoid(cyclic(2)), [0, 0], [0, 0])
    fr = comprehensive_factorization(F)
    M = fr.middle
    assert (M.n_objects, M.n_arrows) == (4, 8)
    blocks = pi0(M)
    assert len(blocks) == 2
    for block in blocks:
        assert len(block) == 2
        assert all(len(M.hom(x, y)) == 1 for x in block for y in block)
    # x ↦ (e, x), y ↦ (e, y)
    assert [fr.representatives[fr.final_part.obj_map[a]][1:] for a in range(2)] == [(0, 0), (0, 1)]


def test_filler_identity_square(z4_to_z2):
    F = z4_to_z2
    idA, idB = identity_functor(F.source), identity_functor(F.target)
    d = orthogonal_filler(LiftingSquare(F, F, idA, idB))
    assert d == F


def test_filler_between_two_factorizations():
    F = gen_functor(make_rng(7))
    fr = comprehensive_factorization(F)
    M = fr.middle
    n = M.n_objects
    perm = list(reversed(range(n)))
    M2, ren = relabel(M, perm, list(range(M.n_arrows)))
    final2 = fr.final_part.then(ren)
    back = [0] * n
    for x, y in enumerate(perm):
        back[y] = x
    dfib2 = GpdFunctor(M2, F.target, [fr.dfib_part.obj_map[back[y]] for y in range(n)], list(fr.dfib_part.arr_map))
    d = orthogonal_filler(LiftingSquare(final2, fr.dfib_part, fr.final_part, dfib2))
    assert is_iso(d)
    assert iso_over_base(fr.dfib_part, dfib2) is not None


def test_filler_for_non_final_left_is_ambiguous():
    left = inclusion()
    right = to_terminal(discrete(2))
    top = GpdFunctor(discrete(1), discrete(2), [0], [0])
    bottom = to_terminal(discrete(2))
    with pytest.raises(MultipleFillers):
        orthogonal_filler(LiftingSquare(top, bottom, left, right))


@given(seeds)
def test_predicates_match_oracles(seed):
    F = gen_functor(make_rng(seed))
    assert bool(is_discrete_fibration(F)) == oracles.dfib(F)
    assert bool(is_final(F)) == oracles.final(F)


@given(seeds)
def test_final_iff_full_and_eso(seed):
    F = gen_functor(make_rng(seed))
    assert bool(is_final(F)) == (bool(is_full(F)) and bool(is_eso(F)))


@given(seeds)
def test_factorization_invariants(seed):
    F = gen_functor(make_rng(seed))
    fr = comprehensive_factorization(F)
    assert fr.final_part.then(fr.dfib_part) == F
    assert is_final(fr.final_part)
    assert is_discrete_fibration(fr.dfib_part)
    counts = oracles.comma_component_counts(F)
    assert fr.middle.n_objects == sum(counts)


@given(seeds)
def test_factorization_is_idempotent_on_its_parts(seed):
    fr = comprehensive_factorization(gen_functor(make_rng(seed)))
    again = comprehensive_factorization(fr.dfib_part)
    assert is_iso(again.final_part)
