import pytest
from hypothesis import given, settings, strategies as st

from conftest import discrete_distributor, regular_biset
from relators.base import FINSET, gset_base, parse_base
from relators.errors import EquationFailed
from relators.generators import gen_internal_functor, gen_internal_groupoid, gen_internal_pair, make_rng
from relators.groupoid import (
    GpdFunctor,
    action_projection,
    discrete,
    group_groupoid,
    indiscrete,
)
from relators.groups import cyclic
from relators.internal import (
    InternalSpan,
    alan_cc_check,
    compose_internal_distributors,
    distributor_to_internal_groupoid,
    externalize,
    externalize_distributor,
    internal_hom_distributor,
    internal_pi0,
    internal_span_compose,
    internal_terminal,
    internalize,
    internalize_distributor,
    internalize_functor,
    is_internal_dfib,
    is_internal_final,
    support,
    validate_internal_distributor,
    validate_internal_functor,
    validate_internal_groupoid,
    verify_last_lemma,
)
from relators.composition import compose_distributors
from relators.distributors import elements_span

seeds = st.integers(0, 2**32 - 1)
Z2 = gset_base("z2")


def indiscrete_data(base, C0, m_first=False):
    """Pairs ``(x, y)`` as arrows ``x -> y`` over the points of ``C0``."""
    prod = base.product(C0, C0)
    C1 = prod.obj
    d, c = prod.p1, prod.p2
    e = prod.mediate(base.identity(C0), base.identity(C0))
    tau = prod.mediate(c, d)
    C2 = base.pullback(d, c)
    pairs = prod.pairs
    if m_first:
        m = [int(g) for g, f in C2.pairs]
    else:
        m = [prod.index(int(pairs[f][0]), int(pairs[g][1])) for g, f in C2.pairs]
    return base, C0, C1, d, c, e, m, tau


def indiscrete_on(base, C0):
    return validate_internal_groupoid(*indiscrete_data(base, C0))


def quotient_functor(C):
    one = internal_terminal(C.base)
    return validate_internal_functor(C, one, [0] * C.C0.n, [0] * C.C1.n)


def identity_internal(C):
    return validate_internal_functor(C, C, C.base.identity(C.C0), C.base.identity(C.C1))


def test_trivial_action_embedding_is_valid():
    G = group_groupoid(cyclic(3))
    C = internalize(G, Z2)
    assert externalize(C) == G


def test_indiscrete_on_regular_z2():
    C = indiscrete_on(Z2, Z2.regular())
    assert (C.C0.n, C.C1.n) == (2, 4)


def test_first_projection_breaks_a_unit_law():
    with pytest.raises(EquationFailed) as err:
        validate_internal_groupoid(*indiscrete_data(Z2, Z2.regular(), m_first=True))
    assert "unit" in err.value.witness.get("equation", str(err.value))


def test_pi0_examples():
    C = internalize(discrete(3))
    assert internal_pi0(C).obj.n == 3
    Q = internal_pi0(indiscrete_on(Z2, Z2.regular())).obj
    assert Q.n == 1 and Q.act(1, 0) == 0


def test_support_examples():
    s = support(internalize(discrete(3)))
    assert sorted(tuple(s.product.pairs[i]) for i in s.mono.values) == [(0, 0), (1, 1), (2, 2)]
    assert support(internalize(indiscrete(2))).obj.n == 4
    s = support(indiscrete_on(Z2, Z2.regular()))
    assert s.obj.n == 4 and s.kernel_pair.obj.n == 4


def test_dfib_examples():
    G = cyclic(2)
    C = internalize(indiscrete(2), Z2)
    assert is_internal_dfib(identity_internal(C))
    proj = action_projection(G, [[G.mul(g, x) for x in G.elements] for g in G.elements])
    assert is_internal_dfib(internalize_functor(proj, Z2))
    assert not is_internal_dfib(quotient_functor(indiscrete_on(Z2, Z2.regular())))


def test_final_examples():
    assert is_internal_final(identity_internal(internalize(group_groupoid(cyclic(2)))))
    assert is_internal_final(quotient_functor(indiscrete_on(Z2, Z2.regular())))
    inc = GpdFunctor(discrete(1), discrete(2), [0], [0])
    assert not is_internal_final(internalize_functor(inc))


def test_alan_cc_examples():
    assert alan_cc_check(identity_internal(internalize(indiscrete(2)))) == (True, True, True)
    # not full: the cross arrows are missed by every comparison
    F = GpdFunctor(discrete(2), indiscrete(2), [0, 1], [0, 3])
    assert alan_cc_check(internalize_functor(F)) == (False, False, False)
    # one object into the indiscrete pair is full, so all three hold
    F = GpdFunctor(discrete(1), indiscrete(2), [0], [0])
    assert alan_cc_check(internalize_functor(F)) == (True, True, True)


def test_elements_of_hom_distributor():
    A = internalize(indiscrete(2))
    E = distributor_to_internal_groupoid(internal_hom_distributor(A))
    assert E.groupoid.C0.n == A.C1.n


def test_elements_of_regular_biset_over_z2():
    A = internalize(group_groupoid(cyclic(2)), Z2)
    S = internalize_distributor(regular_biset(group_groupoid(cyclic(2))), Z2, A, A)
    # give S0 the regular action; the actions stay equivariant because Z2 is abelian
    R = Z2.regular()
    S = validate_internal_distributor(A, A, R, S.L.values, S.R.values, S.lam.values, S.rho.values)
    E = distributor_to_internal_groupoid(S)
    solutions = sum(
        1 for a in range(2) for s in range(2) for b in range(2) for s2 in range(2) if (a + s) % 2 == (s2 + b) % 2
    )
    assert E.groupoid.C1.n == solutions == 8


def test_tensor_over_discrete_middle(five_pair):
    S, T = five_pair
    iS = internalize_distributor(S)
    iT = internalize_distributor(T, A=iS.B)
    t = compose_internal_distributors(iS, iT)
    assert t.coequalizer.obj.n == t.diamond0.obj.n == 5


def test_tensor_of_regular_bisets_over_z2(z2_biset):
    A = internalize(z2_biset.source, Z2)
    S = internalize_distributor(z2_biset, Z2, A, A)
    assert compose_internal_distributors(S, S).distributor.S0.n == 2


def test_span_compose_with_identity_span(z2_biset):
    A = internalize(z2_biset.source)
    S = internalize_distributor(z2_biset, FINSET, A, A)
    E = distributor_to_internal_groupoid(S)
    sp = InternalSpan(E.groupoid, E.L, E.R)
    idA = identity_internal(A)
    comp = internal_span_compose(sp, InternalSpan(A, idA, idA))
    assert (comp.apex.C0.n, comp.apex.C1.n) == (E.groupoid.C0.n, E.groupoid.C1.n)


def test_last_lemma_on_the_discrete_example(five_pair):
    S, T = five_pair
    iS = internalize_distributor(S)
    r = verify_last_lemma(iS, internalize_distributor(T, A=iS.B))
    assert r.ok and r.sizes["tensor0"] == 5 and r.sizes["pi0_tensor"] == 5


def test_last_lemma_on_regular_bisets_over_z2(z2_biset):
    A = internalize(z2_biset.source, Z2)
    S = internalize_distributor(z2_biset, Z2, A, A)
    r = verify_last_lemma(S, S)
    assert r.ok
    assert (r.sizes["diamond0"], r.sizes["tensor0"]) == (4, 2)
    assert r.sizes["pi0_diamond"] == r.sizes["pi0_tensor"] == 1


def test_internal_matches_external_composite():
    from relators.generators import gen_composable

    S, T = gen_composable(make_rng(3))
    iS = internalize_distributor(S)
    iT = internalize_distributor(T, A=iS.B)
    TS = externalize_distributor(compose_internal_distributors(iS, iT).distributor)
    assert TS.sizes() == compose_distributors(S, T).sizes()


@settings(max_examples=15)
@given(seeds, st.sampled_from(["finset", "gset:z2", "gset:s3"]))
def test_generated_internal_groupoids_have_kernel_pair_support(seed, name):
    C = gen_internal_groupoid(make_rng(seed), parse_base(name))
    s = support(C)
    assert s.obj.n == s.kernel_pair.obj.n


@settings(max_examples=15)
@given(seeds, st.sampled_from(["finset", "gset:z2", "gset:z3"]))
def test_alan_cc_homogeneous(seed, name):
    F = gen_internal_functor(make_rng(seed), parse_base(name))
    v = alan_cc_check(F)
    assert len(set(v)) == 1


@settings(max_examples=10)
@given(seeds, st.sampled_from(["gset:z2", "gset:s3"]))
def test_last_lemma_random(seed, name):
    S, T = gen_internal_pair(make_rng(seed), parse_base(name))
    assert verify_last_lemma(S, T).ok
