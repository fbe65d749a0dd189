import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from relators.base import FINSET, gset_base, parse_base
from relators.errors import NotEquivariant, PreconditionViolated
from relators.generators import gen_regular_epi_pair, make_rng, random_equivariant_map, random_gset

seeds = st.integers(0, 2**32 - 1)
Z2 = gset_base("z2")


def orbits(X):
    return len({tuple(sorted(set(X.action[:, x].tolist()))) for x in X.points})


def test_pullback_along_identity():
    X = FINSET.object(3)
    f = FINSET.morphism(X, FINSET.object(2), [0, 1, 1])
    pb = FINSET.pullback(f, FINSET.identity(f.cod))
    assert pb.obj.n == 3 and FINSET.is_iso(pb.p1)


def test_pullback_of_constants_is_product():
    X, Y, one = FINSET.object(2), FINSET.object(3), FINSET.terminal()
    pb = FINSET.pullback(FINSET.to_terminal(X), FINSET.to_terminal(Y))
    assert pb.obj.n == 6 and pb.obj.n == len(oracles.gset_pullback(pb.f, pb.g))
    assert one.n == 1


def test_pullback_of_regular_z2_over_a_point():
    R = Z2.regular()
    pb = Z2.pullback(Z2.to_terminal(R), Z2.to_terminal(R))
    assert pb.obj.n == 4 and orbits(pb.obj) == 2
    for k, (x, y) in enumerate(pb.pairs):
        assert pb.obj.act(1, k) == pb.index(R.act(1, x), R.act(1, y))


def test_coequalizer_examples():
    Y = FINSET.object(3)
    idY = FINSET.identity(Y)
    assert FINSET.coequalizer(idY, idY).obj.n == 3
    X = FINSET.object(1)
    f, g = FINSET.morphism(X, Y, [0]), FINSET.morphism(X, Y, [1])
    assert FINSET.coequalizer(f, g).obj.n == 2
    R = Z2.regular()
    # identify the two points of regular Z2 via the identity and the swap
    swap = Z2.morphism(R, R, [1, 0])
    Q = Z2.coequalizer(Z2.identity(R), swap).obj
    assert Q.n == 1 and Q.act(1, 0) == 0


def test_image_examples():
    X = FINSET.object(5)
    inj = FINSET.morphism(FINSET.object(2), X, [3, 1])
    I, e, m = FINSET.image_factorization(inj)
    assert FINSET.is_iso(e)
    I, e, m = FINSET.image_factorization(FINSET.morphism(X, FINSET.object(3), [2] * 5))
    assert I.n == 1
    R = Z2.regular()
    fold = Z2.morphism(Z2.coproduct(R, R), R, [0, 1, 0, 1])
    I, e, m = Z2.image_factorization(fold)
    assert I == R


def test_regular_epi_and_kernel_pair():
    X = FINSET.object(2)
    assert FINSET.is_regular_epi(FINSET.identity(X))
    assert FINSET.kernel_pair(FINSET.identity(X)).obj.n == 2
    fold = FINSET.to_terminal(X)
    assert FINSET.is_regular_epi(fold) and FINSET.kernel_pair(fold).obj.n == 4
    assert not FINSET.is_regular_epi(FINSET.morphism(FINSET.object(1), X, [0]))


def test_relation_composition_examples():
    F = FINSET
    A, B, C = F.object(1), F.object(2), F.object(1)
    R1 = F.object(2)
    r1 = (F.morphism(R1, A, [0, 0]), F.morphism(R1, B, [0, 1]))
    R2 = F.object(2)
    r2 = (F.morphism(R2, B, [0, 1]), F.morphism(R2, C, [0, 0]))
    I, to_a, to_c = F.relative_relation_compose(r1, r2)
    assert I.n == 1
    diag = (F.identity(B), F.identity(B))
    I, to_a, to_b = F.relative_relation_compose(r1, diag)
    assert sorted(zip(to_a.values.tolist(), to_b.values.tolist())) == [(0, 0), (0, 1)]
    E = F.empty()
    I, _, _ = F.relative_relation_compose((F.morphism(E, A, []), F.morphism(E, B, [])), r2)
    assert I.n == 0


def test_equivariance_enforced():
    R = Z2.regular()
    with pytest.raises(NotEquivariant):
        Z2.morphism(R, Z2.coproduct(Z2.terminal(), Z2.terminal()), [0, 1])


def test_parse_base():
    assert parse_base("finset") == FINSET
    assert parse_base("gset:s3").group.order == 6
    with pytest.raises(PreconditionViolated):
        parse_base("gset:z7")


@given(seeds, st.sampled_from(["finset", "gset:z2", "gset:z3", "gset:s3"]))
def test_pullback_matches_search(seed, name):
    base = parse_base(name)
    rng = make_rng(seed)
    f, g = gen_regular_epi_pair(rng, base)
    pb = base.pullback(f, g)
    assert [tuple(p) for p in pb.pairs] == oracles.gset_pullback(f, g)
    assert np.array_equal(f.values[pb.p1.values], g.values[pb.p2.values])


@given(seeds, st.sampled_from(["finset", "gset:z2", "gset:s3"]))
def test_regular_epis_are_pullback_stable(seed, name):
    base = parse_base(name)
    f, g = gen_regular_epi_pair(make_rng(seed), base)
    pb = base.pullback(f, g)
    assert base.is_regular_epi(pb.p2)


@given(seeds, st.sampled_from(["finset", "gset:z2", "gset:s3"]))
def test_every_epi_is_the_quotient_by_its_kernel_pair(seed, name):
    base = parse_base(name)
    f, _ = gen_regular_epi_pair(make_rng(seed), base)
    co = base.quotient_by_kernel_pair(f)
    h = co.descend(f)
    assert base.is_iso(h)


@given(seeds)
def test_image_factorization_recomposes(seed):
    rng = make_rng(seed)
    X, Y = random_gset(rng, Z2, 8), random_gset(rng, Z2, 8, min_points=1)
    f = random_equivariant_map(rng, X, Y)
    if f is None:
        return
    I, e, m = Z2.image_factorization(f)
    assert np.array_equal(Z2.compose(m, e).values, f.values)
    assert Z2.is_regular_epi(e) and Z2.is_mono(m)
