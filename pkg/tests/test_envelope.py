import pytest

from finframe.core_order import FiniteLattice
from finframe.downset_frame import d_infinity
from finframe.envelope import (
    compose,
    distributive_envelope,
    envelope_extend,
    envelope_via_embedding,
    frink_ideals,
    ideal_frame,
    is_sup_morphism,
    prime_filters,
    stone_map,
    verify_envelope_lemma,
)
from finframe.errors import NotDistributive, NotSupMorphism, PreconditionViolated
from finframe.fixtures import boolean, chain, lattice, product_lattice, semilattice
from finframe.formats import parse_poset_text
from finframe.iso import is_isomorphic


def point_sets(a):
    return {frozenset(a.labels(p)) for p in prime_filters(a).points}


def test_prime_filters_of_chain():
    assert point_sets(semilattice("C3")) == {frozenset({"1"}), frozenset({"m", "1"})}


def test_prime_filters_of_fence():
    assert point_sets(semilattice("FENCE")) == {frozenset("a"), frozenset("b")}


def test_prime_filters_of_square():
    assert point_sets(semilattice("B2")) == {frozenset({"a", "1"}), frozenset({"b", "1"})}


def test_prime_filters_are_prime():
    b3 = boolean(3)
    from finframe.core_order import filters
    fams = list(filters(b3))
    for p in prime_filters(b3).points:
        assert not p >> b3.bottom & 1
        for f in fams:
            for g in fams:
                if f & g & ~p == 0:
                    assert f & ~p == 0 or g & ~p == 0


def test_stone_map_of_chain():
    c3 = semilattice("C3")
    space = prime_filters(c3)
    s = stone_map(c3, space)
    up_m = next(i for i, p in enumerate(space.points) if set(c3.labels(p)) == {"m", "1"})
    assert s(c3.index("m")) == 1 << up_m
    assert s(c3.index("1")) == (1 << len(space)) - 1
    assert s(c3.index("0")) == 0


def test_stone_map_of_fence():
    fence = semilattice("FENCE")
    space = prime_filters(fence)
    s = stone_map(fence, space)
    pa = next(i for i, p in enumerate(space.points) if fence.labels(p) == ["a"])
    assert s(fence.index("a")) == 1 << pa
    assert s(fence.index("0")) == 0


@pytest.mark.parametrize("l", [lattice("B2"), lattice("C3"), boolean(3),
                               product_lattice(chain(2), chain(3))])
def test_envelope_of_distributive_lattice(l):
    env = distributive_envelope(l)
    assert is_isomorphic(env.lattice, l)
    assert env.claims_hold


def test_envelope_of_fence():
    env = distributive_envelope(semilattice("FENCE"))
    assert is_isomorphic(env.lattice, boolean(2))
    assert not env.distributive_base


def test_envelope_of_chain():
    env = distributive_envelope(semilattice("C3"))
    assert is_isomorphic(env.lattice, chain(3))
    assert list(env.lattice.names) == ["s(0)", "s(m)", "s(1)"]


def test_envelope_lemma():
    assert verify_envelope_lemma(semilattice("C3"))
    assert verify_envelope_lemma(semilattice("B2"))
    with pytest.raises(PreconditionViolated):
        verify_envelope_lemma(semilattice("M3"))


def test_sup_morphism_examples():
    b2, c3 = semilattice("B2"), semilattice("C3")
    assert is_sup_morphism(list(range(4)), b2, b2)
    # m goes to the atom a
    assert is_sup_morphism([0, 1, 3], c3, b2)
    # both atoms collapse to m; a v b = 1 but m v m = m
    assert not is_sup_morphism([0, 1, 1, 2], b2, c3)


def test_collapse_breaks_a_join():
    b2, c3 = semilattice("B2"), semilattice("C3")
    h = [0, 1, 1, 2]
    a, b = b2.index("a"), b2.index("b")
    assert h[b2.join[a][b]] != c3.join[h[a]][h[b]]


def test_extend_identity():
    c3 = semilattice("C3")
    dh = envelope_extend([0, 1, 2], c3, c3)
    assert list(dh.table) == [0, 1, 2]


def test_extend_collapse():
    c3 = semilattice("C3")
    h = [0, 0, 2]
    dh = envelope_extend(h, c3, c3)
    env = dh.source
    for x in range(3):
        assert dh(env.embedding[x]) == dh.target.embedding[h[x]]


def test_extend_constant_to_top():
    c3 = semilattice("C3")
    h = [2, 2, 2]
    assert is_sup_morphism(h, c3, c3)
    dh = envelope_extend(h, c3, c3)
    top = dh.target.embedding[2]
    assert set(dh.table) == {top}


def test_extend_rejects():
    c3, b2 = semilattice("C3"), semilattice("B2")
    with pytest.raises(NotSupMorphism):
        envelope_extend([0, 1, 1, 2], b2, c3)
    with pytest.raises(NotDistributive):
        envelope_extend(list(range(5)), semilattice("M3"), semilattice("M3"))


def test_extend_is_functorial():
    c3 = semilattice("C3")
    g, h = [0, 0, 2], [0, 1, 2]
    lhs = envelope_extend(compose(g, h), c3, c3)
    dg, dh = envelope_extend(g, c3, c3), envelope_extend(h, c3, c3)
    assert list(lhs.table) == compose(dg.table, dh.table)


def test_envelope_via_embedding_chain_in_square():
    c3 = semilattice("C3")
    assert envelope_via_embedding([0, 1, 3], c3, lattice("B2"))


def test_envelope_via_embedding_identity():
    l = product_lattice(chain(2), chain(3))
    assert envelope_via_embedding(list(range(l.n)), l, l)


def test_envelope_via_embedding_chain_in_larger_lattice():
    # C3 inside B2 with a chain glued on top
    big = parse_poset_text("elements: 0 a b c t u\ncovers: 0<a 0<b a<c b<c c<t t<u\n")
    big = FiniteLattice(big.names, big.down)
    c3 = semilattice("C3")
    assert envelope_via_embedding([big.index("0"), big.index("a"), big.index("u")], c3, big)


def test_frink_ideals_examples():
    assert is_isomorphic(frink_ideals(semilattice("C3")), chain(3))
    fence = frink_ideals(semilattice("FENCE"))
    assert len(fence) == 4 and "{0,a,b}" in fence.names
    assert is_isomorphic(frink_ideals(semilattice("B2")), boolean(2))


def test_ideal_frame_is_principal():
    for l in (lattice("B2"), lattice("C3"), lattice("M3"), lattice("N5")):
        struct, iso = ideal_frame(l)
        assert is_isomorphic(struct, l)
        assert sorted(iso) == list(range(l.n))


def test_frink_ideals_match_ideals_of_envelope():
    for a in (semilattice("C3"), semilattice("B2"), boolean(3)):
        ideals, _ = ideal_frame(distributive_envelope(a).lattice)
        assert is_isomorphic(frink_ideals(a), ideals)


def test_dideals_match_envelope_for_bounded_distributive():
    for a in (semilattice("B2"), semilattice("C3"), product_lattice(chain(2), chain(3))):
        dinf, _ = d_infinity(a)
        assert is_isomorphic(dinf, distributive_envelope(a).lattice)
