import pytest

from finframe.core_order import MeetSemilattice
from finframe.downset_frame import (
    ClosureMap,
    annihilator,
    base_j,
    base_k,
    booleanization,
    d_infinity,
    delta,
    delta_by_annihilators,
    dideals,
    downsets,
    fixpoints,
    heyting_impl,
    is_sublocale,
    j_map,
    k_closure,
    macneille,
    normal_ideals,
    nuclei,
    sublocales,
    verify_closure,
    verify_nucleus,
    w_nucleus,
)
from finframe.errors import TooLarge
from finframe.fixtures import boolean, chain, frame, lattice, product_lattice, semilattice
from finframe.formats import parse_poset_text
from finframe.harness import exhaustive_instances, oracle_delta
from finframe.iso import is_isomorphic


def S(a, *labels):
    return a.indices(labels)


@pytest.fixture
def m3():
    return semilattice("M3")


@pytest.fixture
def c3():
    return semilattice("C3")


@pytest.fixture
def fence():
    return semilattice("FENCE")


# -- downsets and implication ---------------------------------------------------

def test_downsets_of_chain(c3):
    fam = downsets(c3)
    assert [set(c3.labels(m)) for m in fam] == [set(), {"0"}, {"0", "m"}, {"0", "m", "1"}]


def test_downsets_of_diamond(m3):
    assert len(downsets(m3)) == 10


def test_downsets_of_antichain():
    p = parse_poset_text("elements: a b\ncovers:\n")
    assert sorted(downsets(p).members) == [0, 1, 2, 3]


def test_downset_cap():
    big = chain(4)
    with pytest.raises(TooLarge):
        downsets(big, max_count=3)


def test_heyting_impl(m3):
    assert heyting_impl(m3, 0, S(m3, "0")) == m3.full
    assert heyting_impl(m3, m3.down[m3.index("x")], S(m3, "0")) == S(m3, "0", "y", "z")
    assert heyting_impl(m3, S(m3, "0", "x"), m3.full) == m3.full


def test_annihilators(m3, c3):
    ix = m3.index
    assert annihilator(m3, ix("x"), ix("0")) == S(m3, "0", "y", "z")
    for p in range(m3.n):
        assert annihilator(m3, p, p) == m3.full
    assert annihilator(c3, c3.index("1"), c3.index("m")) == S(c3, "0", "m")


def test_annihilator_is_implication_of_principals(m3):
    for p in range(m3.n):
        for q in range(m3.n):
            assert annihilator(m3, p, q) == heyting_impl(m3, m3.down[p], m3.down[q])


# -- delta, k, j --------------------------------------------------------------

def test_delta_examples(m3, c3):
    assert delta(m3, 0) == S(m3, "0")
    assert delta(m3, S(m3, "0", "x", "y")) == S(m3, "0", "x", "y")
    assert delta_by_annihilators(m3, S(m3, "0", "x", "y")) == S(m3, "0", "x", "y")
    assert delta(c3, S(c3, "0", "m")) == S(c3, "0", "m")


def test_delta_adds_admissible_join(m3):
    # {x, y, z} is admissible with join 1
    assert delta(m3, S(m3, "0", "x", "y", "z")) == m3.full


def test_k_examples(m3, fence):
    assert k_closure(m3, S(m3, "0", "y", "z")) == m3.full
    for c in range(m3.n):
        assert k_closure(m3, m3.down[c]) == m3.down[c]
    assert k_closure(fence, S(fence, "0")) == S(fence, "0")


def test_k_of_empty_without_cover():
    a = MeetSemilattice(["a"], [1])
    assert k_closure(a, 0) == 1


def test_w_examples():
    f = frame("FRAMEV")
    for c in range(f.n):
        assert w_nucleus(f, c, c) == c
        assert w_nucleus(f, f.top, c) == f.top
        assert w_nucleus(f, f.bottom, c) == f.pseudo[f.pseudo[c]]
    assert w_nucleus(f, f.index("e"), f.index("y")) == f.index("y")


def test_w_is_a_nucleus():
    f = frame("FRAMEV")
    for c in range(f.n):
        assert verify_nucleus(ClosureMap.w(f, c), f)


def test_j_examples(m3, c3):
    for c in range(m3.n):
        assert j_map(m3, m3.down[c]) == m3.down[c]
    assert j_map(m3, S(m3, "0", "x", "y")) == S(m3, "0", "x", "y")
    for e in downsets(c3):
        # the empty downset goes to {0}: the empty set is admissible with join 0
        assert j_map(c3, e) == (e or S(c3, "0"))


# -- completions -----------------------------------------------------------------

def oracle_fixpoint_count(a):
    return sum(1 for e in downsets(a) if oracle_delta(a, e) == e)


def test_d_infinity_of_diamond(m3):
    f, emb = d_infinity(m3)
    assert len(f) == oracle_fixpoint_count(m3) == 8
    assert S(m3, "0", "x", "y", "z") not in dideals(m3)
    assert f.distributive


@pytest.mark.parametrize("a", [lattice("B2"), lattice("C3"), boolean(3), chain(5),
                               product_lattice(chain(2), chain(3))])
def test_d_infinity_of_distributive_lattice(a):
    f, _ = d_infinity(a)
    assert is_isomorphic(f, a)


def test_d_infinity_of_fence(fence):
    f, emb = d_infinity(fence)
    assert len(f) == 4 and is_isomorphic(f, boolean(2))
    assert [fence.set_name(dideals(fence).members[i]) for i in emb] == ["{0}", "{0,a}", "{0,b}"]


def test_d_infinity_embedding_preserves_meets(m3):
    f, emb = d_infinity(m3)
    for x in range(m3.n):
        for y in range(m3.n):
            assert f.meet[emb[x]][emb[y]] == emb[m3.meet[x][y]]
    assert len(set(emb)) == m3.n


def test_macneille_examples(m3, fence, c3):
    assert is_isomorphic(macneille(m3)[0], lattice("M3"))
    assert is_isomorphic(macneille(fence)[0], boolean(2))
    assert is_isomorphic(macneille(c3)[0], chain(3))


def test_macneille_need_not_be_distributive(m3):
    assert not macneille(m3)[0].distributive


# -- closure and nucleus checks ----------------------------------------------------

def test_verify_closure_examples(m3):
    fam = downsets(m3)
    assert verify_closure(ClosureMap.delta(m3), fam)
    assert verify_closure(ClosureMap("identity", lambda e: e), fam)
    v = verify_closure(ClosureMap("empty", lambda e: 0), fam)
    assert not v and "inflationary" in v.reason


def test_delta_nucleus_through_size_7():
    for n in range(1, 8):
        for a in exhaustive_instances(n):
            assert verify_nucleus(ClosureMap.delta(a), downsets(a)), a


def test_k_on_diamond_is_not_a_nucleus(m3):
    v = verify_nucleus(ClosureMap.k(m3), downsets(m3))
    assert not v
    e, h = (m3.indices(x.strip("{}").split(",")) for x in v.witness)
    meet = k_closure(m3, e & h)
    assert meet != k_closure(m3, e) & k_closure(m3, h)
    assert verify_closure(ClosureMap.k(m3), downsets(m3))


def test_fixpoint_families(m3):
    assert set(fixpoints(ClosureMap.delta(m3), downsets(m3))) == set(dideals(m3).members)
    assert set(fixpoints(ClosureMap.k(m3), downsets(m3))) == set(normal_ideals(m3).members)


# -- sublocales, Booleanization -----------------------------------------------------

def test_sublocale_examples(m3):
    f = frame("FRAMEV")
    assert is_sublocale(f, f.full)
    assert is_sublocale(f, 1 << f.top)
    fam = downsets(m3)
    d = fam.frame()
    fix = sum(1 << fam.index(e) for e in dideals(m3))
    assert is_sublocale(d, fix)


def test_sublocales_of_two_chain():
    assert len(sublocales(chain(2))) == 2


def test_sublocales_match_nuclei():
    for f in (frame("B2"), chain(3), frame("FRAMEV"), boolean(3)):
        fixsets = {sum(1 << v for v in set(t)) for t in nuclei(f, max_size=8)}
        assert set(sublocales(f)) == fixsets


def test_downsets_of_fence_contain_dideals(fence):
    fam = downsets(fence)
    assert len(fam) == 5
    fix = sum(1 << fam.index(e) for e in dideals(fence))
    assert fix in sublocales(fam.frame())


def test_booleanization_examples():
    b3 = boolean(3)
    sub, cmap = booleanization(b3)
    assert len(sub) == 8 and all(cmap(x) == x for x in range(8))
    sub, cmap = booleanization(frame("C3"))
    assert list(sub.names) == ["0", "1"]
    fv = frame("FRAMEV")
    sub, cmap = booleanization(fv)
    assert len(sub) == 4 and is_isomorphic(sub, boolean(2))
    assert verify_nucleus(cmap, fv)


def test_booleanization_is_smallest_dense_sublocale():
    for f in (frame("FRAMEV"), frame("C3"), downsets(semilattice("M3")).frame()):
        p = f.pseudo
        boole = sum(1 << x for x in range(f.n) if p[p[x]] == x)
        dense = [s for s in sublocales(f) if s >> f.bottom & 1]
        assert boole in dense
        assert all(boole & ~s == 0 for s in dense)


def test_heyting_table_is_relative_pseudocomplement():
    f = downsets(semilattice("M3")).frame()
    for x in range(f.n):
        for c in range(f.n):
            h = f.heyting[x][c]
            assert f.le(f.meet[x][h], c)
            assert all(f.le(y, h) for y in range(f.n) if f.le(f.meet[x][y], c))


def test_base_maps_inside_downset_frame(m3):
    fam = downsets(m3)
    f = fam.frame()
    base = sum(1 << e for e in fam.embedding())
    k = base_k(f, base)
    j = base_j(f, base)
    for i, e in enumerate(fam.members):
        assert fam.members[k(i)] == k_closure(m3, e)
        assert fam.members[j(i)] == j_map(m3, e)
