"""Algebraic laws over seeded random instances."""

from hypothesis import given, strategies as st

from finframe.core_order import (
    MeetSemilattice,
    admissible_join,
    bits,
    bound,
    filters,
    is_distributive_semilattice,
    is_weakly_distributive,
    subsets,
)
from finframe.downset_frame import (
    annihilator,
    delta,
    delta_by_annihilators,
    dideals,
    downsets,
    heyting_impl,
    j_map,
    k_closure,
    normal_ideals,
)
from finframe.envelope import prime_filters, stone_map
from finframe.formats import parse_poset_text, serialize_poset
from finframe.harness import oracle_delta
from finframe.iso import canonical_form, find_isomorphism

from strategies import (
    semilattice_with_downset,
    semilattice_with_two_downsets,
    semilattices,
)


@given(semilattices(max_size=9))
def test_order_is_partial(a):
    n = a.n
    for x in range(n):
        assert a.le(x, x)
        for y in range(n):
            if a.le(x, y) and a.le(y, x):
                assert x == y
            for z in range(n):
                if a.le(x, y) and a.le(y, z):
                    assert a.le(x, z)


@given(semilattices(max_size=9))
def test_meet_laws(a):
    m = a.meet
    for x in range(a.n):
        assert m[x][x] == x
        for y in range(a.n):
            assert m[x][y] == m[y][x]
            assert a.le(m[x][y], x) and a.le(m[x][y], y)
            for z in range(a.n):
                assert m[m[x][y]][z] == m[x][m[y][z]]


@given(semilattices(max_size=8), st.randoms(use_true_random=False))
def test_bound_is_extremal(a, rnd):
    s = rnd.getrandbits(a.n)
    g = bound(a, s, "meet")
    lower = [z for z in range(a.n) if all(a.le(z, x) for x in bits(s))]
    if g is None:
        assert not any(all(a.le(w, z) for w in lower) for z in lower)
    else:
        assert all(a.le(g, x) for x in bits(s)) and all(a.le(z, g) for z in lower)


@given(semilattices(max_size=8))
def test_distributive_implies_weakly_distributive(a):
    if is_distributive_semilattice(a):
        assert is_weakly_distributive(a)


@given(semilattices(max_size=8))
def test_filter_criterion(a):
    fam = filters(a)
    if fam.is_lattice:
        assert bool(is_distributive_semilattice(a)) == fam.is_distributive
    else:
        assert not is_distributive_semilattice(a)


@given(semilattices(max_size=9))
def test_distributive_semilattices_are_lattices(a):
    if is_distributive_semilattice(a):
        assert a.is_lattice


@given(semilattices(max_size=9))
def test_chain_subsets_admissible(a):
    for s in subsets(a.full):
        members = list(bits(s))
        if all(a.le(x, y) or a.le(y, x) for x in members for y in members) and members:
            assert admissible_join(a, s) == max(members, key=lambda x: bin(a.down[x]).count("1"))


@given(semilattice_with_downset(max_size=8))
def test_delta_matches_oracle(pair):
    a, e = pair
    assert delta(a, e) == oracle_delta(a, e)


@given(semilattice_with_downset())
def test_delta_two_ways(pair):
    a, e = pair
    d = delta(a, e)
    assert d == delta_by_annihilators(a, e)
    assert e & ~d == 0 and a.is_downset(d) and delta(a, d) == d


@given(semilattice_with_two_downsets())
def test_delta_preserves_meets(triple):
    a, e, h = triple
    assert delta(a, e & h) == delta(a, e) & delta(a, h)
    if e & ~h == 0:
        assert delta(a, e) & ~delta(a, h) == 0


@given(semilattice_with_downset())
def test_j_equals_delta_and_sandwich(pair):
    a, e = pair
    j, k = j_map(a, e), k_closure(a, e)
    assert j == delta(a, e)
    assert e & ~j == 0 and j & ~k == 0


@given(semilattices())
def test_normal_ideals_are_dideals(a):
    fixd = set(dideals(a).members)
    assert set(normal_ideals(a).members) <= fixd
    for c in range(a.n):
        assert a.down[c] in fixd and a.down[c] in normal_ideals(a)


@given(semilattices())
def test_dideals_intersection_closed(a):
    fix = dideals(a).members
    fs = set(fix)
    for x in fix:
        for y in fix:
            assert x & y in fs


@given(semilattices())
def test_dideals_form_a_frame(a):
    assert dideals(a).lattice().distributive


@given(semilattice_with_two_downsets())
def test_heyting_impl_is_largest(triple):
    a, e, h = triple
    r = heyting_impl(a, e, h)
    assert a.is_downset(r) and e & r & ~h == 0
    for d in downsets(a):
        if e & d & ~h == 0:
            assert d & ~r == 0


@given(semilattices())
def test_annihilator_is_implication(a):
    for p in range(a.n):
        for q in range(a.n):
            assert annihilator(a, p, q) == heyting_impl(a, a.down[p], a.down[q])


@given(semilattices(max_size=8))
def test_stone_map_laws(a):
    s = stone_map(a, prime_filters(a))
    for x in range(a.n):
        for y in range(a.n):
            assert s(a.meet[x][y]) == s(x) & s(y)
            if a.le(x, y):
                assert s(x) & ~s(y) == 0
    if is_distributive_semilattice(a):
        images = [s(x) for x in range(a.n)]
        assert len(set(images)) == a.n
        for x in range(a.n):
            for y in range(a.n):
                assert a.le(x, y) == (images[x] & ~images[y] == 0)


@given(semilattices(max_size=7), st.randoms(use_true_random=False))
def test_canonical_form_ignores_labels(a, rnd):
    perm = list(range(a.n))
    rnd.shuffle(perm)
    down = [0] * a.n
    for x in range(a.n):
        down[perm[x]] = sum(1 << perm[y] for y in bits(a.down[x]))
    b = MeetSemilattice(a.names, down)
    assert canonical_form(a)[0] == canonical_form(b)[0]
    phi = find_isomorphism(a, b)
    assert phi is not None


@given(semilattices(max_size=10))
def test_text_round_trip(a):
    text = serialize_poset(a)
    assert serialize_poset(parse_poset_text(text)) == text
