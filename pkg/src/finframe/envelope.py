"""Prime filters, the Stone map and the distributive envelope.

Points of the prime-filter space are indexed ``0..len(points)-1``; Stone
images and envelope elements are masks over those indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from .core_order import (
    FiniteLattice,
    MeetSemilattice,
    PASS,
    Poset,
    Verdict,
    bits,
    enumerate_downsets,
    filters,
    is_distributive_semilattice,
    popcount,
    subsets,
)
from .downset_frame import FiniteFrame, subposet
from .errors import (
    NotDistributive,
    NotSupMorphism,
    PreconditionViolated,
    TooLarge,
)
from .iso import find_isomorphism

MAX_FRINK_CARRIER = 16


@dataclass(frozen=True)
class PrimeFilterSpace:
    carrier: MeetSemilattice
    points: tuple

    def __len__(self) -> int:
        return len(self.points)

    def names(self) -> list[str]:
        return [self.carrier.set_name(p) for p in self.points]

    def to_json(self) -> dict:
        a = self.carrier
        return {"carrier": list(a.names), "points": [a.labels(p) for p in self.points]}


def prime_filters(a: MeetSemilattice) -> PrimeFilterSpace:
    """Nonempty proper filters ``P`` with ``F ∩ G ⊆ P ⇒ F ⊆ P or G ⊆ P``."""
    fam = filters(a).filters
    points = []
    for p in fam:
        if p == a.full:
            continue
        outside = [f for f in fam if f & ~p]
        prime = all((f & g) & ~p for i, f in enumerate(outside) for g in outside[i:])
        if prime:
            points.append(p)
    return PrimeFilterSpace(a, tuple(points))


@dataclass(frozen=True)
class StoneAssignment:
    space: PrimeFilterSpace
    images: tuple

    def __call__(self, x: int) -> int:
        return self.images[x]

    @property
    def all_points(self) -> int:
        return (1 << len(self.space)) - 1


def stone_map(a: MeetSemilattice, space: Optional[PrimeFilterSpace] = None) -> StoneAssignment:
    """``s(x) = {P : x ∈ P}``."""
    space = space or prime_filters(a)
    images = []
    for x in range(a.n):
        images.append(sum(1 << k for k, p in enumerate(space.points) if (p >> x) & 1))
    return StoneAssignment(space, tuple(images))


@dataclass(frozen=True)
class EnvelopeLattice:
    """Finite unions of Stone images, with ``x ↦ s(x)`` into it."""

    carrier: MeetSemilattice
    stone: StoneAssignment
    members: tuple
    lattice: FiniteLattice
    embedding: tuple
    distributive_base: bool
    injective: bool
    meet_preserving: bool
    order_reflecting: bool

    @property
    def claims_hold(self) -> bool:
        """Envelope guarantees are only claimed for distributive bases."""
        return self.distributive_base

    def index(self, points: int) -> int:
        return self.members.index(points)

    def to_json(self) -> dict:
        return {
            "carrier": list(self.carrier.names),
            "points": self.stone.space.to_json()["points"],
            "elements": list(self.lattice.names),
            "element_points": [list(bits(m)) for m in self.members],
            "embedding": {self.carrier.names[x]: self.lattice.names[e]
                          for x, e in enumerate(self.embedding)},
            "distributive_base": self.distributive_base,
            "injective": self.injective,
            "meet_preserving": self.meet_preserving,
        }


def _union_name(a: MeetSemilattice, stone: StoneAssignment, x: int) -> str:
    rep = [i for i in range(a.n) if stone(i) & ~x == 0]
    rep_mask = sum(1 << i for i in rep)
    top = a.maximal(rep_mask)
    return "∪".join(f"s({a.names[i]})" for i in bits(top))


def distributive_envelope(a: MeetSemilattice) -> EnvelopeLattice:
    """Close the Stone images under binary unions.

    Intersections come for free because ``s(x) ∩ s(y) = s(x ∧ y)``.  For a
    non-distributive ``a`` the result is still computed but
    ``distributive_base`` is false.
    """
    stone = stone_map(a)
    fam = set(stone.images)
    frontier = list(fam)
    gens = set(stone.images)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                u = x | g
                if u not in fam:
                    fam.add(u)
                    nxt.append(u)
        frontier = nxt
    members = tuple(sorted(fam, key=lambda m: (popcount(m), m)))
    names = [_union_name(a, stone, m) for m in members]
    lat = FiniteLattice(names, Poset.from_family(members, names).down)
    emb = tuple(members.index(stone(x)) for x in range(a.n))
    injective = len(set(emb)) == a.n
    meet_ok = all(stone(a.meet[x][y]) == stone(x) & stone(y)
                  for x in range(a.n) for y in range(a.n))
    reflect = all(a.le(x, y) == (stone(x) & ~stone(y) == 0)
                  for x in range(a.n) for y in range(a.n))
    return EnvelopeLattice(a, stone, members, lat, emb,
                           bool(is_distributive_semilattice(a)), injective, meet_ok, reflect)


def verify_envelope_lemma(a: MeetSemilattice, k: int = 3) -> Verdict:
    """``⋂ ↑a_i ⊆ ↑b  iff  s(b) ⊆ ⋃ s(a_i)`` for every tuple of length up to ``k``."""
    if not is_distributive_semilattice(a):
        raise PreconditionViolated("envelope lemma needs a distributive meet-semilattice")
    stone = stone_map(a)
    for size in range(1, k + 1):
        for tup in product(range(a.n), repeat=size):
            ups = a.full
            cover = 0
            for x in tup:
                ups &= a.up[x]
                cover |= stone(x)
            for b in range(a.n):
                lhs = ups & ~a.up[b] == 0
                rhs = stone(b) & ~cover == 0
                if lhs != rhs:
                    return Verdict(False, (tuple(a.names[x] for x in tup), a.names[b]),
                                   "filter side and Stone side disagree")
    return PASS


# -- morphisms ---------------------------------------------------------------

def is_sup_morphism(h: Sequence[int], a: MeetSemilattice, b: MeetSemilattice) -> Verdict:
    """Preserves binary meets and every binary join that exists in ``a``."""
    for x in range(a.n):
        for y in range(x, a.n):
            if h[a.meet[x][y]] != b.meet[h[x]][h[y]]:
                return Verdict(False, (a.names[x], a.names[y]), "meet not preserved")
            j = a.join[x][y]
            if j is not None and b.join[h[x]][h[y]] != h[j]:
                return Verdict(False, (a.names[x], a.names[y]), "join not preserved")
    return PASS


@dataclass(frozen=True)
class EnvelopeMorphism:
    source: EnvelopeLattice
    target: EnvelopeLattice
    table: tuple

    def __call__(self, i: int) -> int:
        return self.table[i]


def envelope_extend(h: Sequence[int], a: MeetSemilattice, b: MeetSemilattice,
                    da: Optional[EnvelopeLattice] = None,
                    db: Optional[EnvelopeLattice] = None) -> EnvelopeMorphism:
    """The lattice morphism ``Dh`` with ``Dh ∘ s_A = s_B ∘ h``.

    Every representation of an element as a union of Stone images is checked
    to map to the same union, so ``Dh`` is well defined; it is unique because
    any lattice morphism with the commuting square is fixed on the generators.
    """
    if not is_distributive_semilattice(a) or not is_distributive_semilattice(b):
        raise NotDistributive("envelope_extend needs distributive semilattices")
    v = is_sup_morphism(h, a, b)
    if not v:
        raise NotSupMorphism(f"not a sup-morphism at {v.witness}: {v.reason}")
    da = da or distributive_envelope(a)
    db = db or distributive_envelope(b)
    sa, sb = da.stone, db.stone
    image: dict[int, int] = {}
    for sub in subsets(a.full):
        if not sub:
            continue
        src = tgt = 0
        for x in bits(sub):
            src |= sa(x)
            tgt |= sb(h[x])
        prev = image.setdefault(src, tgt)
        if prev != tgt:
            raise AssertionError("Dh is not well defined")
    table = tuple(db.index(image[m]) for m in da.members)
    la, lb = da.lattice, db.lattice
    for i in range(la.n):
        for j in range(la.n):
            if (table[la.join[i][j]] != lb.join[table[i]][table[j]]
                    or table[la.meet[i][j]] != lb.meet[table[i]][table[j]]):
                raise AssertionError("Dh is not a lattice morphism")
    for x in range(a.n):
        if table[da.embedding[x]] != db.embedding[h[x]]:
            raise AssertionError("Dh does not commute with the Stone maps")
    return EnvelopeMorphism(da, db, table)


def compose(g: Sequence[int], h: Sequence[int]) -> list[int]:
    """``g ∘ h`` for maps given as tables."""
    return [g[y] for y in h]


def generated_sublattice(b: FiniteLattice, gens: int) -> int:
    """Mask of the sublattice of ``b`` generated by ``gens`` (no bounds added)."""
    fam = set(bits(gens))
    frontier = list(fam)
    while frontier:
        nxt = []
        for x in frontier:
            for y in list(fam):
                for z in (b.meet[x][y], b.join[x][y]):
                    if z not in fam:
                        fam.add(z)
                        nxt.append(z)
        frontier = nxt
    return sum(1 << x for x in fam)


def envelope_via_embedding(h: Sequence[int], a: MeetSemilattice, b: FiniteLattice) -> Verdict:
    """The sublattice of ``b`` generated by ``h[a]`` is isomorphic to ``DA``.

    Checked twice: by isomorphism search, and by the explicit map
    ``⋃ s(a_i) ↦ ⋁ h(a_i)`` being a well-defined order isomorphism.
    """
    if not b.distributive:
        raise NotDistributive("target lattice is not distributive")
    if not is_distributive_semilattice(a):
        raise NotDistributive("source semilattice is not distributive")
    if len(set(h)) != a.n:
        raise PreconditionViolated("h is not injective")
    v = is_sup_morphism(h, a, b)
    if not v:
        raise NotSupMorphism(f"not a sup-morphism at {v.witness}: {v.reason}")
    gen = generated_sublattice(b, sum(1 << y for y in h))
    sub, members = subposet(b, gen)
    da = distributive_envelope(a)
    if find_isomorphism(da.lattice, sub) is None:
        return Verdict(False, (len(da.members), len(members)), "no isomorphism")
    explicit: dict[int, int] = {}
    for s in subsets(a.full):
        if not s:
            continue
        src = 0
        tgt = None
        for x in bits(s):
            src |= da.stone(x)
            tgt = h[x] if tgt is None else b.join[tgt][h[x]]
        if explicit.setdefault(src, tgt) != tgt:
            return Verdict(False, (da.lattice.names[da.index(src)],), "explicit map ill defined")
    if sorted(explicit.values()) != members or len(explicit) != len(da.members):
        return Verdict(False, (), "explicit map is not onto the generated sublattice")
    for x, fx in explicit.items():
        for y, fy in explicit.items():
            if (x & ~y == 0) != b.le(fx, fy):
                return Verdict(False, (da.lattice.names[da.index(x)],
                                       da.lattice.names[da.index(y)]),
                               "explicit map does not reflect order")
    return PASS


# -- ideals ------------------------------------------------------------------

def _family_structure(a: Poset, members: list[int]):
    names = [a.set_name(m) for m in members]
    down = Poset.from_family(members, names).down
    lat = FiniteLattice(names, down)
    return FiniteFrame(names, down) if lat.distributive else lat


def frink_ideals(a: MeetSemilattice, max_n: int = MAX_FRINK_CARRIER):
    """Nonempty ``I`` with ``S^ul ⊆ I`` for every ``S ⊆ I``.

    Returns a ``FiniteFrame`` when the result is distributive (always so for
    distributive ``a``), a ``FiniteLattice`` otherwise.
    """
    if a.n > max_n:
        raise TooLarge(f"Frink ideals capped at {max_n} elements, got {a.n}")
    found = []
    for d in enumerate_downsets(a):
        if not d:
            continue
        if all(a.lower_bounds(a.upper_bounds(s)) & ~d == 0 for s in subsets(d)):
            found.append(d)
    return _family_structure(a, found)


def ideal_frame(l: FiniteLattice):
    """Ideals of ``l`` and the isomorphism ideal ↦ its generator.

    A finite lattice's ideals are the principal downsets, so the returned
    list maps each ideal index to the element generating it.
    """
    found = []
    for d in enumerate_downsets(l):
        if not d:
            continue
        if all((d >> l.join[x][y]) & 1 for x in bits(d) for y in bits(d)):
            found.append(d)
    struct = _family_structure(l, found)
    iso = [l.lub(d) for d in found]
    if any(g is None or l.down[g] != d for g, d in zip(iso, found)):
        raise AssertionError("found a non-principal ideal")
    return struct, iso
