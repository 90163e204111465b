"""The downset frame of a meet-semilattice and the closures living on it.

Downsets are carrier masks.  A ``DownsetFamily`` is a sorted tuple of such
masks; ``FiniteFrame`` is the lattice-table view used once a family (or any
finite distributive lattice) has to be treated as a frame in its own right.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Optional, Sequence, Union

from .core_order import (
    FiniteLattice,
    MeetSemilattice,
    PASS,
    Poset,
    Verdict,
    admissible_join,
    bits,
    enumerate_downsets,
    lattice_distributivity_witness,
    popcount,
)
from .errors import NotDistributive, TooLarge

MAX_DOWNSET_CARRIER = 24
MAX_DOWNSET_COUNT = 1 << 16
MAX_SUBLOCALE_SCAN = 12
MAX_NUCLEUS_SCAN = 7


def _sort_masks(masks: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(masks), key=lambda m: (popcount(m), m)))


# -- finite frames ---------------------------------------------------------

class FiniteFrame(FiniteLattice):
    """A finite distributive lattice with Heyting implication and pseudocomplement.

    The implication table is built on first use.
    """

    def __init__(self, names: Sequence[str], down: Sequence[int], *, check: bool = True):
        super().__init__(names, down)
        if check:
            w = lattice_distributivity_witness(self)
            if w is not None:
                raise NotDistributive(
                    "not distributive at " + ", ".join(self.names[i] for i in w))
            self._distributive = True
        self._heyting: Optional[tuple] = None

    @property
    def heyting(self) -> tuple:
        if self._heyting is None:
            n, m = self.n, self.meet
            table = []
            for x in range(n):
                row = m[x]
                out = []
                for c in range(n):
                    below_c = self.down[c]
                    cand = 0
                    for y in range(n):
                        if (below_c >> row[y]) & 1:
                            cand |= 1 << y
                    out.append(self.lub(cand))
                table.append(tuple(out))
            self._heyting = tuple(table)
        return self._heyting

    def imp(self, x: int, c: int) -> int:
        return self.heyting[x][c]

    @property
    def pseudo(self) -> tuple:
        return tuple(self.heyting[x][self.bottom] for x in range(self.n))


def as_frame(p: Poset) -> FiniteFrame:
    """View a finite distributive lattice as a frame."""
    if isinstance(p, FiniteFrame):
        return p
    return FiniteFrame(p.names, p.down)


def subposet(p: Poset, mask: int, cls=Poset, **kw):
    """Restriction of the order to ``mask``; returns ``(structure, members)``."""
    members = list(bits(mask))
    pos = {x: k for k, x in enumerate(members)}
    down = []
    for x in members:
        d = 0
        for y in bits(p.down[x] & mask):
            d |= 1 << pos[y]
        down.append(d)
    return cls([p.names[x] for x in members], down, **kw), members


# -- downset families --------------------------------------------------------

@dataclass(frozen=True)
class DownsetFamily:
    """An inclusion-sorted set of downsets of ``carrier``."""

    carrier: MeetSemilattice
    members: tuple
    closed_under: frozenset = field(default_factory=frozenset)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, mask: int) -> bool:
        return mask in self._index

    @property
    def _index(self) -> dict:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {m: i for i, m in enumerate(self.members)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def index(self, mask: int) -> int:
        return self._index[mask]

    def names(self) -> list[str]:
        return [self.carrier.set_name(m) for m in self.members]

    def poset(self) -> Poset:
        return Poset.from_family(self.members, self.names())

    def lattice(self) -> FiniteLattice:
        return FiniteLattice(self.names(), self.poset().down)

    def frame(self, check: bool = True) -> FiniteFrame:
        return FiniteFrame(self.names(), self.poset().down, check=check)

    def embedding(self) -> list[int]:
        """Index of each principal downset ``↓c`` in the family."""
        return [self._index[self.carrier.down[c]] for c in range(self.carrier.n)]

    def to_json(self) -> dict:
        a = self.carrier
        return {
            "carrier": list(a.names),
            "members": [a.labels(m) for m in self.members],
            "closed_under": sorted(self.closed_under),
        }


def downsets(a: MeetSemilattice, max_n: int = MAX_DOWNSET_CARRIER,
             max_count: int = MAX_DOWNSET_COUNT) -> DownsetFamily:
    """Every downset of ``a`` (``∅`` included), sorted by size then mask."""
    if a.n > max_n:
        raise TooLarge(f"downset enumeration capped at {max_n} elements, got {a.n}")
    try:
        members = enumerate_downsets(a, limit=max_count)
    except OverflowError:
        raise TooLarge(f"more than {max_count} downsets") from None
    return DownsetFamily(a, tuple(members), frozenset({"intersection", "union", "heyting"}))


def heyting_impl(a: MeetSemilattice, e: int, h: int) -> int:
    """``E → H = {x : x ∧ y ∈ H for all y ∈ E}`` in the downset frame."""
    out = 0
    elems = list(bits(e))
    for x in range(a.n):
        row = a.meet[x]
        for y in elems:
            if not (h >> row[y]) & 1:
                break
        else:
            out |= 1 << x
    return out


def annihilator(a: MeetSemilattice, p: int, q: int) -> int:
    """Relative annihilator ``⟨p, q⟩ = {x : p ∧ x <= q}``."""
    row = a.meet[p]
    dq = a.down[q]
    return sum(1 << x for x in range(a.n) if (dq >> row[x]) & 1)


@lru_cache(maxsize=1024)
def annihilators(a: MeetSemilattice) -> tuple[int, ...]:
    """Distinct relative annihilators (the full carrier is ``⟨p, p⟩``)."""
    return _sort_masks(annihilator(a, p, q) for p in range(a.n) for q in range(a.n))


def delta(a: MeetSemilattice, e: int) -> int:
    """D-ideal closure: joins of admissible subsets of ``e``.

    If ``c`` is the join of some admissible ``G ⊆ e`` then ``e ∩ ↓c`` is also
    admissible with join ``c``, so testing that one set per ``c`` suffices.
    """
    out = 0
    for c in range(a.n):
        if admissible_join(a, e & a.down[c]) == c:
            out |= 1 << c
    return out


def delta_by_annihilators(a: MeetSemilattice, e: int) -> int:
    """``⋂{⟨p, q⟩ : e ⊆ ⟨p, q⟩}``."""
    out = a.full
    for ann in annihilators(a):
        if e & ~ann == 0:
            out &= ann
    return out


def k_closure(a: MeetSemilattice, e: int) -> int:
    """Intersection of the principal downsets containing ``e`` (full carrier if none)."""
    out = a.full
    for c in range(a.n):
        dc = a.down[c]
        if e & ~dc == 0:
            out &= dc
    return out


def moore_closure(generators: Iterable[int], full: int) -> tuple[int, ...]:
    """Smallest intersection-closed family containing ``generators`` and ``full``."""
    family = {full}
    for g in generators:
        if g in family:
            continue
        family |= {g & x for x in family}
    return _sort_masks(family)


@lru_cache(maxsize=1024)
def normal_ideals(a: MeetSemilattice) -> DownsetFamily:
    """``fix(k)``: all intersections of principal downsets."""
    members = moore_closure(a.down, a.full)
    return DownsetFamily(a, members, frozenset({"intersection"}))


@lru_cache(maxsize=1024)
def dideals(a: MeetSemilattice) -> DownsetFamily:
    """``fix(δ)`` generated as a Moore family from the relative annihilators."""
    members = moore_closure(annihilators(a), a.full)
    return DownsetFamily(a, members, frozenset({"intersection"}))


def j_map(a: MeetSemilattice, e: int) -> int:
    """``⋂{(e → c) → c : c a normal ideal}``."""
    out = a.full
    for c in normal_ideals(a).members:
        out &= heyting_impl(a, heyting_impl(a, e, c), c)
    return out


def d_infinity(a: MeetSemilattice, check: bool = True) -> tuple[FiniteFrame, list[int]]:
    """The frame of D-ideals with the embedding ``c ↦ ↓c``."""
    fam = dideals(a)
    return fam.frame(check=check), fam.embedding()


def macneille(a: MeetSemilattice) -> tuple[FiniteLattice, list[int]]:
    """The lattice of normal ideals with the embedding ``c ↦ ↓c``."""
    fam = normal_ideals(a)
    return fam.lattice(), fam.embedding()


def w_nucleus(f: FiniteFrame, c: int, x: int) -> int:
    """``(x → c) → c``."""
    h = f.heyting
    return h[h[x][c]][c]


# -- closure maps and their verification ------------------------------------

@dataclass(frozen=True)
class ClosureMap:
    """A self-map of a downset family or frame, evaluated on demand."""

    kind: str
    fn: Callable[[int], int]
    param: Optional[object] = None

    def __call__(self, x: int) -> int:
        return self.fn(x)

    def table(self, family) -> dict:
        return {x: self.fn(x) for x in _elements(family)}

    @classmethod
    def delta(cls, a: MeetSemilattice) -> "ClosureMap":
        return cls("delta", lambda e: delta(a, e))

    @classmethod
    def k(cls, a: MeetSemilattice) -> "ClosureMap":
        return cls("k", lambda e: k_closure(a, e))

    @classmethod
    def j(cls, a: MeetSemilattice) -> "ClosureMap":
        return cls("j", lambda e: j_map(a, e))

    @classmethod
    def w(cls, f: FiniteFrame, c: int) -> "ClosureMap":
        return cls("w_c", lambda x: w_nucleus(f, c, x), c)


Family = Union[DownsetFamily, FiniteLattice]


def _elements(family: Family) -> list[int]:
    if isinstance(family, DownsetFamily):
        return list(family.members)
    return list(range(family.n))


def _ops(family: Family):
    """(le, meet, label) for either kind of family."""
    if isinstance(family, DownsetFamily):
        name = family.carrier.set_name
        return (lambda x, y: x & ~y == 0), (lambda x, y: x & y), name
    return family.le, (lambda x, y: family.meet[x][y]), family.label


def verify_closure(cmap: ClosureMap, family: Family) -> Verdict:
    """Inflationary, idempotent and monotone on every member; first failure wins."""
    le, _, name = _ops(family)
    elems = _elements(family)
    table = {x: cmap(x) for x in elems}
    for x in elems:
        if not le(x, table[x]):
            return Verdict(False, (name(x),), "not inflationary")
    for x in elems:
        y = table[x]
        if y not in table:
            return Verdict(False, (name(x),), "image outside the family")
        if table[y] != y:
            return Verdict(False, (name(x),), "not idempotent")
    for x in elems:
        for y in elems:
            if le(x, y) and not le(table[x], table[y]):
                return Verdict(False, (name(x), name(y)), "not monotone")
    return PASS


def verify_nucleus(cmap: ClosureMap, family: Family) -> Verdict:
    """Closure laws plus ``map(x ∧ y) = map(x) ∧ map(y)``."""
    v = verify_closure(cmap, family)
    if not v:
        return v
    _, meet, name = _ops(family)
    elems = _elements(family)
    table = {x: cmap(x) for x in elems}
    for i, x in enumerate(elems):
        for y in elems[i + 1:]:
            if table[meet(x, y)] != meet(table[x], table[y]):
                return Verdict(False, (name(x), name(y)), "does not preserve binary meets")
    return PASS


# -- sublocales ---------------------------------------------------------------

def is_sublocale(f: FiniteFrame, s: int) -> Verdict:
    """Closed under all meets (top included) and under ``x → t`` for ``t ∈ s``."""
    if not (s >> f.top) & 1:
        return Verdict(False, (f.label(f.top),), "missing the empty meet (top)")
    members = list(bits(s))
    for i, x in enumerate(members):
        row = f.meet[x]
        for y in members[i + 1:]:
            if not (s >> row[y]) & 1:
                return Verdict(False, (f.label(x), f.label(y)), "not closed under meets")
    h = f.heyting
    for x in range(f.n):
        for t in members:
            if not (s >> h[x][t]) & 1:
                return Verdict(False, (f.label(x), f.label(t)), "not closed under x → t")
    return PASS


def sublocales(f: FiniteFrame, max_size: int = MAX_SUBLOCALE_SCAN) -> list[int]:
    """All sublocales (as element masks) sorted by size then mask."""
    if f.n > max_size:
        raise TooLarge(f"sublocale scan capped at {max_size} elements, got {f.n}")
    top_bit = 1 << f.top
    rest = f.full & ~top_bit
    found = []
    sub = 0
    while True:
        s = sub | top_bit
        if is_sublocale(f, s):
            found.append(s)
        if sub == rest:
            break
        sub = (sub - rest) & rest
    return sorted(found, key=lambda m: (popcount(m), m))


def nuclei(f: FiniteFrame, max_size: int = MAX_NUCLEUS_SCAN) -> list[tuple[int, ...]]:
    """Every nucleus as a value table, by brute force over inflationary maps."""
    if f.n > max_size:
        raise TooLarge(f"nucleus scan capped at {max_size} elements, got {f.n}")
    n = f.n
    out = []
    choices = [list(bits(f.up[x])) for x in range(n)]
    table = [0] * n

    def extend(x: int) -> None:
        if x == n:
            t = tuple(table)
            if all(t[t[y]] == t[y] for y in range(n)) and all(
                    t[f.meet[y][z]] == f.meet[t[y]][t[z]]
                    for y in range(n) for z in range(y, n)):
                out.append(t)
            return
        for v in choices[x]:
            # monotone against already assigned smaller (lower-index) elements
            if any(f.le(y, x) and not f.le(table[y], v) or f.le(x, y) and not f.le(v, table[y])
                   for y in range(x)):
                continue
            table[x] = v
            extend(x + 1)

    extend(0)
    return out


def booleanization(f: FiniteFrame) -> tuple[FiniteFrame, ClosureMap]:
    """Fixpoints of double pseudocomplementation, with that nucleus."""
    p = f.pseudo
    cmap = ClosureMap("double_pseudo", lambda x: p[p[x]])
    fix = sum(1 << x for x in range(f.n) if p[p[x]] == x)
    sub, _ = subposet(f, fix, FiniteFrame)
    return sub, cmap


def fixpoints(cmap: ClosureMap, family: Family) -> int | tuple:
    """Fixpoint set: a mask of frame elements, or a tuple of member downsets."""
    if isinstance(family, DownsetFamily):
        return tuple(m for m in family.members if cmap(m) == m)
    return sum(1 << x for x in range(family.n) if cmap(x) == x)


# -- closures relative to a base inside an arbitrary finite frame ---------------

def base_k(f: FiniteFrame, base: int) -> ClosureMap:
    """``k(x) = ⋀{b ∈ base : x <= b}`` inside ``f``."""
    def k(x: int) -> int:
        return f.glb(f.up[x] & base)
    return ClosureMap("k", k)


def base_j(f: FiniteFrame, base: int) -> ClosureMap:
    """``j(x) = ⋀{w_c(x) : c ∈ fix(k)}`` inside ``f``."""
    k = base_k(f, base)
    fixk = [c for c in range(f.n) if k(c) == c]

    def j(x: int) -> int:
        out = f.top
        for c in fixk:
            out = f.meet[out][w_nucleus(f, c, x)]
        return out
    return ClosureMap("j", j)


def join_generates(f: FiniteLattice, base: int) -> Optional[int]:
    """First element that is not the join of the base elements below it, else ``None``."""
    for x in range(f.n):
        if f.lub(f.down[x] & base) != x:
            return x
    return None
