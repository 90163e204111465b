"""Finite posets, meet-semilattices and lattices over bitmask carriers.

Elements are the integers ``0..n-1``; a subset of the carrier is an ``int``
whose bit ``i`` marks element ``i``.  ``down[i]`` and ``up[i]`` are the
principal downset and upset of ``i``.  Because a glb (lub) of a set ``S`` is
exactly the element whose downset (upset) equals the set of common lower
(upper) bounds of ``S``, every bound lookup is a single dictionary probe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Optional, Sequence

from .errors import (
    CycleDetected,
    DuplicateName,
    InvalidName,
    NotALattice,
    NotMeetClosed,
)

MAX_BITMASK_ELEMENTS = 64


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def subsets(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, starting with 0."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


@dataclass(frozen=True)
class Verdict:
    """Outcome of a predicate or theorem check.

    ``witness`` is a tuple of labels (element names, or lists of names for
    subsets) identifying the first failure found in index order.
    """

    ok: bool
    witness: Optional[tuple] = None
    reason: str = ""
    detail: dict = field(default_factory=dict, compare=False)

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        out = {"ok": self.ok}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        if self.reason:
            out["reason"] = self.reason
        if self.detail:
            out["detail"] = self.detail
        return out


PASS = Verdict(True)


def _check_name(name: str) -> None:
    if not isinstance(name, str) or not name or any(c.isspace() for c in name):
        raise InvalidName(f"element names must be nonempty tokens without whitespace: {name!r}")
    if "<" in name or "#" in name:
        raise InvalidName(f"element names may not contain '<' or '#': {name!r}")


class Poset:
    """A finite partial order stored as principal down/up masks."""

    def __init__(self, names: Sequence[str], down: Sequence[int]):
        names = tuple(names)
        if len(names) != len(down):
            raise ValueError("names and order rows differ in length")
        if not names:
            raise ValueError("a poset needs at least one element")
        seen = {}
        for i, nm in enumerate(names):
            _check_name(nm)
            if nm in seen:
                raise DuplicateName(f"duplicate element name {nm!r}")
            seen[nm] = i
        n = len(names)
        down = tuple(down)
        full = (1 << n) - 1
        for i, d in enumerate(down):
            if d & ~full:
                raise ValueError(f"order row {i} mentions elements outside the carrier")
            if not (d >> i) & 1:
                raise ValueError(f"relation is not reflexive at {names[i]!r}")
        for i, d in enumerate(down):
            for j in bits(d):
                if down[j] & ~d:
                    raise ValueError(
                        f"relation is not transitive at {names[j]!r} <= {names[i]!r}")
                if j != i and (down[j] >> i) & 1:
                    raise CycleDetected(names[j], names[i])
        up = [0] * n
        for i, d in enumerate(down):
            for j in bits(d):
                up[j] |= 1 << i
        self.names = names
        self.down = down
        self.up = tuple(up)
        self._index = seen
        self._by_down = {d: i for i, d in enumerate(down)}
        self._by_up = {u: i for i, u in enumerate(self.up)}

    @classmethod
    def from_pairs(cls, names: Sequence[str], pairs: Iterable[tuple[int, int]]) -> "Poset":
        """Reflexive-transitive closure of ``i < j`` pairs (indices)."""
        n = len(names)
        down = [1 << i for i in range(n)]
        for i, j in pairs:
            down[j] |= 1 << i
        for k in range(n):
            dk = down[k]
            bit = 1 << k
            for i in range(n):
                if down[i] & bit:
                    down[i] |= dk
        for i in range(n):
            for j in bits(down[i]):
                if j != i and (down[j] >> i) & 1:
                    raise CycleDetected(names[min(i, j)], names[max(i, j)])
        return cls(names, down)

    @classmethod
    def from_family(cls, members: Sequence[int], names: Sequence[str]) -> "Poset":
        """Inclusion order on a list of distinct sets given as masks."""
        down = []
        for m in members:
            d = 0
            for j, other in enumerate(members):
                if other & ~m == 0:
                    d |= 1 << j
            down.append(d)
        return cls(names, down)

    # -- basic queries -------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def le(self, i: int, j: int) -> bool:
        return bool((self.down[j] >> i) & 1)

    def index(self, name: str) -> int:
        return self._index[name]

    def indices(self, names: Iterable[str]) -> int:
        mask = 0
        for nm in names:
            mask |= 1 << self._index[nm]
        return mask

    def label(self, i: int) -> str:
        return self.names[i]

    def labels(self, mask: int) -> list[str]:
        return [self.names[i] for i in bits(mask)]

    def set_name(self, mask: int) -> str:
        return "{" + ",".join(self.labels(mask)) + "}"

    def le_matrix(self) -> list[list[bool]]:
        return [[self.le(i, j) for j in range(self.n)] for i in range(self.n)]

    def covers(self) -> list[tuple[int, int]]:
        """Cover pairs ``(i, j)`` with ``i < j`` and nothing strictly between."""
        out = []
        for j in range(self.n):
            strict = self.down[j] & ~(1 << j)
            for i in bits(strict):
                between = strict & self.up[i] & ~(1 << i)
                if not between:
                    out.append((i, j))
        out.sort()
        return out

    def downclose(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.down[i]
        return out

    def upclose(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.up[i]
        return out

    def is_downset(self, mask: int) -> bool:
        return self.downclose(mask) == mask

    def is_upset(self, mask: int) -> bool:
        return self.upclose(mask) == mask

    def lower_bounds(self, mask: int) -> int:
        out = self.full
        for i in bits(mask):
            out &= self.down[i]
        return out

    def upper_bounds(self, mask: int) -> int:
        out = self.full
        for i in bits(mask):
            out &= self.up[i]
        return out

    def glb(self, mask: int) -> Optional[int]:
        return self._by_down.get(self.lower_bounds(mask))

    def lub(self, mask: int) -> Optional[int]:
        return self._by_up.get(self.upper_bounds(mask))

    def maximal(self, mask: int) -> int:
        return sum(1 << i for i in bits(mask) if not (self.up[i] & mask) & ~(1 << i))

    def minimal(self, mask: int) -> int:
        return sum(1 << i for i in bits(mask) if not (self.down[i] & mask) & ~(1 << i))

    def dual(self) -> "Poset":
        return Poset(self.names, self.up)

    def poset(self) -> "Poset":
        """The bare order underlying this structure."""
        return Poset(self.names, self.down)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return (isinstance(other, Poset) and self.names == other.names
                and self.down == other.down)

    def __hash__(self) -> int:
        return hash((self.names, self.down))

    def __repr__(self) -> str:
        pairs = " ".join(f"{self.names[i]}<{self.names[j]}" for i, j in self.covers())
        return f"{type(self).__name__}({' '.join(self.names)} / {pairs})"


def bound(p: Poset, s: Iterable[int] | int, direction: str) -> Optional[int]:
    """Greatest lower (``"meet"``) or least upper (``"join"``) bound of ``s``.

    ``s`` is a mask or an iterable of indices.  The bound of the empty set is
    the top (meet) or the bottom (join) when it exists.
    """
    mask = s if isinstance(s, int) else sum(1 << i for i in set(s))
    if direction == "meet":
        return p.glb(mask)
    if direction == "join":
        return p.lub(mask)
    raise ValueError(f"direction must be 'meet' or 'join', not {direction!r}")


class MeetSemilattice(Poset):
    """A poset in which every pair has a glb.

    ``meet`` is the full binary table; ``join`` holds the lub where it exists
    and ``None`` elsewhere.
    """

    def __init__(self, names: Sequence[str], down: Sequence[int]):
        super().__init__(names, down)
        n = self.n
        meet = [[0] * n for _ in range(n)]
        join: list[list[Optional[int]]] = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                m = self._by_down.get(self.down[i] & self.down[j])
                if m is None:
                    raise NotMeetClosed(self.names[i], self.names[j])
                meet[i][j] = meet[j][i] = m
                jn = self._by_up.get(self.up[i] & self.up[j])
                join[i][j] = join[j][i] = jn
        self.meet = tuple(tuple(r) for r in meet)
        self.join = tuple(tuple(r) for r in join)
        self.bottom = self.glb(self.full)
        self.top = self.lub(self.full)

    @classmethod
    def from_poset(cls, p: Poset):
        return cls(p.names, p.down)

    @property
    def has_bottom(self) -> bool:
        return self.bottom is not None

    @property
    def has_top(self) -> bool:
        return self.top is not None

    @property
    def is_bounded(self) -> bool:
        return self.bottom is not None and self.top is not None

    @property
    def is_lattice(self) -> bool:
        return all(x is not None for row in self.join for x in row)

    def meet_all(self, mask: int) -> Optional[int]:
        return self.glb(mask)

    def join_all(self, mask: int) -> Optional[int]:
        return self.lub(mask)

    def principal(self, i: int) -> int:
        return self.down[i]


class FiniteLattice(MeetSemilattice):
    """A meet-semilattice whose join table is total."""

    def __init__(self, names: Sequence[str], down: Sequence[int]):
        super().__init__(names, down)
        for i in range(self.n):
            for j in range(i, self.n):
                if self.join[i][j] is None:
                    raise NotALattice(self.names[i], self.names[j])
        self._distributive: Optional[bool] = None

    @property
    def distributive(self) -> bool:
        if self._distributive is None:
            self._distributive = lattice_distributivity_witness(self) is None
        return self._distributive


def lattice_distributivity_witness(lat: FiniteLattice) -> Optional[tuple[int, int, int]]:
    """First ``(a, b, c)`` with ``a ∧ (b ∨ c) != (a ∧ b) ∨ (a ∧ c)``."""
    m, j = lat.meet, lat.join
    for a, b, c in product(range(lat.n), repeat=3):
        if m[a][j[b][c]] != j[m[a][b]][m[a][c]]:
            return a, b, c
    return None


def as_meet_semilattice(p: Poset) -> MeetSemilattice:
    """Fill the meet table; raises ``NotMeetClosed`` for the first pair lacking a glb."""
    if isinstance(p, MeetSemilattice):
        return p
    return MeetSemilattice(p.names, p.down)


def as_lattice(p: Poset) -> FiniteLattice:
    if isinstance(p, FiniteLattice):
        return p
    return FiniteLattice(p.names, p.down)


# -- structural predicates ----------------------------------------------

def distributive_triple_fails(a: MeetSemilattice, x: int, y: int, c: int) -> bool:
    """True when ``x ∧ y <= c`` but no ``x' >= x, y' >= y`` meet to ``c``."""
    if not a.le(a.meet[x][y], c):
        return False
    ups_c = a.up[c]
    for x2 in bits(a.up[x] & ups_c):
        row = a.meet[x2]
        for y2 in bits(a.up[y] & ups_c):
            if row[y2] == c:
                return False
    return True


def is_distributive_semilattice(a: MeetSemilattice) -> Verdict:
    """Whenever ``x ∧ y <= c`` there are ``x' >= x, y' >= y`` with ``x' ∧ y' = c``."""
    n = a.n
    for x in range(n):
        for y in range(n):
            for c in bits(a.up[a.meet[x][y]]):
                if distributive_triple_fails(a, x, y, c):
                    return Verdict(False, (a.names[x], a.names[y], a.names[c]),
                                   "no x'>=x, y'>=y with x'∧y'=c")
    return PASS


def is_weakly_distributive(a: MeetSemilattice) -> Verdict:
    """Binary meets distribute over every binary join that exists."""
    n = a.n
    m, j = a.meet, a.join
    for x in range(n):
        for y in range(n):
            for z in range(n):
                yz = j[y][z]
                if yz is None:
                    continue
                lhs = j[m[x][y]][m[x][z]]
                if lhs != m[x][yz]:
                    return Verdict(False, (a.names[x], a.names[y], a.names[z]),
                                   "x∧(y∨z) != (x∧y)∨(x∧z)")
    return PASS


def admissible_join(a: MeetSemilattice, g: Iterable[int] | int) -> Optional[int]:
    """``⋁g`` when ``g`` is admissible (its join exists and is distributed over
    by every meet), otherwise ``None``.  The empty set is admissible exactly
    when a bottom exists."""
    mask = g if isinstance(g, int) else sum(1 << i for i in set(g))
    top = a.lub(mask)
    if top is None:
        return None
    for x in range(a.n):
        row = a.meet[x]
        img = 0
        for y in bits(mask):
            img |= 1 << row[y]
        if a.lub(img) != row[top]:
            return None
    return top


# -- enumeration of up/down sets ------------------------------------------

def enumerate_downsets(p: Poset, limit: Optional[int] = None) -> list[int]:
    """All downsets (including the empty one) sorted by (size, mask).

    Breadth-first growth by minimal elements of the complement.  Raises
    ``OverflowError`` once more than ``limit`` sets have been produced.
    """
    strict_down = [d & ~(1 << i) for i, d in enumerate(p.down)]
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for d in frontier:
            for x in range(p.n):
                if (d >> x) & 1 or strict_down[x] & ~d:
                    continue
                e = d | (1 << x)
                if e not in seen:
                    seen.add(e)
                    nxt.append(e)
                    if limit is not None and len(seen) > limit:
                        raise OverflowError(len(seen))
        frontier = nxt
    return sorted(seen, key=lambda m: (popcount(m), m))


def enumerate_upsets(p: Poset, limit: Optional[int] = None) -> list[int]:
    return enumerate_downsets(p.dual(), limit)


@dataclass(frozen=True)
class FilterFamily:
    """Nonempty meet-closed upsets of a meet-semilattice, ordered by inclusion."""

    carrier: MeetSemilattice
    filters: tuple

    def poset(self) -> Poset:
        return Poset.from_family(self.filters, [self.carrier.set_name(f) for f in self.filters])

    def lattice(self) -> Optional[FiniteLattice]:
        try:
            return as_lattice(self.poset())
        except (NotMeetClosed, NotALattice):
            return None

    @property
    def is_lattice(self) -> bool:
        return self.lattice() is not None

    @property
    def is_distributive(self) -> bool:
        lat = self.lattice()
        return lat is not None and lat.distributive

    def __len__(self) -> int:
        return len(self.filters)

    def __iter__(self):
        return iter(self.filters)


def is_filter(a: MeetSemilattice, mask: int) -> bool:
    if not mask or not a.is_upset(mask):
        return False
    for x in bits(mask):
        row = a.meet[x]
        for y in bits(mask):
            if not (mask >> row[y]) & 1:
                return False
    return True


def filters(a: MeetSemilattice) -> FilterFamily:
    """Every nonempty upset closed under binary meets."""
    found = tuple(f for f in enumerate_upsets(a) if is_filter(a, f))
    return FilterFamily(a, found)
