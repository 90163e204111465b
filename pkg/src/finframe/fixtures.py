"""Named small instances used throughout the tests and the CLI."""

from __future__ import annotations

from .core_order import FiniteLattice, MeetSemilattice, as_meet_semilattice
from .downset_frame import FiniteFrame
from .formats import parse_poset_text

TEXT = {
    "C3": "elements: 0 m 1\ncovers: 0<m m<1\n",
    "M3": "elements: 0 x y z 1\ncovers: 0<x 0<y 0<z x<1 y<1 z<1\n",
    "FENCE": "elements: 0 a b\ncovers: 0<a 0<b\n",
    "B2": "elements: 0 a b 1\ncovers: 0<a 0<b a<1 b<1\n",
    # upsets of the poset x<y, x<z, ordered by inclusion
    "FRAMEV": "elements: e y z yz xyz\ncovers: e<y e<z y<yz z<yz yz<xyz\n",
    "N5": "elements: 0 a b c 1\ncovers: 0<a a<b 0<c b<1 c<1\n",
}


def semilattice(name: str) -> MeetSemilattice:
    return as_meet_semilattice(parse_poset_text(TEXT[name]))


def lattice(name: str) -> FiniteLattice:
    p = parse_poset_text(TEXT[name])
    return FiniteLattice(p.names, p.down)


def frame(name: str) -> FiniteFrame:
    p = parse_poset_text(TEXT[name])
    return FiniteFrame(p.names, p.down)


def chain(n: int) -> FiniteFrame:
    names = [f"c{i}" for i in range(n)]
    return FiniteFrame(names, [(1 << (i + 1)) - 1 for i in range(n)])


def boolean(k: int) -> FiniteFrame:
    """Powerset of a ``k``-set; element ``m`` is the subset with bitmask ``m``."""
    size = 1 << k
    names = ["{" + ",".join(str(i) for i in range(k) if (m >> i) & 1) + "}" for m in range(size)]
    down = [sum(1 << s for s in range(size) if s & ~m == 0) for m in range(size)]
    return FiniteFrame(names, down)


def product_lattice(p: FiniteLattice, q: FiniteLattice, cls=FiniteLattice):
    """Componentwise order on ``p × q``; element ``(i, j)`` has index ``i*|q| + j``."""
    names = [f"({a},{b})" for a in p.names for b in q.names]
    down = []
    for i in range(p.n):
        for j in range(q.n):
            d = 0
            for i2 in range(p.n):
                if p.le(i2, i):
                    for j2 in range(q.n):
                        if q.le(j2, j):
                            d |= 1 << (i2 * q.n + j2)
            down.append(d)
    return cls(names, down)
