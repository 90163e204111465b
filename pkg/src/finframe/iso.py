"""Isomorphism and canonical forms for small posets.

Both searches assign elements level by level (by an invariant that includes
the height), only trying targets with the same invariant, and prune as soon
as an assigned pair disagrees on the order relation.
"""

from __future__ import annotations

from itertools import permutations, product
from typing import Optional

from .core_order import Poset, bits, popcount


def _heights(p: Poset) -> list[int]:
    h = [0] * p.n
    order = sorted(range(p.n), key=lambda i: popcount(p.down[i]))
    for i in order:
        below = p.down[i] & ~(1 << i)
        h[i] = 1 + max((h[j] for j in bits(below)), default=-1)
    return h


def invariants(p: Poset, rounds: int = 2) -> list[tuple]:
    """Isomorphism-invariant colour of each element (refined twice)."""
    h = _heights(p)
    col = [(h[i], popcount(p.down[i]), popcount(p.up[i])) for i in range(p.n)]
    for _ in range(rounds):
        col = [
            (col[i],
             tuple(sorted(col[j] for j in bits(p.down[i] & ~(1 << i)))),
             tuple(sorted(col[j] for j in bits(p.up[i] & ~(1 << i)))))
            for i in range(p.n)
        ]
    return col


def find_isomorphism(p: Poset, q: Poset) -> Optional[list[int]]:
    """An order isomorphism ``p -> q`` as a list, or ``None``."""
    if p.n != q.n:
        return None
    ip, iq = invariants(p), invariants(q)
    if sorted(ip) != sorted(iq):
        return None
    order = sorted(range(p.n), key=lambda i: (ip[i], i))
    cands = {c: [j for j in range(q.n) if iq[j] == c] for c in set(iq)}
    phi = [-1] * p.n
    used = [False] * q.n
    assigned: list[int] = []

    def ok(x: int, y: int) -> bool:
        for a in assigned:
            b = phi[a]
            if p.le(a, x) != q.le(b, y) or p.le(x, a) != q.le(y, b):
                return False
        return True

    def search(k: int) -> bool:
        if k == p.n:
            return True
        x = order[k]
        for y in cands[ip[x]]:
            if used[y] or not ok(x, y):
                continue
            phi[x] = y
            used[y] = True
            assigned.append(x)
            if search(k + 1):
                return True
            assigned.pop()
            used[y] = False
            phi[x] = -1
        return False

    return phi if search(0) else None


def is_isomorphic(p: Poset, q: Poset) -> bool:
    return find_isomorphism(p, q) is not None


def canonical_form(p: Poset) -> tuple[tuple, list[int]]:
    """``(key, order)``: relabelling ``order[k]`` as ``k`` gives ``key``, the
    lexicographically least down-mask tuple among invariant-respecting orders.

    Equal keys iff isomorphic (the key is the relabelled order itself).  Cost
    grows with the product of the factorials of the invariant class sizes,
    which is tiny at the sizes used here.
    """
    inv = invariants(p)
    classes: dict[tuple, list[int]] = {}
    for i in range(p.n):
        classes.setdefault(inv[i], []).append(i)
    keys = sorted(classes)
    best_key = None
    best_order: list[int] = []
    for choice in product(*(permutations(classes[c]) for c in keys)):
        order = [x for block in choice for x in block]
        pos = [0] * p.n
        for k, x in enumerate(order):
            pos[x] = k
        key = tuple(sum(1 << pos[j] for j in bits(p.down[x])) for x in order)
        if best_key is None or key < best_key:
            best_key, best_order = key, order
    return best_key, best_order
