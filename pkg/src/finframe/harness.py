"""Instance generation, brute-force oracles and theorem sweeps."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Callable, Iterable, Iterator, Optional, Union

from .classify import (
    is_A_extremal,
    is_extremally_disconnected,
    is_zero_dimensional,
    verify_ma_frame_theorem,
    verify_subfit_implies_ma_frame,
    verify_zero_dim_facts,
)
from .core_order import (
    FiniteLattice,
    MeetSemilattice,
    PASS,
    Poset,
    Verdict,
    as_meet_semilattice,
    bits,
    is_distributive_semilattice,
    popcount,
)
from .downset_frame import (
    MAX_SUBLOCALE_SCAN,
    ClosureMap,
    FiniteFrame,
    d_infinity,
    delta,
    delta_by_annihilators,
    dideals,
    downsets,
    j_map,
    k_closure,
    normal_ideals,
    sublocales,
    verify_nucleus,
)
from .envelope import (
    distributive_envelope,
    envelope_via_embedding,
    frink_ideals,
    ideal_frame,
    verify_envelope_lemma,
)
from .errors import NotMeetClosed, SpecInfeasible, TooLarge, UnknownTheorem
from .fixtures import semilattice as fixture_semilattice
from .formats import dumps, serialize_poset
from .iso import canonical_form, find_isomorphism

MAX_RANDOM_SIZE = 16
MAX_EXHAUSTIVE = 7
MAX_ORACLE_DELTA = 10
KINDS = ("semilattice", "lattice", "distributive_lattice", "bounded_semilattice")
METHODS = ("closure_system", "exhaustive")
MASK64 = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 (Steele, Lea, Flood); constants as in the reference C code."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection."""
        limit = (1 << 64) - (1 << 64) % bound
        while True:
            v = self.next()
            if v < limit:
                return v % bound


@dataclass(frozen=True)
class InstanceSpec:
    kind: str
    size: int
    seed: int
    method: str = "closure_system"

    def to_json(self) -> dict:
        return asdict(self)


def element_names(n: int) -> list[str]:
    letters = "abcdefghijklmnopqrstuvwxyz"
    return [letters[i] if n <= 26 else f"e{i}" for i in range(n)]


# -- random instances --------------------------------------------------------

def _close(family: set[int], x: int, union: bool) -> set[int]:
    out = set(family)
    frontier = [x]
    while frontier:
        y = frontier.pop()
        if y in out:
            continue
        new = {y & z for z in out}
        if union:
            new |= {y | z for z in out}
        out.add(y)
        frontier.extend(new - out)
    return out


def _family_semilattice(family: set[int]) -> MeetSemilattice:
    members = sorted(family, key=lambda m: (popcount(m), m))
    names = element_names(len(members))
    return MeetSemilattice(names, Poset.from_family(members, names).down)


def random_instance(spec: InstanceSpec) -> MeetSemilattice:
    """Deterministic instance for ``spec``.

    ``closure_system`` draws random subsets of a ``size``-point ground set and
    closes under intersection (and union for distributive lattices), keeping a
    draw only if the family stays within ``size`` members.
    """
    if spec.kind not in KINDS:
        raise SpecInfeasible(f"unknown kind {spec.kind!r}")
    if spec.size < 1:
        raise SpecInfeasible("size must be positive")
    if spec.method == "exhaustive":
        pool = [a for a in exhaustive_instances(spec.size) if _kind_ok(a, spec.kind)]
        if not pool:
            raise SpecInfeasible(f"no {spec.kind} of size {spec.size}")
        return pool[spec.seed % len(pool)]
    if spec.method != "closure_system":
        raise SpecInfeasible(f"unknown method {spec.method!r}")
    if spec.size > MAX_RANDOM_SIZE:
        raise SpecInfeasible(f"closure_system sampler capped at {MAX_RANDOM_SIZE} elements")

    n = spec.size
    ground = (1 << n) - 1
    rng = SplitMix64(spec.seed)
    union = spec.kind == "distributive_lattice"
    bounded = spec.kind != "semilattice"
    for _restart in range(32):
        family: set[int] = {ground} if bounded else set()
        if union:
            family.add(0)
        if len(family) > n:
            family = {ground}
        for _draw in range(64 * n):
            if len(family) == n:
                break
            grown = _close(family, rng.next() & ground, union)
            if len(grown) <= n:
                family = grown
        if len(family) == n:
            a = _family_semilattice(family)
            if _kind_ok(a, spec.kind):
                return a
    raise SpecInfeasible(f"could not draw a {spec.kind} of size {n} from seed {spec.seed}")


def _kind_ok(a: MeetSemilattice, kind: str) -> bool:
    if kind == "semilattice":
        return True
    if kind == "bounded_semilattice":
        return a.is_bounded
    if kind == "lattice":
        return a.is_lattice
    return a.is_lattice and FiniteLattice(a.names, a.down).distributive and bool(
        is_distributive_semilattice(a))


# -- exhaustive instances ---------------------------------------------------------

@lru_cache(maxsize=None)
def _exhaustive(n: int) -> tuple[MeetSemilattice, ...]:
    if n == 1:
        return (MeetSemilattice(["a"], [1]),)
    names = element_names(n)
    seen: dict[tuple, MeetSemilattice] = {}
    for prev in _exhaustive(n - 1):
        new = n - 1
        for d in downsets(prev):
            if not d:
                continue
            down = list(prev.down) + [d | (1 << new)]
            try:
                cand = as_meet_semilattice(Poset(names, down))
            except NotMeetClosed:
                continue
            key, _ = canonical_form(cand)
            if key not in seen:
                seen[key] = MeetSemilattice(names, key)
    return tuple(seen[k] for k in sorted(seen))


def exhaustive_instances(n: int) -> tuple[MeetSemilattice, ...]:
    """One meet-semilattice per isomorphism class on ``n`` elements, in canonical order.

    The number of lattices among them is checked against an independent
    brute-force count.
    """
    if n > MAX_EXHAUSTIVE:
        raise TooLarge(f"exhaustive enumeration capped at {MAX_EXHAUSTIVE}")
    if n < 1:
        raise ValueError("n must be positive")
    out = _exhaustive(n)
    lattices = sum(1 for a in out if a.is_lattice)
    expected = brute_force_lattice_count(n)
    if lattices != expected:
        raise AssertionError(f"{lattices} lattices of size {n}, brute force says {expected}")
    return out


@lru_cache(maxsize=None)
def brute_force_lattice_count(n: int) -> int:
    """Lattices of size ``n`` up to isomorphism, by plain relation enumeration.

    Element 0 is the bottom and ``n-1`` the top; relations between the inner
    elements are restricted to ``i < j`` (every poset has a linear extension)
    and classes are merged under every permutation of the inner elements.
    Independent of the canonical-form machinery.
    """
    if n <= 2:
        return 1
    inner = list(range(1, n - 1))
    pairs = [(i, j) for i in inner for j in inner if i < j]
    classes = set()
    for pick in range(1 << len(pairs)):
        rel = {(i, i) for i in range(n)}
        rel |= {(0, i) for i in range(n)} | {(i, n - 1) for i in range(n)}
        rel |= {p for k, p in enumerate(pairs) if pick >> k & 1}
        if any((x, z) not in rel for (x, y) in rel for (y2, z) in rel if y == y2):
            continue
        if not _brute_is_lattice(n, rel):
            continue
        best = None
        for perm in permutations(inner):
            m = {0: 0, n - 1: n - 1, **dict(zip(inner, perm))}
            key = tuple(sorted((m[x], m[y]) for x, y in rel))
            if best is None or key < best:
                best = key
        classes.add(best)
    return len(classes)


def _brute_is_lattice(n: int, rel: set) -> bool:
    for x in range(n):
        for y in range(n):
            ub = [z for z in range(n) if (x, z) in rel and (y, z) in rel]
            if not any(all((u, w) in rel for w in ub) for u in ub):
                return False
    return True


def brute_force_semilattice_count(n: int) -> int:
    """Meet-semilattices of size ``n``: adjoining a top is a bijection onto
    lattices of size ``n + 1``."""
    return brute_force_lattice_count(n + 1)


# -- independent delta oracle -----------------------------------------------------

def oracle_delta(a: MeetSemilattice, e: int) -> int:
    """Joins of all admissible subsets of ``e``, scanning every subset.

    Uses only the order relation: joins and meets are recomputed from
    bound sets each time.
    """
    if a.n > MAX_ORACLE_DELTA:
        raise TooLarge(f"oracle_delta capped at {MAX_ORACLE_DELTA} elements")
    n = a.n
    le = [[a.le(i, j) for j in range(n)] for i in range(n)]

    def sup(xs: list[int]) -> Optional[int]:
        ub = [z for z in range(n) if all(le[x][z] for x in xs)]
        least = [u for u in ub if all(le[u][w] for w in ub)]
        return least[0] if least else None

    def inf(x: int, y: int) -> int:
        lb = [z for z in range(n) if le[z][x] and le[z][y]]
        return next(g for g in lb if all(le[w][g] for w in lb))

    members = [i for i in range(n) if e >> i & 1]
    out = 0
    for pick in range(1 << len(members)):
        g = [members[k] for k in range(len(members)) if pick >> k & 1]
        top = sup(g)
        if top is None:
            continue
        if all(sup([inf(x, y) for y in g]) == inf(x, top) for x in range(n)):
            out |= 1 << top
    return out


# -- theorem registry -------------------------------------------------------------

def _na(reason: str) -> Verdict:
    return Verdict(True, None, "not applicable", {"applicable": False, "why": reason})


def _is_frame(a: MeetSemilattice) -> bool:
    return a.is_lattice and FiniteLattice(a.names, a.down).distributive


def check_interval(a: MeetSemilattice) -> Verdict:
    fam = downsets(a)
    if len(fam) > MAX_SUBLOCALE_SCAN:
        return _na(f"more than {MAX_SUBLOCALE_SCAN} downsets")
    f = fam.frame(check=False)
    emb = fam.embedding()
    base = sum(1 << e for e in emb)
    fix = sum(1 << fam.index(m) for m in dideals(a))
    for s in sublocales(f):
        has_base = base & ~s == 0
        if has_base:
            for x in bits(s):
                # join in s: least member of s above the union of the base below x
                union = f.lub(f.down[x] & base)
                if f.glb(f.up[union] & s) != x:
                    has_base = False
                    break
        if has_base:
            # the inclusion of the base must preserve meets computed in s
            has_base = all(f.glb(f.up[f.meet[emb[c]][emb[d]]] & s) == emb[a.meet[c][d]]
                           for c in range(a.n) for d in range(a.n))
        contains = fix & ~s == 0
        if has_base != contains:
            return Verdict(False, tuple(f.names[x] for x in bits(s)),
                           "S-base criterion and interval membership disagree")
    return PASS


def check_delta_annihilator(a: MeetSemilattice) -> Verdict:
    fam = downsets(a)
    for e in fam:
        if delta(a, e) != delta_by_annihilators(a, e):
            return Verdict(False, (a.set_name(e),), "saturation and annihilator forms differ")
    return verify_nucleus(ClosureMap.delta(a), fam)


def check_j_equals_delta(a: MeetSemilattice) -> Verdict:
    for e in downsets(a):
        if j_map(a, e) != delta(a, e):
            return Verdict(False, (a.set_name(e),), "j and delta differ")
    return PASS


def check_k_sandwich(a: MeetSemilattice) -> Verdict:
    for e in downsets(a):
        j = j_map(a, e)
        k = k_closure(a, e)
        if e & ~j or j & ~k:
            return Verdict(False, (a.set_name(e),), "E ⊆ j(E) ⊆ k(E) fails")
    fixd = set(dideals(a).members)
    for m in normal_ideals(a):
        if m not in fixd:
            return Verdict(False, (a.set_name(m),), "normal ideal that is not a D-ideal")
    return PASS


def check_ma_frame(a: MeetSemilattice) -> Verdict:
    return verify_ma_frame_theorem(a)


def check_subfit_ma(a: MeetSemilattice) -> Verdict:
    if not (a.is_bounded and _is_frame(a)):
        return _na("not a bounded distributive lattice")
    return verify_subfit_implies_ma_frame(FiniteLattice(a.names, a.down))


def check_a_extremal(a: MeetSemilattice) -> Verdict:
    if not a.is_bounded:
        return _na("unbounded")
    v = is_A_extremal(a)
    if not v:
        return v
    return is_A_extremal(a, ambient="dinfinity")


def check_envelope_lemma(a: MeetSemilattice) -> Verdict:
    if not is_distributive_semilattice(a):
        return _na("not distributive")
    return verify_envelope_lemma(a)


def check_envelope_char(a: MeetSemilattice) -> Verdict:
    if not is_distributive_semilattice(a):
        return _na("not distributive")
    dinf, emb = d_infinity(a)
    v = envelope_via_embedding(emb, a, dinf)
    if v and _is_frame(a):
        v = envelope_via_embedding(list(range(a.n)), a, FiniteLattice(a.names, a.down))
    return v


def check_frink_ideal_iso(a: MeetSemilattice) -> Verdict:
    if not is_distributive_semilattice(a):
        return _na("not distributive")
    fr = frink_ideals(a)
    ideals, _ = ideal_frame(distributive_envelope(a).lattice)
    if find_isomorphism(fr, ideals) is None:
        return Verdict(False, (len(fr), len(ideals)), "Frink ideals not isomorphic to ideals of DA")
    return PASS


def _frames_of(a: MeetSemilattice) -> list[FiniteFrame]:
    out = [downsets(a).frame(check=False)]
    if _is_frame(a):
        out.insert(0, FiniteFrame(a.names, a.down))
    return out


def check_zero_dim_booleanization(a: MeetSemilattice) -> Verdict:
    tested = 0
    for f in _frames_of(a):
        if is_zero_dimensional(f):
            tested += 1
            v = verify_zero_dim_facts(f)
            if not v:
                return v
    return PASS if tested else _na("no zero-dimensional frame")


def check_ed_equivalences(a: MeetSemilattice) -> Verdict:
    for f in _frames_of(a):
        v = is_extremally_disconnected(f)
        forms = (bool(v), v.detail["booleanization_is_center"], v.detail["de_morgan"])
        if len(set(forms)) != 1:
            return Verdict(False, v.witness or (), f"ED formulations disagree: {forms}")
    return PASS


def check_finite_collapse(a: MeetSemilattice) -> Verdict:
    if not is_distributive_semilattice(a):
        return _na("not distributive")
    if not a.is_lattice:
        return Verdict(False, (), "distributive but not a lattice")
    if not a.is_bounded:
        return PASS
    dinf, _ = d_infinity(a)
    da = distributive_envelope(a).lattice
    ida, _ = ideal_frame(da)
    if find_isomorphism(dinf, da) is None:
        return Verdict(False, (len(dinf), len(da)), "fix(delta) not isomorphic to DA")
    if find_isomorphism(da, ida) is None:
        return Verdict(False, (len(da), len(ida)), "DA not isomorphic to its ideal frame")
    return PASS


THEOREMS: dict[str, Callable[[MeetSemilattice], Verdict]] = {
    "interval": check_interval,
    "ma-frame": check_ma_frame,
    "delta-annihilator": check_delta_annihilator,
    "j-equals-delta": check_j_equals_delta,
    "k-sandwich": check_k_sandwich,
    "subfit-ma": check_subfit_ma,
    "a-extremal": check_a_extremal,
    "envelope-lemma": check_envelope_lemma,
    "envelope-char": check_envelope_char,
    "frink-ideal-iso": check_frink_ideal_iso,
    "zero-dim-booleanization": check_zero_dim_booleanization,
    "ed-equivalences": check_ed_equivalences,
    "finite-collapse": check_finite_collapse,
}


def theorem(name: str) -> Callable[[MeetSemilattice], Verdict]:
    try:
        return THEOREMS[name]
    except KeyError:
        raise UnknownTheorem(name) from None


# -- families and sweeps ------------------------------------------------------------

Label = Union[InstanceSpec, str]
Family = Iterable[tuple[Label, MeetSemilattice]]


def exhaustive_family(max_n: int, min_n: int = 1, kind: str = "semilattice") -> Iterator[tuple[InstanceSpec, MeetSemilattice]]:
    """Every class of the given kind for sizes ``min_n..max_n``; each InstanceSpec
    seed is the index among classes of that kind and size."""
    for n in range(min_n, max_n + 1):
        pool = [a for a in exhaustive_instances(n) if _kind_ok(a, kind)]
        for i, a in enumerate(pool):
            yield InstanceSpec(kind, n, i, "exhaustive"), a


def random_family(kind: str, size: int, seed: int, count: int) -> Iterator[tuple[InstanceSpec, MeetSemilattice]]:
    """``count`` instances whose seeds are drawn from ``SplitMix64(seed)``."""
    rng = SplitMix64(seed)
    for _ in range(count):
        spec = InstanceSpec(kind, size, rng.next())
        yield spec, random_instance(spec)


def _label_json(label: Label):
    return label.to_json() if isinstance(label, InstanceSpec) else {"source": label}


@dataclass
class SweepResult:
    theorem: str
    tried: int = 0
    applicable: int = 0
    failures: list = field(default_factory=list)
    wall_time: float = 0.0
    lines: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_jsonl(self) -> str:
        return "".join(dumps(line) + "\n" for line in self.lines)

    def summary(self) -> dict:
        return {"theorem": self.theorem, "tried": self.tried, "applicable": self.applicable,
                "failures": self.failures, "passed": self.passed,
                "wall_time": round(self.wall_time, 3)}


def _run_one(name: str, a: MeetSemilattice) -> Verdict:
    return THEOREMS[name](a)


def sweep(name: str, family: Family, workers: Optional[int] = None) -> SweepResult:
    """Run a registered verifier over ``family``; results keep family order."""
    check = theorem(name)
    started = time.perf_counter()
    items = list(family)
    if workers and workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            verdicts = list(pool.map(_run_one, [name] * len(items), [a for _, a in items],
                                     chunksize=max(1, len(items) // (4 * workers))))
    else:
        verdicts = [check(a) for _, a in items]
    result = SweepResult(name)
    for (label, _), v in zip(items, verdicts):
        applicable = v.detail.get("applicable", True)
        line = {"theorem": name, "instance": _label_json(label), "ok": v.ok,
                "applicable": applicable,
                "witness": list(v.witness) if v.witness else None,
                "reason": v.reason}
        result.lines.append(line)
        result.tried += 1
        result.applicable += bool(applicable)
        if not v.ok:
            result.failures.append({"instance": line["instance"], "witness": line["witness"],
                                    "reason": v.reason})
    result.wall_time = time.perf_counter() - started
    return result


def replay(name: str, spec: InstanceSpec) -> Verdict:
    return theorem(name)(random_instance(spec))


# -- where k stops being a nucleus ------------------------------------------------

@dataclass
class KSearchResult:
    max_n: int
    witness: Optional[dict]
    first_strict: Optional[dict]
    checked: dict
    chains_clean: bool
    m3: dict

    @property
    def certificate(self) -> Optional[str]:
        return None if self.witness else f"none <= {self.max_n}"

    def to_json(self) -> dict:
        return {"max_n": self.max_n, "witness": self.witness, "certificate": self.certificate,
                "first_strict_fixpoints": self.first_strict, "checked": self.checked,
                "chains_clean": self.chains_clean, "m3": self.m3}


def _k_status(a: MeetSemilattice) -> tuple[Verdict, bool]:
    v = verify_nucleus(ClosureMap.k(a), downsets(a))
    strict = len(normal_ideals(a)) < len(dideals(a))
    return v, strict


def search_k_not_nucleus(max_n: int) -> KSearchResult:
    """Smallest instance (size, then canonical order) on which ``k`` breaks
    the nucleus meet law, plus the first instance with ``fix(k) ⊊ fix(δ)``."""
    if max_n > MAX_EXHAUSTIVE:
        raise TooLarge(f"search capped at {MAX_EXHAUSTIVE}")
    witness = strict = None
    checked = {}
    chains_clean = True
    for n in range(1, max_n + 1):
        pool = exhaustive_instances(n)
        checked[str(n)] = len(pool)
        for i, a in enumerate(pool):
            is_chain = all(a.le(x, y) or a.le(y, x) for x in range(n) for y in range(n))
            if witness and strict and not is_chain:
                continue
            v, s = _k_status(a)
            record = {"size": n, "index": i, "instance": serialize_poset(a)}
            if is_chain and (not v or s):
                chains_clean = False
            if witness is None and not v:
                witness = {**record, "pair": list(v.witness), "reason": v.reason}
            if strict is None and s:
                strict = record
    m3 = fixture_semilattice("M3")
    v, s = _k_status(m3)
    m3_status = {"k_is_nucleus": v.ok, "pair": list(v.witness) if v.witness else None,
                 "fix_k": len(normal_ideals(m3)), "fix_delta": len(dideals(m3)),
                 "strict": s}
    return KSearchResult(max_n, witness, strict, checked, chains_clean, m3_status)
