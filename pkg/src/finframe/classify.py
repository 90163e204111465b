"""Classification predicates and multi-condition theorem verifiers.

Each verifier computes every condition through its own code path and
reports whether they agree; none of them derives one condition from
another.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import __version__
from .core_order import (
    FiniteLattice,
    MeetSemilattice,
    PASS,
    Verdict,
    filters,
    is_distributive_semilattice,
    is_weakly_distributive,
    lattice_distributivity_witness,
)
from .downset_frame import (
    ClosureMap,
    FiniteFrame,
    annihilator,
    base_j,
    base_k,
    booleanization,
    d_infinity,
    delta,
    dideals,
    downsets,
    join_generates,
    k_closure,
    normal_ideals,
    subposet,
    verify_nucleus,
)
from .envelope import distributive_envelope, prime_filters, verify_envelope_lemma
from .errors import (
    NotABase,
    NotBounded,
    NotBoundedDistributive,
    NotZeroDimensional,
)
from .formats import serialize_poset
from .iso import find_isomorphism

SCHEMA_VERSION = 1

EXCLUDED_INFINITE = (
    "lambda-coreflection (λL is ED)",
    "beta-coreflection (βL is ED)",
    "lambda0 coreflection",
    "pseudocompactness",
    "sigma-frame notions (A-basic, A-coole, BD, P-frames)",
)


def _require_bounded_distributive(l) -> FiniteLattice:
    if not isinstance(l, FiniteLattice) or not l.is_bounded:
        if isinstance(l, MeetSemilattice) and l.is_lattice:
            l = FiniteLattice(l.names, l.down)
        else:
            raise NotBoundedDistributive("expected a bounded lattice")
    if not l.distributive:
        raise NotBoundedDistributive("lattice is not distributive")
    return l


def _agreement(name: str, names: Sequence[str], values: Sequence[bool],
               witness: Optional[tuple] = None, **extra) -> Verdict:
    agree = len(set(values)) == 1
    detail = {"conditions": dict(zip(names, values)), "value": values[0] if agree else None}
    detail.update(extra)
    return Verdict(agree, None if agree else tuple(f"{n}={v}" for n, v in zip(names, values)),
                   "" if agree else f"{name}: conditions disagree", detail)


# -- subfit / regular -----------------------------------------------------------

def is_subfit(l: FiniteLattice) -> Verdict:
    """``a ≰ b`` implies some ``c`` with ``a ∨ c = 1`` and ``b ∨ c ≠ 1``."""
    l = _require_bounded_distributive(l)
    j, top = l.join, l.top
    for a in range(l.n):
        for b in range(l.n):
            if l.le(a, b):
                continue
            if not any(j[a][c] == top and j[b][c] != top for c in range(l.n)):
                return Verdict(False, (l.names[a], l.names[b]), "no separating c")
    return PASS


def rather_below(l: FiniteLattice, c: int, a: int) -> bool:
    """``c ≺ a``: some ``d`` with ``c ∧ d = 0`` and ``d ∨ a = 1``."""
    return any(l.meet[c][d] == l.bottom and l.join[d][a] == l.top for d in range(l.n))


def is_regular_lattice(l: FiniteLattice) -> Verdict:
    """``a ≰ b`` implies some ``c ≺ a`` with ``c ≰ b``."""
    l = _require_bounded_distributive(l)
    for a in range(l.n):
        below = [c for c in range(l.n) if rather_below(l, c, a)]
        for b in range(l.n):
            if l.le(a, b):
                continue
            if not any(not l.le(c, b) for c in below):
                return Verdict(False, (l.names[a], l.names[b]), "no c ≺ a with c ≰ b")
    return PASS


# -- adjoints and A-extremality ----------------------------------------------------

def left_adjoint_embedding(a: MeetSemilattice, l: FiniteLattice, emb: Sequence[int]):
    """Left adjoint ``ℓ`` of ``emb : a → l`` as ``(table, left_exact)``, or ``None``.

    ``ℓ(x)`` is the least base element whose image lies above ``x``.
    """
    base = sum(1 << e for e in emb)
    bad = join_generates(l, base)
    if bad is not None:
        raise NotABase(f"{l.names[bad]} is not a join of base elements")
    table = []
    for x in range(l.n):
        cands = [c for c in range(a.n) if l.le(x, emb[c])]
        least = [c for c in cands if all(a.le(c, d) for d in cands)]
        if not least:
            return None
        table.append(least[0])
    exact = all(table[l.meet[x][y]] == a.meet[table[x]][table[y]]
                for x in range(l.n) for y in range(x, l.n))
    return table, exact


def _ambient(a: MeetSemilattice, ambient: str) -> tuple[FiniteFrame, list[int]]:
    if ambient == "downsets":
        fam = downsets(a)
        return fam.frame(check=False), fam.embedding()
    if ambient == "dinfinity":
        return d_infinity(a, check=False)
    raise ValueError(f"unknown ambient frame {ambient!r}")


A_EXTREMAL_CONDITIONS = (
    "A is a frame",
    "A = fix(delta)",
    "k nucleus, fix(k) = A",
    "k = j, fix(j) = A",
    "left exact left adjoint",
)


def is_A_extremal(a: MeetSemilattice, ambient: str = "downsets") -> Verdict:
    """Evaluate the five A-extremality conditions for ``a`` inside ``ambient``
    (``"downsets"`` or ``"dinfinity"``); ok iff they agree, value in
    ``detail["value"]``."""
    if not a.is_bounded:
        raise NotBounded("A-extremality needs a bounded base")
    frame_ok = a.is_lattice and lattice_distributivity_witness(FiniteLattice(a.names, a.down)) is None
    image_is_fix = set(dideals(a).members) == set(a.down)

    l, emb = _ambient(a, ambient)
    base = sum(1 << e for e in emb)
    k = base_k(l, base)
    j = base_j(l, base)
    fixk = sum(1 << x for x in range(l.n) if k(x) == x)
    fixj = sum(1 << x for x in range(l.n) if j(x) == x)
    cond3 = bool(verify_nucleus(k, l)) and fixk == base
    cond4 = all(k(x) == j(x) for x in range(l.n)) and fixj == base
    adj = left_adjoint_embedding(a, l, emb)
    cond5 = adj is not None and adj[1]
    return _agreement("A-extremal", A_EXTREMAL_CONDITIONS,
                      [frame_ok, image_is_fix, cond3, cond4, cond5],
                      ambient=ambient, left_adjoint_exists=adj is not None)


# -- complemented elements, ED ------------------------------------------------------

def complemented(f: FiniteLattice) -> int:
    """Mask of elements having a complement."""
    return sum(1 << x for x in range(f.n)
               if any(f.meet[x][y] == f.bottom and f.join[x][y] == f.top for y in range(f.n)))


def is_zero_dimensional(f: FiniteLattice) -> Verdict:
    """Every element is a join of complemented elements."""
    bad = join_generates(f, complemented(f))
    if bad is None:
        return PASS
    return Verdict(False, (f.names[bad],), "not a join of complemented elements")


def is_extremally_disconnected(f: FiniteFrame) -> Verdict:
    """``a* ∨ a** = 1`` for all ``a``; the detail records the two equivalent
    formulations (``𝔅f = CL`` and the De Morgan law) for cross-checking."""
    p = f.pseudo
    witness = None
    for x in range(f.n):
        if f.join[p[x]][p[p[x]]] != f.top:
            witness = (f.names[x],)
            break
    regular = sum(1 << x for x in range(f.n) if p[p[x]] == x)
    boole_is_center = regular == complemented(f)
    de_morgan = all(p[f.meet[x][y]] == f.join[p[x]][p[y]]
                    for x in range(f.n) for y in range(f.n))
    detail = {"booleanization_is_center": boole_is_center, "de_morgan": de_morgan}
    if witness is None:
        return Verdict(True, None, "", detail)
    return Verdict(False, witness, "a* ∨ a** ≠ 1", detail)


ED_CONDITIONS = (
    "ED",
    "CL is a frame",
    "CL = D∞CL = BL",
    "CL complete Boolean",
    "CL embedding has a left adjoint",
)


def _center(f: FiniteFrame):
    cl = complemented(f)
    sub, members = subposet(f, cl, MeetSemilattice)
    return cl, sub, members


def verify_zero_dim_facts(f: FiniteFrame) -> Verdict:
    """``D∞(CL) ≅ 𝔅f`` and agreement of the finite ED conditions."""
    zd = is_zero_dimensional(f)
    if not zd:
        raise NotZeroDimensional(f"{zd.witness[0]} is not a join of complemented elements")
    cl, center, members = _center(f)
    dinf, dinf_emb = d_infinity(center)
    boole, _ = booleanization(f)
    iso = find_isomorphism(dinf, boole) is not None

    ed = bool(is_extremally_disconnected(f))
    center_frame = center.is_lattice and lattice_distributivity_witness(
        FiniteLattice(center.names, center.down)) is None
    regular = sum(1 << x for x in range(f.n) if f.pseudo[f.pseudo[x]] == x)
    cond3 = cl == regular and sorted(dinf_emb) == list(range(dinf.n))
    if center.is_lattice:
        cl_lat = FiniteLattice(center.names, center.down)
        complete_boolean = cl_lat.distributive and complemented(cl_lat) == cl_lat.full
    else:
        complete_boolean = False
    cond5 = left_adjoint_embedding(center, f, members) is not None
    v = _agreement("ED", ED_CONDITIONS, [ed, center_frame, cond3, complete_boolean, cond5],
                   dinf_cl_iso_booleanization=iso, excluded=list(EXCLUDED_INFINITE[:2]))
    if not iso:
        return Verdict(False, (len(members), boole.n), "D∞(CL) not isomorphic to the Booleanization",
                       v.detail)
    return v


# -- MacNeille completion -------------------------------------------------------------

MA_FRAME_CONDITIONS = (
    "MA is a frame",
    "MA = D∞A",
    "k = delta",
    "annihilators normal",
)


def verify_ma_frame_theorem(a: MeetSemilattice) -> Verdict:
    """The four MA-frame conditions, each computed independently."""
    fixk = normal_ideals(a)
    ma_frame = fixk.lattice().distributive
    all_down = downsets(a)
    fixd = {e for e in all_down if delta(a, e) == e}
    same_family = set(fixk.members) == fixd
    k_is_delta = all(k_closure(a, e) == delta(a, e) for e in all_down)
    ann_witness = None
    for p in range(a.n):
        for q in range(a.n):
            ann = annihilator(a, p, q)
            if k_closure(a, ann) != ann:
                ann_witness = (a.names[p], a.names[q])
                break
        if ann_witness:
            break
    v = _agreement("MA-frame", MA_FRAME_CONDITIONS,
                   [ma_frame, same_family, k_is_delta, ann_witness is None])
    if ann_witness is not None:
        v.detail["non_normal_annihilator"] = list(ann_witness)
    return v


def verify_subfit_implies_ma_frame(l: FiniteLattice) -> Verdict:
    """If ``l`` is subfit then its MacNeille completion is a frame."""
    l = _require_bounded_distributive(l)
    if not is_subfit(l):
        return Verdict(True, None, "not applicable", {"applicable": False})
    v = verify_ma_frame_theorem(l)
    value = v.detail.get("value")
    if v and value:
        return Verdict(True, None, "", {"applicable": True})
    return Verdict(False, v.witness, "subfit lattice whose MA is not a frame",
                   {"applicable": True, **v.detail})


# -- report ---------------------------------------------------------------------

@dataclass
class Report:
    instance: str
    predicates: dict = field(default_factory=dict)
    theorems: dict = field(default_factory=dict)
    sizes: dict = field(default_factory=dict)
    excluded: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "version": __version__,
            "instance": self.instance,
            "predicates": self.predicates,
            "theorems": self.theorems,
            "sizes": self.sizes,
            "excluded": self.excluded,
        }

    def to_text(self) -> str:
        lines = [f"instance {self.instance}"]
        for key in sorted(self.predicates):
            v = self.predicates[key]
            w = f"  witness {v['witness']}" if v.get("witness") else ""
            lines.append(f"  {key}: {'yes' if v['ok'] else 'no'}{w}")
        for key in sorted(self.theorems):
            v = self.theorems[key]
            value = v.get("detail", {}).get("value")
            tail = "" if value is None else f"  (conditions all {str(value).lower()})"
            lines.append(f"  theorem {key}: {'pass' if v['ok'] else 'FAIL'}{tail}")
        lines.append("  sizes: " + ", ".join(f"{k}={self.sizes[k]}" for k in sorted(self.sizes)))
        for item in self.excluded:
            lines.append(f"  excluded: infinite construction: {item}")
        return "\n".join(lines) + "\n"


def instance_id(a: MeetSemilattice) -> str:
    return hashlib.sha256(serialize_poset(a).encode()).hexdigest()[:12]


def classification_report(a: MeetSemilattice) -> Report:
    rep = Report(instance_id(a), excluded=list(EXCLUDED_INFINITE))
    pred = rep.predicates
    pred["lattice"] = {"ok": a.is_lattice}
    pred["has_bottom"] = {"ok": a.has_bottom}
    pred["has_top"] = {"ok": a.has_top}
    pred["distributive"] = is_distributive_semilattice(a).to_dict()
    pred["weakly_distributive"] = is_weakly_distributive(a).to_dict()
    filt = filters(a)
    pred["filters_form_lattice"] = {"ok": filt.is_lattice}
    pred["filters_distributive"] = {"ok": filt.is_distributive}
    k_nucleus = verify_nucleus(ClosureMap.k(a), downsets(a))
    pred["k_is_nucleus"] = k_nucleus.to_dict()

    rep.theorems["ma-frame"] = verify_ma_frame_theorem(a).to_dict()
    if a.is_bounded:
        rep.theorems["a-extremal"] = is_A_extremal(a).to_dict()
    lat = FiniteLattice(a.names, a.down) if a.is_lattice else None
    if lat is not None and lat.distributive:
        f = FiniteFrame(a.names, a.down)
        pred["subfit"] = is_subfit(lat).to_dict()
        pred["regular"] = is_regular_lattice(lat).to_dict()
        pred["zero_dimensional"] = is_zero_dimensional(f).to_dict()
        pred["extremally_disconnected"] = is_extremally_disconnected(f).to_dict()
        rep.theorems["subfit-ma"] = verify_subfit_implies_ma_frame(lat).to_dict()
    if pred["distributive"]["ok"]:
        rep.theorems["envelope-lemma"] = verify_envelope_lemma(a).to_dict()

    rep.sizes = {
        "downsets": len(downsets(a)),
        "fix_delta": len(dideals(a)),
        "fix_k": len(normal_ideals(a)),
        "envelope": len(distributive_envelope(a).members),
        "prime_filters": len(prime_filters(a)),
    }
    return rep
