"""Command-line front end.

Exit codes: 0 success, 1 verification failures, 2 usage or parse errors,
3 IO errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from . import __version__
from .classify import classification_report
from .core_order import (
    MeetSemilattice,
    Poset,
    as_meet_semilattice,
    is_distributive_semilattice,
    is_weakly_distributive,
)
from .downset_frame import d_infinity, downsets, macneille
from .envelope import distributive_envelope, frink_ideals
from .errors import FinframeError, ParseError, UnknownTheorem
from .formats import dumps, parse_poset, poset_to_json, serialize_poset, to_dot
from .harness import (
    KINDS,
    THEOREMS,
    InstanceSpec,
    exhaustive_family,
    random_family,
    random_instance,
    sweep,
    theorem,
)

OK, FAILED, USAGE, IO = 0, 1, 2, 3
COMPLETIONS = ("downsets", "dideal", "macneille", "envelope", "frink")


class UsageError(Exception):
    pass


def _read_input(arg: str) -> tuple[str, str]:
    """``(label, text)`` from a path, ``-`` for stdin, or an inline description."""
    if arg == "-":
        return "<stdin>", sys.stdin.read()
    if os.path.exists(arg):
        with open(arg, encoding="utf-8") as fh:
            return arg, fh.read()
    stripped = arg.lstrip()
    if stripped.startswith("{") or stripped.startswith("elements:"):
        return "<inline>", arg
    # let the caller report a missing file as an IO error
    with open(arg, encoding="utf-8") as fh:
        return arg, fh.read()


def _load(arg: str) -> tuple[str, Poset]:
    label, text = _read_input(arg)
    try:
        return label, parse_poset(text)
    except ParseError as exc:
        raise ParseError(f"{label}: {exc}") from None


def _load_semilattice(arg: str) -> tuple[str, MeetSemilattice]:
    label, p = _load(arg)
    try:
        return label, as_meet_semilattice(p)
    except FinframeError as exc:
        raise ParseError(f"{label}: not a meet-semilattice: {exc}") from None


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"


# -- verbs ------------------------------------------------------------------

def cmd_analyze(args) -> int:
    _, p = _load(args.input)
    facts = {"poset": True}
    try:
        a = as_meet_semilattice(p)
    except FinframeError as exc:
        facts["meet-semilattice"] = False
        facts["reason"] = str(exc)
        a = None
    if a is not None:
        dist = is_distributive_semilattice(a)
        weak = is_weakly_distributive(a)
        facts.update({
            "meet-semilattice": True,
            "lattice": a.is_lattice,
            "bottom": a.has_bottom,
            "top": a.has_top,
            "distributive": bool(dist),
            "weakly distributive": bool(weak),
        })
        if dist.witness:
            facts["distributive witness"] = list(dist.witness)
    if args.format == "json":
        text = dumps({"elements": len(p), **facts}) + "\n"
    else:
        lines = [f"elements: {len(p)}"]
        for k, v in facts.items():
            if isinstance(v, bool):
                v = _yn(v)
            elif isinstance(v, list):
                v = " ".join(v)
            lines.append(f"{k}: {v}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return OK


def _completion(a: MeetSemilattice, kind: str):
    """``(structure, embedding as element indices)``."""
    if kind == "downsets":
        fam = downsets(a)
        return fam.frame(check=False), fam.embedding()
    if kind == "dideal":
        return d_infinity(a)
    if kind == "macneille":
        return macneille(a)
    if kind == "envelope":
        env = distributive_envelope(a)
        return env.lattice, list(env.embedding)
    if kind == "frink":
        struct = frink_ideals(a)
        by_name = {nm: i for i, nm in enumerate(struct.names)}
        return struct, [by_name[a.set_name(a.down[c])] for c in range(a.n)]
    raise UsageError(f"unknown kind {kind!r}")


def _structure_text(struct: Poset, emb, a: MeetSemilattice, fmt: str, kind: str) -> str:
    embedding = {a.names[c]: struct.names[emb[c]] for c in range(a.n)}
    if fmt == "dot":
        dot = to_dot(struct, name=kind)
        extra = "".join(f"  // embeds {src} as {dst}\n" for src, dst in embedding.items())
        return dot[:-2] + extra + "}\n"
    if fmt == "text":
        lines = [f"kind: {kind}", f"size: {len(struct)}", serialize_poset(struct).rstrip("\n")]
        lines += [f"embeds {src} as {dst}" for src, dst in embedding.items()]
        return "\n".join(lines) + "\n"
    return dumps({"kind": kind, "size": len(struct), "structure": poset_to_json(struct),
                  "embedding": embedding}) + "\n"


def cmd_complete(args) -> int:
    _, a = _load_semilattice(args.input)
    struct, emb = _completion(a, args.kind)
    _emit(_structure_text(struct, emb, a, args.format, args.kind), args.out)
    return OK


def cmd_classify(args) -> int:
    _, a = _load_semilattice(args.input)
    rep = classification_report(a)
    text = dumps(rep.to_json()) + "\n" if args.format == "json" else rep.to_text()
    _emit(text, args.out)
    return OK


def cmd_verify(args) -> int:
    theorem(args.theorem)
    sources = sum(x is not None and x is not False for x in
                  (args.input, args.exhaustive, args.random or None))
    if sources != 1:
        raise UsageError("give exactly one of INPUT, --exhaustive N, --random")
    if args.random:
        missing = [f for f in ("size", "seed", "count") if getattr(args, f) is None]
        if missing:
            raise UsageError("--random needs " + ", ".join("--" + m for m in missing))
        family = random_family(args.kind or "semilattice", args.size, args.seed, args.count)
    elif args.exhaustive is not None:
        family = exhaustive_family(args.exhaustive, kind=args.kind or "semilattice")
    else:
        label, a = _load_semilattice(args.input)
        family = [(label, a)]
    result = sweep(args.theorem, family, workers=args.workers)
    _emit(result.to_jsonl(), args.out)
    s = result.summary()
    sys.stderr.write(f"{s['theorem']}: {s['tried']} tried, {s['applicable']} applicable, "
                     f"{len(s['failures'])} failures\n")
    return OK if result.passed else FAILED


def cmd_random(args) -> int:
    spec = InstanceSpec(args.kind, args.size, args.seed, args.method)
    a = random_instance(spec)
    if args.format == "json":
        text = dumps({"spec": spec.to_json(), "poset": poset_to_json(a)}) + "\n"
    elif args.format == "dot":
        text = to_dot(a)
    else:
        text = serialize_poset(a)
    _emit(text, args.out)
    return OK


def cmd_export(args) -> int:
    _, p = _load(args.input)
    if args.kind:
        a = as_meet_semilattice(p)
        struct, emb = _completion(a, args.kind)
        _emit(_structure_text(struct, emb, a, args.format, args.kind), args.out)
        return OK
    if args.format == "dot":
        text = to_dot(p)
    elif args.format == "text":
        text = serialize_poset(p)
    else:
        text = dumps(poset_to_json(p)) + "\n"
    _emit(text, args.out)
    return OK


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="finframe",
                                     description="Finite frames built from meet-semilattice bases.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        return p

    p = add("analyze", cmd_analyze, "structural facts about a poset")
    p.add_argument("input")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")

    p = add("complete", cmd_complete, "build a completion and its embedding")
    p.add_argument("input")
    p.add_argument("--kind", choices=COMPLETIONS, required=True)
    p.add_argument("--format", choices=("json", "dot", "text"), default="json")
    p.add_argument("--out")

    p = add("classify", cmd_classify, "full classification report")
    p.add_argument("input")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")

    p = add("verify", cmd_verify, "check a theorem on an instance or a family")
    p.add_argument("input", nargs="?")
    p.add_argument("--theorem", required=True, help="one of: " + ", ".join(THEOREMS))
    p.add_argument("--exhaustive", type=int, metavar="N")
    p.add_argument("--random", action="store_true")
    p.add_argument("--kind", choices=KINDS)
    p.add_argument("--size", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--count", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out")

    p = add("random", cmd_random, "draw a seeded random instance")
    p.add_argument("--kind", choices=KINDS, default="semilattice")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--method", choices=("closure_system", "exhaustive"), default="closure_system")
    p.add_argument("--format", choices=("text", "json", "dot"), default="text")
    p.add_argument("--out")

    p = add("export", cmd_export, "write a Hasse diagram or canonical JSON")
    p.add_argument("input")
    p.add_argument("--format", choices=("dot", "json", "text"), default="dot")
    p.add_argument("--kind", choices=COMPLETIONS, help="export a completion instead")
    p.add_argument("--out")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, FinframeError, UnknownTheorem) as exc:
        msg = f"unknown theorem {exc.args[0]!r}" if isinstance(exc, UnknownTheorem) else exc
        sys.stderr.write(f"finframe: error: {msg}\n")
        return USAGE
    except OSError as exc:
        sys.stderr.write(f"finframe: io error: {exc}\n")
        return IO


if __name__ == "__main__":
    sys.exit(main())
