"""Text, JSON and DOT encodings of finite posets.

Text grammar (UTF-8, line oriented; ``#`` starts a comment)::

    file     := line*
    line     := "elements:" name*  |  "covers:" pair*  |  blank
    pair     := name "<" name

``elements:`` and ``covers:`` may each appear on several lines; all
``elements:`` lines must precede the first ``covers:`` line.  Pairs may name
any strict comparability, the order is their reflexive-transitive closure.
The serializer emits one ``elements:`` line and one ``covers:`` line listing
the cover relation in index order, so serialize(parse(serialize(p))) is the
identity on bytes.

JSON form: ``{"elements": [...], "covers": [["a", "b"], ...]}``.
"""

from __future__ import annotations

import json
from typing import Iterable, Optional

from .core_order import Poset
from .errors import DuplicateName, ParseError, UnknownName


def _tokens(line: str) -> list[tuple[int, str]]:
    """Whitespace-separated tokens with their 1-based columns."""
    out = []
    col = 0
    n = len(line)
    while col < n:
        while col < n and line[col].isspace():
            col += 1
        start = col
        while col < n and not line[col].isspace():
            col += 1
        if start < col:
            out.append((start + 1, line[start:col]))
    return out


def parse_poset_text(text: str) -> Poset:
    names: list[str] = []
    index: dict[str, int] = {}
    pairs: list[tuple[int, int]] = []
    seen_covers = False
    seen_elements = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        head, sep, rest = line.partition(":")
        key = head.strip()
        if not sep or key not in ("elements", "covers"):
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError("expected 'elements:' or 'covers:'", lineno, col)
        offset = len(head) + 1
        toks = [(c + offset, t) for c, t in _tokens(rest)]
        if key == "elements":
            if seen_covers:
                raise ParseError("'elements:' after 'covers:'", lineno, 1)
            seen_elements = True
            for col, tok in toks:
                if "<" in tok:
                    raise ParseError(f"invalid element name {tok!r}", lineno, col)
                if tok in index:
                    raise DuplicateName(f"duplicate element name {tok!r}", lineno, col)
                index[tok] = len(names)
                names.append(tok)
        else:
            seen_covers = True
            for col, tok in toks:
                lo, sep2, hi = tok.partition("<")
                if not sep2 or not lo or not hi or "<" in hi:
                    raise ParseError(f"malformed pair {tok!r}; expected a<b", lineno, col)
                for nm, c in ((lo, col), (hi, col + len(lo) + 1)):
                    if nm not in index:
                        raise UnknownName(f"unknown element {nm!r}", lineno, c)
                pairs.append((index[lo], index[hi]))
    if not seen_elements or not names:
        raise ParseError("no elements declared", 1, 1)
    return Poset.from_pairs(names, pairs)


def parse_poset_json(data) -> Poset:
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict) or "elements" not in data:
        raise ParseError("JSON poset needs an 'elements' list")
    names = data["elements"]
    if not isinstance(names, list) or not all(isinstance(x, str) for x in names):
        raise ParseError("'elements' must be a list of strings")
    index: dict[str, int] = {}
    for nm in names:
        if nm in index:
            raise DuplicateName(f"duplicate element name {nm!r}")
        index[nm] = len(index)
    pairs = []
    for pair in data.get("covers", []):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ParseError(f"malformed pair {pair!r}")
        for nm in pair:
            if nm not in index:
                raise UnknownName(f"unknown element {nm!r}")
        pairs.append((index[pair[0]], index[pair[1]]))
    return Poset.from_pairs(names, pairs)


def parse_poset(spec: str) -> Poset:
    """Parse either encoding; JSON is recognised by a leading ``{``."""
    if spec.lstrip().startswith("{"):
        return parse_poset_json(spec)
    return parse_poset_text(spec)


def serialize_poset(p: Poset) -> str:
    pairs = " ".join(f"{p.names[i]}<{p.names[j]}" for i, j in p.covers())
    covers = "covers:" + (" " + pairs if pairs else "")
    return f"elements: {' '.join(p.names)}\n{covers}\n"


def poset_to_json(p: Poset) -> dict:
    return {"elements": list(p.names),
            "covers": [[p.names[i], p.names[j]] for i, j in p.covers()]}


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, no insignificant whitespace variation."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(p: Poset, pretty: Optional[Iterable[str]] = None, name: str = "hasse") -> str:
    """Hasse diagram as a plain digraph, cover edges pointing upwards."""
    pretty = list(pretty) if pretty is not None else list(p.names)
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for nm, pr in zip(p.names, pretty):
        lines.append(f"  {_dot_quote(nm)} [label={_dot_quote(pr)}];")
    for i, j in p.covers():
        lines.append(f"  {_dot_quote(p.names[i])} -> {_dot_quote(p.names[j])};")
    lines.append("}")
    return "\n".join(lines) + "\n"
