"""JSON and DOT serialization for decorated digraphs.

Digraph JSON schema::

    {"vertices": ["v1", ...],
     "pairs": [{"a": "v1", "b": "v2",
                "state": "ordinary" | "special_to_a" | "special_to_b"}]}

Pairs not listed default to "no edge".  The serializer always emits ``a``
as the earlier vertex in the vertex list and orders pairs lexicographically,
so output is deterministic.
"""

from __future__ import annotations

import json

from .digraph import ORDINARY, Digraph, SpecialToward
from .errors import InputError

_STATES = ("ordinary", "special_to_a", "special_to_b")


def to_json_dict(g: Digraph) -> dict:
    pairs = []
    for u, w, st in g.pairs():
        if st is ORDINARY:
            state = "ordinary"
        else:
            state = "special_to_a" if st.head == u else "special_to_b"
        pairs.append({"a": u, "b": w, "state": state})
    return {"vertices": list(g.vertices), "pairs": pairs}


def from_json_dict(data) -> Digraph:
    if not isinstance(data, dict):
        raise InputError("digraph JSON must be an object")
    try:
        vertices = data["vertices"]
    except KeyError:
        raise InputError("digraph JSON needs a 'vertices' list") from None
    if not isinstance(vertices, list):
        raise InputError("'vertices' must be a list")
    entries = data.get("pairs", [])
    if not isinstance(entries, list):
        raise InputError("'pairs' must be a list")
    pairs = {}
    for entry in entries:
        if not isinstance(entry, dict):
            raise InputError(f"bad pair entry {entry!r}")
        try:
            a, b, state = entry["a"], entry["b"], entry["state"]
        except KeyError as exc:
            raise InputError(f"pair entry missing field {exc}") from None
        if state not in _STATES:
            raise InputError(f"unknown pair state {state!r}")
        if state == "ordinary":
            pairs[(a, b)] = ORDINARY
        elif state == "special_to_a":
            pairs[(a, b)] = SpecialToward(a)
        else:
            pairs[(a, b)] = SpecialToward(b)
    return Digraph(vertices, pairs)


def dumps(g: Digraph) -> str:
    return json.dumps(to_json_dict(g), indent=2, sort_keys=True) + "\n"


def loads(text: str) -> Digraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None
    return from_json_dict(data)


def load_file(path) -> Digraph:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def to_dot(g: Digraph, name: str = "raag") -> str:
    """GraphViz export: ordinary pairs become undirected strokes, special
    edges arrows into their head, special vertices filled black."""
    lines = [f"digraph {name} {{"]
    special = g.special_vertices()
    for v in g.vertices:
        if v in special:
            lines.append(f'  "{v}" [style=filled, fillcolor=black, fontcolor=white];')
        else:
            lines.append(f'  "{v}";')
    for u, w, st in g.pairs():
        if st is ORDINARY:
            lines.append(f'  "{u}" -> "{w}" [dir=none];')
        elif st.head == w:
            lines.append(f'  "{u}" -> "{w}";')
        else:
            lines.append(f'  "{w}" -> "{u}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
