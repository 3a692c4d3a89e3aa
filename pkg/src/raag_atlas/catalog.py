"""Bundled digraphs: the decorated digraphs used by the golden tests.

Each entry is written in a tiny edge syntax: "a-b" is an ordinary edge,
"a>b" a special edge pointing at b.  The same graphs ship as JSON files
under ``data/`` for file-based CLI use; ``load`` builds from the table,
``load_resource`` parses the JSON file, and the test suite asserts the
two agree.
"""

from __future__ import annotations

from importlib import resources

from .digraph import ORDINARY, Digraph, SpecialToward
from .errors import InputError
from .serialize import loads

_TABLE: dict[str, tuple[str, tuple[str, ...]]] = {
    # the four-vertex digraph with one sinkhole and an obstructing triple
    "eq11": ("v1 v2 v3 v4", ("v2>v1", "v3>v1", "v4>v1", "v2-v3", "v3-v4")),
    # two sinkholes, buildable by two cones
    "eq12-left": ("v1 v2 v3 v4", ("v2>v1", "v2>v3", "v4>v1", "v4>v3", "v2-v4")),
    # the same square with one special vertex that is not a sinkhole
    "eq12-right": ("v1 v2 v3 v4", ("v1-v2", "v2-v3", "v4>v1", "v3-v4")),
    # construction stages for eq12-left
    "ex33-stage1": ("v1 v3", ()),
    "ex33-stage2": ("v1 v2 v3", ("v2>v1", "v2>v3")),
    # six-vertex cone-of-unions example and its middle stage
    "ex34": (
        "v1 v2 v3 v4 v5 v6",
        ("v1>v4", "v3>v6", "v3-v5", "v5>v2", "v5>v4", "v5>v6", "v1-v5"),
    ),
    "ex34-stage2": ("v1 v2 v3 v4 v6", ("v1>v4", "v3>v6")),
    # the directed triangle with finite group
    "mennicke": ("x y z", ("x>y", "y>z", "z>x")),
    # decorated triangles whose groups have torsion
    "torsion-triangle-1": ("x y z", ("y>x", "z>x", "z>y")),
    "torsion-triangle-2": ("x y z", ("y>x", "x-z", "z>y")),
    # metabelian triangles behind the membership obstruction
    "metabelian-triangle-first": ("x y z", ("z>x", "x-y", "y-z")),
    "metabelian-triangle-second": ("x y z", ("z>x", "z>y", "x-y")),
    # the two non-special line digraphs
    "line-mixed": ("z x y", ("z>x", "x-y")),
    "line-directed": ("z x y", ("z>x", "x>y")),
    # special but not of elementary type
    "lambda": ("z x y", ("z>x", "y>x")),
    # the two elementary-type obstructions among plain graphs
    "square": ("x y z w", ("x-y", "y-z", "z-w", "w-x")),
    "path4": ("x y z w", ("x-y", "y-z", "z-w")),
}


def names() -> list[str]:
    return sorted(_TABLE)


def build(name: str) -> Digraph:
    try:
        vertex_field, edges = _TABLE[name]
    except KeyError:
        raise InputError(
            f"unknown bundled digraph {name!r}; available: {', '.join(names())}"
        ) from None
    vertices = tuple(vertex_field.split())
    pairs = {}
    for edge in edges:
        if ">" in edge:
            a, b = edge.split(">")
            pairs[(a, b)] = SpecialToward(b)
        else:
            a, b = edge.split("-")
            pairs[(a, b)] = ORDINARY
    return Digraph(vertices, pairs)


def load(name: str) -> Digraph:
    return build(name)


def load_resource(name: str) -> Digraph:
    """Parse the bundled JSON file for a catalog entry."""
    if name not in _TABLE:
        raise InputError(f"unknown bundled digraph {name!r}")
    text = resources.files("raag_atlas.data").joinpath(f"{name}.json").read_text()
    return loads(text)
