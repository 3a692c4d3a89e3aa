"""Specialness and elementary-type classification, by two routes each.

Specialness ("every special vertex is a sinkhole") is decided directly
from the sinkhole definition and, independently, by scanning for the
seven three-vertex obstruction patterns.

Elementary type is decided by the deconstruction procedure (split
disconnected graphs, peel off a universal ordinary vertex as a cone tip)
which yields a replayable :class:`DecompositionTree`, and independently
by scanning for the square / decorated-four-path / two-arrows-into-a-sink
obstruction patterns.  The two verdicts agree on every digraph; the
census cross-checks this exhaustively.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

from .digraph import (
    STATE_NONE,
    STATE_ORDINARY,
    STATE_TO_A,
    STATE_TO_B,
    Digraph,
    component_indices,
    cone,
    disjoint_union,
    equal_as_labeled,
)
from .errors import InternalCheckError


# -- decomposition trees ----------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    """A starting vertex; carries its status in the ambient digraph."""

    vertex: str
    special: bool


@dataclass(frozen=True)
class Disjoint:
    """Disjoint union of at least two construction subtrees."""

    parts: tuple


@dataclass(frozen=True)
class Cone:
    """Cone with ordinary tip over the digraph built by ``base``."""

    tip: str
    base: "Tree"


Tree = Union[Leaf, Disjoint, Cone]


def tree_leaves(tree: Tree) -> tuple[Leaf, ...]:
    if isinstance(tree, Leaf):
        return (tree,)
    if isinstance(tree, Cone):
        return tree_leaves(tree.base)
    return tuple(leaf for part in tree.parts for leaf in tree_leaves(part))


def starting_vertices(tree: Tree) -> frozenset[str]:
    """The leaf vertex set (the bricks the construction starts from)."""
    return frozenset(leaf.vertex for leaf in tree_leaves(tree))


def replay(tree: Tree) -> Digraph:
    """Rebuild the digraph a decomposition tree describes."""
    g, _ = _replay(tree)
    return g


def _replay(tree: Tree) -> tuple[Digraph, frozenset[str]]:
    if isinstance(tree, Leaf):
        return Digraph((tree.vertex,)), frozenset({tree.vertex} if tree.special else ())
    if isinstance(tree, Disjoint):
        if len(tree.parts) < 2:
            raise InternalCheckError("Disjoint node with fewer than two parts")
        graphs, marks = zip(*(_replay(p) for p in tree.parts))
        ids = [v for g in graphs for v in g.vertices]
        if len(set(ids)) != len(ids):
            raise InternalCheckError("decomposition tree reuses a vertex id")
        acc = graphs[0]
        for g in graphs[1:]:
            acc = disjoint_union(acc, g)
        return acc, frozenset().union(*marks)
    base, marks = _replay(tree.base)
    return cone(base, tree.tip, special=marks), marks


def tree_to_json(tree: Tree) -> dict:
    if isinstance(tree, Leaf):
        return {"leaf": {"vertex": tree.vertex, "special": tree.special}}
    if isinstance(tree, Disjoint):
        return {"union": [tree_to_json(p) for p in tree.parts]}
    return {"cone": {"tip": tree.tip, "base": tree_to_json(tree.base)}}


# -- specialness ------------------------------------------------------------


class SpecialnessVerdict(NamedTuple):
    ok: bool
    # offending special vertex and an incident pair not pointing at it
    offender: Optional[tuple[str, tuple[str, str]]]


def is_special(g: Digraph) -> SpecialnessVerdict:
    """True when every special vertex is a sinkhole."""
    special = g.special_indices()
    for i in sorted(special):
        for j in range(g.n):
            if j == i:
                continue
            code = g.code_between(i, j)
            if code not in (STATE_NONE, STATE_TO_A):
                u, w = sorted((i, j))
                return SpecialnessVerdict(
                    False, (g.vertices[i], (g.vertices[u], g.vertices[w]))
                )
    return SpecialnessVerdict(True, None)


@dataclass(frozen=True)
class ForbiddenWitness:
    """An induced-subdigraph obstruction, with the matched pattern id."""

    kind: str  # "nonspecial-triple" | "lambda" | "square" | "path4"
    vertices: tuple[str, ...]
    pattern: str


# The seven three-vertex obstructions to specialness.  Roles (z, x, y):
# the center x has an incoming special edge from z and a second incident
# pair {x, y} that is either an outgoing special edge ("in-out") or an
# ordinary edge ("in-ordinary"); the remaining pair {z, y} takes any of
# its four states.  "in-ordinary" with the third pair pointing at z
# coincides with "in-out" plus an ordinary base after rotating the roles,
# so it is not listed separately.
_THIRD_NAME = {
    STATE_NONE: "apart",
    STATE_ORDINARY: "ordinary",
}


def _third_label(code: int, z_is_lower: bool) -> str:
    if code in _THIRD_NAME:
        return _THIRD_NAME[code]
    toward_lower = code == STATE_TO_A
    if toward_lower == z_is_lower:
        return "toward-z"
    return "toward-y"


def forbidden_triples(g: Digraph) -> list[ForbiddenWitness]:
    """All vertex triples matching one of the seven specialness
    obstructions, one witness per (triple, pattern)."""
    found: dict[tuple[tuple[int, ...], str], tuple[int, ...]] = {}
    for combo in itertools.combinations(range(g.n), 3):
        for z, x, y in itertools.permutations(combo):
            zx = g.code_between(z, x)
            if not _points_at(zx, z, x):
                continue
            xy = g.code_between(x, y)
            third = g.code_between(min(z, y), max(z, y))
            if _points_at(xy, x, y):
                master = "in-out"
            elif xy == STATE_ORDINARY:
                master = "in-ordinary"
            else:
                continue
            label = _third_label(third, z_is_lower=z < y)
            if master == "in-ordinary" and label == "toward-z":
                continue  # same pattern as in-out+ordinary with rotated roles
            pattern = f"{master}+{label}"
            key = (combo, pattern)
            roles = (z, x, y)
            if key not in found or roles < found[key]:
                found[key] = roles
    out = []
    for (combo, pattern), (z, x, y) in sorted(found.items()):
        out.append(
            ForbiddenWitness(
                kind="nonspecial-triple",
                vertices=(g.vertices[z], g.vertices[x], g.vertices[y]),
                pattern=pattern,
            )
        )
    return out


def _points_at(code_ij: int) -> bool:
    """Is the state from code_between(i, j) the single edge into j?"""
    return code_ij == STATE_TO_B


# -- elementary type: deconstruction route -----------------------------------


class DecompositionVerdict(NamedTuple):
    ok: bool
    tree: Optional[Tree]
    # vertex set of the stuck induced subdigraph, when the recursion fails
    stuck: Optional[tuple[str, ...]]
    # specialness offender, when the digraph is not even special
    offender: Optional[tuple[str, tuple[str, str]]]


def is_elementary_type_decomp(g: Digraph) -> DecompositionVerdict:
    """Decide elementary type by deconstruction.

    A special digraph is peeled recursively: disconnected graphs split
    into components; connected graphs must own an ordinary vertex
    adjacent to all others, which is removed as a cone tip (the lowest
    index such vertex, for deterministic trees).  On success the verdict
    carries a tree whose replay reproduces the digraph.
    """
    ok, offender = is_special(g)
    if not ok:
        return DecompositionVerdict(False, None, None, offender)
    if g.n == 0:
        # the empty digraph counts as the empty disjoint union
        return DecompositionVerdict(True, None, None, None)
    special = g.special_indices()
    stuck: list[tuple[int, ...]] = []

    def rec(sub: tuple[int, ...]) -> Optional[Tree]:
        if len(sub) == 1:
            v = sub[0]
            return Leaf(g.vertices[v], v in special)
        comps = component_indices(g, sub)
        if len(comps) > 1:
            parts = []
            for comp in comps:
                t = rec(comp)
                if t is None:
                    return None
                parts.append(t)
            return Disjoint(tuple(parts))
        for u in sub:
            if u in special:
                continue
            if all(v == u or g.code_between(u, v) != STATE_NONE for v in sub):
                _assert_tip_forcing(g, u, sub, special)
                rest = rec(tuple(v for v in sub if v != u))
                if rest is None:
                    return None
                return Cone(g.vertices[u], rest)
        if not stuck:
            stuck.append(sub)
        return None

    tree = rec(tuple(range(g.n)))
    if tree is None:
        bad = tuple(g.vertices[i] for i in stuck[0])
        return DecompositionVerdict(False, None, bad, None)
    return DecompositionVerdict(True, tree, None, None)


def _assert_tip_forcing(g, u, sub, special):
    # in a special digraph the edges of a universal ordinary vertex are
    # forced: ordinary to ordinary vertices, special toward special ones
    for v in sub:
        if v == u:
            continue
        code = g.code_between(u, v)
        expected = STATE_TO_B if v in special else STATE_ORDINARY
        # code_between(u, v) orients STATE_TO_B toward max(u, v)
        if v < u:
            expected = STATE_TO_A if v in special else STATE_ORDINARY
        if code != expected:
            raise InternalCheckError(
                f"cone-tip forcing violated at {g.vertices[u]!r}/{g.vertices[v]!r}"
            )


# -- elementary type: obstruction-pattern route ------------------------------


class ForbiddenVerdict(NamedTuple):
    ok: bool
    witness: Optional[ForbiddenWitness]


def is_elementary_type_forbidden(g: Digraph) -> ForbiddenVerdict:
    """Decide elementary type by scanning the obstruction catalog: the
    digraph must be special and contain no induced two-arrows-into-a-sink
    ("lambda"), all-ordinary square, or decorated four-path."""
    ok, _ = is_special(g)
    if not ok:
        return ForbiddenVerdict(False, forbidden_triples(g)[0])
    witness = _find_lambda(g) or _find_square(g) or _find_path4(g)
    return ForbiddenVerdict(witness is None, witness)


def _find_lambda(g: Digraph) -> Optional[ForbiddenWitness]:
    # z -> x <- y with {z, y} apart, x special, y and z ordinary
    special = g.special_indices()
    for x in range(g.n):
        if x not in special:
            continue
        tails = [
            t
            for t in range(g.n)
            if t != x and _points_at(g.code_between(t, x), t, x) and t not in special
        ]
        for z, y in itertools.combinations(tails, 2):
            if g.code_between(z, y) == STATE_NONE:
                return ForbiddenWitness(
                    kind="lambda",
                    vertices=(g.vertices[z], g.vertices[x], g.vertices[y]),
                    pattern="lambda",
                )
    return None


_SQUARE_CYCLES = ((0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 1, 3))


def _find_square(g: Digraph) -> Optional[ForbiddenWitness]:
    # four ordinary vertices in an ordinary 4-cycle, both diagonals absent
    special = g.special_indices()
    for combo in itertools.combinations(range(g.n), 4):
        if any(v in special for v in combo):
            continue
        for cyc in _SQUARE_CYCLES:
            a, b, c, d = (combo[t] for t in cyc)
            if (
                g.code_between(a, b) == STATE_ORDINARY
                and g.code_between(b, c) == STATE_ORDINARY
                and g.code_between(c, d) == STATE_ORDINARY
                and g.code_between(d, a) == STATE_ORDINARY
                and g.code_between(a, c) == STATE_NONE
                and g.code_between(b, d) == STATE_NONE
            ):
                return ForbiddenWitness(
                    kind="square",
                    vertices=tuple(g.vertices[v] for v in (a, b, c, d)),
                    pattern="square",
                )
    return None


def _find_path4(g: Digraph) -> Optional[ForbiddenWitness]:
    # x - y - z - w: middle pair ordinary with ordinary endpoints y, z;
    # {x,y} carries the directed edge (y,x) and {z,w} the directed edge
    # (z,w), each ordinary or special; the other three pairs are absent.
    # The outer vertices x, w are unconstrained.
    special = g.special_indices()
    for combo in itertools.combinations(range(g.n), 4):
        for y, z in itertools.permutations(combo, 2):
            if y > z:
                continue  # path reversal symmetry
            if g.code_between(y, z) != STATE_ORDINARY:
                continue
            if y in special or z in special:
                continue
            rest = [v for v in combo if v not in (y, z)]
            for x, w in (rest, rest[::-1]):
                xy = g.code_between(x, y)
                zw = g.code_between(z, w)
                if not (xy == STATE_ORDINARY or _points_at(xy, y, x)):
                    continue
                if not (zw == STATE_ORDINARY or _points_at(zw, z, w)):
                    continue
                if (
                    g.code_between(x, z) == STATE_NONE
                    and g.code_between(x, w) == STATE_NONE
                    and g.code_between(y, w) == STATE_NONE
                ):
                    return ForbiddenWitness(
                        kind="path4",
                        vertices=tuple(g.vertices[v] for v in (x, y, z, w)),
                        pattern="path4",
                    )
    return None


# -- convenience -------------------------------------------------------------


def classify(g: Digraph) -> dict:
    """Run both routes and package a JSON-friendly verdict."""
    sp = is_special(g)
    decomp = is_elementary_type_decomp(g)
    forb = is_elementary_type_forbidden(g)
    if decomp.ok != forb.ok:
        raise InternalCheckError(
            f"classifier disagreement on {g!r}: "
            f"deconstruction={decomp.ok} patterns={forb.ok}"
        )
    if decomp.ok and decomp.tree is not None:
        if not equal_as_labeled(replay(decomp.tree), g):
            raise InternalCheckError(f"tree replay failed to reproduce {g!r}")
    out: dict = {
        "special": sp.ok,
        "elementary_type": decomp.ok,
        "offender": None,
        "witness": None,
        "tree": None,
        "stuck": None,
        "starting_vertices": None,
    }
    if sp.offender is not None:
        out["offender"] = {"vertex": sp.offender[0], "pair": list(sp.offender[1])}
    if forb.witness is not None:
        out["witness"] = {
            "kind": forb.witness.kind,
            "vertices": list(forb.witness.vertices),
            "pattern": forb.witness.pattern,
        }
    if decomp.tree is not None:
        out["tree"] = tree_to_json(decomp.tree)
        out["starting_vertices"] = sorted(starting_vertices(decomp.tree))
    if decomp.stuck is not None:
        out["stuck"] = list(decomp.stuck)
    return out
