"""Decorated digraph model: vertices plus a state for every unordered pair.

Each unordered pair of distinct vertices carries one of four states:

* no edge,
* an ordinary edge (both directed edges present; drawn as a single
  headless segment),
* a special edge pointing at one of the two endpoints (only that
  directed edge is present).

A vertex is *special* when some incident pair points at it; otherwise it
is *ordinary*.  A special vertex is a *sinkhole* when every incident pair
that carries an edge points at it.  Statuses are always derived from the
pair states, never stored on the graph.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional, Union

from .errors import InputError

# Internal pair-state codes, in enumeration order.  For a stored pair
# (a, b) with a before b in the vertex list, STATE_TO_A encodes the single
# directed edge (b, a) and STATE_TO_B the single directed edge (a, b).
STATE_NONE, STATE_ORDINARY, STATE_TO_A, STATE_TO_B = range(4)

# Swapping the stored endpoints of a pair exchanges the two special codes.
FLIP = (STATE_NONE, STATE_ORDINARY, STATE_TO_B, STATE_TO_A)

ENUMERATION_LIMIT = 7
ISOMORPHISM_LIMIT = 8


class _OrdinaryEdge:
    """Singleton marker for the ordinary (headless) pair state."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "ORDINARY"


ORDINARY = _OrdinaryEdge()


@dataclass(frozen=True)
class SpecialToward:
    """Special-edge pair state: the lone directed edge points at ``head``."""

    head: str


PairState = Union[_OrdinaryEdge, SpecialToward]


class VertexStatus(NamedTuple):
    special: bool
    sinkhole: bool


def pair_position(i: int, j: int, n: int) -> int:
    """Index of pair (i, j), i < j, in the lexicographic pair list."""
    return i * n - i * (i + 3) // 2 + j - 1


def pair_list(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


class Digraph:
    """Immutable decorated digraph.

    ``vertices`` is an ordered tuple of distinct string ids; the state of
    each unordered pair is held in a flat tuple in lexicographic pair
    order.  All operations treat instances as values.
    """

    __slots__ = ("vertices", "codes", "_index", "_special")

    def __init__(
        self,
        vertices: Iterable[str],
        pairs: Optional[Mapping[tuple[str, str], PairState]] = None,
    ):
        vs = tuple(vertices)
        for v in vs:
            if not isinstance(v, str) or not v:
                raise InputError(f"vertex ids must be non-empty strings, got {v!r}")
        if len(set(vs)) != len(vs):
            raise InputError("duplicate vertex ids")
        index = {v: i for i, v in enumerate(vs)}
        n = len(vs)
        codes = [STATE_NONE] * (n * (n - 1) // 2)
        seen = set()
        for (u, w), state in (pairs or {}).items():
            if u not in index or w not in index:
                raise InputError(f"unknown vertex in pair ({u!r}, {w!r})")
            if u == w:
                raise InputError(f"loops are not allowed: ({u!r}, {w!r})")
            i, j = sorted((index[u], index[w]))
            if (i, j) in seen:
                raise InputError(f"pair ({u!r}, {w!r}) given twice")
            seen.add((i, j))
            pos = pair_position(i, j, n)
            if state is ORDINARY:
                codes[pos] = STATE_ORDINARY
            elif isinstance(state, SpecialToward):
                if state.head == vs[i]:
                    codes[pos] = STATE_TO_A
                elif state.head == vs[j]:
                    codes[pos] = STATE_TO_B
                else:
                    raise InputError(
                        f"special head {state.head!r} is not an endpoint of "
                        f"({u!r}, {w!r})"
                    )
            else:
                raise InputError(f"bad pair state {state!r}")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "codes", tuple(codes))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_special", None)

    def __setattr__(self, name, value):
        raise AttributeError("Digraph is immutable")

    @classmethod
    def from_codes(cls, vertices: tuple[str, ...], codes: tuple[int, ...]) -> "Digraph":
        """Fast constructor from a prevalidated flat state tuple."""
        g = object.__new__(cls)
        object.__setattr__(g, "vertices", vertices)
        object.__setattr__(g, "codes", tuple(codes))
        object.__setattr__(g, "_index", {v: i for i, v in enumerate(vertices)})
        object.__setattr__(g, "_special", None)
        return g

    @classmethod
    def from_directed_edges(
        cls, vertices: Iterable[str], edges: Iterable[tuple[str, str]]
    ) -> "Digraph":
        """Build from a raw directed-edge set (no loops allowed)."""
        vs = tuple(vertices)
        edge_set = set()
        for u, w in edges:
            if u == w:
                raise InputError(f"loop edge ({u!r}, {w!r})")
            edge_set.add((u, w))
        pairs: dict[tuple[str, str], PairState] = {}
        for u, w in sorted(edge_set):
            if (w, u) in edge_set:
                pairs[(min(u, w), max(u, w))] = ORDINARY
            else:
                pairs[(u, w)] = SpecialToward(w)
        # dedupe the two ordinary directions
        cleaned = {}
        for (u, w), st in pairs.items():
            key = tuple(sorted((u, w)))
            cleaned[key] = st
        return cls(vs, cleaned)

    # -- basic accessors ------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise InputError(f"unknown vertex {v!r}") from None

    def code_between(self, i: int, j: int) -> int:
        """Pair-state code between vertex indices i and j, oriented to the
        argument order: STATE_TO_A points at i, STATE_TO_B at j."""
        if i > j:
            return FLIP[self.codes[pair_position(j, i, self.n)]]
        return self.codes[pair_position(i, j, self.n)]

    def state(self, u: str, w: str) -> Optional[PairState]:
        """Public pair state between two vertices (None when no edge)."""
        i, j = self.index(u), self.index(w)
        if i == j:
            raise InputError("state() needs two distinct vertices")
        a, b = sorted((i, j))
        code = self.codes[pair_position(a, b, self.n)]
        if code == STATE_NONE:
            return None
        if code == STATE_ORDINARY:
            return ORDINARY
        head = self.vertices[a] if code == STATE_TO_A else self.vertices[b]
        return SpecialToward(head)

    def pairs(self) -> Iterator[tuple[str, str, PairState]]:
        """Yield (u, w, state) for every pair carrying an edge, in
        lexicographic index order with u before w in the vertex list."""
        n = self.n
        for pos, (i, j) in enumerate(pair_list(n)):
            code = self.codes[pos]
            if code == STATE_NONE:
                continue
            u, w = self.vertices[i], self.vertices[j]
            if code == STATE_ORDINARY:
                yield u, w, ORDINARY
            elif code == STATE_TO_A:
                yield u, w, SpecialToward(u)
            else:
                yield u, w, SpecialToward(w)

    def directed_edges(self) -> tuple[tuple[str, str], ...]:
        """The raw directed-edge set encoded by the pair states."""
        out = []
        for u, w, st in self.pairs():
            if st is ORDINARY:
                out.append((u, w))
                out.append((w, u))
            elif st.head == w:
                out.append((u, w))
            else:
                out.append((w, u))
        return tuple(sorted(out))

    # -- vertex statuses (always derived) --------------------------------

    def special_indices(self) -> frozenset[int]:
        cached = self._special
        if cached is not None:
            return cached
        special = set()
        for pos, (i, j) in enumerate(pair_list(self.n)):
            code = self.codes[pos]
            if code == STATE_TO_A:
                special.add(i)
            elif code == STATE_TO_B:
                special.add(j)
        result = frozenset(special)
        object.__setattr__(self, "_special", result)
        return result

    def special_vertices(self) -> frozenset[str]:
        return frozenset(self.vertices[i] for i in self.special_indices())

    def is_special_vertex(self, v: str) -> bool:
        return self.index(v) in self.special_indices()

    def is_sinkhole(self, v: str) -> bool:
        i = self.index(v)
        if i not in self.special_indices():
            return False
        for j in range(self.n):
            if j == i:
                continue
            code = self.code_between(i, j)
            if code != STATE_NONE and code != STATE_TO_A:
                return False
        return True

    def vertex_status(self, v: str) -> VertexStatus:
        return VertexStatus(self.is_special_vertex(v), self.is_sinkhole(v))

    # -- underlying undirected structure ---------------------------------

    def adjacent(self, u: str, w: str) -> bool:
        return self.code_between(self.index(u), self.index(w)) != STATE_NONE

    def neighbors(self, v: str) -> tuple[str, ...]:
        i = self.index(v)
        return tuple(
            self.vertices[j]
            for j in range(self.n)
            if j != i and self.code_between(i, j) != STATE_NONE
        )

    def components(self) -> list[tuple[str, ...]]:
        """Connected components of the underlying undirected graph,
        ordered by their smallest vertex index."""
        return [
            tuple(self.vertices[i] for i in comp)
            for comp in component_indices(self, tuple(range(self.n)))
        ]

    def relabel(self, mapping: Mapping[str, str]) -> "Digraph":
        new_vs = tuple(mapping.get(v, v) for v in self.vertices)
        if len(set(new_vs)) != len(new_vs):
            raise InputError("relabeling collapses vertices")
        return Digraph.from_codes(new_vs, self.codes)

    # -- value semantics --------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.vertices == other.vertices and self.codes == other.codes

    def __hash__(self) -> int:
        return hash((self.vertices, self.codes))

    def __repr__(self) -> str:
        edges = ", ".join(
            f"{u}-{w}" if st is ORDINARY else f"{u}>{st.head}" if st.head == w else f"{w}>{st.head}"
            for u, w, st in self.pairs()
        )
        return f"Digraph({list(self.vertices)!r}: {edges or 'no edges'})"


def component_indices(g: Digraph, sub: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Connected components (as sorted index tuples) of the underlying
    undirected graph induced on the index subset ``sub``."""
    remaining = set(sub)
    comps = []
    for start in sub:
        if start not in remaining:
            continue
        seen = {start}
        frontier = [start]
        while frontier:
            i = frontier.pop()
            for j in remaining:
                if j not in seen and g.code_between(i, j) != STATE_NONE:
                    seen.add(j)
                    frontier.append(j)
        remaining -= seen
        comps.append(tuple(sorted(seen)))
    return comps


def equal_as_labeled(g1: Digraph, g2: Digraph) -> bool:
    """Equality by vertex ids and pair states, ignoring vertex order."""
    if set(g1.vertices) != set(g2.vertices):
        return False
    for u, w in itertools.combinations(g1.vertices, 2):
        if g1.state(u, w) != g2.state(u, w):
            return False
    return True


# -- constructions ---------------------------------------------------------


def induced(g: Digraph, keep: Iterable[str]) -> Digraph:
    """Induced subdigraph on ``keep``: pair states restricted to the subset.

    Vertex statuses inside the result are derived from its own edges; the
    statuses inherited from the ambient graph are reported separately by
    :func:`induced_with_status`.
    """
    keep_list = list(keep)
    idxs = [g.index(v) for v in keep_list]
    if len(set(idxs)) != len(idxs):
        raise InputError("duplicate vertices in induced subset")
    order = sorted(range(len(idxs)), key=lambda t: idxs[t])
    sub_idx = [idxs[t] for t in order]
    sub_vs = tuple(g.vertices[i] for i in sub_idx)
    m = len(sub_vs)
    codes = [STATE_NONE] * (m * (m - 1) // 2)
    for a in range(m):
        for b in range(a + 1, m):
            codes[pair_position(a, b, m)] = g.code_between(sub_idx[a], sub_idx[b])
    return Digraph.from_codes(sub_vs, tuple(codes))


def induced_with_status(
    g: Digraph, keep: Iterable[str]
) -> tuple[Digraph, dict[str, VertexStatus]]:
    """Induced subdigraph together with each kept vertex's status in the
    ambient graph (the statuses an induced subdigraph inherits)."""
    sub = induced(g, keep)
    return sub, {v: g.vertex_status(v) for v in sub.vertices}


def disjoint_union(g1: Digraph, g2: Digraph) -> Digraph:
    return disjoint_union_with_report(g1, g2)[0]


def disjoint_union_with_report(
    g1: Digraph, g2: Digraph
) -> tuple[Digraph, dict[str, str]]:
    """Disjoint union; colliding ids on the right operand are renamed by
    appending primes.  Returns the union and the rename map applied."""
    taken = set(g1.vertices)
    renames: dict[str, str] = {}
    new_right = []
    for v in g2.vertices:
        name = v
        while name in taken:
            name = name + "'"
        if name != v:
            renames[v] = name
        taken.add(name)
        new_right.append(name)
    n1, n2 = g1.n, g2.n
    vs = g1.vertices + tuple(new_right)
    n = n1 + n2
    codes = [STATE_NONE] * (n * (n - 1) // 2)
    for (i, j), code in zip(pair_list(n1), g1.codes):
        codes[pair_position(i, j, n)] = code
    for (i, j), code in zip(pair_list(n2), g2.codes):
        codes[pair_position(n1 + i, n1 + j, n)] = code
    return Digraph.from_codes(vs, tuple(codes)), renames


def cone(g: Digraph, tip: str, special: Optional[Iterable[str]] = None) -> Digraph:
    """Cone over ``g``: a fresh ordinary vertex joined ordinarily to the
    ordinary vertices and specially toward the special vertices.

    ``special`` overrides the set of vertices wired as special (used when
    replaying decomposition trees, whose leaves carry statuses that a bare
    single-vertex digraph cannot encode); by default the statuses derived
    from ``g`` are used.
    """
    if g.n == 0:
        raise InputError("cannot cone over the empty digraph")
    if tip in g._index:
        raise InputError(f"cone tip {tip!r} collides with an existing vertex")
    if special is None:
        special_set = g.special_vertices()
    else:
        special_set = frozenset(special)
        unknown = special_set - set(g.vertices)
        if unknown:
            raise InputError(f"special override names unknown vertices {sorted(unknown)}")
    base, _ = disjoint_union_with_report(g, Digraph((tip,)))
    n = base.n
    codes = list(base.codes)
    t = n - 1
    for i, v in enumerate(g.vertices):
        pos = pair_position(i, t, n)
        codes[pos] = STATE_TO_A if v in special_set else STATE_ORDINARY
    return Digraph.from_codes(base.vertices, tuple(codes))


# -- enumeration and isomorphism -------------------------------------------


def generated_vertex_names(n: int) -> tuple[str, ...]:
    return tuple(f"v{i + 1}" for i in range(n))


def enumerate_codes(n: int) -> Iterator[tuple[int, ...]]:
    """All pair-state tuples for n labeled vertices, lexicographically
    (leftmost pair varies slowest)."""
    if not 1 <= n <= ENUMERATION_LIMIT:
        raise InputError(f"enumeration supports 1 <= n <= {ENUMERATION_LIMIT}")
    return itertools.product(range(4), repeat=n * (n - 1) // 2)


def enumerate_digraphs(n: int) -> Iterator[Digraph]:
    """All 4^(n(n-1)/2) labeled digraphs on vertices v1..vn."""
    names = generated_vertex_names(n)
    for codes in enumerate_codes(n):
        yield Digraph.from_codes(names, codes)


def permuted_codes(
    codes: tuple[int, ...], n: int, perm: tuple[int, ...]
) -> tuple[int, ...]:
    """The state tuple after relabeling vertex index i as perm[i]."""
    out = [STATE_NONE] * len(codes)
    for pos, (i, j) in enumerate(pair_list(n)):
        s = codes[pos]
        a, b = perm[i], perm[j]
        if a > b:
            a, b = b, a
            s = FLIP[s]
        out[pair_position(a, b, n)] = s
    return tuple(out)


def canonical_codes(g: Digraph) -> tuple[int, ...]:
    """Minimum state tuple over all vertex permutations."""
    if g.n > ISOMORPHISM_LIMIT:
        raise InputError(f"isomorphism supports at most {ISOMORPHISM_LIMIT} vertices")
    best = None
    for perm in itertools.permutations(range(g.n)):
        cand = permuted_codes(g.codes, g.n, perm)
        if best is None or cand < best:
            best = cand
    return best if best is not None else ()


def are_isomorphic(
    g1: Digraph, g2: Digraph
) -> tuple[bool, Optional[dict[str, str]]]:
    """Brute-force isomorphism test; on success also returns a witness
    vertex bijection g1 -> g2."""
    if max(g1.n, g2.n) > ISOMORPHISM_LIMIT:
        raise InputError(f"isomorphism supports at most {ISOMORPHISM_LIMIT} vertices")
    if g1.n != g2.n:
        return False, None
    if sorted(g1.codes) != sorted(g2.codes):
        return False, None
    for perm in itertools.permutations(range(g1.n)):
        if permuted_codes(g1.codes, g1.n, perm) == g2.codes:
            mapping = {g1.vertices[i]: g2.vertices[perm[i]] for i in range(g1.n)}
            return True, mapping
    return False, None
