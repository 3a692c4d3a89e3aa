"""Unitriangular lifts and the triple-product vanishing scan.

Matrices in the group of n x n upper unitriangular matrices over Z/p are
flat tuples of their strictly-upper entries, row by row.  A lift request
prescribes the superdiagonal entries of a homomorphism from a digraph
group per vertex (via characters) and searches the remaining free
entries; searches are depth-first over vertices in input order with free
entries in lexicographic order, checking a relator as soon as both of
its endpoints are assigned, so the first witness found is the
lexicographically least.

The scan pairs the two lift criteria: "defined" asks for a lift into the
4 x 4 group modulo its center, "vanishing" for a lift into the full
4 x 4 group; a defined-but-not-vanishing triple of characters is a
violation (none are expected over elementary-type digraphs).
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from typing import Optional

from .digraph import ORDINARY, Digraph
from .errors import BudgetError, InputError, InternalCheckError
from .padic import validate_prime_power

DEFAULT_SCAN_BUDGET = 20000


class UniTri:
    """Matrix arithmetic for n in {3, 4}, entries mod p."""

    def __init__(self, n: int, p: int):
        if n not in (3, 4):
            raise InputError("only 3x3 and 4x4 unitriangular groups are supported")
        self.n = n
        self.p = p
        self.identity = (0,) * (3 if n == 3 else 6)

    def mul(self, A, B):
        p = self.p
        if self.n == 3:
            a12, a13, a23 = A
            b12, b13, b23 = B
            return ((a12 + b12) % p, (a13 + b13 + a12 * b23) % p, (a23 + b23) % p)
        a12, a13, a14, a23, a24, a34 = A
        b12, b13, b14, b23, b24, b34 = B
        return (
            (a12 + b12) % p,
            (a13 + b13 + a12 * b23) % p,
            (a14 + b14 + a12 * b24 + a13 * b34) % p,
            (a23 + b23) % p,
            (a24 + b24 + a23 * b34) % p,
            (a34 + b34) % p,
        )

    def inv(self, A):
        p = self.p
        if self.n == 3:
            a12, a13, a23 = A
            return ((-a12) % p, (-a13 + a12 * a23) % p, (-a23) % p)
        a12, a13, a14, a23, a24, a34 = A
        return (
            (-a12) % p,
            (-a13 + a12 * a23) % p,
            (-a14 + a12 * a24 + a13 * a34 - a12 * a23 * a34) % p,
            (-a23) % p,
            (-a24 + a23 * a34) % p,
            (-a34) % p,
        )

    def power(self, A, e: int):
        # plain square-and-multiply; no group-exponent shortcuts, since
        # the exponent of these groups varies with p
        if e < 0:
            return self.power(self.inv(A), -e)
        out = self.identity
        base = A
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def commutator(self, A, B):
        return self.mul(self.mul(A, B), self.mul(self.inv(A), self.inv(B)))

    def conjugate(self, A, B):
        """A B A^-1."""
        return self.mul(self.mul(A, B), self.inv(A))


def u3_generators(p: int):
    """The standard generators: A (1,2)-elementary, B (2,3)-elementary,
    C (1,3)-elementary; [A, B] = C."""
    A = (1, 0, 0)
    B = (0, 0, 1)
    C = (0, 1, 0)
    return A, B, C


# -- relator checking ----------------------------------------------------------


class _RelatorCache:
    """Memoized per-(n, p, q) pair checks between assigned matrices."""

    def __init__(self, n: int, p: int, q: int):
        self.ops = UniTri(n, p)
        self.q = q
        self._powers: dict = {}
        self._checks: dict = {}

    def power_1q(self, M):
        out = self._powers.get(M)
        if out is None:
            out = self.ops.power(M, 1 + self.q)
            self._powers[M] = out
        return out

    def ok(self, m_u, m_w, kind: str) -> bool:
        """kind "ordinary": commutation; kind "special": conjugation by
        m_w raises m_u to the 1+q power."""
        key = (m_u, m_w, kind)
        out = self._checks.get(key)
        if out is None:
            if kind == "ordinary":
                out = self.ops.mul(m_u, m_w) == self.ops.mul(m_w, m_u)
            else:
                out = self.ops.conjugate(m_w, m_u) == self.power_1q(m_u)
            self._checks[key] = out
        return out


def _pair_constraints(g: Digraph):
    """(i, j, kind, head_index) per edge-carrying pair, index based."""
    out = []
    for u, w, st in g.pairs():
        i, j = g.index(u), g.index(w)
        if st is ORDINARY:
            out.append((i, j, "ordinary", -1))
        else:
            out.append((i, j, "special", g.index(st.head)))
    return out


def relator_holds(assignment: dict, g: Digraph, p: int, q: int) -> bool:
    """Full, uncached relator check for a complete vertex assignment."""
    ms = [assignment[v] for v in g.vertices]
    n = 3 if len(ms[0]) == 3 else 4
    ops = UniTri(n, p)
    for i, j, kind, head in _pair_constraints(g):
        if kind == "ordinary":
            if ops.mul(ms[i], ms[j]) != ops.mul(ms[j], ms[i]):
                return False
        else:
            tail = j if head == i else i
            lhs = ops.conjugate(ms[head], ms[tail])
            if lhs != ops.power(ms[tail], 1 + q):
                return False
    return True


# -- searches -------------------------------------------------------------------


def _search(g: Digraph, q: int, cache: _RelatorCache, candidates) -> Optional[dict]:
    """DFS over vertices in order; candidates[i] lists the admissible
    matrices for vertex i in lexicographic order."""
    n_vertices = g.n
    by_later: list[list[tuple[int, str, int]]] = [[] for _ in range(n_vertices)]
    for i, j, kind, head in _pair_constraints(g):
        a, b = min(i, j), max(i, j)
        by_later[b].append((a, kind, head))
    chosen: list = [None] * n_vertices

    def step(i: int) -> bool:
        if i == n_vertices:
            return True
        for m in candidates[i]:
            ok = True
            for a, kind, head in by_later[i]:
                other = chosen[a]
                if kind == "ordinary":
                    if not cache.ok(m, other, "ordinary"):
                        ok = False
                        break
                else:
                    if head == i:
                        if not cache.ok(other, m, "special"):
                            ok = False
                            break
                    else:
                        if not cache.ok(m, other, "special"):
                            ok = False
                            break
            if ok:
                chosen[i] = m
                if step(i + 1):
                    return True
                chosen[i] = None
        return False

    if step(0):
        return {v: chosen[i] for i, v in enumerate(g.vertices)}
    return None


def find_hom_u3(g: Digraph, p: int, q: int, alpha: dict, beta: dict) -> Optional[dict]:
    """A homomorphism into the 3x3 group whose (1,2) and (2,3) characters
    are alpha and beta; the (1,3) entry is free per vertex."""
    cache = _RelatorCache(3, p, q)
    candidates = [
        [(alpha[v] % p, e13, beta[v] % p) for e13 in range(p)] for v in g.vertices
    ]
    return _search(g, q, cache, candidates)


def find_hom_u4(
    g: Digraph, p: int, q: int, a1: dict, a2: dict, a3: dict
) -> Optional[dict]:
    """A homomorphism into the 4x4 group with prescribed superdiagonal
    (a1, a2, a3); the (1,3), (1,4), (2,4) entries are free per vertex."""
    cache = _RelatorCache(4, p, q)
    candidates = [
        [
            (a1[v] % p, e13, e14, a2[v] % p, e24, a3[v] % p)
            for e13 in range(p)
            for e14 in range(p)
            for e24 in range(p)
        ]
        for v in g.vertices
    ]
    return _search(g, q, cache, candidates)


class _CenterClassCache(_RelatorCache):
    """Relator checks in the 4x4 group modulo its center: matrices are
    5-tuples (the (1,4) entry quotiented away)."""

    def __init__(self, p: int, q: int):
        super().__init__(4, p, q)

    @staticmethod
    def _lift(m5):
        a12, a13, a23, a24, a34 = m5
        return (a12, a13, 0, a23, a24, a34)

    @staticmethod
    def _drop(m6):
        a12, a13, _, a23, a24, a34 = m6
        return (a12, a13, a23, a24, a34)

    def ok(self, m_u, m_w, kind: str) -> bool:
        key = (m_u, m_w, kind)
        out = self._checks.get(key)
        if out is None:
            U, W = self._lift(m_u), self._lift(m_w)
            if kind == "ordinary":
                out = self._drop(self.ops.mul(U, W)) == self._drop(self.ops.mul(W, U))
            else:
                out = self._drop(self.ops.conjugate(W, U)) == self._drop(
                    self.ops.power(U, 1 + self.q)
                )
            self._checks[key] = out
        return out


def find_hom_u4_mod_center(
    g: Digraph, p: int, q: int, a1: dict, a2: dict, a3: dict
) -> Optional[dict]:
    """Same as find_hom_u4 but into the quotient by the center; only the
    (1,3) and (2,4) entries are free per vertex."""
    cache = _CenterClassCache(p, q)
    candidates = [
        [
            (a1[v] % p, e13, a2[v] % p, e24, a3[v] % p)
            for e13 in range(p)
            for e24 in range(p)
        ]
        for v in g.vertices
    ]
    return _search(g, q, cache, candidates)


def pair_criterion(
    g: Digraph, p: int, q: int, a1: dict, a2: dict, a3: dict
) -> bool:
    """The two-3x3-lift formulation: one lift with characters (a1, a2)
    and one with (a2, a3).  Equivalent to a mod-center 4x4 lift."""
    return (
        find_hom_u3(g, p, q, a1, a2) is not None
        and find_hom_u3(g, p, q, a2, a3) is not None
    )


# -- independent re-verification ---------------------------------------------------


def verify_u4_assignment(g, p, q, a1, a2, a3, assignment) -> bool:
    ops = UniTri(4, p)
    for v in g.vertices:
        m = assignment[v]
        if (m[0], m[3], m[5]) != (a1[v] % p, a2[v] % p, a3[v] % p):
            return False
    for i, j, kind, head in _pair_constraints(g):
        u, w = g.vertices[i], g.vertices[j]
        if kind == "ordinary":
            if ops.mul(assignment[u], assignment[w]) != ops.mul(assignment[w], assignment[u]):
                return False
        else:
            h = g.vertices[head]
            t = w if h == u else u
            if ops.conjugate(assignment[h], assignment[t]) != ops.power(assignment[t], 1 + q):
                return False
    return True


def verify_mod_center_assignment(g, p, q, a1, a2, a3, assignment) -> bool:
    cache = _CenterClassCache(p, q)
    for v in g.vertices:
        m = assignment[v]
        if (m[0], m[2], m[4]) != (a1[v] % p, a2[v] % p, a3[v] % p):
            return False
    for i, j, kind, head in _pair_constraints(g):
        u, w = g.vertices[i], g.vertices[j]
        if kind == "ordinary":
            if not cache.ok(assignment[u], assignment[w], "ordinary"):
                return False
        else:
            h = g.vertices[head]
            t = w if h == u else u
            if not cache.ok(assignment[t], assignment[h], "special"):
                return False
    return True


# -- the scan -----------------------------------------------------------------------


def characters(g: Digraph, p: int) -> list[dict]:
    return [
        dict(zip(g.vertices, values))
        for values in itertools.product(range(p), repeat=g.n)
    ]


def _scan_chunk(args):
    vertices, codes, p, q, char_rows, triple_indices = args
    g = Digraph.from_codes(tuple(vertices), tuple(codes))
    chars = [dict(zip(vertices, row)) for row in char_rows]
    return _scan_triples(g, p, q, chars, triple_indices)


def _scan_triples(g, p, q, chars, triple_indices):
    defined = vanishes = 0
    violations = []
    reverified = 0
    for t1, t2, t3 in triple_indices:
        a1, a2, a3 = chars[t1], chars[t2], chars[t3]
        bar = find_hom_u4_mod_center(g, p, q, a1, a2, a3)
        full = find_hom_u4(g, p, q, a1, a2, a3)
        if bar is not None:
            if not verify_mod_center_assignment(g, p, q, a1, a2, a3, bar):
                raise InternalCheckError("mod-center witness failed re-verification")
            reverified += 1
            defined += 1
        if full is not None:
            if not verify_u4_assignment(g, p, q, a1, a2, a3, full):
                raise InternalCheckError("full-lift witness failed re-verification")
            reverified += 1
            vanishes += 1
            if bar is None:
                raise InternalCheckError(
                    "a full lift exists without a mod-center lift"
                )
        if bar is not None and full is None:
            violations.append(
                {
                    "alpha1": [a1[v] for v in g.vertices],
                    "alpha2": [a2[v] for v in g.vertices],
                    "alpha3": [a3[v] for v in g.vertices],
                }
            )
    return {
        "defined": defined,
        "vanishes": vanishes,
        "violations": violations,
        "reverified": reverified,
    }


def massey_scan(
    g: Digraph, p: int, q: int, budget: int = DEFAULT_SCAN_BUDGET, workers: int = 1
) -> dict:
    """For every triple of characters: is a mod-center lift available
    ("defined") and is a full lift available ("vanishes")?  Violations
    are defined-and-not-vanishing triples."""
    required = p ** (3 * g.n)
    if required > budget:
        raise BudgetError(
            f"scan needs p^(3|V|) = {required} full-lift assignments per "
            f"character triple, over budget {budget}; raise --budget to run"
        )
    chars = characters(g, p)
    triples = list(itertools.product(range(len(chars)), repeat=3))
    if workers > 1 and len(triples) > 8:
        per = (len(triples) + workers - 1) // workers
        parts = [triples[i : i + per] for i in range(0, len(triples), per)]
        char_rows = [tuple(c[v] for v in g.vertices) for c in chars]
        tasks = [
            (g.vertices, g.codes, p, q, char_rows, part) for part in parts
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_chunk, tasks))
    else:
        results = [_scan_triples(g, p, q, chars, triples)]
    report = {
        "vertices": list(g.vertices),
        "p": p,
        "q": q,
        "character_triples": len(triples),
        "defined": sum(r["defined"] for r in results),
        "vanishes": sum(r["vanishes"] for r in results),
        "violations": [v for r in results for v in r["violations"]],
        "witnesses_reverified": sum(r["reverified"] for r in results),
    }
    report["violation_count"] = len(report["violations"])
    return report


def massey_lift(g: Digraph, p: int, f: int, a1: dict, a2: dict, a3: dict) -> dict:
    """One triple: report defined / vanishes and the lift found, if any."""
    q = validate_prime_power(p, f)
    bar = find_hom_u4_mod_center(g, p, q, a1, a2, a3)
    full = find_hom_u4(g, p, q, a1, a2, a3)
    if full is not None and not verify_u4_assignment(g, p, q, a1, a2, a3, full):
        raise InternalCheckError("lift failed re-verification")
    if bar is not None and not verify_mod_center_assignment(g, p, q, a1, a2, a3, bar):
        raise InternalCheckError("mod-center lift failed re-verification")
    return {
        "vertices": list(g.vertices),
        "p": p,
        "f": f,
        "q": q,
        "defined": bar is not None,
        "vanishes": full is not None,
        "witness": {v: list(m) for v, m in full.items()} if full else None,
        "witness_mod_center": {v: list(m) for v, m in bar.items()} if bar else None,
    }
