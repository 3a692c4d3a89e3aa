"""Exhaustive labeled-digraph censuses with classifier cross-checking.

Two execution modes:

* "objects": every labeled digraph is built and run through both
  elementary-type classifiers (deconstruction and obstruction patterns),
  with decomposition trees replayed as an extra soundness check.  Used up
  to 4 vertices.
* "vectorized": pair states for a whole code range are held in numpy
  arrays and both routes are evaluated column-wise.  The deconstruction
  route is realized in its equivalent universally-quantified form (every
  induced subdigraph is disconnected or owns a universal ordinary
  vertex), computed by dynamic programming over vertex subsets; a
  deterministic sample of instances is re-run through the object
  classifiers as a cross-check.  Used for 5 (and, slowly, 6) vertices.

Code layout: a labeled digraph on n vertices is the integer whose base-4
digits, most significant first, are the pair states in lexicographic pair
order.  This matches ``enumerate_digraphs`` order.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .classify import (
    is_elementary_type_decomp,
    is_elementary_type_forbidden,
    is_special,
    replay,
)
from .digraph import (
    Digraph,
    equal_as_labeled,
    generated_vertex_names,
    pair_list,
    pair_position,
)
from .errors import InputError, InternalCheckError
from .serialize import to_json_dict

CENSUS_LIMIT = 6
EQUIVALENCE_LIMIT = 5
DEDUP_LIMIT = 5
_CHUNK = 1 << 22
_SAMPLE_STEP = 4099

_FLIP_LUT = np.array([0, 1, 3, 2], dtype=np.uint8)


def codes_from_int(n: int, value: int) -> tuple[int, ...]:
    P = n * (n - 1) // 2
    out = [0] * P
    for j in range(P - 1, -1, -1):
        value, r = divmod(value, 4)
        out[j] = r
    return tuple(out)


def int_from_codes(n: int, codes) -> int:
    value = 0
    for c in codes:
        value = value * 4 + c
    return value


def _digraph_from_int(n: int, value: int) -> Digraph:
    return Digraph.from_codes(generated_vertex_names(n), codes_from_int(n, value))


# -- vectorized verdicts -----------------------------------------------------


class _States:
    """Per-pair state columns for a range of digraph codes."""

    def __init__(self, n: int, codes: np.ndarray):
        self.n = n
        self.m = len(codes)
        P = n * (n - 1) // 2
        self.st = {}
        for pos, pr in enumerate(pair_list(n)):
            self.st[pr] = ((codes >> np.int64(2 * (P - 1 - pos))) & 3).astype(np.uint8)

    def s(self, i: int, j: int) -> np.ndarray:
        if i > j:
            i, j = j, i
        return self.st[(i, j)]

    def points_at(self, i: int, j: int) -> np.ndarray:
        """Pair {i, j} is the single directed edge into j."""
        a, b = min(i, j), max(i, j)
        return self.st[(a, b)] == (3 if j == b else 2)


def _special_arrays(S: _States):
    n, m = S.n, S.m
    special = [np.zeros(m, bool) for _ in range(n)]
    notsink = [np.zeros(m, bool) for _ in range(n)]
    for (i, j), s in S.st.items():
        special[i] |= s == 2
        special[j] |= s == 3
        notsink[i] |= (s == 1) | (s == 3)
        notsink[j] |= (s == 1) | (s == 2)
    bad = np.zeros(m, bool)
    for v in range(n):
        bad |= special[v] & notsink[v]
    return special, ~bad


def _pattern_obstructions(S: _States, special) -> np.ndarray:
    n, m = S.n, S.m
    hit = np.zeros(m, bool)
    # two arrows into a sink, tails apart and ordinary
    for x in range(n):
        others = [v for v in range(n) if v != x]
        for z, y in itertools.combinations(others, 2):
            hit |= (
                S.points_at(z, x)
                & S.points_at(y, x)
                & (S.s(z, y) == 0)
                & ~special[z]
                & ~special[y]
            )
    # all-ordinary square without diagonals
    for combo in itertools.combinations(range(n), 4):
        nospecial = ~(special[combo[0]] | special[combo[1]] | special[combo[2]] | special[combo[3]])
        for cyc in ((0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 1, 3)):
            a, b, c, d = (combo[t] for t in cyc)
            hit |= (
                nospecial
                & (S.s(a, b) == 1)
                & (S.s(b, c) == 1)
                & (S.s(c, d) == 1)
                & (S.s(d, a) == 1)
                & (S.s(a, c) == 0)
                & (S.s(b, d) == 0)
            )
    # decorated four-path
    for combo in itertools.combinations(range(n), 4):
        for y, z in itertools.combinations(combo, 2):
            mid = (S.s(y, z) == 1) & ~special[y] & ~special[z]
            rest = [v for v in combo if v not in (y, z)]
            for x, w in (rest, rest[::-1]):
                hit |= (
                    mid
                    & ((S.s(x, y) == 1) | S.points_at(y, x))
                    & ((S.s(z, w) == 1) | S.points_at(z, w))
                    & (S.s(x, z) == 0)
                    & (S.s(x, w) == 0)
                    & (S.s(y, w) == 0)
                )
    return hit


def _connected(S: _States, members, mask: int, adjbits) -> np.ndarray:
    if len(members) == 2:
        return S.s(members[0], members[1]) != 0
    reach = np.full(S.m, np.uint8(1 << members[0]), np.uint8)
    adj_in = {v: adjbits[v] & np.uint8(mask) for v in members}
    for _ in range(len(members) - 1):
        for v in members:
            take = ((reach >> np.uint8(v)) & 1).astype(bool)
            reach = reach | np.where(take, adj_in[v], np.uint8(0))
    return (reach & np.uint8(mask)) == np.uint8(mask)


def _condition_et(S: _States, special) -> np.ndarray:
    """Every induced subdigraph with >= 2 vertices is disconnected or has
    an ordinary vertex adjacent to all others (DP over vertex subsets)."""
    n, m = S.n, S.m
    if n < 2:
        return np.ones(m, bool)
    adjbits = [np.zeros(m, np.uint8) for _ in range(n)]
    for (i, j), s in S.st.items():
        a = (s != 0).astype(np.uint8)
        adjbits[i] |= a << np.uint8(j)
        adjbits[j] |= a << np.uint8(i)
    et: dict[int, np.ndarray] = {}
    for size in range(2, n + 1):
        for members in itertools.combinations(range(n), size):
            mask = 0
            for v in members:
                mask |= 1 << v
            univ = np.zeros(m, bool)
            for u in members:
                cond = ~special[u]
                for v in members:
                    if v != u:
                        cond = cond & (S.s(u, v) != 0)
                univ |= cond
            ok = univ | ~_connected(S, members, mask, adjbits)
            for v in members:
                child = mask & ~(1 << v)
                if child in et:
                    ok = ok & et[child]
            et[mask] = ok
    return et[(1 << n) - 1]


def _vector_chunk(args):
    n, start, stop, check_equivalence, sample_step = args
    codes = np.arange(start, stop, dtype=np.int64)
    S = _States(n, codes)
    special, special_ok = _special_arrays(S)
    et_patterns = special_ok & ~_pattern_obstructions(S, special)
    result = {
        "special": int(special_ok.sum()),
        "elementary_type": int(et_patterns.sum()),
        "disagreements": [],
        "samples": 0,
        "sample_mismatches": [],
    }
    if check_equivalence:
        et_conditions = special_ok & _condition_et(S, special)
        diff = np.nonzero(et_conditions != et_patterns)[0]
        result["disagreements"] = [int(start + d) for d in diff[:10]]
        result["disagreement_count"] = int(diff.size)
    if sample_step:
        first = ((start + sample_step - 1) // sample_step) * sample_step
        for value in range(first, stop, sample_step):
            g = _digraph_from_int(n, value)
            result["samples"] += 1
            obj_et = is_elementary_type_decomp(g).ok
            obj_pat = is_elementary_type_forbidden(g).ok
            vec_et = bool(et_patterns[value - start])
            if not (obj_et == obj_pat == vec_et):
                result["sample_mismatches"].append(value)
    return result


def _object_chunk(args):
    n, start, stop, verify_trees = args
    names = generated_vertex_names(n)
    sp_count = et_count = 0
    disagreements = []
    replay_failures = []
    for value in range(start, stop):
        g = Digraph.from_codes(names, codes_from_int(n, value))
        if is_special(g).ok:
            sp_count += 1
        d = is_elementary_type_decomp(g)
        f = is_elementary_type_forbidden(g)
        if d.ok != f.ok:
            disagreements.append(value)
        if d.ok:
            et_count += 1
            if verify_trees and d.tree is not None:
                if not equal_as_labeled(replay(d.tree), g):
                    replay_failures.append(value)
    return {
        "special": sp_count,
        "elementary_type": et_count,
        "disagreements": disagreements[:10],
        "disagreement_count": len(disagreements),
        "replay_failures": replay_failures[:10],
    }


def _run_chunks(fn, tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


# -- isomorphism dedup -------------------------------------------------------


def canonical_array(n: int, codes: np.ndarray) -> np.ndarray:
    """Minimum relabeled code, elementwise over a code array."""
    P = n * (n - 1) // 2
    prs = pair_list(n)
    st = [((codes >> np.int64(2 * (P - 1 - pos))) & 3).astype(np.uint8) for pos in range(P)]
    best = None
    for perm in itertools.permutations(range(n)):
        acc = np.zeros(len(codes), np.int64)
        for pos, (i, j) in enumerate(prs):
            s = st[pos]
            a, b = perm[i], perm[j]
            if a > b:
                a, b = b, a
                s = _FLIP_LUT[s]
            acc |= s.astype(np.int64) << np.int64(2 * (P - 1 - pair_position(a, b, n)))
        best = acc if best is None else np.minimum(best, acc)
    return best


def _iso_class_counts(n: int) -> dict:
    codes = np.arange(4 ** (n * (n - 1) // 2), dtype=np.int64)
    S = _States(n, codes)
    special, special_ok = _special_arrays(S)
    et = special_ok & ~_pattern_obstructions(S, special)
    canon = canonical_array(n, codes)
    return {
        "total": int(np.unique(canon).size),
        "special": int(np.unique(canon[special_ok]).size),
        "elementary_type": int(np.unique(canon[et]).size),
    }


# -- the census entry point --------------------------------------------------


def census(
    n: int,
    dedup: bool = False,
    workers: int = 1,
    mode: str = "auto",
    verify_trees: bool = True,
) -> dict:
    """Count special and elementary-type labeled digraphs on n vertices,
    asserting that the two elementary-type routes agree on every instance
    (for n <= 5).  Raises InternalCheckError on any disagreement."""
    if not 1 <= n <= CENSUS_LIMIT:
        raise InputError(f"census supports 1 <= n <= {CENSUS_LIMIT}")
    if mode not in ("auto", "objects", "vectorized"):
        raise InputError(f"unknown census mode {mode!r}")
    if mode == "auto":
        mode = "objects" if n <= 4 else "vectorized"
    if mode == "objects" and n > 4:
        raise InputError("object mode is limited to n <= 4")
    if dedup and n > DEDUP_LIMIT:
        raise InputError(f"isomorphism dedup is limited to n <= {DEDUP_LIMIT}")
    total = 4 ** (n * (n - 1) // 2)
    check_equivalence = n <= EQUIVALENCE_LIMIT

    starts = list(range(0, total, _CHUNK))
    bounds = [(s, min(s + _CHUNK, total)) for s in starts]
    if mode == "objects":
        if workers > 1 and total > 1024:
            per = (total + workers - 1) // workers
            bounds = [(s, min(s + per, total)) for s in range(0, total, per)]
        tasks = [(n, a, b, verify_trees) for a, b in bounds]
        results = _run_chunks(_object_chunk, tasks, workers)
    else:
        sample_step = _SAMPLE_STEP if n == 5 else 0
        tasks = [(n, a, b, check_equivalence, sample_step) for a, b in bounds]
        results = _run_chunks(_vector_chunk, tasks, workers)

    report = {
        "n": n,
        "total": total,
        "mode": mode,
        "equivalence_checked": check_equivalence,
        "labeled": {
            "special": sum(r["special"] for r in results),
            "elementary_type": sum(r["elementary_type"] for r in results),
        },
        "disagreements": [],
    }
    bad = [v for r in results for v in r["disagreements"]]
    bad_count = sum(r.get("disagreement_count", 0) for r in results)
    mismatched_samples = [v for r in results for v in r.get("sample_mismatches", [])]
    report["samples_crosschecked"] = sum(r.get("samples", 0) for r in results)
    replay_failures = [v for r in results for v in r.get("replay_failures", [])]
    if dedup:
        report["iso_classes"] = _iso_class_counts(n)
    if bad:
        report["disagreements"] = bad
        first = to_json_dict(_digraph_from_int(n, bad[0]))
        raise InternalCheckError(
            f"classifier disagreement on {bad_count} of {total} digraphs; "
            f"first counterexample: {first}"
        )
    if mismatched_samples:
        first = to_json_dict(_digraph_from_int(n, mismatched_samples[0]))
        raise InternalCheckError(
            f"vectorized verdicts disagree with object classifiers on "
            f"{len(mismatched_samples)} samples; first: {first}"
        )
    if replay_failures:
        first = to_json_dict(_digraph_from_int(n, replay_failures[0]))
        raise InternalCheckError(f"tree replay failed; first: {first}")
    return report
