"""Presentations of the pro-p groups attached to decorated digraphs.

One generator per vertex.  An ordinary pair {u, w} contributes the
commutation relator u w u^-1 w^-1; a special pair pointing at w
contributes w u w^-1 u^-(1+q), i.e. conjugation by the special vertex
raises its tail to the 1+q power.  (The sink acts: this is the reading
under which the worked line-digraph and triangle computations, and the
orientation below, are all consistent.)

The orientation sends sinkholes to 1+q and every other vertex to 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Union

from .digraph import ORDINARY, Digraph
from .errors import InputError, PrecisionError
from .padic import TruncatedPAdic, validate_prime_power

Exponent = Union[int, TruncatedPAdic]


def _exp_is_zero(e: Exponent) -> bool:
    return e == 0 if isinstance(e, int) else e.is_zero()


def _exp_add(a: Exponent, b: Exponent) -> Exponent:
    if isinstance(a, int) and isinstance(b, int):
        return a + b
    if isinstance(a, int):
        return b + a
    return a + b


def _exp_neg(e: Exponent) -> Exponent:
    return -e


def _exp_str(e: Exponent) -> str:
    if isinstance(e, int):
        return str(e)
    # large p-adic exponents render as digit strings
    if e.value < 10**6:
        return str(e.value)
    return e.digit_string()


@dataclass(frozen=True)
class GroupWord:
    """A word in free-group syllables (generator, exponent), kept reduced:
    adjacent equal generators merge and zero exponents drop."""

    syllables: tuple[tuple[str, Exponent], ...] = ()

    @staticmethod
    def of(items) -> "GroupWord":
        return GroupWord(tuple((g, e) for g, e in items)).reduced()

    @staticmethod
    def gen(name: str, exponent: Exponent = 1) -> "GroupWord":
        return GroupWord.of([(name, exponent)])

    def reduced(self) -> "GroupWord":
        # stack pass: cancellations cascade through the stack top
        out: list[tuple[str, Exponent]] = []
        for g, e in self.syllables:
            if _exp_is_zero(e):
                continue
            if out and out[-1][0] == g:
                merged = _exp_add(out[-1][1], e)
                out.pop()
                if not _exp_is_zero(merged):
                    out.append((g, merged))
            else:
                out.append((g, e))
        return GroupWord(tuple(out))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.syllables + other.syllables).reduced()

    def inverse(self) -> "GroupWord":
        return GroupWord(
            tuple((g, _exp_neg(e)) for g, e in reversed(self.syllables))
        ).reduced()

    def power(self, n: int) -> "GroupWord":
        if n < 0:
            return self.inverse().power(-n)
        out = GroupWord()
        for _ in range(n):
            out = out * self
        return out

    def is_identity(self) -> bool:
        return not self.syllables

    def exponent_sum(self) -> dict[str, Exponent]:
        """Abelianized image: total exponent per generator."""
        sums: dict[str, Exponent] = {}
        for g, e in self.syllables:
            sums[g] = _exp_add(sums[g], e) if g in sums else e
        return sums

    def __str__(self) -> str:
        if not self.syllables:
            return "1"
        parts = []
        for g, e in self.syllables:
            if isinstance(e, int) and e == 1:
                parts.append(g)
            else:
                parts.append(f"{g}^{_exp_str(e)}")
        return " ".join(parts)


@dataclass(frozen=True)
class Relator:
    word: GroupWord
    pair: tuple[str, str]
    kind: str  # "ordinary" | "special"


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Relator, ...]
    p: int
    f: int

    @property
    def q(self) -> int:
        return self.p**self.f


def present(g: Digraph, p: int, f: int) -> Presentation:
    """The presentation attached to a digraph and q = p^f."""
    q = validate_prime_power(p, f)
    relators = []
    for u, w, st in g.pairs():
        if st is ORDINARY:
            word = GroupWord.of([(u, 1), (w, 1), (u, -1), (w, -1)])
            relators.append(Relator(word, (u, w), "ordinary"))
        else:
            head = st.head
            tail = w if head == u else u
            word = GroupWord.of([(head, 1), (tail, 1), (head, -1), (tail, -(1 + q))])
            relators.append(Relator(word, (u, w), "special"))
    return Presentation(tuple(g.vertices), tuple(relators), p, f)


def orientation(g: Digraph, q: int) -> dict[str, int]:
    """Vertex weights: 1+q on sinkholes, 1 elsewhere."""
    return {v: 1 + q if g.is_sinkhole(v) else 1 for v in g.vertices}


def character_space(g: Digraph, p: int) -> Iterator[dict[str, int]]:
    """All p^|V| vertex assignments into Z/p, in lexicographic order.

    Every assignment extends to a homomorphism on the presented group:
    each relator abelianizes to -q * (tail) for special pairs, which is
    0 mod p, and to 0 for ordinary pairs.
    """
    for values in itertools.product(range(p), repeat=g.n):
        yield dict(zip(g.vertices, values))


def character_kills_relators(pres: Presentation, character: dict[str, int]) -> bool:
    p = pres.p
    for rel in pres.relators:
        total = 0
        for gen, e in rel.word.exponent_sum().items():
            if not isinstance(e, int):
                raise PrecisionError("relators of a presentation have integer exponents")
            total += e * character[gen]
        if total % p != 0:
            return False
    return True


# -- rendering ---------------------------------------------------------------


def presentation_to_json(pres: Presentation, orient: dict[str, int]) -> dict:
    return {
        "generators": list(pres.generators),
        "p": pres.p,
        "f": pres.f,
        "q": pres.q,
        "relators": [
            {
                "pair": list(rel.pair),
                "kind": rel.kind,
                "word": [[g, e if isinstance(e, int) else e.value] for g, e in rel.word.syllables],
                "display": str(rel.word),
            }
            for rel in pres.relators
        ],
        "orientation": orient,
    }


def format_text(pres: Presentation, orient: dict[str, int]) -> str:
    lines = [
        f"pro-p presentation for q = {pres.q} (p = {pres.p}, f = {pres.f})",
        "generators: " + ", ".join(pres.generators),
        "relators:",
    ]
    for rel in pres.relators:
        lines.append(f"  {rel.word}    [{rel.pair[0]},{rel.pair[1]} {rel.kind}]")
    if not pres.relators:
        lines.append("  (none)")
    lines.append(
        "orientation: " + ", ".join(f"{v} -> {orient[v]}" for v in pres.generators)
    )
    return "\n".join(lines) + "\n"


def format_cas(pres: Presentation) -> str:
    """A generic computer-algebra-style rendition of the presentation."""
    gens = ", ".join(f'"{v}"' for v in pres.generators)
    lines = [f"F := FreeGroup({gens});"]
    for i, v in enumerate(pres.generators):
        lines.append(f"{v} := F.{i + 1};")
    rel_terms = []
    for rel in pres.relators:
        term = "*".join(
            g if (isinstance(e, int) and e == 1) else f"{g}^({_exp_str(e)})"
            for g, e in rel.word.syllables
        )
        rel_terms.append(term)
    lines.append("rels := [ " + ", ".join(rel_terms) + " ];")
    return "\n".join(lines) + "\n"
