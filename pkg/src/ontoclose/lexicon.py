"""Lexical inputs: synset relation pairs and the synset-to-class mapping.

Both inputs are plain TSV, UTF-8, with ``#`` comment lines. Relation files
hold two synset ids per row. Mapping files hold a synset id and a class
name carrying a trailing relation symbol: ``=`` equivalence, ``+``
subsumption, ``@`` instance. Synset ids are usually ``lemma#pos#sense``
(pos ``n`` or ``v``) but any opaque id is accepted.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kif

HYPONYMY = "hyponymy"
ANTONYMY = "antonymy"
MERONYMY_PART = "meronymy-part"
MERONYMY_MEMBER = "meronymy-member"
MERONYMY_SUBSTANCE = "meronymy-substance"
PAIR_KINDS = (HYPONYMY, ANTONYMY, MERONYMY_PART, MERONYMY_MEMBER,
              MERONYMY_SUBSTANCE)

EQUIVALENCE = "equivalence"
SUBSUMPTION = "subsumption"
INSTANCE = "instance"
_RELATION_SYMBOLS = {"=": EQUIVALENCE, "+": SUBSUMPTION, "@": INSTANCE}

NOUN = "noun"
VERB = "verb"
_POS_CODES = {"n": NOUN, "v": VERB}


class LexiconError(kif.KifError):
    """Malformed lexical input; message carries the line number."""


@dataclass(frozen=True)
class Synset:
    id: str
    pos: str
    lemma: str
    sense: int


@dataclass(frozen=True)
class RelationPair:
    kind: str
    s1: str
    s2: str

    def __post_init__(self):
        if self.kind not in PAIR_KINDS:
            raise ValueError(f"unknown relation kind: {self.kind!r}")
        if self.s1 == self.s2:
            raise ValueError(f"pair relates {self.s1!r} to itself")


@dataclass(frozen=True)
class MappingLink:
    synset: str
    concept: str
    relation: str

    def __post_init__(self):
        if self.relation not in _RELATION_SYMBOLS.values():
            raise ValueError(f"unknown mapping relation: {self.relation!r}")


def parse_synset_id(synset_id: str) -> "Synset | None":
    """Structured view of a ``lemma#pos#sense`` id; None for opaque ids."""
    parts = synset_id.split("#")
    if len(parts) != 3:
        return None
    lemma, pos_code, sense_text = parts
    pos = _POS_CODES.get(pos_code)
    if not lemma or pos is None or not sense_text.isdigit():
        return None
    sense = int(sense_text)
    if sense < 1:
        return None
    return Synset(id=synset_id, pos=pos, lemma=lemma, sense=sense)


def synset_pos(synset_id: str) -> str:
    """Part of speech from the id; opaque ids default to noun."""
    parsed = parse_synset_id(synset_id)
    return parsed.pos if parsed else NOUN


def _rows(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line.split("\t")


def load_synset_relations(text: str, kind: str) -> list[RelationPair]:
    """Relation pairs from TSV rows ``s1<TAB>s2``, file order, deduplicated."""
    if kind not in PAIR_KINDS:
        raise LexiconError(f"unknown relation kind: {kind!r}")
    pairs: list[RelationPair] = []
    seen: set[tuple[str, str]] = set()
    for lineno, fields in _rows(text):
        if len(fields) != 2 or not fields[0].strip() or not fields[1].strip():
            raise LexiconError(
                f"line {lineno}: expected 's1<TAB>s2', found {fields!r}")
        s1, s2 = fields[0].strip(), fields[1].strip()
        if s1 == s2:
            raise LexiconError(f"line {lineno}: pair relates {s1!r} to itself")
        if (s1, s2) in seen:
            continue
        seen.add((s1, s2))
        pairs.append(RelationPair(kind=kind, s1=s1, s2=s2))
    return pairs


def load_mapping(text: str) -> list[MappingLink]:
    """Mapping links from TSV rows ``synset<TAB>Concept<symbol>``."""
    links: list[MappingLink] = []
    seen: set[tuple[str, str, str]] = set()
    for lineno, fields in _rows(text):
        if len(fields) != 2 or not fields[0].strip():
            raise LexiconError(
                f"line {lineno}: expected 'synset<TAB>Concept<symbol>', "
                f"found {fields!r}")
        synset, tagged = fields[0].strip(), fields[1].strip()
        if len(tagged) < 2:
            raise LexiconError(f"line {lineno}: mapping entry too short: {tagged!r}")
        concept, symbol = tagged[:-1], tagged[-1]
        relation = _RELATION_SYMBOLS.get(symbol)
        if relation is None:
            raise LexiconError(
                f"line {lineno}: unknown relation symbol {symbol!r} "
                f"(expected one of = + @)")
        key = (synset, concept, relation)
        if key in seen:
            continue
        seen.add(key)
        links.append(MappingLink(synset=synset, concept=concept,
                                 relation=relation))
    return links


class MappingIndex:
    """Read-only lookup from synset id to its mapping links."""

    def __init__(self, links: "list[MappingLink] | tuple[MappingLink, ...]"):
        by_synset: dict[str, list[MappingLink]] = {}
        for link in links:
            by_synset.setdefault(link.synset, []).append(link)
        self._by_synset = {
            sid: tuple(sorted(set(ls), key=lambda l: (l.concept, l.relation)))
            for sid, ls in by_synset.items()}

    def concepts_for(self, synset_id: str) -> tuple[MappingLink, ...]:
        """All links of a synset, lexicographic by concept; empty if unmapped."""
        return self._by_synset.get(synset_id, ())

    def is_mapped(self, synset_id: str) -> bool:
        return synset_id in self._by_synset

    def __len__(self) -> int:
        return len(self._by_synset)
