"""Competency questions: conjectures derived from lexical relation pairs.

Each question pattern turns a relation pair plus the mapped classes of its
two synsets into one conjecture per class combination. A question carries
two prover tests: the conjecture itself (truth test) and its negation
(falsity test). Pairs with an unmapped endpoint are skipped and counted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import kif
from .kif import And, Atom, Equal, Exists, Forall, Formula, Implies, Not, const, var
from .lexicon import (
    EQUIVALENCE, INSTANCE, PAIR_KINDS, SUBSUMPTION, VERB,
    MappingIndex, RelationPair, synset_pos,
)

HYPO_NOUN_1 = "hypo-noun-1"
HYPO_NOUN_2 = "hypo-noun-2"
HYPO_VERB_1 = "hypo-verb-1"
HYPO_VERB_2 = "hypo-verb-2"
ANTONYMY_1 = "antonymy-1"

_TEMPLATE_NAME = re.compile(r"^[A-Za-z0-9_-]+$")
_PLACEHOLDERS = ("C1", "C2")


class QuestionError(kif.KifError):
    pass


class OpenFormulaError(QuestionError):
    """A conjecture left variables unbound."""


class TemplateError(QuestionError):
    """A question template is unusable as defined."""


def make_tests(conjecture: Formula) -> tuple[Formula, Formula]:
    """The dual prover tests of a conjecture: itself, and its negation."""
    free = kif.free_variables(conjecture)
    if free:
        raise OpenFormulaError(
            "conjecture has free variables: " + ", ".join(sorted(free)))
    return conjecture, Not(conjecture)


@dataclass(frozen=True)
class CompetencyQuestion:
    id: str
    pattern: str
    source_pair: RelationPair
    conjecture: Formula
    truth_test: Formula
    falsity_test: Formula

    @classmethod
    def build(cls, pattern: str, source_pair: RelationPair,
              c1: str, c2: str, conjecture: Formula) -> "CompetencyQuestion":
        truth, falsity = make_tests(conjecture)
        qid = f"{pattern}:{source_pair.s1}:{source_pair.s2}:{c1}:{c2}"
        return cls(id=qid, pattern=pattern, source_pair=source_pair,
                   conjecture=conjecture, truth_test=truth,
                   falsity_test=falsity)


@dataclass(frozen=True)
class GenerationResult:
    questions: tuple[CompetencyQuestion, ...]
    skipped_unmapped: tuple[RelationPair, ...]

    @property
    def skipped_count(self) -> int:
        return len(self.skipped_unmapped)


def _generate(pairs, mapping: MappingIndex, s1_relations, s2_relations,
              pattern_for, conjecture_for) -> GenerationResult:
    questions: list[CompetencyQuestion] = []
    seen_ids: set[str] = set()
    skipped: list[RelationPair] = []
    for rel_pair in pairs:
        links1 = mapping.concepts_for(rel_pair.s1)
        links2 = mapping.concepts_for(rel_pair.s2)
        if not links1 or not links2:
            skipped.append(rel_pair)
            continue
        eligible1 = [l for l in links1
                     if s1_relations is None or l.relation in s1_relations]
        eligible2 = [l for l in links2
                     if s2_relations is None or l.relation in s2_relations]
        for l1 in eligible1:
            for l2 in eligible2:
                pattern = pattern_for(rel_pair)
                cq = CompetencyQuestion.build(
                    pattern, rel_pair, l1.concept, l2.concept,
                    conjecture_for(l1.concept, l2.concept))
                if cq.id in seen_ids:
                    continue
                seen_ids.add(cq.id)
                questions.append(cq)
    return GenerationResult(tuple(questions), tuple(skipped))


def _require_kind(pairs, kind: str, what: str):
    bad = [p for p in pairs if p.kind != kind]
    if bad:
        raise QuestionError(
            f"{what} expects {kind} pairs, found kind {bad[0].kind!r}")


def gen_hyponymy_qp1(pairs, mapping: MappingIndex) -> GenerationResult:
    """Existential overlap questions from hyponymy.

    When the narrower synset is mapped by subsumption or instance, both
    mapped class sets only bound its meaning from above, so all that can
    be conjectured is that the two classes share an instance.
    """
    _require_kind(pairs, "hyponymy", "gen_hyponymy_qp1")

    def conjecture(c1: str, c2: str) -> Formula:
        x = var("X")
        return Exists(("X",), And((Atom("$instance", (x, const(c1))),
                                   Atom("$instance", (x, const(c2))))))

    def pattern(rel_pair: RelationPair) -> str:
        return HYPO_VERB_1 if synset_pos(rel_pair.s1) == VERB else HYPO_NOUN_1

    return _generate(pairs, mapping, frozenset({SUBSUMPTION, INSTANCE}), None,
                     pattern, conjecture)


def gen_hyponymy_qp2(pairs, mapping: MappingIndex) -> GenerationResult:
    """Subset questions from hyponymy.

    When the narrower synset is mapped by equivalence its class means
    exactly what it means, so the broader synset's classes must contain it:
    every instance of the first class is an instance of the second.
    """
    _require_kind(pairs, "hyponymy", "gen_hyponymy_qp2")

    def conjecture(c1: str, c2: str) -> Formula:
        x = var("X")
        return Forall(("X",), Implies(Atom("$instance", (x, const(c1))),
                                      Atom("$instance", (x, const(c2)))))

    def pattern(rel_pair: RelationPair) -> str:
        return HYPO_VERB_2 if synset_pos(rel_pair.s1) == VERB else HYPO_NOUN_2

    return _generate(pairs, mapping, frozenset({EQUIVALENCE}), None,
                     pattern, conjecture)


def gen_antonymy_cqs(pairs, mapping: MappingIndex) -> GenerationResult:
    """Distinctness questions from antonymy: no instance of the first class
    is an instance of the second."""
    _require_kind(pairs, "antonymy", "gen_antonymy_cqs")

    def conjecture(c1: str, c2: str) -> Formula:
        x, y = var("X"), var("Y")
        return Forall(("X", "Y"),
                      Implies(And((Atom("$instance", (x, const(c1))),
                                   Atom("$instance", (y, const(c2))))),
                              Not(Equal(x, y))))

    return _generate(pairs, mapping, None, None,
                     lambda _pair: ANTONYMY_1, conjecture)


# ---------------------------------------------------------------------------
# User-supplied templates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QpTemplate:
    """A question skeleton with ``C1``/``C2`` placeholder constants and
    optional mapping-relation guards per endpoint."""
    name: str
    pair_kind: str
    skeleton: Formula
    s1_relations: "frozenset[str] | None" = None
    s2_relations: "frozenset[str] | None" = None

    def __post_init__(self):
        if not _TEMPLATE_NAME.match(self.name):
            raise TemplateError(f"bad template name: {self.name!r}")
        if self.pair_kind not in PAIR_KINDS:
            raise TemplateError(f"unknown pair kind: {self.pair_kind!r}")
        free = kif.free_variables(self.skeleton)
        if free:
            raise TemplateError(
                "template skeleton has free variables: "
                + ", ".join(sorted(free)))
        names = _constant_names(self.skeleton)
        missing = [p for p in _PLACEHOLDERS if p not in names]
        if missing:
            raise TemplateError(
                "template skeleton never uses placeholder(s): "
                + ", ".join(missing))

    @property
    def pattern(self) -> str:
        return f"template({self.name})"


def _constant_names(formula: Formula) -> set[str]:
    names = set()
    for sub in kif.subformulas(formula):
        if isinstance(sub, Atom):
            terms = sub.args
        elif isinstance(sub, Equal):
            terms = (sub.left, sub.right)
        else:
            continue
        names.update(t.name for t in terms if t.kind == kif.CONSTANT)
    return names


def _substitute_constants(formula: Formula, table: dict[str, str]) -> Formula:
    def sub_term(t):
        if t.kind == kif.CONSTANT and t.name in table:
            return const(table[t.name])
        return t

    if isinstance(formula, Atom):
        return Atom(formula.predicate, tuple(sub_term(t) for t in formula.args))
    if isinstance(formula, Equal):
        return Equal(sub_term(formula.left), sub_term(formula.right))
    if isinstance(formula, Not):
        return Not(_substitute_constants(formula.body, table))
    if isinstance(formula, (And, kif.Or)):
        parts = tuple(_substitute_constants(p, table) for p in formula.parts)
        return And(parts) if isinstance(formula, And) else kif.Or(parts)
    if isinstance(formula, (Implies, kif.Iff)):
        cls = Implies if isinstance(formula, Implies) else kif.Iff
        return cls(_substitute_constants(formula.left, table),
                   _substitute_constants(formula.right, table))
    cls = Forall if isinstance(formula, Forall) else Exists
    return cls(formula.variables, _substitute_constants(formula.body, table))


def gen_template_cqs(pairs, mapping: MappingIndex,
                     template: QpTemplate) -> GenerationResult:
    """Instantiate a user-supplied skeleton over each class combination."""
    _require_kind(pairs, template.pair_kind, f"template {template.name!r}")

    def conjecture(c1: str, c2: str) -> Formula:
        return _substitute_constants(template.skeleton, {"C1": c1, "C2": c2})

    return _generate(pairs, mapping, template.s1_relations,
                     template.s2_relations, lambda _pair: template.pattern,
                     conjecture)


# ---------------------------------------------------------------------------
# Corpus files
# ---------------------------------------------------------------------------

def write_cq_corpus(questions) -> str:
    """Questions as commented conjecture entries, parseable as plain axioms."""
    blocks = []
    for cq in questions:
        blocks.append(
            f"; cq: {cq.id}\n"
            f"; pattern: {cq.pattern}\n"
            f"; kind: {cq.source_pair.kind}\n"
            f"; source: {cq.source_pair.s1} {cq.source_pair.s2}\n"
            + kif.serialize_formula(cq.conjecture))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def group_by_pattern(questions) -> dict[str, list[CompetencyQuestion]]:
    grouped: dict[str, list[CompetencyQuestion]] = {}
    for cq in questions:
        grouped.setdefault(cq.pattern, []).append(cq)
    return dict(sorted(grouped.items()))


def read_cq_corpus(text: str) -> list[CompetencyQuestion]:
    """Rebuild questions from a corpus file written by write_cq_corpus."""
    ontology = kif.parse_kif(text)
    lines = text.splitlines()
    questions = []
    for ax in ontology:
        start_line = int(ax.source.rsplit(":", 1)[1])
        headers: dict[str, str] = {}
        for i in range(start_line - 2, -1, -1):
            line = lines[i].strip()
            if not line.startswith(";"):
                break
            body = line.lstrip("; ")
            if ":" not in body:
                continue
            key, value = body.split(":", 1)
            headers.setdefault(key.strip(), value.strip())
        required = {"cq", "pattern", "kind", "source"}
        if not required <= headers.keys():
            raise QuestionError(
                f"corpus entry at line {start_line} is missing headers "
                f"{sorted(required - headers.keys())}")
        s1, _, s2 = headers["source"].partition(" ")
        source_pair = RelationPair(kind=headers["kind"], s1=s1, s2=s2)
        truth, falsity = make_tests(ax.formula)
        questions.append(CompetencyQuestion(
            id=headers["cq"], pattern=headers["pattern"],
            source_pair=source_pair, conjecture=ax.formula,
            truth_test=truth, falsity_test=falsity))
    return questions
