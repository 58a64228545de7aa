"""Turn lexical relation pairs plus a synset-to-class mapping into
competency questions.

Relation files are TSV pairs of synset ids; the mapping file ties synsets
to classes with a trailing symbol (``=`` equivalence, ``+`` subsumption,
``@`` instance). Each question carries a truth test (the conjecture) and a
falsity test (its negation).
"""

from ontoclose import kif
from ontoclose.lexicon import (
    ANTONYMY, HYPONYMY, MERONYMY_PART, MappingIndex, RelationPair,
    load_mapping, load_synset_relations,
)
from ontoclose.questions import (
    QpTemplate, gen_antonymy_cqs, gen_hyponymy_qp1, gen_hyponymy_qp2,
    gen_template_cqs, read_cq_corpus, write_cq_corpus,
)

MAPPING_TSV = """\
lobby#n#2\tPoliticalOrganization+
people#n#1\tGroupOfPeople+
poison#v#5\tPoisoning=
drug#v#1\tTherapeuticProcess+
birth#n#2\tBirth=
death#n#1\tDeath=
"""

HYPONYMY_TSV = "lobby#n#2\tpeople#n#1\npoison#v#5\tdrug#v#1\n"
ANTONYMY_TSV = "birth#n#2\tdeath#n#1\n"

mapping = MappingIndex(load_mapping(MAPPING_TSV))
hyponymy = load_synset_relations(HYPONYMY_TSV, HYPONYMY)
antonymy = load_synset_relations(ANTONYMY_TSV, ANTONYMY)

# ---------------------------------------------------------------------------
# A subsumption-mapped hyponym only supports an overlap question; an
# equivalence-mapped one supports full containment.
questions = []
for generator in (gen_hyponymy_qp1, gen_hyponymy_qp2):
    result = generator(hyponymy, mapping)
    questions.extend(result.questions)
    print(f"{generator.__name__}: {len(result.questions)} questions, "
          f"{result.skipped_count} pairs skipped as unmapped")
questions.extend(gen_antonymy_cqs(antonymy, mapping).questions)

for cq in questions:
    print(f"\n[{cq.pattern}] {cq.id}")
    print(kif.serialize_formula(cq.conjecture))

# ---------------------------------------------------------------------------
# Question skeletons for other relation kinds plug in as templates, with
# C1/C2 placeholders for the two mapped classes.
template = QpTemplate(
    name="part-overlap", pair_kind=MERONYMY_PART,
    skeleton=kif.parse_formula_text("""
        (exists (X Y)
          (and ($instance X C1) ($instance Y C2) (part X Y)))"""))
part_mapping = MappingIndex(load_mapping(
    "wheel#n#1\tWheel+\ncar#n#1\tAutomobile+\n"))
part_pairs = [RelationPair(MERONYMY_PART, "wheel#n#1", "car#n#1")]
templated = gen_template_cqs(part_pairs, part_mapping, template)
print(f"\n[{templated.questions[0].pattern}]")
print(kif.serialize_formula(templated.questions[0].conjecture))

# ---------------------------------------------------------------------------
# The corpus file keeps each conjecture with metadata headers and reads
# back losslessly.
corpus_text = write_cq_corpus(questions)
recovered = read_cq_corpus(corpus_text)
assert [cq.id for cq in recovered] == [cq.id for cq in questions]
print(f"\ncorpus round trip ok ({len(recovered)} questions)")
print("\n".join(corpus_text.splitlines()[:6]))
