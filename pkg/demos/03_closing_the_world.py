"""Produce the three closed-world variants of an ontology.

``subclass-only`` closes the subclass relation: anything below a class
either equals it or sits below one of its known direct subclasses. The two
``subclass+...`` variants additionally decide every sibling pair the
ontology left open, either as disjoint or as compatible.
"""

from ontoclose import kif
from ontoclose.closure import (
    MODES, SUBCLASS_DISJOINT, SUBCLASS_NONDISJOINT, CurationFile,
    apply_closure, complete_subclass, suggest_curation,
)
from ontoclose.taxonomy import build_taxonomy

ONTOLOGY_TEXT = """
($subclass Birth OrganismProcess)
($subclass Death OrganismProcess)
($subclass Breathing OrganismProcess)
($subclass Organism Agent)
($subclass SentientAgent Agent)
($subclass Human Organism)
($subclass Human SentientAgent)
"""

ontology = kif.parse_kif(ONTOLOGY_TEXT)
tax = build_taxonomy(ontology)

# ---------------------------------------------------------------------------
# Subclass completion: one axiom per class, disjuncts in lexicographic order.
print("completion axiom for OrganismProcess:")
root = next(ax for ax in complete_subclass(tax)
            if ax.id == "comp_OrganismProcess")
print(kif.serialize_formula(root.formula))

# ---------------------------------------------------------------------------
# Sibling pairs that are compatible only through a shared subclass need a
# curated fact before the disjointness assumption may run; the tool
# proposes them.
advice = suggest_curation(tax, SUBCLASS_DISJOINT)
print(f"\nsuggested curation: nonDisjoint {sorted(advice.candidates.nondisjoint)}, "
      f"inheritableNonDisjoint {sorted(advice.candidates.inheritable)}")

# ---------------------------------------------------------------------------
# The four variants, from the same source. Curation stays an explicit input.
for mode in MODES:
    curation = advice.candidates if mode == SUBCLASS_DISJOINT \
        else CurationFile.empty()
    closed = apply_closure(ontology, mode, curation)
    stats = kif.count_metrics(closed)
    print(f"\n=== {mode}: {stats.axiom_count} axioms, "
          f"{stats.atom_count} atoms")
    generated = [ax for ax in closed if ax.provenance
                 in ("cwa-disjoint", "cwa-nondisjoint", "curation")]
    for ax in generated:
        print(f"  {ax.provenance:15} {kif.serialize_formula(ax.formula)}")

# ---------------------------------------------------------------------------
# The two assumptions answer the same open question in opposite ways.
disjoint_tax = build_taxonomy(
    apply_closure(ontology, SUBCLASS_DISJOINT, advice.candidates))
compatible_tax = build_taxonomy(
    apply_closure(ontology, SUBCLASS_NONDISJOINT))
print(f"\nBirth vs Death, assuming disjointness:     "
      f"{disjoint_tax.pair_status('Birth', 'Death')}")
print(f"Birth vs Death, assuming non-disjointness: "
      f"{compatible_tax.pair_status('Birth', 'Death')}")
