import pytest

from ontoclose import kif
from ontoclose.kif import Atom, Forall, KifSyntaxError, SizeStats, const, var

from conftest import DATA_DIR


SUPPORT_SHAPE = """
(forall (CLASS1 CLASS2)
  (=> ($inheritableNonDisjoint CLASS1 CLASS2)
      (not ($disjoint CLASS1 CLASS2))))
"""


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def test_parse_unit_clause():
    ontology = kif.parse_kif("($disjoint Birth Death)")
    assert len(ontology) == 1
    ax = ontology.axioms[0]
    assert ax.provenance == "original"
    assert ax.formula == Atom("$disjoint", (const("Birth"), const("Death")))
    assert kif.is_unit_clause(ax.formula)


def test_parse_empty_input():
    assert len(kif.parse_kif("")) == 0
    assert len(kif.parse_kif("; only a comment\n")) == 0


def test_parse_quantified_support_shape():
    formula = kif.parse_formula_text(SUPPORT_SHAPE)
    stats = kif.count_formula_metrics(formula)
    assert isinstance(formula, Forall)
    assert formula.variables == ("CLASS1", "CLASS2")
    assert stats.forall_block_count == 1
    assert stats.implies_count == 1
    assert stats.not_count == 1
    assert stats.atom_count == 2
    assert stats.equality_count == 0


def test_uppercase_tokens_are_variables_only_when_bound():
    formula = kif.parse_formula_text(
        "(forall (X) (=> ($instance X Birth) ($instance X OrganismProcess)))")
    assert isinstance(formula, Forall)
    atom = formula.body.left
    assert atom.args[0] == var("X")
    assert atom.args[1] == const("Birth")
    # unbound uppercase token stays a constant
    unit = kif.parse_formula_text("($subclass BIRTH OrganismProcess)")
    assert unit.args[0] == const("BIRTH")


def test_question_mark_tokens_are_always_variables():
    formula = kif.parse_formula_text("($subclass ?x OrganismProcess)")
    assert formula.args[0] == var("?x")
    assert kif.free_variables(formula) == {"?x"}


def test_variable_shadowing():
    formula = kif.parse_formula_text(
        "(forall (X) (exists (X) ($instance X X)))")
    renamed = kif.rename_bound(formula)
    inner = renamed.body
    assert renamed.variables != inner.variables


@pytest.mark.parametrize("text,line", [
    ("($disjoint Birth Death", 1),
    ("\n($disjoint A B))", 2),
    ("(not ($p A) ($p B))", 1),
    ("(=> ($p A))", 1),
    ("(and ($p A))", 1),
    ("(forall X ($p X))", 1),
    ("(forall (lower) ($p lower))", 1),
    ("(forall (?X) banana)", 1),
    ("($p ($q A) B)", 1),
    ("(($p A) B)", 1),
    ("bare-symbol", 1),
    ("()", 1),
])
def test_syntax_errors_carry_position(text, line):
    with pytest.raises(KifSyntaxError) as err:
        kif.parse_kif(text)
    assert err.value.line == line
    assert err.value.column >= 1


def test_comments_and_strings():
    ontology = kif.parse_kif(
        '; header\n($documentation Birth "a birth event") ; trailing\n')
    assert len(ontology) == 1
    atom = ontology.axioms[0].formula
    assert atom.args[1] == const('"a birth event"')


def test_duplicate_formulas_same_provenance_dropped():
    ontology = kif.parse_kif(
        "(forall (?X) ($p ?X))\n(forall (Y) ($p Y))\n($q A)")
    assert len(ontology) == 2


# ---------------------------------------------------------------------------
# Serialization and round trips
# ---------------------------------------------------------------------------

def test_serialize_unit_clause_single_line():
    ontology = kif.parse_kif("($disjoint Birth Death)")
    assert kif.serialize_kif(ontology) == "($disjoint Birth Death)\n"


def test_serialize_empty_ontology():
    assert kif.serialize_kif(kif.Ontology()) == ""


@pytest.mark.parametrize("name", [
    "organism_process.kif", "shapes.kif", "agent.kif", "blood_cell.kif",
    "sound_process.kif",
])
def test_round_trip_identity(name):
    text = (DATA_DIR / name).read_text()
    ontology = kif.parse_kif(text)
    reparsed = kif.parse_kif(kif.serialize_kif(ontology))
    assert reparsed.structurally_equal(ontology)


def test_round_trip_is_stable():
    text = (DATA_DIR / "shapes.kif").read_text()
    once = kif.serialize_kif(kif.parse_kif(text))
    twice = kif.serialize_kif(kif.parse_kif(once))
    assert once == twice


# ---------------------------------------------------------------------------
# Size metrics
# ---------------------------------------------------------------------------

def test_count_metrics_nondisjoint_support_axiom():
    text = """
    (forall (CLASS1 CLASS2)
      (=> ($nonDisjoint CLASS1 CLASS2) (not ($disjoint CLASS1 CLASS2))))
    """
    stats = kif.count_metrics(kif.parse_kif(text))
    assert stats.forall_block_count == 1
    assert stats.implies_count == 1
    assert stats.not_count == 1
    assert stats.atom_count == 2
    assert stats.equality_count == 0
    assert stats.unit_clause_count == 0
    assert stats.formula_count == 1


def test_count_metrics_empty():
    assert kif.count_metrics(kif.Ontology()) == SizeStats()


def _independent_recount(text: str) -> dict:
    """Tiny second implementation of the counting rules, used as an oracle."""
    clean_lines = [line.split(";", 1)[0] for line in text.splitlines()]
    tokens = " ".join(clean_lines).replace("(", " ( ").replace(")", " ) ").split()

    def read(pos):
        assert tokens[pos] == "("
        pos += 1
        items = []
        while tokens[pos] != ")":
            if tokens[pos] == "(":
                node, pos = read(pos)
            else:
                node, pos = tokens[pos], pos + 1
            items.append(node)
        return items, pos + 1

    forms, pos = [], 0
    while pos < len(tokens):
        node, pos = read(pos)
        forms.append(node)

    counts = dict(axioms=0, units=0, formulas=0, atoms=0, foralls=0,
                  existss=0, iffs=0, impls=0, ands=0, ors=0, nots=0, eqs=0)

    def walk(node):
        head = node[0]
        if head == "forall":
            counts["foralls"] += 1
            walk(node[2])
        elif head == "exists":
            counts["existss"] += 1
            walk(node[2])
        elif head == "not":
            counts["nots"] += 1
            walk(node[1])
        elif head in ("and", "or"):
            counts["ands" if head == "and" else "ors"] += 1
            for sub in node[1:]:
                walk(sub)
        elif head in ("=>", "<=>"):
            counts["impls" if head == "=>" else "iffs"] += 1
            walk(node[1])
            walk(node[2])
        else:
            counts["atoms"] += 1
            if head == "equal":
                counts["eqs"] += 1

    for form in forms:
        counts["axioms"] += 1
        body = form
        if body[0] == "not":
            body = body[1]
        if body[0] in ("forall", "exists", "and", "or", "=>", "<=>", "not"):
            counts["formulas"] += 1
        else:
            counts["units"] += 1
        walk(form)
    return counts


def test_fixture_hand_counts_match_metrics_and_recount():
    text = (DATA_DIR / "organism_process.kif").read_text()
    stats = kif.count_metrics(kif.parse_kif(text))
    expected = SizeStats(
        axiom_count=16, unit_clause_count=10, formula_count=6,
        atom_count=24, forall_block_count=6, exists_block_count=2,
        iff_count=1, implies_count=3, and_count=4, or_count=0,
        not_count=1, equality_count=1,
    )
    assert stats == expected
    recount = _independent_recount(text)
    assert recount == dict(
        axioms=16, units=10, formulas=6, atoms=24, foralls=6, existss=2,
        iffs=1, impls=3, ands=4, ors=0, nots=1, eqs=1,
    )


def test_metrics_additivity():
    a = kif.parse_kif((DATA_DIR / "organism_process.kif").read_text())
    b = kif.parse_kif((DATA_DIR / "shapes.kif").read_text())
    combined = kif.parse_kif(
        (DATA_DIR / "organism_process.kif").read_text()
        + (DATA_DIR / "shapes.kif").read_text())
    assert kif.count_metrics(combined) == kif.count_metrics(a) + kif.count_metrics(b)


def test_axiom_count_is_units_plus_formulas():
    for name in ("organism_process.kif", "shapes.kif"):
        stats = kif.count_metrics(kif.parse_kif((DATA_DIR / name).read_text()))
        assert stats.axiom_count == stats.unit_clause_count + stats.formula_count
        assert stats.atom_count >= stats.equality_count


def test_stats_csv_row():
    stats = SizeStats(axiom_count=2, unit_clause_count=1, formula_count=1,
                      atom_count=3, forall_block_count=1, equality_count=1)
    assert kif.SizeStats.csv_header().startswith("axiom,unit_clause,formula,atom")
    assert stats.as_csv_row() == "2,1,1,3,1,0,0,0,0,0,0,1"


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------

def test_normalize_ignores_variable_names_and_or_order():
    a = kif.parse_formula_text(
        "(forall (?x) (or ($p ?x A) ($q ?x B) (equal ?x C)))")
    b = kif.parse_formula_text(
        "(forall (VAR) (or (equal VAR C) ($q VAR B) ($p VAR A)))")
    assert kif.normalize(a) == kif.normalize(b)
    c = kif.parse_formula_text("(forall (?x) (or ($p ?x A) ($q ?x B)))")
    assert kif.normalize(a) != kif.normalize(c)


def test_normalize_keeps_implication_direction():
    a = kif.parse_formula_text("(=> ($p A) ($q B))")
    b = kif.parse_formula_text("(=> ($q B) ($p A))")
    assert kif.normalize(a) != kif.normalize(b)


def test_predicate_index():
    ontology = kif.parse_kif(
        "($disjoint A B)\n($subclass A C)\n"
        "(forall (?X) (=> ($subclass ?X A) (equal ?X A)))")
    assert ontology.axioms_for_predicate("$disjoint") == ("orig_1",)
    assert ontology.axioms_for_predicate("$subclass") == ("orig_2", "orig_3")
    assert ontology.axioms_for_predicate("equal") == ("orig_3",)
    assert ontology.axioms_for_predicate("$instance") == ()
    assert ontology.axiom("orig_1").formula.predicate == "$disjoint"


def test_free_variables_and_closedness():
    open_formula = kif.parse_formula_text("($subclass ?x Birth)")
    assert not kif.is_closed(open_formula)
    closed = kif.parse_formula_text("(forall (?x) ($subclass ?x Birth))")
    assert kif.is_closed(closed)
