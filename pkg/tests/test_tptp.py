import re

import pytest

from ontoclose import kif
from ontoclose.tptp import (
    MangleTable, UnsupportedConstructError, emit_problem, to_fof,
)



FOF_LINE = re.compile(
    r"^fof\([a-z][A-Za-z0-9_]*, (axiom|conjecture), .+\)\.$")
LEGAL_CHARS = re.compile(r"^[A-Za-z0-9_,()\[\]:=<>~&|!. ?-]+$")


def check_problem_text(text: str) -> None:
    conjectures = 0
    for line in text.splitlines():
        if not line.strip() or line.startswith("%"):
            continue
        assert FOF_LINE.match(line), f"not a fof line: {line}"
        assert LEGAL_CHARS.match(line), f"illegal characters: {line}"
        assert line.count("(") == line.count(")"), f"unbalanced: {line}"
        assert line.count("[") == line.count("]"), f"unbalanced: {line}"
        if ", conjecture, " in line:
            conjectures += 1
    assert conjectures == 1


# ---------------------------------------------------------------------------
# Formula rendering
# ---------------------------------------------------------------------------

def test_unit_clause_rendering():
    formula = kif.parse_formula_text("($disjoint Birth Death)")
    assert to_fof(formula) == "s__disjoint(c__birth,c__death)"


def test_distinctness_question_rendering():
    formula = kif.parse_formula_text("""
        (forall (X Y)
          (=> (and ($instance X Birth) ($instance Y Death))
              (not (equal X Y))))""")
    text = to_fof(formula)
    assert text == ("! [X,Y] : ((s__instance(X,c__birth) & "
                    "s__instance(Y,c__death)) => ~ (X = Y))")


def test_negated_conjecture_rendering():
    formula = kif.parse_formula_text(
        "(not (forall (X) ($instance X Birth)))")
    assert to_fof(formula) == "~ (! [X] : s__instance(X,c__birth))"


def test_existential_and_iff_rendering():
    formula = kif.parse_formula_text("""
        (forall (?X ?Y)
          (<=> ($disjoint ?X ?Y)
               (not (exists (?O) (and ($instance ?O ?X) ($instance ?O ?Y))))))""")
    text = to_fof(formula)
    assert text.startswith("! [X,Y] : (s__disjoint(X,Y) <=> ~ (? [O] : ")
    assert "(s__instance(O,X) & s__instance(O,Y))" in text


def test_variable_name_clashes_get_suffixes():
    formula = kif.parse_formula_text(
        "(forall (?x) (exists (X) (and ($p ?x) ($q X))))")
    text = to_fof(formula)
    assert "! [X] :" in text
    assert "? [X2] :" in text


def test_open_formula_is_rejected():
    with pytest.raises(UnsupportedConstructError):
        to_fof(kif.parse_formula_text("($instance ?x Birth)"))


# ---------------------------------------------------------------------------
# Mangling
# ---------------------------------------------------------------------------

def test_mangling_round_trip_over_fixture(organism_process):
    table = MangleTable()
    names = set()
    for ax in organism_process:
        for sub in kif.subformulas(ax.formula):
            if isinstance(sub, kif.Atom):
                names.add(("predicate", sub.predicate))
                names.update(("constant", t.name) for t in sub.args
                             if t.kind == kif.CONSTANT)
            elif isinstance(sub, kif.Equal):
                names.update(("constant", t.name)
                             for t in (sub.left, sub.right)
                             if t.kind == kif.CONSTANT)
    for namespace, original in sorted(names):
        mangled = (table.predicate(original) if namespace == "predicate"
                   else table.constant(original))
        assert table.demangle(mangled) == original


def test_mangling_is_injective_under_collisions():
    table = MangleTable()
    a = table.predicate("$subclass")
    b = table.predicate("subclass")
    assert a == "s__subclass"
    assert a != b
    assert table.demangle(b) == "subclass"
    c1 = table.constant("Birth")
    c2 = table.constant("BIRTH")
    c3 = table.constant("birth")
    assert len({c1, c2, c3}) == 3
    # repeated requests are stable
    assert table.constant("Birth") == c1


def test_axiom_names_keep_provenance_prefix():
    table = MangleTable()
    assert table.axiom_name("comp_OrganismProcess") == "comp_organismprocess"
    assert table.axiom_name("cwad_Birth_Death") == "cwad_birth_death"
    assert table.axiom_name("orig_1") == "orig_1"


# ---------------------------------------------------------------------------
# Problem emission
# ---------------------------------------------------------------------------

def test_emit_problem_line_structure(organism_process):
    test_formula = kif.parse_formula_text("""
        (forall (X Y)
          (=> (and ($instance X Birth) ($instance Y Death))
              (not (equal X Y))))""")
    problem = emit_problem(organism_process, test_formula,
                           metadata={"cq": "antonymy-1:birth:death",
                                     "polarity": "truth"})
    text = problem.text
    check_problem_text(text)
    lines = [l for l in text.splitlines() if l and not l.startswith("%")]
    assert len(lines) == len(organism_process) + 1
    assert lines[-1].startswith("fof(cq, conjecture, ")
    assert "% cq: antonymy-1:birth:death" in text
    assert "% polarity: truth" in text


def test_emit_problem_empty_ontology():
    tautology = kif.parse_formula_text("(forall (?x) (equal ?x ?x))")
    problem = emit_problem(kif.Ontology(), tautology)
    check_problem_text(problem.text)
    lines = [l for l in problem.text.splitlines() if l.strip()]
    assert lines == ["fof(cq, conjecture, ! [X] : (X = X))."]


def test_emit_problem_deterministic(organism_process):
    formula = kif.parse_formula_text("($disjoint Birth Death)")
    one = emit_problem(organism_process, formula, {"mode": "owa"}).text
    two = emit_problem(organism_process, formula, {"mode": "owa"}).text
    assert one == two


def test_emit_problem_axiom_ids_recoverable(organism_process):
    formula = kif.parse_formula_text("($disjoint Birth Death)")
    problem = emit_problem(organism_process, formula)
    for name, _ in problem.axioms:
        assert problem.axiom_id_for(name) is not None
    assert problem.axiom_id_for(problem.axioms[0][0]) == "orig_1"


def test_emitted_closure_problem_is_well_formed(organism_process):
    from ontoclose.closure import SUBCLASS_DISJOINT, apply_closure
    closed = apply_closure(organism_process, SUBCLASS_DISJOINT)
    formula = kif.parse_formula_text("($disjoint Birth Death)")
    problem = emit_problem(closed, formula, {"mode": SUBCLASS_DISJOINT})
    check_problem_text(problem.text)
    names = [name for name, _ in problem.axioms]
    assert any(name.startswith("comp_") for name in names)
    assert any(name.startswith("cwad_") for name in names)
    assert any(name.startswith("sup_") for name in names)
