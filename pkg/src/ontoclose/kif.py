"""S-expression ontology format: formula AST, parser, serializer, size metrics.

The surface syntax is parenthesized prefix notation with ``;`` line comments.
Connectives are ``and or not => <=> forall exists``; ``equal`` is built-in
equality; every other head symbol is a predicate. Variables are ``?``-prefixed
tokens anywhere, or fully-uppercase tokens when they appear in a quantifier
variable list (and references to them inside the quantifier body).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

VARIABLE = "variable"
CONSTANT = "constant"

PROVENANCES = (
    "original",
    "completion",
    "cwa-disjoint",
    "cwa-nondisjoint",
    "curation",
    "support",
)


class KifError(Exception):
    """Base error for this package's ontology handling."""


class KifSyntaxError(KifError):
    """Malformed source text; carries 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Term:
    kind: str  # VARIABLE or CONSTANT
    name: str

    def __post_init__(self):
        if self.kind not in (VARIABLE, CONSTANT):
            raise ValueError(f"bad term kind: {self.kind!r}")
        if not self.name:
            raise ValueError("empty term name")


def var(name: str) -> Term:
    return Term(VARIABLE, name)


def const(name: str) -> Term:
    return Term(CONSTANT, name)


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Term, ...]

    def __post_init__(self):
        if not self.predicate:
            raise ValueError("empty predicate name")


@dataclass(frozen=True)
class Equal:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    parts: tuple["Formula", ...]

    def __post_init__(self):
        if len(self.parts) < 2:
            raise ValueError("'and' needs at least two subformulas")


@dataclass(frozen=True)
class Or:
    parts: tuple["Formula", ...]

    def __post_init__(self):
        if len(self.parts) < 2:
            raise ValueError("'or' needs at least two subformulas")


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    variables: tuple[str, ...]
    body: "Formula"

    def __post_init__(self):
        if not self.variables:
            raise ValueError("quantifier block binds no variables")


@dataclass(frozen=True)
class Exists:
    variables: tuple[str, ...]
    body: "Formula"

    def __post_init__(self):
        if not self.variables:
            raise ValueError("quantifier block binds no variables")


Formula = Union[Atom, Equal, Not, And, Or, Implies, Iff, Forall, Exists]


@dataclass(frozen=True)
class Axiom:
    id: str
    formula: Formula
    provenance: str
    source: str = "generated"

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance: {self.provenance!r}")


class Ontology:
    """Immutable ordered axiom collection with a predicate index.

    Axioms whose formulas are alpha-equivalent to an earlier axiom with the
    same provenance are dropped at construction.
    """

    def __init__(self, axioms: "list[Axiom] | tuple[Axiom, ...]" = ()):
        kept: list[Axiom] = []
        seen_ids: set[str] = set()
        seen_forms: set[tuple[str, str]] = set()
        for ax in axioms:
            if ax.id in seen_ids:
                raise KifError(f"duplicate axiom id: {ax.id}")
            key = (ax.provenance, alpha_key(ax.formula))
            if key in seen_forms:
                continue
            seen_ids.add(ax.id)
            seen_forms.add(key)
            kept.append(ax)
        self._axioms = tuple(kept)
        index: dict[str, list[str]] = {}
        for ax in self._axioms:
            for pred in sorted(predicates_of(ax.formula)):
                index.setdefault(pred, []).append(ax.id)
        self._index = {p: tuple(ids) for p, ids in index.items()}
        self._by_id = {ax.id: ax for ax in self._axioms}

    @property
    def axioms(self) -> tuple[Axiom, ...]:
        return self._axioms

    def __len__(self) -> int:
        return len(self._axioms)

    def __iter__(self) -> Iterator[Axiom]:
        return iter(self._axioms)

    def axiom(self, axiom_id: str) -> Axiom:
        return self._by_id[axiom_id]

    def axioms_for_predicate(self, predicate: str) -> tuple[str, ...]:
        return self._index.get(predicate, ())

    def extended(self, more: "list[Axiom] | tuple[Axiom, ...]") -> "Ontology":
        return Ontology(list(self._axioms) + list(more))

    def structurally_equal(self, other: "Ontology") -> bool:
        if len(self) != len(other):
            return False
        return all(a.formula == b.formula for a, b in zip(self, other))


@dataclass(frozen=True)
class SizeStats:
    axiom_count: int = 0
    unit_clause_count: int = 0
    formula_count: int = 0
    atom_count: int = 0
    forall_block_count: int = 0
    exists_block_count: int = 0
    iff_count: int = 0
    implies_count: int = 0
    and_count: int = 0
    or_count: int = 0
    not_count: int = 0
    equality_count: int = 0

    CSV_FIELDS = (
        "axiom_count", "unit_clause_count", "formula_count", "atom_count",
        "forall_block_count", "exists_block_count", "iff_count",
        "implies_count", "and_count", "or_count", "not_count",
        "equality_count",
    )

    def __add__(self, other: "SizeStats") -> "SizeStats":
        return SizeStats(*(getattr(self, f) + getattr(other, f)
                           for f in self.CSV_FIELDS))

    def as_csv_row(self) -> str:
        return ",".join(str(getattr(self, f)) for f in self.CSV_FIELDS)

    @classmethod
    def csv_header(cls) -> str:
        return ",".join(f.removesuffix("_count") for f in cls.CSV_FIELDS)


# ---------------------------------------------------------------------------
# Traversal helpers
# ---------------------------------------------------------------------------

def subformulas(formula: Formula) -> Iterator[Formula]:
    """Pre-order walk over the formula and all nested subformulas."""
    yield formula
    if isinstance(formula, Not):
        yield from subformulas(formula.body)
    elif isinstance(formula, (And, Or)):
        for part in formula.parts:
            yield from subformulas(part)
    elif isinstance(formula, (Implies, Iff)):
        yield from subformulas(formula.left)
        yield from subformulas(formula.right)
    elif isinstance(formula, (Forall, Exists)):
        yield from subformulas(formula.body)


def predicates_of(formula: Formula) -> set[str]:
    preds = set()
    for sub in subformulas(formula):
        if isinstance(sub, Atom):
            preds.add(sub.predicate)
        elif isinstance(sub, Equal):
            preds.add("equal")
    return preds


def free_variables(formula: Formula) -> set[str]:
    def walk(f: Formula, bound: frozenset[str]) -> set[str]:
        if isinstance(f, Atom):
            return {t.name for t in f.args
                    if t.kind == VARIABLE and t.name not in bound}
        if isinstance(f, Equal):
            return {t.name for t in (f.left, f.right)
                    if t.kind == VARIABLE and t.name not in bound}
        if isinstance(f, Not):
            return walk(f.body, bound)
        if isinstance(f, (And, Or)):
            out: set[str] = set()
            for part in f.parts:
                out |= walk(part, bound)
            return out
        if isinstance(f, (Implies, Iff)):
            return walk(f.left, bound) | walk(f.right, bound)
        return walk(f.body, bound | frozenset(f.variables))

    return walk(formula, frozenset())


def is_closed(formula: Formula) -> bool:
    return not free_variables(formula)


def is_unit_clause(formula: Formula) -> bool:
    """A bare or singly-negated atom with no quantifier."""
    if isinstance(formula, Not):
        formula = formula.body
    return isinstance(formula, (Atom, Equal))


def ground_atom(formula: Formula) -> "Atom | None":
    """The atom of an all-constant unit clause, or None."""
    if isinstance(formula, Atom) and all(t.kind == CONSTANT for t in formula.args):
        return formula
    return None


def rename_bound(formula: Formula, fresh: "Iterator[str] | None" = None,
                 mapping: "dict[str, str] | None" = None) -> Formula:
    """Rename bound variables to a canonical _v0, _v1, ... sequence."""
    if fresh is None:
        counter = iter(range(10 ** 9))
        fresh = (f"_v{i}" for i in counter)
    mapping = mapping or {}

    def sub_term(t: Term) -> Term:
        if t.kind == VARIABLE and t.name in mapping:
            return Term(VARIABLE, mapping[t.name])
        return t

    if isinstance(formula, Atom):
        return Atom(formula.predicate, tuple(sub_term(t) for t in formula.args))
    if isinstance(formula, Equal):
        return Equal(sub_term(formula.left), sub_term(formula.right))
    if isinstance(formula, Not):
        return Not(rename_bound(formula.body, fresh, mapping))
    if isinstance(formula, And):
        return And(tuple(rename_bound(p, fresh, mapping) for p in formula.parts))
    if isinstance(formula, Or):
        return Or(tuple(rename_bound(p, fresh, mapping) for p in formula.parts))
    if isinstance(formula, Implies):
        return Implies(rename_bound(formula.left, fresh, mapping),
                       rename_bound(formula.right, fresh, mapping))
    if isinstance(formula, Iff):
        return Iff(rename_bound(formula.left, fresh, mapping),
                   rename_bound(formula.right, fresh, mapping))
    inner = dict(mapping)
    new_vars = []
    for v in formula.variables:
        nv = next(fresh)
        inner[v] = nv
        new_vars.append(nv)
    body = rename_bound(formula.body, fresh, inner)
    cls = Forall if isinstance(formula, Forall) else Exists
    return cls(tuple(new_vars), body)


def alpha_key(formula: Formula) -> str:
    """Serialized form with canonically renamed bound variables."""
    return serialize_formula(rename_bound(formula), width=10 ** 9)


def normalize(formula: Formula) -> Formula:
    """Canonical form: commutative connective operands sorted, then
    bound variables renamed. Two formulas equal up to variable names and
    and/or/equal operand order normalize identically."""

    def sort_parts(f: Formula) -> Formula:
        if isinstance(f, (Atom, Equal)):
            if isinstance(f, Equal):
                a, b = sorted((f.left, f.right), key=lambda t: (t.kind, t.name))
                return Equal(a, b)
            return f
        if isinstance(f, Not):
            return Not(sort_parts(f.body))
        if isinstance(f, (And, Or)):
            parts = tuple(sort_parts(p) for p in f.parts)
            parts = tuple(sorted(parts, key=alpha_key))
            return And(parts) if isinstance(f, And) else Or(parts)
        if isinstance(f, Implies):
            return Implies(sort_parts(f.left), sort_parts(f.right))
        if isinstance(f, Iff):
            return Iff(sort_parts(f.left), sort_parts(f.right))
        cls = Forall if isinstance(f, Forall) else Exists
        return cls(f.variables, sort_parts(f.body))

    return rename_bound(sort_parts(formula))


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_CONNECTIVES = {"and", "or", "not", "=>", "<=>", "forall", "exists"}


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            col += 1
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            tokens.append(_Token(ch, line, col))
            col += 1
            i += 1
        elif ch == '"':
            start_line, start_col = line, col
            j = i + 1
            while j < n and text[j] != '"':
                if text[j] == "\n":
                    line += 1
                    col = 0
                j += 1
                col += 1
            if j >= n:
                raise KifSyntaxError("unterminated string", start_line, start_col)
            tokens.append(_Token(text[i:j + 1], start_line, start_col))
            col += 2
            i = j + 1
        else:
            start_col = col
            j = i
            while j < n and text[j] not in ' \t\r\n();"':
                j += 1
                col += 1
            tokens.append(_Token(text[i:j], line, start_col))
            i = j
    return tokens


class _SexpSymbol(str):
    line: int = 0
    column: int = 0


def _read_sexprs(tokens: list[_Token]):
    """Group a token stream into nested lists of symbols."""
    forms = []
    stack: list[list] = []
    open_positions: list[_Token] = []
    for tok in tokens:
        if tok.text == "(":
            stack.append([])
            open_positions.append(tok)
        elif tok.text == ")":
            if not stack:
                raise KifSyntaxError("unbalanced ')'", tok.line, tok.column)
            done = stack.pop()
            open_positions.pop()
            if stack:
                stack[-1].append(done)
            else:
                forms.append((done, tok))
        else:
            sym = _SexpSymbol(tok.text)
            sym.line = tok.line
            sym.column = tok.column
            if stack:
                stack[-1].append(sym)
            else:
                forms.append((sym, tok))
    if stack:
        tok = open_positions[-1]
        raise KifSyntaxError("unbalanced '('", tok.line, tok.column)
    return forms


def _is_variable_token(name: str) -> bool:
    return name.startswith("?")


def _is_uppercase_token(name: str) -> bool:
    return name.isupper() and any(c.isalpha() for c in name)


def _form_position(form, fallback: _Token) -> tuple[int, int]:
    node = form
    while isinstance(node, list) and node:
        node = node[0]
    if isinstance(node, _SexpSymbol):
        return node.line, node.column
    return fallback.line, fallback.column


def _parse_term(form, bound: frozenset[str], close_tok: _Token) -> Term:
    if isinstance(form, list):
        line, col = _form_position(form, close_tok)
        raise KifSyntaxError("expected a term, found a nested expression",
                             line, col)
    name = str(form)
    if _is_variable_token(name):
        return Term(VARIABLE, name)
    if _is_uppercase_token(name) and name in bound:
        return Term(VARIABLE, name)
    return Term(CONSTANT, name)


def _parse_formula(form, bound: frozenset[str], close_tok: _Token) -> Formula:
    if not isinstance(form, list):
        raise KifSyntaxError(f"expected a formula, found bare symbol {form!r}",
                             form.line, form.column)
    if not form:
        line, col = close_tok.line, close_tok.column
        raise KifSyntaxError("empty expression", line, col)
    head = form[0]
    if isinstance(head, list):
        line, col = _form_position(head, close_tok)
        raise KifSyntaxError("expression head must be a connective or predicate",
                             line, col)
    name = str(head)
    args = form[1:]

    def need(count: int, what: str):
        if len(args) != count:
            raise KifSyntaxError(
                f"'{name}' takes {what}, found {len(args)} arguments",
                head.line, head.column)

    if name == "not":
        need(1, "exactly 1 subformula")
        return Not(_parse_formula(args[0], bound, close_tok))
    if name in ("and", "or"):
        if len(args) < 2:
            raise KifSyntaxError(
                f"'{name}' takes at least 2 subformulas, found {len(args)}",
                head.line, head.column)
        parts = tuple(_parse_formula(a, bound, close_tok) for a in args)
        return And(parts) if name == "and" else Or(parts)
    if name in ("=>", "<=>"):
        need(2, "exactly 2 subformulas")
        left = _parse_formula(args[0], bound, close_tok)
        right = _parse_formula(args[1], bound, close_tok)
        return Implies(left, right) if name == "=>" else Iff(left, right)
    if name in ("forall", "exists"):
        need(2, "a variable list and a body")
        var_list = args[0]
        if not isinstance(var_list, list) or not var_list:
            raise KifSyntaxError(f"'{name}' needs a parenthesized variable list",
                                 head.line, head.column)
        names = []
        for v in var_list:
            if isinstance(v, list):
                line, col = _form_position(v, close_tok)
                raise KifSyntaxError("variable list entries must be symbols",
                                     line, col)
            vname = str(v)
            if not (_is_variable_token(vname) or _is_uppercase_token(vname)):
                raise KifSyntaxError(
                    f"{vname!r} is not a variable (use ?name or UPPERCASE)",
                    v.line, v.column)
            names.append(vname)
        body = _parse_formula(args[1], bound | frozenset(names), close_tok)
        cls = Forall if name == "forall" else Exists
        return cls(tuple(names), body)
    if name == "equal":
        need(2, "exactly 2 terms")
        return Equal(_parse_term(args[0], bound, close_tok),
                     _parse_term(args[1], bound, close_tok))
    # anything else is an atom over terms
    return Atom(name, tuple(_parse_term(a, bound, close_tok) for a in args))


def parse_kif(text: str, source_name: str = "<string>") -> Ontology:
    """Parse top-level S-expressions into an ontology of original axioms."""
    forms = _read_sexprs(_tokenize(text))
    axioms = []
    for i, (form, close_tok) in enumerate(forms, start=1):
        if not isinstance(form, list):
            raise KifSyntaxError(
                f"top-level symbol {form!r} is not a formula",
                form.line, form.column)
        line, _ = _form_position(form, close_tok)
        formula = _parse_formula(form, frozenset(), close_tok)
        axioms.append(Axiom(id=f"orig_{i}", formula=formula,
                            provenance="original",
                            source=f"{source_name}:{line}"))
    return Ontology(axioms)


def parse_formula_text(text: str) -> Formula:
    """Parse a single formula from text (convenience for tests and tools)."""
    ontology = parse_kif(text)
    if len(ontology) != 1:
        raise KifError(f"expected exactly one formula, found {len(ontology)}")
    return ontology.axioms[0].formula


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _term_text(t: Term) -> str:
    return t.name


def serialize_formula(formula: Formula, width: int = 72, indent: int = 0) -> str:
    """Render one formula; nests onto new lines when the inline form is long."""
    flat = _serialize_inline(formula)
    if len(flat) + indent <= width:
        return flat
    pad = "  " * (indent // 2 + 1)
    if isinstance(formula, (Atom, Equal)):
        return flat
    if isinstance(formula, Not):
        inner = serialize_formula(formula.body, width, indent + 2)
        return f"(not\n{pad}{inner})"
    if isinstance(formula, (And, Or)):
        tag = "and" if isinstance(formula, And) else "or"
        inner = [serialize_formula(p, width, indent + 2) for p in formula.parts]
        joined = f"\n{pad}".join(inner)
        return f"({tag}\n{pad}{joined})"
    if isinstance(formula, (Implies, Iff)):
        tag = "=>" if isinstance(formula, Implies) else "<=>"
        left = serialize_formula(formula.left, width, indent + 2)
        right = serialize_formula(formula.right, width, indent + 2)
        return f"({tag}\n{pad}{left}\n{pad}{right})"
    tag = "forall" if isinstance(formula, Forall) else "exists"
    vars_text = " ".join(formula.variables)
    body = serialize_formula(formula.body, width, indent + 2)
    return f"({tag} ({vars_text})\n{pad}{body})"


def _serialize_inline(formula: Formula) -> str:
    if isinstance(formula, Atom):
        if not formula.args:
            return f"({formula.predicate})"
        args = " ".join(_term_text(t) for t in formula.args)
        return f"({formula.predicate} {args})"
    if isinstance(formula, Equal):
        return f"(equal {_term_text(formula.left)} {_term_text(formula.right)})"
    if isinstance(formula, Not):
        return f"(not {_serialize_inline(formula.body)})"
    if isinstance(formula, (And, Or)):
        tag = "and" if isinstance(formula, And) else "or"
        return f"({tag} " + " ".join(_serialize_inline(p) for p in formula.parts) + ")"
    if isinstance(formula, (Implies, Iff)):
        tag = "=>" if isinstance(formula, Implies) else "<=>"
        return f"({tag} {_serialize_inline(formula.left)} {_serialize_inline(formula.right)})"
    tag = "forall" if isinstance(formula, Forall) else "exists"
    vars_text = " ".join(formula.variables)
    return f"({tag} ({vars_text}) {_serialize_inline(formula.body)})"


def serialize_kif(ontology: Ontology) -> str:
    """Text that re-parses to a structurally identical ontology."""
    if not len(ontology):
        return ""
    return "\n".join(serialize_formula(ax.formula) for ax in ontology) + "\n"


# ---------------------------------------------------------------------------
# Size metrics
# ---------------------------------------------------------------------------

def count_formula_metrics(formula: Formula) -> SizeStats:
    atoms = foralls = exists = iffs = implies = ands = ors = nots = equals = 0
    for sub in subformulas(formula):
        if isinstance(sub, Atom):
            atoms += 1
        elif isinstance(sub, Equal):
            atoms += 1
            equals += 1
        elif isinstance(sub, Not):
            nots += 1
        elif isinstance(sub, And):
            ands += 1
        elif isinstance(sub, Or):
            ors += 1
        elif isinstance(sub, Implies):
            implies += 1
        elif isinstance(sub, Iff):
            iffs += 1
        elif isinstance(sub, Forall):
            foralls += 1
        elif isinstance(sub, Exists):
            exists += 1
    unit = is_unit_clause(formula)
    return SizeStats(
        axiom_count=1,
        unit_clause_count=1 if unit else 0,
        formula_count=0 if unit else 1,
        atom_count=atoms,
        forall_block_count=foralls,
        exists_block_count=exists,
        iff_count=iffs,
        implies_count=implies,
        and_count=ands,
        or_count=ors,
        not_count=nots,
        equality_count=equals,
    )


def count_metrics(ontology: Ontology) -> SizeStats:
    total = SizeStats()
    for ax in ontology:
        total = total + count_formula_metrics(ax.formula)
    return total
