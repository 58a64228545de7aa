"""Command-line pipeline: parse, close, generate, emit, run, report.

Every stage is its own subcommand; ``pipeline`` chains them from a flat
``key=value`` config file. Exit codes: 0 ok, 2 usage, 3 data error,
4 prover error, 5 inconsistency detected.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import closure, kif, lexicon, prover, questions, reports, taxonomy

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_PROVER = 4
EXIT_INCONSISTENT = 5

ENV_PROVER_COMMAND = "ONTOCLOSE_PROVER_COMMAND"
ENV_TIME_LIMIT = "ONTOCLOSE_TIME_LIMIT"
ENV_MEMORY_LIMIT = "ONTOCLOSE_MEMORY_LIMIT"

_PAIR_KIND_OPTIONS = {
    "hyponymy": lexicon.HYPONYMY,
    "antonymy": lexicon.ANTONYMY,
    "meronymy-part": lexicon.MERONYMY_PART,
    "meronymy-member": lexicon.MERONYMY_MEMBER,
    "meronymy-substance": lexicon.MERONYMY_SUBSTANCE,
}


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise kif.KifError(f"cannot read {path}: {exc}")


def _write(path: "str | Path", text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _load_ontology(path: str) -> kif.Ontology:
    return kif.parse_kif(_read(path), source_name=path)


def _load_curation(path: "str | None") -> closure.CurationFile:
    if not path:
        return closure.CurationFile.empty()
    return closure.load_curation(_read(path), source_name=path)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_parse(args) -> int:
    ontology = _load_ontology(args.ontology)
    text = kif.serialize_kif(ontology)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    if args.dot or args.edges:
        tax = taxonomy.build_taxonomy(ontology)
        if args.dot:
            _write(args.dot, tax.to_dot())
        if args.edges:
            _write(args.edges, tax.to_edge_tsv())
    return EXIT_OK


def cmd_stats(args) -> int:
    ontology = _load_ontology(args.ontology)
    labeled = [("original", kif.count_metrics(ontology))]
    if args.mode and args.mode != closure.OWA:
        curation = _load_curation(args.curation)
        for prune in (True, False):
            closed = closure.apply_closure(ontology, args.mode, curation,
                                           prune=prune)
            label = f"{args.mode} ({'pruned' if prune else 'unpruned'})"
            labeled.append((label, kif.count_metrics(closed)))
    text = reports.render_size_stats_csv(labeled)
    if args.csv:
        _write(args.csv, text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_close(args) -> int:
    ontology = _load_ontology(args.ontology)
    curation = _load_curation(args.curation)
    closed = closure.apply_closure(ontology, args.mode, curation,
                                   prune=not args.no_prune,
                                   strict=args.strict)
    text = kif.serialize_kif(closed)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_suggest_curation(args) -> int:
    tax = taxonomy.build_taxonomy(_load_ontology(args.ontology))
    advice = closure.suggest_curation(tax, args.mode)
    text = closure.serialize_curation(advice.candidates)
    if advice.undecided:
        listing = "".join(f"; undecided: {a} {b}\n"
                          for a, b in advice.undecided)
        text = listing + text
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _load_template(path: str) -> questions.QpTemplate:
    text = _read(path)
    headers = {}
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith(";") and ":" in stripped:
            key, value = stripped.lstrip("; ").split(":", 1)
            headers.setdefault(key.strip(), value.strip())
    if "template" not in headers or "kind" not in headers:
        raise questions.TemplateError(
            f"{path}: template files need '; template: <name>' and "
            f"'; kind: <pair-kind>' header comments")

    def relations(key):
        if key not in headers:
            return None
        return frozenset(r.strip() for r in headers[key].split(",") if r.strip())

    return questions.QpTemplate(
        name=headers["template"], pair_kind=headers["kind"],
        skeleton=kif.parse_formula_text(text),
        s1_relations=relations("s1-relations"),
        s2_relations=relations("s2-relations"))


def cmd_gen_cqs(args) -> int:
    mapping = lexicon.MappingIndex(lexicon.load_mapping(_read(args.mapping)))
    all_questions: list[questions.CompetencyQuestion] = []
    skipped = 0
    if args.hyponymy:
        pairs = lexicon.load_synset_relations(_read(args.hyponymy),
                                              lexicon.HYPONYMY)
        for generator in (questions.gen_hyponymy_qp1,
                          questions.gen_hyponymy_qp2):
            result = generator(pairs, mapping)
            all_questions.extend(result.questions)
            skipped += result.skipped_count
    if args.antonymy:
        pairs = lexicon.load_synset_relations(_read(args.antonymy),
                                              lexicon.ANTONYMY)
        result = questions.gen_antonymy_cqs(pairs, mapping)
        all_questions.extend(result.questions)
        skipped += result.skipped_count
    for spec in args.template or ():
        template_path, _, pairs_path = spec.partition(":")
        if not pairs_path:
            raise questions.TemplateError(
                "--template takes TEMPLATE_FILE:PAIRS_FILE")
        template = _load_template(template_path)
        pairs = lexicon.load_synset_relations(_read(pairs_path),
                                              template.pair_kind)
        result = questions.gen_template_cqs(pairs, mapping, template)
        all_questions.extend(result.questions)
        skipped += result.skipped_count
    if args.split_dir:
        for pattern, group in questions.group_by_pattern(all_questions).items():
            safe = pattern.replace("(", "_").replace(")", "").strip("_")
            _write(Path(args.split_dir) / f"{safe}.kif",
                   questions.write_cq_corpus(group))
    text = questions.write_cq_corpus(all_questions)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    print(f"generated {len(all_questions)} questions; "
          f"skipped {skipped} unmapped pairs", file=sys.stderr)
    return EXIT_OK


def cmd_emit(args) -> int:
    ontology = _load_ontology(args.ontology)
    cqs = questions.read_cq_corpus(_read(args.cqs))
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    index_lines = []
    for i, cq in enumerate(cqs):
        for polarity in (prover.TRUTH, prover.FALSITY):
            formula = (cq.truth_test if polarity == prover.TRUTH
                       else cq.falsity_test)
            problem = tptp_problem(ontology, cq, formula, polarity,
                                   args.mode_label)
            name = f"{i:05d}_{polarity}.p"
            _write(out_dir / name, problem.text)
            index_lines.append(json.dumps(
                {"file": name, "cq": cq.id, "polarity": polarity,
                 "pattern": cq.pattern}, sort_keys=True))
    _write(out_dir / "index.jsonl", "\n".join(index_lines) + "\n")
    print(f"emitted {2 * len(cqs)} problems to {out_dir}", file=sys.stderr)
    return EXIT_OK


def tptp_problem(ontology, cq, formula, polarity, mode_label):
    from . import tptp
    return tptp.emit_problem(
        ontology, formula,
        metadata={"cq": cq.id, "pattern": cq.pattern,
                  "polarity": polarity, "mode": mode_label or ""},
        conjecture_name=f"cq_{polarity}")


def _prover_config(args) -> prover.ProverConfig:
    command = os.environ.get(ENV_PROVER_COMMAND) or args.prover_cmd
    if not command:
        raise prover.ProverError(
            f"no prover command (use --prover-cmd or {ENV_PROVER_COMMAND})")
    time_limit = float(os.environ.get(ENV_TIME_LIMIT) or args.time_limit)
    memory = int(os.environ.get(ENV_MEMORY_LIMIT) or args.memory_limit)
    return prover.ProverConfig(command=command, time_limit=time_limit,
                               memory_limit_mib=memory, workers=args.workers)


def cmd_run(args) -> int:
    if args.oracle:
        if not (args.ontology and args.cqs):
            raise prover.ProverError("--oracle needs an ontology and --cqs")
        tax = taxonomy.build_taxonomy(_load_ontology(args.ontology))
        cqs = questions.read_cq_corpus(_read(args.cqs))
        verdicts = prover.oracle_run_batch(tax, cqs, args.journal)
    else:
        if not (args.ontology and args.cqs):
            raise prover.ProverError("prover runs need an ontology and --cqs")
        config = _prover_config(args)
        ontology = _load_ontology(args.ontology)
        cqs = questions.read_cq_corpus(_read(args.cqs))
        workdir = args.problems or str(Path(args.journal).parent / "problems")
        verdicts = prover.run_batch(
            ontology, cqs, config, args.journal, workdir,
            short_circuit=not args.no_short_circuit)
    counts: dict[str, int] = {}
    for verdict in verdicts:
        counts[verdict.value] = counts.get(verdict.value, 0) + 1
    summary = ", ".join(f"{value}: {counts[value]}" for value in sorted(counts))
    print(f"evaluated {len(verdicts)} questions ({summary})", file=sys.stderr)
    return EXIT_OK


def cmd_report(args) -> int:
    records = prover.load_journal(args.journal)
    baseline = prover.load_journal(args.baseline) if args.baseline else None
    expected = (questions.read_cq_corpus(_read(args.cqs))
                if args.cqs else None)
    competency = reports.competency_report(records, baseline=baseline,
                                           expected_cqs=expected)
    efficiency = reports.efficiency_report(records)
    comp_csv = reports.render_competency_csv(competency)
    eff_csv = reports.render_efficiency_csv(efficiency)
    comp_text = reports.render_competency_text(competency)
    eff_text = reports.render_efficiency_text(efficiency)
    if args.out_dir:
        out = Path(args.out_dir)
        _write(out / "competency.csv", comp_csv)
        _write(out / "competency.txt", comp_text)
        _write(out / "efficiency.csv", eff_csv)
        _write(out / "efficiency.txt", eff_text)
    sys.stdout.write(comp_text + "\n" + eff_text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------

def load_config(path: str) -> dict[str, str]:
    config: dict[str, str] = {}
    for lineno, raw in enumerate(_read(path).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise kif.KifError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        config[key.strip()] = value.strip()
    return config


def cmd_pipeline(args) -> int:
    config = load_config(args.config)
    for required in ("ontology", "out"):
        if required not in config:
            raise kif.KifError(f"pipeline config needs '{required}='")
    out = Path(config["out"])
    ontology = _load_ontology(config["ontology"])
    curation = _load_curation(config.get("curation"))
    modes = [m.strip() for m in
             config.get("modes", ",".join(closure.MODES)).split(",")
             if m.strip()]
    for mode in modes:
        if mode not in closure.MODES:
            raise kif.KifError(f"unknown mode in config: {mode!r}")

    mapping = lexicon.MappingIndex(
        lexicon.load_mapping(_read(config["mapping"])))
    all_questions: list[questions.CompetencyQuestion] = []
    for key, kind in _PAIR_KIND_OPTIONS.items():
        path = config.get(f"pairs.{kind}")
        if not path:
            continue
        pairs = lexicon.load_synset_relations(_read(path), kind)
        if kind == lexicon.HYPONYMY:
            all_questions.extend(
                questions.gen_hyponymy_qp1(pairs, mapping).questions)
            all_questions.extend(
                questions.gen_hyponymy_qp2(pairs, mapping).questions)
        elif kind == lexicon.ANTONYMY:
            all_questions.extend(
                questions.gen_antonymy_cqs(pairs, mapping).questions)
        else:
            raise kif.KifError(
                f"meronymy pairs need a template; configure template.{kind}")
    _write(out / "cqs.kif", questions.write_cq_corpus(all_questions))
    cqs = all_questions

    use_oracle = config.get("oracle", "true").lower() in ("1", "true", "yes")
    labeled_stats = []
    baseline_journal = None
    for mode in modes:
        mode_dir = out / mode.replace("+", "_")
        closed = closure.apply_closure(ontology, mode, curation)
        _write(mode_dir / "closed.kif", kif.serialize_kif(closed))
        labeled_stats.append((mode, kif.count_metrics(closed)))
        journal_path = mode_dir / "journal.jsonl"
        if use_oracle:
            tax = taxonomy.build_taxonomy(closed)
            prover.oracle_run_batch(tax, cqs, journal_path)
        else:
            command = os.environ.get(ENV_PROVER_COMMAND) \
                or config.get("prover.command")
            if not command:
                raise prover.ProverError(
                    "pipeline without oracle=true needs prover.command")
            prover_config = prover.ProverConfig(
                command=command,
                time_limit=float(os.environ.get(ENV_TIME_LIMIT)
                                 or config.get("prover.time_limit", 300)),
                memory_limit_mib=int(os.environ.get(ENV_MEMORY_LIMIT)
                                     or config.get("prover.memory_limit", 2048)),
                workers=int(config.get("prover.workers", 1)))
            prover.run_batch(closed, cqs, prover_config, journal_path,
                             mode_dir / "problems")
        records = prover.load_journal(journal_path)
        baseline_records = (prover.load_journal(baseline_journal)
                            if baseline_journal else None)
        competency = reports.competency_report(records,
                                               baseline=baseline_records,
                                               expected_cqs=cqs)
        efficiency = reports.efficiency_report(records)
        _write(mode_dir / "competency.csv",
               reports.render_competency_csv(competency))
        _write(mode_dir / "competency.txt",
               reports.render_competency_text(competency))
        _write(mode_dir / "efficiency.csv",
               reports.render_efficiency_csv(efficiency))
        _write(mode_dir / "efficiency.txt",
               reports.render_efficiency_text(efficiency))
        if baseline_journal is None:
            baseline_journal = journal_path
    _write(out / "stats.csv", reports.render_size_stats_csv(labeled_stats))
    print(f"pipeline complete; outputs in {out}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ontoclose",
        description="Closed-world augmentation and competency evaluation "
                    "for first-order ontologies.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="validate and canonicalize an ontology")
    p.add_argument("ontology")
    p.add_argument("--out")
    p.add_argument("--dot", help="write the taxonomy as a DOT graph")
    p.add_argument("--edges", help="write the subclass edges as TSV")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("stats", help="size metrics, optionally after closure")
    p.add_argument("ontology")
    p.add_argument("--mode", choices=closure.MODES)
    p.add_argument("--curation")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("close", help="write a closed-world ontology variant")
    p.add_argument("ontology")
    p.add_argument("--mode", required=True, choices=closure.MODES)
    p.add_argument("--curation")
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--strict", action="store_true",
                   help="fail instead of warning on curation gaps")
    p.add_argument("--out")
    p.set_defaults(func=cmd_close)

    p = sub.add_parser("suggest-curation",
                       help="propose curation facts / review lists")
    p.add_argument("ontology")
    p.add_argument("--mode", default=closure.SUBCLASS_DISJOINT,
                   choices=[closure.SUBCLASS_DISJOINT,
                            closure.SUBCLASS_NONDISJOINT])
    p.add_argument("--out")
    p.set_defaults(func=cmd_suggest_curation)

    p = sub.add_parser("gen-cqs", help="generate competency questions")
    p.add_argument("--mapping", required=True)
    p.add_argument("--hyponymy")
    p.add_argument("--antonymy")
    p.add_argument("--template", action="append",
                   metavar="TEMPLATE_FILE:PAIRS_FILE")
    p.add_argument("--out")
    p.add_argument("--split-dir", help="also write one corpus per pattern")
    p.set_defaults(func=cmd_gen_cqs)

    p = sub.add_parser("emit", help="write prover problem files")
    p.add_argument("ontology")
    p.add_argument("--cqs", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--mode-label", default="")
    p.set_defaults(func=cmd_emit)

    p = sub.add_parser("run", help="evaluate questions (prover or oracle)")
    p.add_argument("ontology", nargs="?")
    p.add_argument("--cqs")
    p.add_argument("--journal", required=True)
    p.add_argument("--oracle", action="store_true",
                   help="use the structural oracle instead of a prover")
    p.add_argument("--problems", help="directory for emitted problem files")
    p.add_argument("--prover-cmd",
                   help="command template with a {problem} placeholder")
    p.add_argument("--time-limit", type=float, default=300.0)
    p.add_argument("--memory-limit", type=int, default=2048)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-short-circuit", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("report", help="competency and efficiency tables")
    p.add_argument("--journal", required=True)
    p.add_argument("--baseline")
    p.add_argument("--cqs", help="corpus for completeness checking")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("pipeline", help="run every stage from a config file")
    p.add_argument("config")
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except prover.InconsistencyError as exc:
        print(f"ontoclose: inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except prover.ProverError as exc:
        print(f"ontoclose: prover error: {exc}", file=sys.stderr)
        return EXIT_PROVER
    except (kif.KifError, ValueError) as exc:
        print(f"ontoclose: {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
