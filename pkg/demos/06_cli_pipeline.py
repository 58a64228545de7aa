"""Drive the command-line interface end to end in a scratch directory.

Every stage is a subcommand (``parse``, ``stats``, ``close``,
``suggest-curation``, ``gen-cqs``, ``emit``, ``run``, ``report``); the
``pipeline`` subcommand chains them from one config file. This demo shells
out exactly as a user would.
"""

import subprocess
import sys
import tempfile
from pathlib import Path

work = Path(tempfile.mkdtemp(prefix="ontoclose-cli-"))

(work / "ontology.kif").write_text("""\
($subclass Birth OrganismProcess)
($subclass Death OrganismProcess)
($subclass Breathing OrganismProcess)
($subclass Organism Agent)
($subclass SentientAgent Agent)
($subclass Human Organism)
($subclass Human SentientAgent)
""")
(work / "mapping.tsv").write_text(
    "birth#n#2\tBirth=\ndeath#n#1\tDeath=\n"
    "breathing#n#1\tBreathing=\nprocess#n#2\tOrganismProcess+\n")
(work / "antonymy.tsv").write_text("birth#n#2\tdeath#n#1\n")
(work / "hyponymy.tsv").write_text("breathing#n#1\tprocess#n#2\n")


def cli(*args) -> str:
    command = [sys.executable, "-m", "ontoclose.cli", *map(str, args)]
    print(f"$ ontoclose {' '.join(map(str, args))}")
    result = subprocess.run(command, capture_output=True, text=True)
    if result.returncode != 0:
        raise SystemExit(result.stderr)
    return result.stdout


# ---------------------------------------------------------------------------
# Individual stages.
cli("parse", work / "ontology.kif", "--out", work / "canonical.kif",
    "--dot", work / "taxonomy.dot")
print(cli("stats", work / "ontology.kif", "--mode", "subclass+disjointness"))

cli("suggest-curation", work / "ontology.kif",
    "--mode", "subclass+disjointness", "--out", work / "curation.kif")
print(f"suggested curation:\n{(work / 'curation.kif').read_text()}")

cli("close", work / "ontology.kif", "--mode", "subclass+disjointness",
    "--curation", work / "curation.kif", "--out", work / "closed.kif")
closed_lines = (work / "closed.kif").read_text().splitlines()
print(f"closed variant has {len(closed_lines)} lines; "
      f"sibling disjointness included: "
      f"{'($disjoint Birth Death)' in closed_lines}\n")

cli("gen-cqs", "--mapping", work / "mapping.tsv",
    "--antonymy", work / "antonymy.tsv", "--hyponymy", work / "hyponymy.tsv",
    "--out", work / "cqs.kif")
cli("emit", work / "closed.kif", "--cqs", work / "cqs.kif",
    "--out-dir", work / "problems")
print(f"emitted problems: "
      f"{sorted(p.name for p in (work / 'problems').glob('*.p'))}\n")

cli("run", work / "closed.kif", "--oracle", "--cqs", work / "cqs.kif",
    "--journal", work / "journal.jsonl")
print(cli("report", "--journal", work / "journal.jsonl",
          "--cqs", work / "cqs.kif"))

# ---------------------------------------------------------------------------
# The same flow as one config-driven pipeline over all four variants.
(work / "run.conf").write_text(f"""\
ontology={work / 'ontology.kif'}
curation={work / 'curation.kif'}
mapping={work / 'mapping.tsv'}
pairs.antonymy={work / 'antonymy.tsv'}
pairs.hyponymy={work / 'hyponymy.tsv'}
out={work / 'results'}
oracle=true
""")
cli("pipeline", work / "run.conf")
for path in sorted((work / "results").rglob("competency.csv")):
    mode = path.parent.name
    total = path.read_text().splitlines()[-1]
    print(f"{mode:30} {total}")
print(f"\nall pipeline outputs under {work / 'results'}")
