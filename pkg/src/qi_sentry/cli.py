"""Command-line front end: ingest -> classify -> score -> assess -> select.

Each pipeline stage is its own subcommand so stages can be run (and
tested) independently; ``select`` chains them all. Exit codes: 0 on
success, 1 when the oracle harness finds a divergence, 2 on any
input or configuration error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from . import assessment, classifier, generate, metrics, oracle, selection
from .errors import QiSentryError
from .table import IngestOptions, Table, ingest_delimited

RULES_ENV_VAR = "QI_SENTRY_RULES"


def _load_table(args) -> Table:
    path = Path(args.input)
    options = IngestOptions(
        delimiter=args.delimiter,
        table_name=path.stem,
        na_token=args.na_token,
    )
    with open(path, "rb") as handle:
        return ingest_delimited(handle, options)


def _load_rules(args) -> classifier.ClassificationRules:
    path = args.rules or os.environ.get(RULES_ENV_VAR)
    if path:
        return classifier.load_rules(path)
    return classifier.default_rules()


def _universe_policy(args) -> metrics.UniversePolicy:
    return metrics.UniversePolicy(args.universe)


def cmd_classify(args) -> int:
    table = _load_table(args)
    rules = _load_rules(args)
    classified = classifier.classify(table, rules)
    census = classifier.classification_census(classified)
    if args.format == "json":
        doc = {
            "table": table.name,
            "classes": {name: cls.value for name, cls in classified.classes.items()},
            "census": census,
        }
        print(json.dumps(doc, indent=2))
    elif args.format == "tsv":
        print("table\tcolumn\tclass")
        for name, cls in classified.classes.items():
            print(f"{table.name}\t{name}\t{cls.value}")
    else:
        width = max((len(n) for n in table.column_names), default=6)
        for name, cls in classified.classes.items():
            print(f"{name.ljust(width)}  {cls.value}")
        print(
            f"census: DID={census['did']} QI={census['qi']} "
            f"SA={census['sa']} NSA={census['nsa']}"
        )
    return 0


def cmd_score(args) -> int:
    table = _load_table(args)
    rules = _load_rules(args)
    classified = classifier.classify(table, rules)
    scores = metrics.score_columns(classified, _universe_policy(args))
    if args.format == "json":
        sys.stdout.write(metrics.scores_to_json(table.name, scores))
    elif args.format == "tsv":
        sys.stdout.write(metrics.scores_to_tsv(table.name, scores))
    else:
        width = max((len(s.column) for s in scores), default=6)
        print(f"{'column'.ljust(width)}  uniqueness  influence  sum")
        for s in scores:
            print(
                f"{s.column.ljust(width)}  {metrics.fmt4(s.uniqueness):>10}  "
                f"{metrics.fmt4(s.influence):>9}  {metrics.fmt4(s.sum)}"
            )
    return 0


def cmd_assess(args) -> int:
    form = assessment.load_form(args.assessment)
    score = assessment.grade_requestor(form)
    if args.format == "json":
        doc = {
            "linkage_points": score.linkage_points,
            "reid_ability_points": score.reid_ability_points,
            "understanding_points": score.understanding_points,
            "average": round(score.average, 2),
            "grade": score.grade.value,
        }
        print(json.dumps(doc, indent=2))
    elif args.format == "tsv":
        print("linkage\treid_ability\tunderstanding\taverage\tgrade")
        print(
            f"{score.linkage_points}\t{score.reid_ability_points}\t"
            f"{score.understanding_points}\t{score.average:.2f}\t{score.grade.value}"
        )
    else:
        print(f"linkage points:       {score.linkage_points}")
        print(f"reid ability points:  {score.reid_ability_points}")
        print(f"understanding points: {score.understanding_points}")
        print(f"average: {score.average:.2f} ({score.grade.value})")
    return 0


def cmd_select(args) -> int:
    table = _load_table(args)
    rules = _load_rules(args)
    form = assessment.load_form(args.assessment)
    classified = classifier.classify(table, rules)
    scores = metrics.score_columns(classified, _universe_policy(args))
    requestor = assessment.grade_requestor(form)
    report = selection.build_report(
        classified,
        scores,
        requestor,
        threshold_override=args.threshold,
        timestamp=not args.no_timestamp,
    )
    if args.format == "json":
        sys.stdout.write(selection.report_to_json(report))
    elif args.format == "tsv":
        sys.stdout.write(selection.report_to_tsv(report))
    else:
        sys.stdout.write(selection.report_to_text(report))
    return 0


def cmd_generate(args) -> int:
    spec = generate.load_spec(args.spec)
    if args.seed is not None:
        spec = dataclasses.replace(spec, seed=args.seed)
    table = generate.generate_table(spec)
    options = IngestOptions(delimiter=args.delimiter, na_token=args.na_token)
    text = table.to_delimited(options)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.rules_out:
        doc = classifier.rules_to_doc(generate.rules_for_spec(spec))
        Path(args.rules_out).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return 0


def cmd_oracle(args) -> int:
    table = _load_table(args)
    divergence = oracle.first_divergence(table)
    if divergence is not None:
        print(str(divergence), file=sys.stderr)
        return 1
    print(f"ok: engine and oracle agree on {table.name!r} "
          f"({table.row_count} rows, {len(table.columns)} columns)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qi-sentry",
        description="Quasi-identifier selection for tabular datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, rules=False):
        p.add_argument("--input", required=True, help="delimited input file")
        if rules:
            p.add_argument(
                "--rules",
                help=f"classification rules JSON (default: ${RULES_ENV_VAR} or the shipped rules)",
            )
        p.add_argument("--delimiter", default=",", help="field delimiter (default ,)")
        p.add_argument("--na-token", default="NA", help='missing-value sentinel (default "NA")')

    def add_format(p):
        p.add_argument("--format", choices=["json", "tsv", "text"], default="text")

    p = sub.add_parser("classify", help="assign DID/QI/SA/NSA per column and print the census")
    add_io(p, rules=True)
    add_format(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("score", help="uniqueness, influence, and sum per primary QI")
    add_io(p, rules=True)
    add_format(p)
    p.add_argument("--universe", choices=["all", "qi"], default="all",
                   help="columns forming the universe for influence (default all)")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("assess", help="grade a requestor from an assessment form")
    p.add_argument("--assessment", required=True, help="assessment form JSON")
    add_format(p)
    p.set_defaults(func=cmd_assess)

    p = sub.add_parser("select", help="run the full pipeline and emit the selection report")
    add_io(p, rules=True)
    p.add_argument("--assessment", required=True, help="assessment form JSON")
    add_format(p)
    p.add_argument("--universe", choices=["all", "qi"], default="all")
    p.add_argument("--threshold", type=float,
                   help="manual threshold override in [0, 2]; the report records both")
    p.add_argument("--no-timestamp", action="store_true",
                   help="omit generated_at (for byte-identical reports)")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("generate", help="emit a synthetic table from a spec file")
    p.add_argument("--spec", required=True, help="synthetic table spec JSON")
    p.add_argument("--seed", type=int, help="override the spec's seed")
    p.add_argument("--output", help="write table here instead of stdout")
    p.add_argument("--rules-out", help="also write a rules file from the spec's class hints")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--na-token", default="NA")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("oracle", help="cross-check the grouping engine against the O(n^2) oracle")
    add_io(p)
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse has already printed the diagnostic
        return int(exc.code or 0)
    try:
        return args.func(args)
    except QiSentryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
