"""Offline command line: validate, stats, agreement, import, export, lint.

Exit codes: 0 success, 1 validation or data failures, 2 usage and IO
errors. Human-readable tables go to stdout; --format=jsonl switches the
reporting commands to machine-readable JSON lines.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path
from typing import Optional

from paratag.agreement import compute_agreement
from paratag.config import load_config
from paratag.corpusio import (
    CorpusRecord,
    ImportReport,
    export_corpus,
    import_corpus,
    load_records,
)
from paratag.guidelines import lint_pair
from paratag.labels import ALL_LABEL_STRINGS, format_label
from paratag.store import Batch, CorpusStore


class NoOverlap(ValueError):
    code = "NoOverlap"


def _guess_format(path: str, override: Optional[str]) -> str:
    if override:
        return override
    return "tsv" if path.endswith(".tsv") else "jsonl"


def _read_file(path: str) -> bytes:
    return Path(path).read_bytes()


def _print_issues(report: ImportReport) -> None:
    for issue in report.issues:
        print(issue.render())


def _parse_file(path: str, fmt: Optional[str]) -> tuple[ImportReport, str]:
    resolved = _guess_format(path, fmt)
    report = import_corpus(_read_file(path), resolved, strict=True)
    return report, resolved


def _render_table(rows: list[tuple], headers: tuple) -> None:
    table = [tuple(str(cell) for cell in row) for row in [headers, *rows]]
    widths = [max(len(row[i]) for row in table) for i in range(len(headers))]
    for row in table:
        print("  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())


def cmd_validate(args: argparse.Namespace) -> int:
    report, _ = _parse_file(args.file, args.input_format)
    _print_issues(report)
    if report.ok:
        print(f"{report.n_imported} records OK")
        return 0
    return 1


def cmd_stats(args: argparse.Namespace) -> int:
    report, _ = _parse_file(args.file, args.input_format)
    if not report.ok:
        _print_issues(report)
        return 1
    records = report.records
    total = len(records)
    if total == 0:
        print("warning: no records", file=sys.stderr)

    label_counts = {label: 0 for label in ALL_LABEL_STRINGS}
    base_counts: dict[str, int] = {}
    flag_counts = {"<": 0, ">": 0, "s": 0, "i": 0}
    for record in records:
        canonical = format_label(record.label)
        label_counts[canonical] += 1
        base = canonical[0]
        base_counts[base] = base_counts.get(base, 0) + 1
        for flag in canonical[1:]:
            flag_counts[flag] += 1

    def fraction(count: int) -> float:
        return count / total if total else 0.0

    if args.format == "jsonl":
        for label in ALL_LABEL_STRINGS:
            if label_counts[label]:
                print(json.dumps(
                    {"kind": "label", "value": label,
                     "count": label_counts[label],
                     "fraction": fraction(label_counts[label])}
                ))
        for base in sorted(base_counts):
            print(json.dumps(
                {"kind": "base", "value": base, "count": base_counts[base],
                 "fraction": fraction(base_counts[base])}
            ))
        for flag, count in flag_counts.items():
            if count:
                print(json.dumps({"kind": "flag", "value": flag, "count": count}))
        print(json.dumps({"kind": "total", "count": total}))
        return 0

    label_rows = [
        (label, label_counts[label], f"{fraction(label_counts[label]):.4f}")
        for label in ALL_LABEL_STRINGS
        if label_counts[label]
    ]
    _render_table(label_rows, ("label", "count", "fraction"))
    print()
    base_rows = [
        (base, base_counts[base], f"{fraction(base_counts[base]):.4f}")
        for base in sorted(base_counts)
    ]
    _render_table(base_rows, ("base", "count", "fraction"))
    if any(flag_counts.values()):
        print()
        flag_rows = [(f, c) for f, c in flag_counts.items() if c]
        _render_table(flag_rows, ("flag", "count"))
    print(f"\ntotal  {total}")
    return 0


def _one_record_per_id(records: list[CorpusRecord]) -> dict[str, CorpusRecord]:
    by_id: dict[str, CorpusRecord] = {}
    for record in records:
        by_id.setdefault(record.id, record)
    return by_id


def cmd_agreement(args: argparse.Namespace) -> int:
    report_a, _ = _parse_file(args.file_a, args.input_format)
    report_b, _ = _parse_file(args.file_b, args.input_format)
    bad = False
    for name, report in ((args.file_a, report_a), (args.file_b, report_b)):
        if not report.ok:
            print(f"{name}:")
            _print_issues(report)
            bad = True
    if bad:
        return 1

    side_a = _one_record_per_id(report_a.records)
    side_b = _one_record_per_id(report_b.records)
    common = [pair_id for pair_id in side_a if pair_id in side_b]
    only_a = sorted(set(side_a) - set(side_b))
    only_b = sorted(set(side_b) - set(side_a))
    for pair_id in only_a:
        print(f"warning: {pair_id} only in {args.file_a}", file=sys.stderr)
    for pair_id in only_b:
        print(f"warning: {pair_id} only in {args.file_b}", file=sys.stderr)
    if not common:
        print("error: NoOverlap: the files share no pair ids", file=sys.stderr)
        return 1

    aligned = [(side_a[pair_id].label, side_b[pair_id].label) for pair_id in common]
    agreement = compute_agreement(aligned)

    if args.format == "jsonl":
        print(json.dumps(agreement.to_dict(), ensure_ascii=False))
        return 0

    rows = [
        ("items", agreement.n_items),
        ("scored", agreement.n_scored),
        ("skipped", agreement.n_skipped),
        ("exact_rate", f"{agreement.exact_rate:.4f}"),
        ("base_rate", f"{agreement.base_rate:.4f}"),
        ("positive_rate", f"{agreement.positive_rate:.4f}"),
        ("kappa_exact", f"{agreement.kappa_exact:.4f}"),
        ("kappa_weighted", f"{agreement.kappa_weighted:.4f}"),
    ]
    _render_table(rows, ("measure", "value"))
    disagreements = [
        (a, b, count)
        for a, row in agreement.confusion.items()
        for b, count in row.items()
        if count and a != b
    ]
    if disagreements:
        print()
        _render_table(disagreements, ("label_a", "label_b", "count"))
    return 0


def cmd_import(args: argparse.Namespace) -> int:
    fmt = _guess_format(args.file, args.input_format)
    report = import_corpus(_read_file(args.file), fmt, strict=not args.lenient)
    _print_issues(report)
    if args.lenient and report.issues:
        print(f"skipped {len(report.issues)} bad lines", file=sys.stderr)
    if not report.records:
        if report.issues:
            return 1
        print("warning: nothing to import", file=sys.stderr)
        return 0

    store = CorpusStore(args.store)
    try:
        written = load_records(store, report.records)
        if args.batch_id:
            pair_ids = list(dict.fromkeys(r.id for r in report.records))
            store.put_batch(
                Batch(
                    id=args.batch_id,
                    pair_ids=tuple(pair_ids),
                    required_annotators=args.required_annotators,
                )
            )
        print(f"imported {written} annotations into {args.store}")
    finally:
        store.close()
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    if args.store != ":memory:" and not os.path.exists(args.store):
        print(f"error: store {args.store} does not exist", file=sys.stderr)
        return 2
    store = CorpusStore(args.store)
    try:
        payload = export_corpus(store, args.format, batch=args.batch)
    finally:
        store.close()
    if args.output:
        Path(args.output).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
    return 0


def cmd_lint(args: argparse.Namespace) -> int:
    report, _ = _parse_file(args.file, args.input_format)
    if not report.ok:
        _print_issues(report)
        return 1
    seen: set[str] = set()
    for record in report.records:
        if record.id in seen:
            continue
        seen.add(record.id)
        for finding in lint_pair(record.text1, record.text2):
            if args.format == "jsonl":
                print(json.dumps(
                    {"id": record.id, "code": finding.kind.code,
                     "detail": finding.detail},
                    ensure_ascii=False,
                ))
            else:
                print(f"{record.id}: {finding.kind.code}: {finding.detail}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    overrides = {}
    if args.host:
        overrides["host"] = args.host
    if args.port:
        overrides["port"] = args.port
    if args.data_dir:
        overrides["data_dir"] = args.data_dir
    if overrides:
        config = dataclasses.replace(config, **overrides)
    from paratag import service

    service.run(config)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paratag",
        description="Corpus tools for graded paraphrase annotation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input_format(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--input-format",
            choices=("jsonl", "tsv"),
            help="file format; default guessed from the extension",
        )

    def add_output_format(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--format",
            choices=("text", "jsonl"),
            default="text",
            help="report rendering (default: text tables)",
        )

    p = sub.add_parser("validate", help="check a corpus file against the schema")
    p.add_argument("file")
    add_input_format(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stats", help="label, base, and flag counts")
    p.add_argument("file")
    add_input_format(p)
    add_output_format(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("agreement", help="compare two annotation files by pair id")
    p.add_argument("file_a")
    p.add_argument("file_b")
    add_input_format(p)
    add_output_format(p)
    p.set_defaults(func=cmd_agreement)

    p = sub.add_parser("import", help="load a corpus file into a store")
    p.add_argument("file")
    p.add_argument("--store", required=True, help="path of the store database")
    p.add_argument("--batch-id", help="also create a batch over the imported pairs")
    p.add_argument("--required-annotators", type=int, default=1)
    p.add_argument(
        "--lenient",
        action="store_true",
        help="skip bad lines instead of rejecting the whole file",
    )
    add_input_format(p)
    p.set_defaults(func=cmd_import)

    p = sub.add_parser("export", help="dump a store back to a corpus file")
    p.add_argument("--store", required=True)
    p.add_argument("--format", choices=("jsonl", "tsv"), default="jsonl")
    p.add_argument("--batch", help="restrict to one batch")
    p.add_argument("-o", "--output", help="write here instead of stdout")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("lint", help="flag suspicious pairs in a corpus file")
    p.add_argument("file")
    add_input_format(p)
    add_output_format(p)
    p.set_defaults(func=cmd_lint)

    p = sub.add_parser("serve", help="run the annotation HTTP service")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--data-dir")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
