"""Canonical corpus serialization: JSONL and TSV, bit-exact both ways.

JSONL is the primary format: one annotation per line, fixed field order,
UTF-8, no ASCII escaping, canonical label strings. TSV is a flat view
with one row per annotation plus one row per rewrite. Importing an
exported file and exporting again reproduces the bytes exactly.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional

from paratag.labels import AnnotatedLabel, LabelError, format_label, parse_label
from paratag.store import (
    Annotation,
    CandidatePair,
    CorpusStore,
    InvalidRewrite,
    NotFound,
    RewritePair,
    Source,
)

JSONL_FIELDS = (
    "id",
    "text1",
    "text2",
    "label",
    "source",
    "original_text1",
    "original_text2",
    "annotator",
    "rewrites",
    "note",
)
TSV_HEADER = "id\tannotator\tlabel\ttext1\ttext2"
_REWRITE_ID = re.compile(r"^(?P<base>.+)_rew(?P<n>[1-9][0-9]*)$")


@dataclass(frozen=True)
class CorpusRecord:
    """One annotation joined with its candidate pair, as exported."""

    id: str
    text1: str
    text2: str
    label: AnnotatedLabel
    source: Source
    annotator: str
    rewrites: tuple[tuple[str, str], ...] = ()
    original_text1: Optional[str] = None
    original_text2: Optional[str] = None
    note: Optional[str] = None


@dataclass(frozen=True)
class LineIssue:
    """A validation finding tied to a 1-based line number."""

    line: int
    code: str
    field: Optional[str]
    detail: str

    def render(self) -> str:
        where = f" field {self.field}" if self.field else ""
        return f"line {self.line}{where}: {self.code}: {self.detail}"


@dataclass
class ImportReport:
    """Outcome of parsing a corpus stream."""

    records: list[CorpusRecord] = field(default_factory=list)
    issues: list[LineIssue] = field(default_factory=list)
    n_lines: int = 0
    strict: bool = True

    @property
    def ok(self) -> bool:
        return not self.issues

    @property
    def n_imported(self) -> int:
        return len(self.records)


def _issue(code: str, field_name: Optional[str], detail: str) -> dict:
    return {"code": code, "field": field_name, "detail": detail}


def validate_record(doc: object) -> tuple[Optional[CorpusRecord], list[dict]]:
    """Check one decoded JSON document against the full record schema.

    Returns the parsed record (or None) plus a list of issue dicts with
    ``code``, ``field``, and ``detail`` keys. This is the same rule set the
    service applies at its boundary, so file and API verdicts agree.
    """
    if not isinstance(doc, dict):
        return None, [_issue("SchemaViolation", None, "record must be a JSON object")]

    issues: list[dict] = []
    unknown = set(doc) - set(JSONL_FIELDS)
    if unknown:
        issues.append(
            _issue("SchemaViolation", None, f"unknown fields: {sorted(unknown)}")
        )
    for name in ("id", "text1", "text2", "source", "annotator"):
        value = doc.get(name)
        if not isinstance(value, str) or not value:
            issues.append(
                _issue("SchemaViolation", name, "required non-empty string")
            )
    if not isinstance(doc.get("label"), str):
        issues.append(_issue("SchemaViolation", "label", "required string"))
    for name in ("original_text1", "original_text2", "note"):
        if name in doc and (not isinstance(doc[name], str) or not doc[name]):
            issues.append(
                _issue("SchemaViolation", name, "must be a non-empty string if present")
            )

    source: Optional[Source] = None
    if isinstance(doc.get("source"), str):
        try:
            source = Source(doc["source"])
        except ValueError:
            names = [s.value for s in Source]
            issues.append(
                _issue("SchemaViolation", "source", f"must be one of {names}")
            )
    edited = "original_text1" in doc or "original_text2" in doc
    if edited and source is not None and source is not Source.AUTO_HEADING:
        issues.append(
            _issue(
                "SchemaViolation",
                "source",
                "original texts are only allowed on AutoHeading pairs",
            )
        )

    label: Optional[AnnotatedLabel] = None
    if isinstance(doc.get("label"), str):
        try:
            label = parse_label(doc["label"])
        except LabelError as exc:
            codes = ", ".join(exc.violations)
            issues.append(_issue("LabelParseError", "label", f"{codes}: {exc}"))

    rewrites: list[tuple[str, str]] = []
    raw_rewrites = doc.get("rewrites")
    if not isinstance(raw_rewrites, list):
        issues.append(
            _issue("SchemaViolation", "rewrites", "required list of [text1, text2]")
        )
    else:
        for i, entry in enumerate(raw_rewrites):
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(t, str) for t in entry)
            ):
                issues.append(
                    _issue(
                        "SchemaViolation",
                        "rewrites",
                        f"entry {i} must be a [text1, text2] string pair",
                    )
                )
                continue
            try:
                RewritePair(entry[0], entry[1])
            except InvalidRewrite as exc:
                issues.append(_issue("InvalidRewrite", "rewrites", str(exc)))
                continue
            if entry[0] == doc.get("text1") and entry[1] == doc.get("text2"):
                issues.append(
                    _issue(
                        "InvalidRewrite",
                        "rewrites",
                        "rewrite must differ from the candidate pair",
                    )
                )
                continue
            rewrites.append((entry[0], entry[1]))
        if rewrites and label is not None and format_label(label) == "4":
            issues.append(
                _issue(
                    "InvalidRewrite",
                    "rewrites",
                    "a plain full-paraphrase label leaves nothing to rewrite",
                )
            )

    if issues:
        return None, issues
    return (
        CorpusRecord(
            id=doc["id"],
            text1=doc["text1"],
            text2=doc["text2"],
            label=label,
            source=source,
            annotator=doc["annotator"],
            rewrites=tuple(rewrites),
            original_text1=doc.get("original_text1"),
            original_text2=doc.get("original_text2"),
            note=doc.get("note"),
        ),
        [],
    )


def record_to_json_line(record: CorpusRecord) -> str:
    doc: dict = {
        "id": record.id,
        "text1": record.text1,
        "text2": record.text2,
        "label": format_label(record.label),
        "source": record.source.value,
    }
    if record.original_text1 is not None:
        doc["original_text1"] = record.original_text1
    if record.original_text2 is not None:
        doc["original_text2"] = record.original_text2
    doc["annotator"] = record.annotator
    doc["rewrites"] = [[t1, t2] for t1, t2 in record.rewrites]
    if record.note is not None:
        doc["note"] = record.note
    return json.dumps(doc, ensure_ascii=False, separators=(",", ":"))


def _escape_tsv(text: str) -> str:
    return (
        text.replace("\\", "\\\\")
        .replace("\t", "\\t")
        .replace("\n", "\\n")
        .replace("\r", "\\r")
    )


def _unescape_tsv(text: str) -> str:
    out: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text):
            nxt = text[i + 1]
            mapped = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}.get(nxt)
            if mapped is not None:
                out.append(mapped)
                i += 2
                continue
        out.append(ch)
        i += 1
    return "".join(out)


def record_to_tsv_lines(record: CorpusRecord) -> list[str]:
    lines = [
        "\t".join(
            _escape_tsv(value)
            for value in (
                record.id,
                record.annotator,
                format_label(record.label),
                record.text1,
                record.text2,
            )
        )
    ]
    for n, (text1, text2) in enumerate(record.rewrites, start=1):
        lines.append(
            "\t".join(
                _escape_tsv(value)
                for value in (f"{record.id}_rew{n}", record.annotator, "4", text1, text2)
            )
        )
    return lines


def export_records(records: list[CorpusRecord], fmt: str) -> bytes:
    """Serialize records in export order; callers pass them pre-sorted."""
    if fmt == "jsonl":
        body = "".join(record_to_json_line(r) + "\n" for r in records)
    elif fmt == "tsv":
        lines = [TSV_HEADER]
        for record in records:
            lines.extend(record_to_tsv_lines(record))
        body = "".join(line + "\n" for line in lines)
    else:
        raise ValueError(f"unknown export format {fmt!r}")
    return body.encode("utf-8")


def records_from_store(store: CorpusStore, batch: Optional[str] = None) -> list[CorpusRecord]:
    """Join annotations with their pairs, sorted by (pair id, annotator)."""
    scope: Optional[set[str]] = None
    if batch is not None:
        scope = set(store.get_batch(batch).pair_ids)
    records = []
    pair_cache: dict[str, CandidatePair] = {}
    for annotation in store.iter_annotations():
        if scope is not None and annotation.pair_id not in scope:
            continue
        pair = pair_cache.get(annotation.pair_id)
        if pair is None:
            pair = store.get_pair(annotation.pair_id)
            pair_cache[pair.id] = pair
        records.append(
            CorpusRecord(
                id=pair.id,
                text1=pair.text1,
                text2=pair.text2,
                label=annotation.label,
                source=pair.source,
                annotator=annotation.annotator_id,
                rewrites=tuple((r.text1, r.text2) for r in annotation.rewrites),
                original_text1=pair.original_text1,
                original_text2=pair.original_text2,
                note=annotation.note,
            )
        )
    return records


def export_corpus(store: CorpusStore, fmt: str, batch: Optional[str] = None) -> bytes:
    return export_records(records_from_store(store, batch), fmt)


def _decode_lines(data: bytes, report: ImportReport) -> Optional[list[str]]:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        report.issues.append(LineIssue(0, "DecodeError", None, str(exc)))
        return None
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def _cross_record_checks(records: list[tuple[int, CorpusRecord]], report: ImportReport) -> None:
    """File-level consistency: no duplicate submissions, one pair per id."""
    seen_keys: set[tuple[str, str]] = set()
    pair_fields: dict[str, tuple] = {}
    for line_no, record in records:
        key = (record.id, record.annotator)
        if key in seen_keys:
            report.issues.append(
                LineIssue(
                    line_no,
                    "SchemaViolation",
                    "annotator",
                    f"duplicate record for pair {record.id!r} by {record.annotator!r}",
                )
            )
        seen_keys.add(key)
        fields = (
            record.text1,
            record.text2,
            record.source,
            record.original_text1,
            record.original_text2,
        )
        if record.id in pair_fields and pair_fields[record.id] != fields:
            report.issues.append(
                LineIssue(
                    line_no,
                    "SchemaViolation",
                    "id",
                    f"pair {record.id!r} reappears with different pair fields",
                )
            )
        pair_fields.setdefault(record.id, fields)


def _import_jsonl(lines: list[str], report: ImportReport) -> list[tuple[int, CorpusRecord]]:
    out: list[tuple[int, CorpusRecord]] = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            report.issues.append(
                LineIssue(line_no, "DecodeError", None, "blank line")
            )
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            report.issues.append(LineIssue(line_no, "DecodeError", None, str(exc)))
            continue
        record, issues = validate_record(doc)
        for issue in issues:
            report.issues.append(
                LineIssue(line_no, issue["code"], issue["field"], issue["detail"])
            )
        if record is not None:
            out.append((line_no, record))
    return out


def _import_tsv(lines: list[str], report: ImportReport) -> list[tuple[int, CorpusRecord]]:
    if not lines or lines[0] != TSV_HEADER:
        report.issues.append(
            LineIssue(1, "SchemaViolation", None, f"header must be {TSV_HEADER!r}")
        )
        return []
    docs: list[tuple[int, dict]] = []
    by_key: dict[tuple[str, str], dict] = {}
    expected_rew: dict[tuple[str, str], int] = {}
    for line_no, line in enumerate(lines[1:], start=2):
        columns = line.split("\t")
        if len(columns) != 5:
            report.issues.append(
                LineIssue(line_no, "SchemaViolation", None, "expected 5 columns")
            )
            continue
        row_id, annotator, label, text1, text2 = (_unescape_tsv(c) for c in columns)
        match = _REWRITE_ID.match(row_id)
        if match:
            key = (match.group("base"), annotator)
            parent = by_key.get(key)
            if parent is None:
                report.issues.append(
                    LineIssue(
                        line_no,
                        "SchemaViolation",
                        "id",
                        f"rewrite row {row_id!r} has no preceding parent row",
                    )
                )
                continue
            if label != "4":
                report.issues.append(
                    LineIssue(
                        line_no, "SchemaViolation", "label", "rewrite rows carry label 4"
                    )
                )
                continue
            n = int(match.group("n"))
            if n != expected_rew[key]:
                report.issues.append(
                    LineIssue(
                        line_no,
                        "SchemaViolation",
                        "id",
                        f"rewrite rows must be numbered in order; expected _rew{expected_rew[key]}",
                    )
                )
                continue
            expected_rew[key] = n + 1
            parent["rewrites"].append([text1, text2])
        else:
            doc = {
                "id": row_id,
                "text1": text1,
                "text2": text2,
                "label": label,
                "source": Source.MANUAL_EXTRACTION.value,
                "annotator": annotator,
                "rewrites": [],
            }
            key = (row_id, annotator)
            by_key[key] = doc
            expected_rew[key] = 1
            docs.append((line_no, doc))
    out: list[tuple[int, CorpusRecord]] = []
    for line_no, doc in docs:
        record, issues = validate_record(doc)
        for issue in issues:
            report.issues.append(
                LineIssue(line_no, issue["code"], issue["field"], issue["detail"])
            )
        if record is not None:
            out.append((line_no, record))
    return out


def import_corpus(data: bytes, fmt: str, strict: bool = True) -> ImportReport:
    """Parse and validate a corpus stream.

    In strict mode any issue rejects the whole file (no records are
    returned); otherwise bad lines are skipped and good ones kept.
    """
    report = ImportReport(strict=strict)
    lines = _decode_lines(data, report)
    if lines is None:
        return report
    report.n_lines = len(lines)
    if fmt == "jsonl":
        numbered = _import_jsonl(lines, report)
    elif fmt == "tsv":
        numbered = _import_tsv(lines, report)
    else:
        raise ValueError(f"unknown import format {fmt!r}")
    _cross_record_checks(numbered, report)
    if strict and report.issues:
        report.records = []
    else:
        report.records = [record for _, record in numbered]
    return report


def load_records(store: CorpusStore, records: list[CorpusRecord]) -> int:
    """Write validated records into a store; returns annotations written."""
    seen_pairs: set[str] = set()
    written = 0
    for record in records:
        if record.id not in seen_pairs:
            pair = CandidatePair(
                id=record.id,
                text1=record.text1,
                text2=record.text2,
                source=record.source,
                original_text1=record.original_text1,
                original_text2=record.original_text2,
            )
            try:
                store.get_pair(record.id)
            except NotFound:
                store.put_pair(pair)
            seen_pairs.add(record.id)
        store.record_annotation(
            Annotation(
                pair_id=record.id,
                annotator_id=record.annotator,
                label=record.label,
                rewrites=tuple(RewritePair(t1, t2) for t1, t2 in record.rewrites),
                note=record.note,
            )
        )
        written += 1
    return written
