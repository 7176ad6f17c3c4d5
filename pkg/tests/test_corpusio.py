"""Serialization round-trips and file validation for both corpus formats."""

import json
import random

import pytest

from paratag.corpusio import (
    CorpusRecord,
    export_corpus,
    export_records,
    import_corpus,
    load_records,
    records_from_store,
    validate_record,
)
from paratag.labels import ALL_LABEL_STRINGS, parse_label
from paratag.store import Annotation, CandidatePair, CorpusStore, RewritePair, Source


def base_doc(**overrides):
    doc = {
        "id": "p1",
        "text1": "Minä katson",
        "text2": "Katson",
        "label": "4s",
        "source": "ManualExtraction",
        "annotator": "anna",
        "rewrites": [],
    }
    doc.update(overrides)
    return doc


def make_record(**overrides):
    record, issues = validate_record(base_doc(**overrides))
    assert not issues, issues
    return record


def random_text(rng, high_codepoints=False):
    alphabet = "abcdefghij äöå"
    if high_codepoints:
        alphabet += "\t\n\\€–“😀"
    length = rng.randint(1, 30)
    text = "".join(rng.choice(alphabet) for _ in range(length))
    return text or "x"


def random_records(rng, count):
    records = []
    for i in range(count):
        source = rng.choice(list(Source))
        edited = source is Source.AUTO_HEADING and rng.random() < 0.3
        label = rng.choice(ALL_LABEL_STRINGS)
        rewrites = []
        if label != "4" and rng.random() < 0.3:
            first = random_text(rng, True)
            rewrites = [[first, first + " lisäys"]]
        doc = base_doc(
            id=f"p{i:05d}",
            text1=random_text(rng, True),
            text2=random_text(rng, True),
            label=label,
            source=source.value,
            annotator=rng.choice(["anna", "bert", "cleo"]),
            rewrites=rewrites,
        )
        if edited:
            doc["original_text1"] = doc["text1"] + " – poistettu osa"
        if rng.random() < 0.2:
            doc["note"] = random_text(rng, True)
        record, issues = validate_record(doc)
        assert not issues, (doc, issues)
        records.append(record)
    return records


class TestRecordValidation:
    def test_valid_record_passes(self):
        record, issues = validate_record(base_doc())
        assert issues == []
        assert record.id == "p1"

    def test_missing_field_reported_with_field_name(self):
        doc = base_doc()
        del doc["text2"]
        record, issues = validate_record(doc)
        assert record is None
        assert any(i["field"] == "text2" and i["code"] == "SchemaViolation" for i in issues)

    def test_empty_text_is_schema_violation(self):
        _, issues = validate_record(base_doc(text2=""))
        assert issues[0]["code"] == "SchemaViolation"

    def test_unknown_field_rejected(self):
        _, issues = validate_record(base_doc(surprise=1))
        assert any("surprise" in i["detail"] for i in issues)

    def test_flag_on_negative_label_cites_the_violation(self):
        _, issues = validate_record(base_doc(label="3s"))
        (issue,) = issues
        assert issue["code"] == "LabelParseError"
        assert "FlagOnNonUniversal" in issue["detail"]

    def test_skip_with_flag_cites_flags_on_skip(self):
        _, issues = validate_record(base_doc(label="x>"))
        assert "FlagsOnSkip" in issues[0]["detail"]

    def test_identical_rewrite_texts_rejected(self):
        _, issues = validate_record(
            base_doc(label="2", rewrites=[["sama", "sama"]])
        )
        assert issues[0]["code"] == "InvalidRewrite"

    def test_rewrite_on_plain_full_match_rejected(self):
        _, issues = validate_record(
            base_doc(label="4", rewrites=[["eka", "toka"]])
        )
        assert issues[0]["code"] == "InvalidRewrite"

    def test_rewrite_equal_to_pair_rejected(self):
        _, issues = validate_record(
            base_doc(label="2", rewrites=[["Minä katson", "Katson"]])
        )
        assert issues[0]["code"] == "InvalidRewrite"

    def test_original_text_requires_auto_heading(self):
        _, issues = validate_record(base_doc(original_text1="ennen muokkausta"))
        assert issues[0]["code"] == "SchemaViolation"
        record, issues = validate_record(
            base_doc(source="AutoHeading", original_text1="ennen muokkausta")
        )
        assert issues == []
        assert record.original_text1 == "ennen muokkausta"

    def test_non_canonical_label_is_accepted_and_canonicalized(self):
        record, issues = validate_record(base_doc(label="4S>I"))
        assert issues == []
        assert parse_label("4>si") == record.label


class TestJsonlFormat:
    def test_field_order_is_fixed(self):
        record = make_record(
            source="AutoHeading",
            original_text1="alkuperäinen – muoto",
            note="huomio",
            label="4<",
            rewrites=[["eka", "toka"]],
        )
        (line,) = export_records([record], "jsonl").decode().splitlines()
        assert list(json.loads(line)) == [
            "id",
            "text1",
            "text2",
            "label",
            "source",
            "original_text1",
            "annotator",
            "rewrites",
            "note",
        ]

    def test_ascii_is_not_escaped(self):
        record = make_record(text1="ääkköset ja €")
        assert "ääkköset ja €".encode() in export_records([record], "jsonl")

    def test_round_trip_is_byte_identical(self):
        rng = random.Random(11)
        records = random_records(rng, 200)
        first = export_records(records, "jsonl")
        report = import_corpus(first, "jsonl")
        assert report.ok, report.issues[:5]
        assert export_records(report.records, "jsonl") == first

    def test_import_rejects_bad_json_line(self):
        report = import_corpus(b"{not json}\n", "jsonl")
        assert not report.ok
        assert report.issues[0].code == "DecodeError"

    def test_import_rejects_non_utf8(self):
        report = import_corpus(b"\xff\xfe", "jsonl")
        assert report.issues[0].code == "DecodeError"
        assert report.issues[0].line == 0

    def test_strict_mode_rejects_whole_file(self):
        good = export_records([make_record()], "jsonl")
        bad = good + b'{"id":"p2"}\n'
        report = import_corpus(bad, "jsonl", strict=True)
        assert report.records == []
        assert not report.ok

    def test_lenient_mode_keeps_good_lines(self):
        good = export_records([make_record()], "jsonl")
        report = import_corpus(good + b"broken\n", "jsonl", strict=False)
        assert report.n_imported == 1
        assert len(report.issues) == 1

    def test_duplicate_submission_detected(self):
        record = make_record()
        data = export_records([record, record], "jsonl")
        report = import_corpus(data, "jsonl")
        assert any("duplicate" in i.detail for i in report.issues)

    def test_conflicting_pair_fields_detected(self):
        a = make_record(annotator="anna")
        b = make_record(annotator="bert", text2="eri teksti")
        report = import_corpus(export_records([a, b], "jsonl"), "jsonl")
        assert any("different pair fields" in i.detail for i in report.issues)


class TestTsvFormat:
    def test_header_and_rewrite_rows(self):
        record = make_record(label="4>", rewrites=[["eka", "toka"], ["kolmas", "neljäs"]])
        lines = export_records([record], "tsv").decode().splitlines()
        assert lines[0] == "id\tannotator\tlabel\ttext1\ttext2"
        assert lines[1].startswith("p1\tanna\t4>\t")
        assert lines[2].startswith("p1_rew1\tanna\t4\teka\ttoka")
        assert lines[3].startswith("p1_rew2\tanna\t4\tkolmas\tneljäs")

    def test_tabs_and_newlines_escaped(self):
        record = make_record(text1="rivi\nvaihto", text2="sarake\terotin")
        data = export_records([record], "tsv")
        lines = data.decode().splitlines()
        assert len(lines) == 2
        assert "rivi\\nvaihto" in lines[1]
        assert "sarake\\terotin" in lines[1]

    def test_round_trip_is_byte_identical(self):
        rng = random.Random(13)
        records = random_records(rng, 200)
        flattened = []
        for i, record in enumerate(records):
            doc = base_doc(
                id=f"t{i:05d}",
                text1=record.text1,
                text2=record.text2,
                label="2" if not record.rewrites else "3",
                annotator=record.annotator,
                rewrites=[list(pair) for pair in record.rewrites],
            )
            rebuilt, issues = validate_record(doc)
            assert not issues
            flattened.append(rebuilt)
        first = export_records(flattened, "tsv")
        report = import_corpus(first, "tsv")
        assert report.ok, report.issues[:5]
        assert export_records(report.records, "tsv") == first

    def test_missing_header_rejected(self):
        report = import_corpus(b"p1\tanna\t4\ta\tb\n", "tsv")
        assert report.issues[0].code == "SchemaViolation"

    def test_orphan_rewrite_row_rejected(self):
        data = (
            "id\tannotator\tlabel\ttext1\ttext2\n"
            "p1_rew1\tanna\t4\teka\ttoka\n"
        ).encode()
        report = import_corpus(data, "tsv")
        assert any("parent" in i.detail for i in report.issues)

    def test_rewrite_row_with_wrong_label_rejected(self):
        data = (
            "id\tannotator\tlabel\ttext1\ttext2\n"
            "p1\tanna\t3\talfa\tbeta\n"
            "p1_rew1\tanna\t2\teka\ttoka\n"
        ).encode()
        report = import_corpus(data, "tsv")
        assert any(i.field == "label" for i in report.issues)


class TestStoreIntegration:
    def test_export_import_export_through_store(self):
        store = CorpusStore()
        store.put_pair(
            CandidatePair(
                id="h1",
                text1="Otsikko: jälkiosa",
                text2="Otsikko",
                source=Source.AUTO_HEADING,
                original_text1="Otsikko: jälkiosa – poistettu",
            )
        )
        store.record_annotation(
            Annotation(
                pair_id="h1",
                annotator_id="anna",
                label=parse_label("4>"),
                rewrites=(RewritePair("uusi eka", "uusi toka"),),
                note="muokattu otsikko",
            )
        )
        first = export_corpus(store, "jsonl")
        report = import_corpus(first, "jsonl")
        assert report.ok

        second_store = CorpusStore()
        assert load_records(second_store, report.records) == 1
        assert export_corpus(second_store, "jsonl") == first
        store.close()
        second_store.close()

    def test_batch_scope_limits_export(self):
        store = CorpusStore()
        from paratag.store import Batch

        for pair_id in ("a", "b"):
            store.put_pair(
                CandidatePair(
                    id=pair_id,
                    text1="yksi",
                    text2="kaksi",
                    source=Source.MANUAL_EXTRACTION,
                )
            )
            store.record_annotation(
                Annotation(pair_id=pair_id, annotator_id="anna", label=parse_label("2"))
            )
        store.put_batch(Batch(id="only-a", pair_ids=("a",)))
        records = records_from_store(store, batch="only-a")
        assert [r.id for r in records] == ["a"]
        store.close()
