"""The transcribed guideline example corpus must satisfy every invariant.

Each fixture line holds one annotated Finnish pair with the label the
guidelines assign to it, grouped by the phenomenon it illustrates. These
are the ground-truth cases the whole label pipeline has to reproduce.
"""

import json
from pathlib import Path

import pytest

from paratag.corpusio import export_records, import_corpus, validate_record
from paratag.guidelines import LintKind, lint_pair
from paratag.labels import format_label, parse_label

FIXTURE_PATH = Path(__file__).parent / "data" / "guideline_examples.jsonl"
POSITIVE_LABELS = {"4", "4<", "4>", "4s", "4i", "3", "2", "1"}


def load_fixtures():
    with open(FIXTURE_PATH, encoding="utf-8") as handle:
        return [json.loads(line) for line in handle]


@pytest.fixture(scope="module")
def fixtures():
    return load_fixtures()


class TestCorpusShape:
    def test_at_least_sixty_labeled_pairs(self, fixtures):
        labeled = [f for f in fixtures if f["label"] in POSITIVE_LABELS]
        assert len(labeled) >= 60

    def test_every_graded_label_value_is_exercised(self, fixtures):
        assert POSITIVE_LABELS <= {f["label"] for f in fixtures}

    def test_ids_unique_and_texts_non_empty(self, fixtures):
        ids = [f["id"] for f in fixtures]
        assert len(set(ids)) == len(ids)
        assert all(f["text1"] and f["text2"] for f in fixtures)

    def test_topics_name_phenomena(self, fixtures):
        topics = {f["topic"] for f in fixtures}
        assert topics == {
            "universal",
            "subsumption",
            "style",
            "minor",
            "context",
            "related",
            "unrelated",
            "extraction",
        }


class TestLabels:
    def test_all_labels_parse_and_are_canonical(self, fixtures):
        for fixture in fixtures:
            assert format_label(parse_label(fixture["label"])) == fixture["label"]

    def test_flags_appear_only_on_full_matches(self, fixtures):
        for fixture in fixtures:
            label = fixture["label"]
            if len(label) > 1:
                assert label.startswith("4")

    def test_topic_label_consistency(self, fixtures):
        by_topic = {}
        for fixture in fixtures:
            by_topic.setdefault(fixture["topic"], set()).add(fixture["label"])
        assert by_topic["unrelated"] == {"1"}
        assert by_topic["extraction"] == {"x"}
        assert any("<" in l or ">" in l for l in by_topic["subsumption"])
        assert any("s" in l for l in by_topic["style"])
        assert any("i" in l for l in by_topic["minor"])
        assert "3" in by_topic["context"]
        assert "2" in by_topic["related"]


class TestRoundTrip:
    def to_record(self, fixture):
        doc = {
            "id": fixture["id"],
            "text1": fixture["text1"],
            "text2": fixture["text2"],
            "label": fixture["label"],
            "source": "ManualExtraction",
            "annotator": "guide",
            "rewrites": [],
        }
        record, issues = validate_record(doc)
        assert issues == [], (fixture["id"], issues)
        return record

    def test_every_fixture_validates_as_a_corpus_record(self, fixtures):
        for fixture in fixtures:
            self.to_record(fixture)

    def test_jsonl_round_trip_is_byte_identical(self, fixtures):
        records = [self.to_record(f) for f in fixtures]
        first = export_records(records, "jsonl")
        report = import_corpus(first, "jsonl")
        assert report.ok
        assert export_records(report.records, "jsonl") == first

    def test_tsv_round_trip_is_byte_identical(self, fixtures):
        records = [self.to_record(f) for f in fixtures]
        first = export_records(records, "tsv")
        report = import_corpus(first, "tsv")
        assert report.ok
        assert export_records(report.records, "tsv") == first


class TestElementaryVariationLints:
    """The extraction guide's own trivial-pair examples, as lint input."""

    def by_text(self, fixtures, prefix):
        return next(
            f for f in fixtures
            if f["topic"] == "extraction" and f["text1"].startswith(prefix)
        )

    def test_single_token_padding_is_flagged(self, fixtures):
        fixture = self.by_text(fixtures, "Katson")
        (finding,) = lint_pair(fixture["text1"], fixture["text2"])
        assert finding.kind is LintKind.SINGLE_TOKEN_DIFF

    def test_token_swap_is_flagged_as_word_order(self, fixtures):
        fixture = self.by_text(fixtures, "Kuka")
        (finding,) = lint_pair(fixture["text1"], fixture["text2"])
        assert finding.kind is LintKind.WORD_ORDER_ONLY

    def test_imperative_number_change_is_a_single_token_diff(self, fixtures):
        fixture = self.by_text(fixtures, "Päästäkää")
        (finding,) = lint_pair(fixture["text1"], fixture["text2"])
        assert finding.kind is LintKind.SINGLE_TOKEN_DIFF

    def test_pronoun_change_is_below_lint_radar(self, fixtures):
        fixture = self.by_text(fixtures, "Ei teillä")
        assert lint_pair(fixture["text1"], fixture["text2"]) == []
