"""Decision tree and elementary-variation lints."""

from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from paratag.guidelines import (
    Generality,
    GuidelineAnswers,
    InconsistentAnswers,
    LintKind,
    derive_label,
    lint_pair,
    token_edit_distance,
)
from paratag.labels import ALL_LABEL_STRINGS, BaseLabel, format_label


def consistent_answer_vectors():
    """Every consistent GuidelineAnswers value (the full finite space)."""
    vectors = []
    bools = (False, True)
    for skippable, related, in_ctx, gen, universal, style, minor in product(
        bools, bools, bools, Generality, bools, bools, bools
    ):
        if in_ctx and not related:
            continue
        if universal and not in_ctx:
            continue
        vectors.append(
            GuidelineAnswers(
                skippable=skippable,
                related=related,
                paraphrase_in_context=in_ctx,
                generality=gen,
                universal_after_flags=universal,
                style_difference=style,
                minor_deviation=minor,
            )
        )
    return vectors


class TestDeriveLabel:
    def test_unrelated(self):
        answers = GuidelineAnswers(related=False)
        assert format_label(derive_label(answers)) == "1"

    def test_related_but_not_paraphrase(self):
        answers = GuidelineAnswers(related=True, paraphrase_in_context=False)
        assert format_label(derive_label(answers)) == "2"

    def test_context_paraphrase_when_substitution_fails(self):
        answers = GuidelineAnswers(
            related=True, paraphrase_in_context=True, universal_after_flags=False
        )
        assert format_label(derive_label(answers)) == "3"

    def test_crossing_generality_demotes_to_context(self):
        answers = GuidelineAnswers(
            related=True,
            paraphrase_in_context=True,
            generality=Generality.BOTH,
            universal_after_flags=True,
        )
        assert format_label(derive_label(answers)) == "3"

    def test_latter_more_general(self):
        answers = GuidelineAnswers(
            related=True,
            paraphrase_in_context=True,
            generality=Generality.LATTER_MORE_GENERAL,
            universal_after_flags=True,
        )
        assert format_label(derive_label(answers)) == "4>"

    def test_skip_wins_over_everything(self):
        answers = GuidelineAnswers(
            skippable=True,
            related=True,
            paraphrase_in_context=True,
            universal_after_flags=True,
            style_difference=True,
        )
        assert format_label(derive_label(answers)) == "x"

    def test_full_flag_combination(self):
        answers = GuidelineAnswers(
            related=True,
            paraphrase_in_context=True,
            generality=Generality.FORMER_MORE_GENERAL,
            universal_after_flags=True,
            style_difference=True,
            minor_deviation=True,
        )
        assert format_label(derive_label(answers)) == "4<si"

    def test_inconsistent_in_context_without_related(self):
        with pytest.raises(InconsistentAnswers):
            GuidelineAnswers(related=False, paraphrase_in_context=True)

    def test_inconsistent_universal_without_in_context(self):
        with pytest.raises(InconsistentAnswers):
            GuidelineAnswers(related=True, universal_after_flags=True)

    def test_image_is_exactly_the_label_space(self):
        produced = {format_label(derive_label(v)) for v in consistent_answer_vectors()}
        assert produced == set(ALL_LABEL_STRINGS)

    def test_flags_only_ever_on_universal(self):
        for vector in consistent_answer_vectors():
            label = derive_label(vector)
            if not label.flags.is_empty():
                assert label.base is BaseLabel.UNIVERSAL


class TestLints:
    def kinds(self, text1, text2):
        return [f.kind for f in lint_pair(text1, text2)]

    def test_identical(self):
        assert self.kinds("abc def", "abc def") == [LintKind.IDENTICAL_PAIR]

    def test_identical_modulo_whitespace(self):
        assert self.kinds(" abc\tdef ", "abc def") == [LintKind.IDENTICAL_PAIR]

    def test_identical_never_co_occurs(self):
        assert len(lint_pair("sama teksti", "sama  teksti")) == 1

    def test_single_token_insertion(self):
        assert self.kinds("Katson", "Minä katson") == [LintKind.SINGLE_TOKEN_DIFF]

    def test_single_token_substitution(self):
        assert self.kinds("Päästäkää minut!", "Päästä minut!") == [
            LintKind.SINGLE_TOKEN_DIFF
        ]

    def test_word_order_only(self):
        assert self.kinds(
            "Kuka minä sitä olen muuttamaan.", "Kuka minä olen sitä muuttamaan?"
        ) == [LintKind.WORD_ORDER_ONLY]

    def test_punctuation_only(self):
        assert self.kinds("Tuletko mukaan?", "Tuletko mukaan!") == [
            LintKind.PUNCTUATION_ONLY
        ]

    def test_clean_pair_has_no_findings(self):
        assert self.kinds("Tulen puolessa tunnissa", "Saavun 30 minuutin kuluessa") == []

    def test_empty_text_rejected(self):
        with pytest.raises(ValueError):
            lint_pair("", "jotain")

    @given(
        st.text(alphabet="abc äö.,!? ", min_size=1).filter(str.strip),
        st.text(alphabet="abc äö.,!? ", min_size=1).filter(str.strip),
    )
    def test_symmetric(self, a, b):
        assert lint_pair(a, b) == lint_pair(b, a)

    @given(st.text(alphabet="abcd äö-.,!? ", min_size=1).filter(str.strip))
    def test_self_pair_is_identical(self, text):
        assert [f.kind for f in lint_pair(text, text)] == [LintKind.IDENTICAL_PAIR]


class TestTokenEditDistance:
    @pytest.mark.parametrize(
        "a,b,expected",
        [
            ([], [], 0),
            (["a"], [], 1),
            (["a", "b"], ["a", "c"], 1),
            (["a", "b", "c"], ["c", "b", "a"], 2),
            (["x"], ["a", "b", "c"], 3),
        ],
    )
    def test_known_distances(self, a, b, expected):
        assert token_edit_distance(a, b) == expected

    @given(st.lists(st.sampled_from("abcde"), max_size=8))
    def test_zero_iff_equal(self, tokens):
        assert token_edit_distance(tokens, list(tokens)) == 0
