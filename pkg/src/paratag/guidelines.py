"""Decision engine mapping structured annotator judgments to labels, plus
lint heuristics that flag degenerate candidate pairs (identical texts,
word-order-only or punctuation-only variation, single-token edits).

The semantic judgments themselves (is it a paraphrase? which side is more
general?) are answered by a human; this module only turns those answers
into a label deterministically and points out pairs that are probably not
worth labeling at all.
"""

from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass

from paratag.labels import AnnotatedLabel, BaseLabel, FlagSet, SubsumptionDirection


class Generality(enum.Enum):
    """Annotator judgment of which side, if any, is the more general text."""

    NEITHER = "Neither"
    FORMER_MORE_GENERAL = "FormerMoreGeneral"
    LATTER_MORE_GENERAL = "LatterMoreGeneral"
    BOTH = "Both"


class InconsistentAnswers(ValueError):
    """The answer vector contradicts itself."""

    code = "InconsistentAnswers"


@dataclass(frozen=True, slots=True)
class GuidelineAnswers:
    """One annotator's structured answers about a candidate pair.

    ``universal_after_flags`` is the substitution test: once the flagged
    differences are set aside, could either text replace the other in any
    sensible context?
    """

    skippable: bool = False
    related: bool = False
    paraphrase_in_context: bool = False
    generality: Generality = Generality.NEITHER
    universal_after_flags: bool = False
    style_difference: bool = False
    minor_deviation: bool = False

    def __post_init__(self) -> None:
        _check_consistent(self)


def _check_consistent(answers: GuidelineAnswers) -> None:
    if answers.paraphrase_in_context and not answers.related:
        raise InconsistentAnswers("a paraphrase in context is necessarily related")
    if answers.universal_after_flags and not answers.paraphrase_in_context:
        raise InconsistentAnswers(
            "passing the substitution test implies a paraphrase in context"
        )


_DIRECTION_FOR_GENERALITY = {
    Generality.NEITHER: None,
    Generality.FORMER_MORE_GENERAL: SubsumptionDirection.FORMER_MORE_GENERAL,
    Generality.LATTER_MORE_GENERAL: SubsumptionDirection.LATTER_MORE_GENERAL,
}


def derive_label(answers: GuidelineAnswers) -> AnnotatedLabel:
    """Walk the decision tree, first matching branch wins.

    Skip sits outside the scale so it is checked first; crossing
    generality (each side more detailed in a different aspect) breaks the
    one-directional replacement test and demotes the pair to base 3, as
    does failing the substitution test outright.
    """
    _check_consistent(answers)
    if answers.skippable:
        return AnnotatedLabel(BaseLabel.SKIP)
    if not answers.related:
        return AnnotatedLabel(BaseLabel.UNRELATED)
    if not answers.paraphrase_in_context:
        return AnnotatedLabel(BaseLabel.RELATED)
    if answers.generality is Generality.BOTH:
        return AnnotatedLabel(BaseLabel.CONTEXT_PARAPHRASE)
    if not answers.universal_after_flags:
        return AnnotatedLabel(BaseLabel.CONTEXT_PARAPHRASE)
    flags = FlagSet(
        direction=_DIRECTION_FOR_GENERALITY[answers.generality],
        style=answers.style_difference,
        minor_deviation=answers.minor_deviation,
    )
    return AnnotatedLabel(BaseLabel.UNIVERSAL, flags)


# Guidance shown next to the corresponding decision step in the CLI and UI.
# These cover the judgment calls the engine cannot make for the annotator.
GUIDANCE: dict[str, str] = {
    "skip": (
        "Skip only when labeling is pointless: wrong language, text you "
        "cannot understand, or an identical pair. Use it sparingly."
    ),
    "related": (
        "Unrelated means no reasonable connection between the two texts; "
        "usually a candidate-selection error."
    ),
    "in_context": (
        "Related texts that still convey different information are not "
        "paraphrases."
    ),
    "crossing": (
        "If each text is more specific in a different aspect, one-directional "
        "replacement fails; grade as context-dependent instead of flagging."
    ),
    "universal": (
        "The top grade requires that either text could replace the other in "
        "any sensible context, ignoring absurd readings."
    ),
    "direction": (
        "The arrow points at the more general text: it can stand in for the "
        "more detailed one everywhere, but not the reverse."
    ),
    "style": (
        "Flag style for register, tone, politeness, or hedging differences "
        "when the meaning itself is equal."
    ),
    "minor": (
        "Flag minor deviation for small traceable shifts such as this/that, "
        "tense, person, or number."
    ),
    "tie_break": "When two grades both seem well justified, pick the higher one.",
}


class LintKind(enum.Enum):
    """Degenerate-pair category a lint can report."""

    IDENTICAL_PAIR = "IdenticalPair"
    WORD_ORDER_ONLY = "WordOrderOnly"
    PUNCTUATION_ONLY = "PunctuationOnly"
    SINGLE_TOKEN_DIFF = "SingleTokenDiff"

    @property
    def code(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class LintFinding:
    kind: LintKind
    detail: str


def normalize_whitespace(text: str) -> str:
    """Trim and collapse every whitespace run to a single space."""
    return " ".join(text.split())


def _is_punctuation(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def content_tokens(text: str) -> list[str]:
    """Whitespace tokens, case-folded, with edge punctuation stripped and
    punctuation-only tokens dropped. Interior punctuation (hyphenated
    compounds, numbers with separators) is kept."""
    tokens = []
    for raw in text.split():
        start, end = 0, len(raw)
        while start < end and _is_punctuation(raw[start]):
            start += 1
        while end > start and _is_punctuation(raw[end - 1]):
            end -= 1
        if start < end:
            tokens.append(raw[start:end].casefold())
    return tokens


def token_edit_distance(a: list[str], b: list[str]) -> int:
    """Levenshtein distance over whole tokens (insert/delete/substitute)."""
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, tok_a in enumerate(a, start=1):
        current = [i]
        for j, tok_b in enumerate(b, start=1):
            cost = 0 if tok_a == tok_b else 1
            current.append(
                min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost)
            )
        previous = current
    return previous[-1]


def lint_pair(text1: str, text2: str) -> list[LintFinding]:
    """All elementary-variation findings for a candidate pair.

    An identical pair is reported alone; the token-level findings are
    mutually exclusive by construction (equal sequences, reordered
    sequences, and edit distance one cannot coincide).
    """
    if not text1 or not text2:
        raise ValueError("lint_pair requires two non-empty texts")
    if normalize_whitespace(text1) == normalize_whitespace(text2):
        return [
            LintFinding(
                LintKind.IDENTICAL_PAIR,
                "texts are identical after whitespace normalization",
            )
        ]
    tokens1 = content_tokens(text1)
    tokens2 = content_tokens(text2)
    findings = []
    if tokens1 == tokens2:
        findings.append(
            LintFinding(
                LintKind.PUNCTUATION_ONLY,
                "texts differ only in punctuation or letter case",
            )
        )
    elif sorted(tokens1) == sorted(tokens2):
        findings.append(
            LintFinding(LintKind.WORD_ORDER_ONLY, "texts differ only in word order")
        )
    elif token_edit_distance(tokens1, tokens2) == 1:
        findings.append(
            LintFinding(
                LintKind.SINGLE_TOKEN_DIFF,
                "texts differ by a single inserted, dropped, or replaced token",
            )
        )
    return findings
