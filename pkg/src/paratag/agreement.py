"""Pairwise inter-annotator agreement over the hierarchical label space.

Items where either annotator skipped are counted but excluded from rates
and kappa, since a skip carries no judgment. Chance correction is Cohen's
kappa; the weighted variant uses a disagreement-cost matrix that mirrors
the label hierarchy (flag mismatch < positive-grade mismatch < negative
mismatch < polarity mismatch).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from paratag.labels import (
    ALL_LABEL_STRINGS,
    AnnotatedLabel,
    MatchLevel,
    compare_labels,
    format_label,
    is_paraphrase,
    parse_label,
)

WeightFn = Callable[[str, str], float]


class EmptyInput(ValueError):
    code = "EmptyInput"


class AllSkipped(ValueError):
    code = "AllSkipped"


def disagreement_weight(a: str, b: str) -> float:
    """Default disagreement cost between two canonical label strings.

    0 exact; 0.25 same base, different flags; 0.5 for a 3-vs-4 mismatch;
    0.75 for a 1-vs-2 mismatch; 1.0 when the sides disagree on whether the
    pair is a paraphrase at all.
    """
    if a == b:
        return 0.0
    base_a, base_b = a[0], b[0]
    if base_a == base_b:
        return 0.25
    bases = {base_a, base_b}
    if bases == {"3", "4"}:
        return 0.5
    if bases == {"1", "2"}:
        return 0.75
    return 1.0


@dataclass(frozen=True)
class AgreementReport:
    """Agreement statistics for one doubly annotated batch.

    ``n_items`` counts every aligned pair; ``n_scored`` the ones entering
    rates and kappa (neither side skipped). The confusion matrix covers all
    items, skips included, so its grand total is ``n_items``.
    """

    n_items: int
    n_scored: int
    n_skipped: int
    exact_rate: float
    base_rate: float
    positive_rate: float
    kappa_exact: float
    kappa_weighted: float
    confusion: dict[str, dict[str, int]]

    def to_dict(self) -> dict:
        """JSON-ready form; confusion serialized sparsely, zero cells dropped."""
        sparse = {
            row: {col: n for col, n in cols.items() if n}
            for row, cols in self.confusion.items()
        }
        return {
            "n_items": self.n_items,
            "n_scored": self.n_scored,
            "n_skipped": self.n_skipped,
            "exact_rate": self.exact_rate,
            "base_rate": self.base_rate,
            "positive_rate": self.positive_rate,
            "kappa_exact": self.kappa_exact,
            "kappa_weighted": self.kappa_weighted,
            "confusion": {row: cols for row, cols in sparse.items() if cols},
        }


def compute_agreement(
    pairs: Sequence[tuple[AnnotatedLabel, AnnotatedLabel]],
    weight_fn: WeightFn = disagreement_weight,
) -> AgreementReport:
    """Agreement report for aligned label pairs (annotator A, annotator B)."""
    if not pairs:
        raise EmptyInput("no aligned annotation pairs")

    confusion = {row: {col: 0 for col in ALL_LABEL_STRINGS} for row in ALL_LABEL_STRINGS}
    for label_a, label_b in pairs:
        confusion[format_label(label_a)][format_label(label_b)] += 1

    # Everything below is derived from the counts alone, iterated in
    # label-space order, so permuting the input items cannot perturb any
    # field (not even in the last float bit).
    scorable = [label for label in ALL_LABEL_STRINGS if label != "x"]
    parsed = {label: parse_label(label) for label in scorable}

    n_items = len(pairs)
    n_scored = sum(confusion[row][col] for row in scorable for col in scorable)
    if n_scored == 0:
        raise AllSkipped("every item involves a skip; nothing to score")

    n_exact = n_base = n_positive = 0
    marginal_a = {row: sum(confusion[row][col] for col in scorable) for row in scorable}
    marginal_b = {col: sum(confusion[row][col] for row in scorable) for col in scorable}
    for row in scorable:
        for col in scorable:
            count = confusion[row][col]
            if not count:
                continue
            level = compare_labels(parsed[row], parsed[col])
            if level is MatchLevel.EXACT:
                n_exact += count
            if parsed[row].base is parsed[col].base:
                n_base += count
            if is_paraphrase(parsed[row]) == is_paraphrase(parsed[col]):
                n_positive += count

    p_observed = n_exact / n_scored
    p_expected = sum(
        marginal_a[label] * marginal_b[label] for label in scorable
    ) / (n_scored * n_scored)
    if p_expected == 1.0:
        kappa_exact = 1.0
    else:
        kappa_exact = (p_observed - p_expected) / (1.0 - p_expected)

    observed_cost = 0.0
    expected_cost = 0.0
    for row in scorable:
        for col in scorable:
            weight = weight_fn(row, col)
            observed_cost += weight * confusion[row][col]
            expected_cost += weight * marginal_a[row] * marginal_b[col] / n_scored
    if expected_cost == 0.0:
        kappa_weighted = 1.0
    else:
        kappa_weighted = 1.0 - observed_cost / expected_cost

    return AgreementReport(
        n_items=n_items,
        n_scored=n_scored,
        n_skipped=n_items - n_scored,
        exact_rate=n_exact / n_scored,
        base_rate=n_base / n_scored,
        positive_rate=n_positive / n_scored,
        kappa_exact=kappa_exact,
        kappa_weighted=kappa_weighted,
        confusion=confusion,
    )
