"""Paraphrase annotation toolkit.

Core pieces: the graded label algebra (:mod:`paratag.labels`), the guideline
decision engine and pair lints (:mod:`paratag.guidelines`), heading
segmentation and edit validation (:mod:`paratag.headings`), inter-annotator
agreement (:mod:`paratag.agreement`), the corpus store and its interchange
formats (:mod:`paratag.store`, :mod:`paratag.corpusio`), plus an HTTP
service (:mod:`paratag.service`) and a command line front end
(:mod:`paratag.cli`).
"""

from paratag.labels import (
    ALL_LABEL_STRINGS,
    AnnotatedLabel,
    BaseLabel,
    FlagSet,
    LabelError,
    MatchLevel,
    SubsumptionDirection,
    Violation,
    compare_labels,
    format_label,
    is_paraphrase,
    iter_valid_labels,
    parse_label,
    swap,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_LABEL_STRINGS",
    "AnnotatedLabel",
    "BaseLabel",
    "FlagSet",
    "LabelError",
    "MatchLevel",
    "SubsumptionDirection",
    "Violation",
    "compare_labels",
    "format_label",
    "is_paraphrase",
    "iter_valid_labels",
    "parse_label",
    "swap",
    "validate",
    "__version__",
]
