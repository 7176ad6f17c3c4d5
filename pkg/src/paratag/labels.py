"""Graded paraphrase labels: value types, the string grammar, and label algebra.

The label space is deliberately tiny. A label is one of the bases
1 (unrelated), 2 (related), 3 (paraphrase in this context), 4 (paraphrase
everywhere) or x (skip), and only base 4 may carry flags: a subsumption
direction (``<`` or ``>``), a style marker (``s``) and a minor-deviation
marker (``i``). Everything else in the package builds on the guarantee
that an :class:`AnnotatedLabel` instance is valid by construction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Optional, Sequence, Union


class BaseLabel(enum.Enum):
    """The five base judgments of the grading scale."""

    UNRELATED = "1"
    RELATED = "2"
    CONTEXT_PARAPHRASE = "3"
    UNIVERSAL = "4"
    SKIP = "x"

    @property
    def symbol(self) -> str:
        return self.value

    @property
    def rank(self) -> Optional[int]:
        """Position on the 1-4 scale; ``None`` for skip, which is unordered."""
        return None if self is BaseLabel.SKIP else int(self.value)

    @property
    def is_positive(self) -> bool:
        """Whether this base counts the pair as a paraphrase (3 or 4)."""
        return self in (BaseLabel.CONTEXT_PARAPHRASE, BaseLabel.UNIVERSAL)

    def __repr__(self) -> str:
        return f"BaseLabel.{self.name}"


class SubsumptionDirection(enum.Enum):
    """Which side of the pair is the more general utterance."""

    FORMER_MORE_GENERAL = "<"
    LATTER_MORE_GENERAL = ">"

    @property
    def symbol(self) -> str:
        return self.value

    def flipped(self) -> "SubsumptionDirection":
        if self is SubsumptionDirection.FORMER_MORE_GENERAL:
            return SubsumptionDirection.LATTER_MORE_GENERAL
        return SubsumptionDirection.FORMER_MORE_GENERAL

    def __repr__(self) -> str:
        return f"SubsumptionDirection.{self.name}"


@dataclass(frozen=True, slots=True)
class FlagSet:
    """Flags refining a universal paraphrase; independent and freely combinable."""

    direction: Optional[SubsumptionDirection] = None
    style: bool = False
    minor_deviation: bool = False

    def is_empty(self) -> bool:
        return self.direction is None and not self.style and not self.minor_deviation

    def symbols(self) -> str:
        """Canonical flag spelling: direction first, then ``s``, then ``i``."""
        parts = []
        if self.direction is not None:
            parts.append(self.direction.symbol)
        if self.style:
            parts.append("s")
        if self.minor_deviation:
            parts.append("i")
        return "".join(parts)


EMPTY_FLAGS = FlagSet()


class Violation(enum.Enum):
    """Constraint violations reported by :func:`validate`."""

    FLAG_ON_NON_UNIVERSAL = "FlagOnNonUniversal"
    FLAGS_ON_SKIP = "FlagsOnSkip"

    @property
    def code(self) -> str:
        return self.value


class LabelError(ValueError):
    """A label string or base/flag combination breaks the grammar.

    ``violations`` lists every constraint code that applies, not just the
    one the exception class is named after.
    """

    code = "LabelError"

    def __init__(self, message: str, violations: Optional[Sequence[str]] = None):
        super().__init__(message)
        self.violations: list[str] = list(violations) if violations else [self.code]


class EmptyLabel(LabelError):
    code = "EmptyLabel"


class UnknownSymbol(LabelError):
    code = "UnknownSymbol"


class DuplicateFlag(LabelError):
    code = "DuplicateFlag"


class BothDirections(LabelError):
    code = "BothDirections"


class FlagOnNonUniversal(LabelError):
    code = "FlagOnNonUniversal"


@dataclass(frozen=True, slots=True)
class AnnotatedLabel:
    """A base label plus flags; invalid combinations cannot be constructed."""

    base: BaseLabel
    flags: FlagSet = EMPTY_FLAGS

    def __post_init__(self) -> None:
        problems = check_flags(self.base, self.flags)
        if problems:
            raise FlagOnNonUniversal(
                f"flags {self.flags.symbols()!r} are not allowed on base "
                f"{self.base.symbol!r}",
                violations=[p.code for p in problems],
            )

    @property
    def is_paraphrase(self) -> bool:
        return self.base.is_positive

    def __str__(self) -> str:
        return format_label(self)


def check_flags(base: BaseLabel, flags: FlagSet) -> list[Violation]:
    """All constraints broken by attaching ``flags`` to ``base`` (empty = fine)."""
    problems: list[Violation] = []
    if not flags.is_empty():
        if base is not BaseLabel.UNIVERSAL:
            problems.append(Violation.FLAG_ON_NON_UNIVERSAL)
        if base is BaseLabel.SKIP:
            problems.append(Violation.FLAGS_ON_SKIP)
    return problems


def validate(base: BaseLabel, flags: FlagSet) -> Union[AnnotatedLabel, list[Violation]]:
    """Build a label, or report the full list of violated constraints."""
    problems = check_flags(base, flags)
    if problems:
        return problems
    return AnnotatedLabel(base, flags)


_BASE_BY_CHAR = {
    "1": BaseLabel.UNRELATED,
    "2": BaseLabel.RELATED,
    "3": BaseLabel.CONTEXT_PARAPHRASE,
    "4": BaseLabel.UNIVERSAL,
    "x": BaseLabel.SKIP,
    "X": BaseLabel.SKIP,
}

_DIRECTION_BY_CHAR = {
    "<": SubsumptionDirection.FORMER_MORE_GENERAL,
    ">": SubsumptionDirection.LATTER_MORE_GENERAL,
}


def parse_label(text: str) -> AnnotatedLabel:
    """Parse a label string such as ``"4"``, ``"4>s"`` or ``"x"``.

    Surrounding whitespace is trimmed and letter case is accepted either
    way on input; interior whitespace is a grammar error. Flags may arrive
    in any order but each at most once, and only after base 4.
    """
    stripped = text.strip()
    if not stripped:
        raise EmptyLabel("label string is empty")
    base = _BASE_BY_CHAR.get(stripped[0])
    if base is None:
        raise UnknownSymbol(f"unknown base symbol {stripped[0]!r} in {stripped!r}")

    direction: Optional[SubsumptionDirection] = None
    style = False
    minor = False
    for ch in stripped[1:]:
        norm = ch.lower()
        if norm not in ("<", ">", "s", "i"):
            raise UnknownSymbol(f"unknown symbol {ch!r} in {stripped!r}")
        if base is not BaseLabel.UNIVERSAL:
            codes = [Violation.FLAG_ON_NON_UNIVERSAL.code]
            if base is BaseLabel.SKIP:
                codes.append(Violation.FLAGS_ON_SKIP.code)
            raise FlagOnNonUniversal(
                f"flag {ch!r} after base {base.symbol!r} in {stripped!r}",
                violations=codes,
            )
        if norm in _DIRECTION_BY_CHAR:
            wanted = _DIRECTION_BY_CHAR[norm]
            if direction is wanted:
                raise DuplicateFlag(f"duplicate flag {ch!r} in {stripped!r}")
            if direction is not None:
                raise BothDirections(f"both '<' and '>' present in {stripped!r}")
            direction = wanted
        elif norm == "s":
            if style:
                raise DuplicateFlag(f"duplicate flag {ch!r} in {stripped!r}")
            style = True
        else:
            if minor:
                raise DuplicateFlag(f"duplicate flag {ch!r} in {stripped!r}")
            minor = True

    return AnnotatedLabel(base, FlagSet(direction, style, minor))


def format_label(label: AnnotatedLabel) -> str:
    """Canonical spelling: base, then direction, then ``s``, then ``i``."""
    return label.base.symbol + label.flags.symbols()


def swap(label: AnnotatedLabel) -> AnnotatedLabel:
    """The label for the same pair with its two texts exchanged.

    Only the subsumption direction is order-sensitive, so it flips and
    everything else is preserved. Involution: ``swap(swap(l)) == l``.
    """
    if label.flags.direction is None:
        return label
    flipped = FlagSet(
        direction=label.flags.direction.flipped(),
        style=label.flags.style,
        minor_deviation=label.flags.minor_deviation,
    )
    return AnnotatedLabel(label.base, flipped)


def is_paraphrase(label: AnnotatedLabel) -> bool:
    """True for bases 3 and 4: a paraphrase at least in the given context."""
    return label.base.is_positive


class MatchLevel(enum.Enum):
    """How closely two annotators' labels for one pair agree."""

    EXACT = "Exact"
    BASE_ONLY = "BaseOnly"
    BOTH_POSITIVE = "BothPositive"
    DISAGREE = "Disagree"
    SKIP_INVOLVED = "SkipInvolved"


def compare_labels(a: AnnotatedLabel, b: AnnotatedLabel) -> MatchLevel:
    """Grade the agreement between two labels; skip on either side wins."""
    if a.base is BaseLabel.SKIP or b.base is BaseLabel.SKIP:
        return MatchLevel.SKIP_INVOLVED
    if a == b:
        return MatchLevel.EXACT
    if a.base is b.base:
        return MatchLevel.BASE_ONLY
    if a.base.is_positive and b.base.is_positive:
        return MatchLevel.BOTH_POSITIVE
    return MatchLevel.DISAGREE


def iter_valid_labels() -> Iterator[AnnotatedLabel]:
    """Every valid label exactly once, in canonical display order."""
    for base in (BaseLabel.UNRELATED, BaseLabel.RELATED, BaseLabel.CONTEXT_PARAPHRASE):
        yield AnnotatedLabel(base)
    for direction, style, minor in product(
        (None, *SubsumptionDirection), (False, True), (False, True)
    ):
        yield AnnotatedLabel(BaseLabel.UNIVERSAL, FlagSet(direction, style, minor))
    yield AnnotatedLabel(BaseLabel.SKIP)


ALL_LABEL_STRINGS: tuple[str, ...] = tuple(format_label(l) for l in iter_valid_labels())
