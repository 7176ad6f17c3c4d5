"""Segmenting auto-extracted news headings and policing edits on them.

Headings are often several independent statements glued together with
punctuation. Annotators may trim such a heading, but only by deleting
whole segments; anything else (insertions, mid-sentence word deletions,
rewording) is rejected here and belongs in a rewrite instead.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from paratag.guidelines import normalize_whitespace

# Split points between independent heading parts, matched longest-first.
# Dashes and the pipe require surrounding spaces so hyphenated compounds
# ("4-vuotias") never split.
DEFAULT_DELIMITERS: tuple[str, ...] = (
    " – ",  # spaced en dash
    " — ",  # spaced em dash
    " - ",
    " | ",
    "; ",
    ": ",
)


@dataclass(frozen=True, slots=True)
class SegmentedHeading:
    """A heading split into independent parts and the glue between them."""

    segments: tuple[str, ...]
    delimiters: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("a heading has at least one segment")
        if len(self.delimiters) != len(self.segments) - 1:
            raise ValueError("need exactly one delimiter between adjacent segments")
        if any(not seg.strip() for seg in self.segments):
            raise ValueError("segments must be non-empty after trimming")

    def rejoin(self) -> str:
        """Interleave segments and delimiters back into the original text."""
        parts = [self.segments[0]]
        for delim, seg in zip(self.delimiters, self.segments[1:]):
            parts.append(delim)
            parts.append(seg)
        return "".join(parts)


def segment_heading(
    text: str, delimiters: Sequence[str] = DEFAULT_DELIMITERS
) -> SegmentedHeading:
    """Split a heading at delimiter occurrences, longest match first.

    A split is skipped when it would create a blank segment (leading,
    trailing, or doubled delimiters), which keeps the rejoin exact and the
    segments non-empty. A heading without delimiters is one segment.
    """
    if not text.strip():
        raise ValueError("heading must be non-empty")
    ordered = sorted(delimiters, key=len, reverse=True)
    segments: list[str] = []
    delims: list[str] = []
    seg_start = 0
    i = 0
    while i < len(text):
        matched = next((d for d in ordered if text.startswith(d, i)), None)
        if matched is not None and text[seg_start:i].strip():
            segments.append(text[seg_start:i])
            delims.append(matched)
            i += len(matched)
            seg_start = i
        else:
            i += 1
    tail = text[seg_start:]
    if tail.strip():
        segments.append(tail)
    elif delims:
        # Trailing delimiter followed by blank: undo the final split.
        segments[-1] = segments[-1] + delims.pop() + tail
    else:
        segments.append(text)
    return SegmentedHeading(tuple(segments), tuple(delims))


class EditVerdict(enum.Enum):
    """Outcome of checking an edited heading against its original."""

    VALID = "Valid"
    IDENTITY = "Identity"
    NOT_A_SEGMENT_DELETION = "NotASegmentDeletion"
    ALL_SEGMENTS_DELETED = "AllSegmentsDeleted"

    @property
    def code(self) -> str:
        return self.value

    @property
    def ok(self) -> bool:
        return self in (EditVerdict.VALID, EditVerdict.IDENTITY)


def validate_edit(
    original: str, edited: str, delimiters: Sequence[str] = DEFAULT_DELIMITERS
) -> EditVerdict:
    """Accept an edit only if it deletes whole segments of the original.

    Valid means: the edited text is, character for character, a non-empty
    subset of the original's segments kept in order, where the glue between
    two kept segments is any one of the original delimiters that sat
    between them (so deleting a middle segment may keep either adjacent
    delimiter).
    """
    if not original.strip():
        raise ValueError("original heading must be non-empty")
    if edited == original:
        return EditVerdict.IDENTITY
    if not edited.strip():
        return EditVerdict.ALL_SEGMENTS_DELETED
    heading = segment_heading(original, delimiters)
    if _segment_subset_join(heading, edited):
        return EditVerdict.VALID
    return EditVerdict.NOT_A_SEGMENT_DELETION


def _segment_subset_join(heading: SegmentedHeading, edited: str) -> bool:
    """Whether ``edited`` is reachable by whole-segment deletion."""
    segments, delims = heading.segments, heading.delimiters
    n = len(segments)

    @lru_cache(maxsize=None)
    def continues(pos: int, last_kept: int) -> bool:
        if pos == len(edited):
            return True
        for nxt in range(last_kept + 1, n):
            for di in range(last_kept, nxt):
                delim = delims[di]
                if edited.startswith(delim, pos) and edited.startswith(
                    segments[nxt], pos + len(delim)
                ):
                    if continues(pos + len(delim) + len(segments[nxt]), nxt):
                        return True
        return False

    return any(
        edited.startswith(segments[first]) and continues(len(segments[first]), first)
        for first in range(n)
    )


class Directive(enum.Enum):
    """Follow-up action the tool tells the annotator to take."""

    ASSIGN_SKIP_AND_REWRITE = "AssignSkipAndRewrite"

    @property
    def code(self) -> str:
        return self.value


def check_post_edit_pair(text1: str, text2: str) -> Optional[Directive]:
    """After editing, an identical pair must be skipped and rewritten."""
    if normalize_whitespace(text1) == normalize_whitespace(text2):
        return Directive.ASSIGN_SKIP_AND_REWRITE
    return None
