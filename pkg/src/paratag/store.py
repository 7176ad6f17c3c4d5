"""Embedded corpus store for candidate pairs, annotations, batches, claims.

A single SQLite connection behind a global lock: every operation is
serialized, which makes the optimistic version check, claim accounting,
and status transitions race-free under concurrent API handlers without
any further coordination. Documents are stored as JSON blobs keyed by id,
so the schema stays stable while the dataclasses evolve.
"""

from __future__ import annotations

import json
import logging
import random
import sqlite3
import threading
import time
import uuid
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from paratag.headings import (
    Directive,
    EditVerdict,
    check_post_edit_pair,
    validate_edit,
)
from paratag.labels import AnnotatedLabel, format_label, parse_label

logger = logging.getLogger(__name__)


class StoreError(ValueError):
    """Base class for store failures; ``code`` is the machine-readable name."""

    code = "StoreError"


class NotFound(StoreError):
    code = "NotFound"


class VersionConflict(StoreError):
    code = "VersionConflict"


class InvalidRewrite(StoreError):
    code = "InvalidRewrite"


class EditNotAllowed(StoreError):
    code = "EditNotAllowed"


class UnknownBatch(StoreError):
    code = "UnknownBatch"


class ExpiredClaim(StoreError):
    code = "ExpiredClaim"


class InsufficientAnnotations(StoreError):
    code = "InsufficientAnnotations"


class EditRejected(StoreError):
    """An edit that is not a pure whole-segment deletion of the original."""

    def __init__(self, verdict: EditVerdict, message: str) -> None:
        super().__init__(message)
        self.verdict = verdict
        self.code = verdict.code


class Source(Enum):
    """How a candidate pair entered the corpus."""

    MANUAL_EXTRACTION = "ManualExtraction"
    AUTO_HEADING = "AutoHeading"


class PairStatus(Enum):
    """Work-queue state of a candidate pair."""

    PENDING = "Pending"
    CLAIMED = "Claimed"
    ANNOTATED = "Annotated"


@dataclass(frozen=True)
class CandidatePair:
    """A pair of utterances queued for annotation.

    ``original_text1``/``original_text2`` hold the pre-edit forms and are
    present exactly when the corresponding text has been edited; only
    automatically extracted heading pairs may be edited at all.
    """

    id: str
    text1: str
    text2: str
    source: Source
    document_refs: tuple[str, ...] = ()
    original_text1: Optional[str] = None
    original_text2: Optional[str] = None
    status: PairStatus = PairStatus.PENDING
    version: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "document_refs", tuple(self.document_refs))
        if not self.id:
            raise ValueError("pair id must be non-empty")
        if not self.text1 or not self.text2:
            raise ValueError("pair texts must be non-empty")
        edited = self.original_text1 is not None or self.original_text2 is not None
        if edited and self.source is not Source.AUTO_HEADING:
            raise ValueError(
                "only automatically extracted heading pairs can carry edits"
            )
        if self.version < 0:
            raise ValueError("version must be non-negative")


@dataclass(frozen=True)
class RewritePair:
    """A corrected pair derived from a candidate; implicitly a full match.

    Rewrites never carry a label of their own: by construction they are
    full paraphrases, so flat exports emit a synthetic "4" for them.
    """

    text1: str
    text2: str

    def __post_init__(self) -> None:
        if not self.text1 or not self.text2:
            raise InvalidRewrite("rewrite texts must be non-empty")
        if self.text1 == self.text2:
            raise InvalidRewrite("rewrite texts must differ from each other")


@dataclass(frozen=True)
class Annotation:
    """One annotator's judgment of one candidate pair."""

    pair_id: str
    annotator_id: str
    label: AnnotatedLabel
    rewrites: tuple[RewritePair, ...] = ()
    note: Optional[str] = None
    created_at: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "rewrites", tuple(self.rewrites))
        if not self.pair_id:
            raise ValueError("annotation must reference a pair id")
        if not self.annotator_id:
            raise ValueError("annotation must carry an annotator id")
        if self.rewrites and format_label(self.label) == "4":
            raise InvalidRewrite(
                "a pair already labeled as a plain full paraphrase needs no rewrite"
            )


@dataclass(frozen=True)
class Batch:
    """An ordered slice of the queue with an annotator-count requirement."""

    id: str
    pair_ids: tuple[str, ...]
    required_annotators: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "pair_ids", tuple(self.pair_ids))
        if not self.id:
            raise ValueError("batch id must be non-empty")
        if len(set(self.pair_ids)) != len(self.pair_ids):
            raise ValueError("batch pair ids must be unique")
        if self.required_annotators < 1:
            raise ValueError("required_annotators must be positive")


@dataclass(frozen=True)
class ClaimTicket:
    """A short-lived lease on a pair for one annotator."""

    pair_id: str
    annotator_id: str
    expires_at: float
    batch_id: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "pair_id": self.pair_id,
            "annotator": self.annotator_id,
            "expires_at": self.expires_at,
            "batch_id": self.batch_id,
        }


def mint_id() -> str:
    """Opaque identifier for newly created records."""
    return uuid.uuid4().hex[:12]


def _pair_doc(pair: CandidatePair) -> str:
    doc = {
        "text1": pair.text1,
        "text2": pair.text2,
        "source": pair.source.value,
        "document_refs": list(pair.document_refs),
        "original_text1": pair.original_text1,
        "original_text2": pair.original_text2,
        "status": pair.status.value,
        "version": pair.version,
    }
    return json.dumps(doc, ensure_ascii=False)


def _pair_from_doc(pair_id: str, doc: str) -> CandidatePair:
    data = json.loads(doc)
    return CandidatePair(
        id=pair_id,
        text1=data["text1"],
        text2=data["text2"],
        source=Source(data["source"]),
        document_refs=tuple(data["document_refs"]),
        original_text1=data["original_text1"],
        original_text2=data["original_text2"],
        status=PairStatus(data["status"]),
        version=data["version"],
    )


def _annotation_doc(annotation: Annotation) -> str:
    doc = {
        "label": format_label(annotation.label),
        "rewrites": [[r.text1, r.text2] for r in annotation.rewrites],
        "note": annotation.note,
        "created_at": annotation.created_at,
    }
    return json.dumps(doc, ensure_ascii=False)


def _annotation_from_doc(pair_id: str, annotator: str, doc: str) -> Annotation:
    data = json.loads(doc)
    return Annotation(
        pair_id=pair_id,
        annotator_id=annotator,
        label=parse_label(data["label"]),
        rewrites=tuple(RewritePair(t1, t2) for t1, t2 in data["rewrites"]),
        note=data["note"],
        created_at=data["created_at"],
    )


class CorpusStore:
    """Durable home of pairs, annotations, batches, and claim leases."""

    def __init__(self, path: str = ":memory:") -> None:
        self._conn = sqlite3.connect(path, check_same_thread=False)
        self._lock = threading.RLock()
        self._init_schema()

    def close(self) -> None:
        with self._lock:
            self._conn.close()

    def _init_schema(self) -> None:
        with self._lock:
            self._conn.executescript(
                """
                CREATE TABLE IF NOT EXISTS pairs (
                    id TEXT PRIMARY KEY,
                    doc TEXT NOT NULL
                );
                CREATE TABLE IF NOT EXISTS annotations (
                    pair_id TEXT NOT NULL,
                    annotator TEXT NOT NULL,
                    doc TEXT NOT NULL,
                    PRIMARY KEY (pair_id, annotator)
                );
                CREATE TABLE IF NOT EXISTS batches (
                    id TEXT PRIMARY KEY,
                    doc TEXT NOT NULL
                );
                CREATE TABLE IF NOT EXISTS claims (
                    pair_id TEXT NOT NULL,
                    annotator TEXT NOT NULL,
                    batch_id TEXT,
                    expires_at REAL NOT NULL,
                    PRIMARY KEY (pair_id, annotator)
                );
                """
            )
            self._conn.commit()

    # -- candidate pairs ---------------------------------------------------

    def put_pair(self, pair: CandidatePair) -> CandidatePair:
        """Upsert guarded by an optimistic version check.

        A new pair must arrive with version 0 and is stored as version 1;
        an update must quote the stored version and is bumped by one.
        """
        with self._lock:
            row = self._conn.execute(
                "SELECT doc FROM pairs WHERE id = ?", (pair.id,)
            ).fetchone()
            if row is None:
                if pair.version != 0:
                    raise VersionConflict(
                        f"pair {pair.id!r} is new; expected version 0, got {pair.version}"
                    )
                stored = replace(pair, version=1)
                self._conn.execute(
                    "INSERT INTO pairs (id, doc) VALUES (?, ?)",
                    (stored.id, _pair_doc(stored)),
                )
            else:
                current = _pair_from_doc(pair.id, row[0])
                if pair.version != current.version:
                    raise VersionConflict(
                        f"pair {pair.id!r}: version {pair.version} is stale "
                        f"(stored version is {current.version})"
                    )
                stored = replace(pair, version=current.version + 1)
                self._conn.execute(
                    "UPDATE pairs SET doc = ? WHERE id = ?",
                    (_pair_doc(stored), stored.id),
                )
            self._conn.commit()
            return stored

    def get_pair(self, pair_id: str) -> CandidatePair:
        with self._lock:
            row = self._conn.execute(
                "SELECT doc FROM pairs WHERE id = ?", (pair_id,)
            ).fetchone()
        if row is None:
            raise NotFound(f"no pair with id {pair_id!r}")
        return _pair_from_doc(pair_id, row[0])

    def list_pairs(
        self,
        status: Optional[PairStatus] = None,
        source: Optional[Source] = None,
        batch: Optional[str] = None,
    ) -> list[CandidatePair]:
        """Pairs in insertion order, or in batch order when filtered by batch."""
        with self._lock:
            if batch is not None:
                ids = self._get_batch(batch).pair_ids
                pairs = [self.get_pair(pair_id) for pair_id in ids]
            else:
                rows = self._conn.execute(
                    "SELECT id, doc FROM pairs ORDER BY rowid"
                ).fetchall()
                pairs = [_pair_from_doc(pair_id, doc) for pair_id, doc in rows]
        if status is not None:
            pairs = [p for p in pairs if p.status is status]
        if source is not None:
            pairs = [p for p in pairs if p.source is source]
        return pairs

    def _write_pair(self, pair: CandidatePair) -> None:
        self._conn.execute(
            "UPDATE pairs SET doc = ? WHERE id = ?", (_pair_doc(pair), pair.id)
        )

    # -- annotations -------------------------------------------------------

    def record_annotation(self, annotation: Annotation) -> Annotation:
        """Persist one annotator's judgment and release their claim.

        Resubmission by the same annotator replaces the earlier record with
        a warning. The pair flips to Annotated once enough distinct
        annotators have submitted.
        """
        with self._lock:
            pair = self.get_pair(annotation.pair_id)
            for rewrite in annotation.rewrites:
                if rewrite.text1 == pair.text1 and rewrite.text2 == pair.text2:
                    raise InvalidRewrite(
                        "a rewrite must change the candidate pair, not repeat it"
                    )
            if annotation.created_at is None:
                annotation = replace(annotation, created_at=int(time.time()))
            existing = self._conn.execute(
                "SELECT 1 FROM annotations WHERE pair_id = ? AND annotator = ?",
                (annotation.pair_id, annotation.annotator_id),
            ).fetchone()
            if existing is not None:
                logger.warning(
                    "DuplicateAnnotator: %s resubmitted pair %s; replacing",
                    annotation.annotator_id,
                    annotation.pair_id,
                )
            self._conn.execute(
                "INSERT OR REPLACE INTO annotations (pair_id, annotator, doc)"
                " VALUES (?, ?, ?)",
                (annotation.pair_id, annotation.annotator_id, _annotation_doc(annotation)),
            )
            self._conn.execute(
                "DELETE FROM claims WHERE pair_id = ? AND annotator = ?",
                (annotation.pair_id, annotation.annotator_id),
            )
            self._refresh_status(pair)
            self._conn.commit()
            return annotation

    def annotations_for_pair(self, pair_id: str) -> list[Annotation]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT annotator, doc FROM annotations WHERE pair_id = ?"
                " ORDER BY annotator",
                (pair_id,),
            ).fetchall()
        return [_annotation_from_doc(pair_id, annotator, doc) for annotator, doc in rows]

    def iter_annotations(self) -> list[Annotation]:
        """All annotations ordered by (pair id, annotator); export order."""
        with self._lock:
            rows = self._conn.execute(
                "SELECT pair_id, annotator, doc FROM annotations"
                " ORDER BY pair_id, annotator"
            ).fetchall()
        return [
            _annotation_from_doc(pair_id, annotator, doc)
            for pair_id, annotator, doc in rows
        ]

    def _annotators_for(self, pair_id: str) -> set[str]:
        rows = self._conn.execute(
            "SELECT annotator FROM annotations WHERE pair_id = ?", (pair_id,)
        ).fetchall()
        return {annotator for (annotator,) in rows}

    def _required_for_pair(self, pair_id: str) -> int:
        required = 1
        for batch in self.list_batches():
            if pair_id in batch.pair_ids:
                required = max(required, batch.required_annotators)
        return required

    def _refresh_status(self, pair: CandidatePair) -> None:
        """Recompute queue status from annotation and claim counts."""
        annotators = self._annotators_for(pair.id)
        if len(annotators) >= self._required_for_pair(pair.id):
            status = PairStatus.ANNOTATED
        elif self._active_claims(pair.id, time.time()):
            status = PairStatus.CLAIMED
        else:
            status = PairStatus.PENDING
        if status is not pair.status:
            self._write_pair(replace(pair, status=status))

    # -- batches -----------------------------------------------------------

    def put_batch(self, batch: Batch) -> Batch:
        with self._lock:
            for pair_id in batch.pair_ids:
                self.get_pair(pair_id)
            doc = json.dumps(
                {
                    "pair_ids": list(batch.pair_ids),
                    "required_annotators": batch.required_annotators,
                },
                ensure_ascii=False,
            )
            self._conn.execute(
                "INSERT OR REPLACE INTO batches (id, doc) VALUES (?, ?)",
                (batch.id, doc),
            )
            self._conn.commit()
            return batch

    def _get_batch(self, batch_id: str) -> Batch:
        row = self._conn.execute(
            "SELECT doc FROM batches WHERE id = ?", (batch_id,)
        ).fetchone()
        if row is None:
            raise UnknownBatch(f"no batch with id {batch_id!r}")
        data = json.loads(row[0])
        return Batch(
            id=batch_id,
            pair_ids=tuple(data["pair_ids"]),
            required_annotators=data["required_annotators"],
        )

    def get_batch(self, batch_id: str) -> Batch:
        with self._lock:
            return self._get_batch(batch_id)

    def list_batches(self) -> list[Batch]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT id FROM batches ORDER BY rowid"
            ).fetchall()
            return [self._get_batch(batch_id) for (batch_id,) in rows]

    # -- claims ------------------------------------------------------------

    def _purge_expired(self, now: float) -> None:
        stale = self._conn.execute(
            "SELECT DISTINCT pair_id FROM claims WHERE expires_at <= ?", (now,)
        ).fetchall()
        if not stale:
            return
        self._conn.execute("DELETE FROM claims WHERE expires_at <= ?", (now,))
        for (pair_id,) in stale:
            self._refresh_status(self.get_pair(pair_id))

    def _active_claims(self, pair_id: str, now: float) -> dict[str, float]:
        rows = self._conn.execute(
            "SELECT annotator, expires_at FROM claims"
            " WHERE pair_id = ? AND expires_at > ?",
            (pair_id, now),
        ).fetchall()
        return dict(rows)

    def claim_next(
        self,
        batch_id: str,
        annotator_id: str,
        lease_seconds: float = 1800.0,
        shuffle: bool = False,
    ) -> Optional[tuple[CandidatePair, ClaimTicket]]:
        """Claim the first batch pair this annotator can still work on.

        A pair is eligible when the annotator has not already judged it and
        the judged plus actively claimed annotator count leaves room under
        the batch requirement. Calling again while holding a claim returns
        the same pair and ticket. Returns None when no work is available.
        With shuffle on, each annotator walks the batch in their own fixed
        pseudo-random order instead of batch order.
        """
        if not annotator_id:
            raise ValueError("annotator id must be non-empty")
        with self._lock:
            batch = self._get_batch(batch_id)
            pair_ids = list(batch.pair_ids)
            if shuffle:
                random.Random(f"{batch_id}:{annotator_id}").shuffle(pair_ids)
            now = time.time()
            self._purge_expired(now)
            for pair_id in pair_ids:
                annotators = self._annotators_for(pair_id)
                if annotator_id in annotators:
                    continue
                if len(annotators) >= batch.required_annotators:
                    continue
                claims = self._active_claims(pair_id, now)
                if annotator_id in claims:
                    ticket = ClaimTicket(
                        pair_id, annotator_id, claims[annotator_id], batch_id
                    )
                    return self.get_pair(pair_id), ticket
                other_claims = [a for a in claims if a not in annotators]
                if len(annotators) + len(other_claims) >= batch.required_annotators:
                    continue
                expires_at = now + lease_seconds
                self._conn.execute(
                    "INSERT INTO claims (pair_id, annotator, batch_id, expires_at)"
                    " VALUES (?, ?, ?, ?)",
                    (pair_id, annotator_id, batch_id, expires_at),
                )
                pair = self.get_pair(pair_id)
                self._refresh_status(pair)
                self._conn.commit()
                pair = self.get_pair(pair_id)
                return pair, ClaimTicket(pair_id, annotator_id, expires_at, batch_id)
            return None

    def require_claim(self, pair_id: str, annotator_id: str) -> ClaimTicket:
        """Look up a live claim; raise ExpiredClaim if missing or lapsed."""
        with self._lock:
            now = time.time()
            self._purge_expired(now)
            claims = self._active_claims(pair_id, now)
            if annotator_id not in claims:
                raise ExpiredClaim(
                    f"{annotator_id!r} holds no live claim on pair {pair_id!r}"
                )
            row = self._conn.execute(
                "SELECT batch_id FROM claims WHERE pair_id = ? AND annotator = ?",
                (pair_id, annotator_id),
            ).fetchone()
            return ClaimTicket(pair_id, annotator_id, claims[annotator_id], row[0])

    def release_claim(self, pair_id: str, annotator_id: str) -> None:
        with self._lock:
            self._conn.execute(
                "DELETE FROM claims WHERE pair_id = ? AND annotator = ?",
                (pair_id, annotator_id),
            )
            try:
                self._refresh_status(self.get_pair(pair_id))
            except NotFound:
                pass
            self._conn.commit()

    # -- heading edits -----------------------------------------------------

    def edit_pair(
        self,
        pair_id: str,
        new_text1: Optional[str] = None,
        new_text2: Optional[str] = None,
    ) -> tuple[CandidatePair, Optional[Directive]]:
        """Apply a whole-segment-deletion edit to a heading pair.

        Each supplied text is validated against the stored pre-edit form,
        so successive edits cannot drift away from the original. Reverting
        to the original clears the edit marker. The directive tells the
        caller when the edit has made the texts identical.
        """
        with self._lock:
            pair = self.get_pair(pair_id)
            if pair.source is not Source.AUTO_HEADING:
                raise EditNotAllowed(
                    "only automatically extracted heading pairs can be edited"
                )
            text1, original1 = pair.text1, pair.original_text1
            text2, original2 = pair.text2, pair.original_text2
            if new_text1 is not None:
                text1, original1 = self._checked_edit(
                    pair.original_text1, pair.text1, new_text1
                )
            if new_text2 is not None:
                text2, original2 = self._checked_edit(
                    pair.original_text2, pair.text2, new_text2
                )
            stored = replace(
                pair,
                text1=text1,
                text2=text2,
                original_text1=original1,
                original_text2=original2,
                version=pair.version + 1,
            )
            self._write_pair(stored)
            self._conn.commit()
            return stored, check_post_edit_pair(stored.text1, stored.text2)

    @staticmethod
    def _checked_edit(
        original: Optional[str], current: str, edited: str
    ) -> tuple[str, Optional[str]]:
        baseline = original if original is not None else current
        verdict = validate_edit(baseline, edited)
        if not verdict.ok:
            raise EditRejected(verdict, f"edit rejected: {verdict.code}")
        if verdict is EditVerdict.IDENTITY:
            return baseline, None
        return edited, baseline

    # -- agreement support ---------------------------------------------------

    def aligned_labels(
        self, batch_id: str
    ) -> list[tuple[AnnotatedLabel, AnnotatedLabel]]:
        """Label pairs from the first two annotators of each double-judged pair.

        Annotator sides are ordered by annotator id, so the same person
        stays on the same side across the whole batch.
        """
        with self._lock:
            batch = self._get_batch(batch_id)
            if batch.required_annotators < 2:
                raise InsufficientAnnotations(
                    f"batch {batch_id!r} is single-annotated; nothing to compare"
                )
            aligned = []
            for pair_id in batch.pair_ids:
                annotations = self.annotations_for_pair(pair_id)
                if len(annotations) >= 2:
                    aligned.append((annotations[0].label, annotations[1].label))
        if not aligned:
            raise InsufficientAnnotations(
                f"batch {batch_id!r} has no pair judged by two annotators yet"
            )
        return aligned
