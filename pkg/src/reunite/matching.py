"""Matching primitives and the submission pipeline's value types."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .embedding import batch_distances
from .registry import Entry, Side, UploaderInfo
from .embedding.images import FaceImage


@dataclass(frozen=True)
class Submission:
    side: Side
    uploader: UploaderInfo
    subject_name: str
    photo: FaceImage


@dataclass(frozen=True)
class MatchResult:
    query_entry_id: str
    matched_entry_id: str
    distance: float


class Disposition(str, Enum):
    PENDING_VERIFICATION = "PENDING_VERIFICATION"
    REJECTED_INVALID_INFO = "REJECTED_INVALID_INFO"
    REJECTED_DUPLICATE = "REJECTED_DUPLICATE"
    STORED_NO_MATCH = "STORED_NO_MATCH"
    MATCHED = "MATCHED"


@dataclass(frozen=True)
class Contact:
    name: str
    phone: str
    email: str


@dataclass(frozen=True)
class SubmissionOutcome:
    entry_id: str
    disposition: Disposition
    message: str
    match: MatchResult | None = None
    other_side_contact: Contact | None = None

    def __post_init__(self):
        matched = self.disposition is Disposition.MATCHED
        if matched != (self.match is not None) or matched != (self.other_side_contact is not None):
            raise ValueError("match and other_side_contact are set iff disposition is MATCHED")


def nearest_match(
    embedding: np.ndarray,
    candidates: list[Entry],
    tau: float,
    query_entry_id: str = "",
) -> MatchResult | None:
    """Global minimum-distance candidate under tau, or None.

    `candidates` must already be in (created_at, id) order; ties on exact
    distance then resolve to the earliest entry because only strict
    improvements replace the running best.
    """
    if not candidates:
        return None
    matrix = np.stack([e.embedding for e in candidates])
    dists = batch_distances(embedding, matrix)
    best_idx = -1
    best = tau
    for i, d in enumerate(dists):
        if d < best:
            best = float(d)
            best_idx = i
    if best_idx < 0:
        return None
    return MatchResult(
        query_entry_id=query_entry_id,
        matched_entry_id=candidates[best_idx].id,
        distance=best,
    )
