"""Pipeline orchestrator wiring embedding, registry, verification, matching,
and notification together.

All mutating work funnels through one write lock, so duplicate-check,
store, cross-match, and link are atomic with respect to concurrent
pipeline runs. Pure validation and encoding happen before the lock.
"""
from __future__ import annotations

import logging
import threading
import uuid

import numpy as np

from . import messages
from .config import ServiceConfig
from .embedding import HttpProvider, SyntheticProvider, encode_face
from .errors import IllegalTransition, OutboxFailure, UnknownEntry
from .matching import Contact, Disposition, MatchResult, Submission, SubmissionOutcome, nearest_match
from .notification import Notifier, Outbox
from .registry import Entry, EntryStatus, EntryStore, Side, utcnow
from .verification import CaseState, CaseStore, CitizenRegistry, StationRegistry, VerificationCase

logger = logging.getLogger(__name__)


class RegistryService:
    """One live instance of the missing-person registry."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        config.validate_paths()
        self.citizens = CitizenRegistry.load(config.citizens_path)
        self.stations = StationRegistry.load(config.stations_path)
        self.store = EntryStore(config.data_dir, fsync=config.fsync)
        self.cases = CaseStore(config.data_dir, fsync=config.fsync)
        self.outbox = Outbox(config.data_dir, fsync=config.fsync)
        self.notifier = Notifier(self.outbox, self.stations)
        if config.embedding_server_url:
            self.provider = HttpProvider(config.embedding_server_url, dim=config.dim)
        else:
            self.provider = SyntheticProvider(dim=config.dim, seed=config.provider_seed)
        self._write_lock = threading.RLock()

    def close(self) -> None:
        self.store.close()
        self.cases.close()
        self.outbox.close()

    # --- matching ---

    def find_duplicate(self, embedding: np.ndarray, own: Side) -> MatchResult | None:
        """Nearest under-threshold entry in the submitter's OWN directory."""
        return nearest_match(embedding, self.store.active_entries(own), self.config.tau)

    def cross_match(self, embedding: np.ndarray, own: Side) -> MatchResult | None:
        """Nearest under-threshold entry in the OPPOSITE directory."""
        return nearest_match(embedding, self.store.active_entries(own.opposite), self.config.tau)

    # --- pipeline ---

    def submit(self, submission: Submission) -> SubmissionOutcome:
        """Steps 1-2: decode and encode the photo, then validate the
        uploader. Valid submissions are persisted in AP status behind a
        PENDING verification case (or pushed straight through when
        auto_approve is on)."""
        embedding = encode_face(submission.photo, self.provider)

        uploader = submission.uploader
        station_ok = self.stations.validate_police_station(uploader.police_station_id)
        citizen_ok = station_ok and self.citizens.validate_citizen(
            uploader.nid, uploader.name, uploader.phone
        )

        entry = Entry(
            id=uuid.uuid4().hex,
            side=submission.side,
            uploader=uploader,
            subject_name=submission.subject_name,
            photo=submission.photo,
            embedding=embedding,
            status=EntryStatus.AP,
        )

        if not (station_ok and citizen_ok):
            # Kept in the log under REJECTED for audit; never enters a directory.
            with self._write_lock:
                self.store.store_entry(entry)
                self.store.transition_status(entry.id, EntryStatus.REJECTED)
            return SubmissionOutcome(
                entry_id=entry.id,
                disposition=Disposition.REJECTED_INVALID_INFO,
                message=messages.INVALID_INFO,
            )

        with self._write_lock:
            self.store.store_entry(entry)
            case = self.cases.open_case(entry.id, uploader.police_station_id)
            try:
                self.notifier.notify_verification_request(entry)
            except OutboxFailure:
                logger.exception("verification request failed for entry %s", entry.id)

        if self.config.auto_approve:
            return self.decide_case(case.case_id, approve=True)
        return SubmissionOutcome(
            entry_id=entry.id,
            disposition=Disposition.PENDING_VERIFICATION,
            message=messages.PENDING_VERIFICATION,
        )

    def decide_case(self, case_id: str, approve: bool) -> SubmissionOutcome:
        """Police decision on a PENDING case; approval triggers the
        continuation pipeline exactly once."""
        with self._write_lock:
            case = self.cases.mark_decided(case_id, approve)
            if not approve:
                self.store.transition_status(case.entry_id, EntryStatus.REJECTED)
                return SubmissionOutcome(
                    entry_id=case.entry_id,
                    disposition=Disposition.REJECTED_INVALID_INFO,
                    message=messages.INVALID_INFO,
                )
            return self.continue_after_approval(case.entry_id)

    def continue_after_approval(self, entry_id: str) -> SubmissionOutcome:
        """Steps 3-7: duplicate check in the own directory, activation,
        cross-match against the opposite directory, linking, notification."""
        with self._write_lock:
            entry = self.store.get_entry(entry_id)
            if entry.status is not EntryStatus.AP:
                raise IllegalTransition(
                    f"entry {entry_id} is {entry.status.value}, expected AP"
                )
            if not any(
                c.state is CaseState.APPROVED for c in self.cases.cases_for_entry(entry_id)
            ):
                raise IllegalTransition(f"entry {entry_id} has no approved verification case")

            duplicate = self.find_duplicate(entry.embedding, entry.side)
            if duplicate is not None:
                self.store.transition_status(entry.id, EntryStatus.REJECTED)
                original = self.store.get_entry(duplicate.matched_entry_id)
                try:
                    self.notifier.notify_duplicate_attempt(original, entry.uploader, entry.id)
                except OutboxFailure:
                    logger.exception("duplicate-attempt alert failed for entry %s", entry.id)
                return SubmissionOutcome(
                    entry_id=entry.id,
                    disposition=Disposition.REJECTED_DUPLICATE,
                    message=messages.ALREADY_LISTED,
                )

            self.store.transition_status(entry.id, EntryStatus.ACTIVE)

            hit = self.cross_match(entry.embedding, entry.side)
            if hit is None:
                return SubmissionOutcome(
                    entry_id=entry.id,
                    disposition=Disposition.STORED_NO_MATCH,
                    message=messages.SAVED_FOR_FURTHER_USAGE,
                )

            new_entry, prior = self.store.link_matched(entry.id, hit.matched_entry_id)
            try:
                self.notifier.notify_match(new_entry, prior)
            except OutboxFailure:
                logger.exception("match notification failed for entry %s", entry.id)
            result = MatchResult(
                query_entry_id=entry.id,
                matched_entry_id=prior.id,
                distance=hit.distance,
            )
            return SubmissionOutcome(
                entry_id=entry.id,
                disposition=Disposition.MATCHED,
                message=messages.MATCH_FOUND,
                match=result,
                other_side_contact=Contact(
                    name=prior.uploader.name,
                    phone=prior.uploader.phone,
                    email=prior.uploader.email,
                ),
            )

    # --- read surfaces ---

    def get_entry(self, entry_id: str) -> Entry:
        return self.store.get_entry(entry_id)

    def pending_cases(self) -> list[VerificationCase]:
        return self.cases.pending_cases()

    def entry_view(self, entry_id: str) -> dict:
        """JSON-ready status view, including contact details once MATCHED."""
        entry = self.store.get_entry(entry_id)
        view = {
            "entry_id": entry.id,
            "side": entry.side.value,
            "directory": entry.side.directory,
            "subject_name": entry.subject_name,
            "status": entry.status.value,
            "matched_entry_id": entry.matched_entry_id,
            "created_at": entry.created_at.isoformat(),
            "updated_at": entry.updated_at.isoformat(),
            "other_side_contact": None,
        }
        if entry.status is EntryStatus.MATCHED and entry.matched_entry_id:
            other = self.store.get_entry(entry.matched_entry_id)
            view["other_side_contact"] = {
                "name": other.uploader.name,
                "phone": other.uploader.phone,
                "email": other.uploader.email,
            }
        return view
