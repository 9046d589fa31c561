"""Durable notification outbox and the email-shaped messages it carries.

The outbox JSON-lines file is the source of truth for every message the
system intends to deliver; an SMTP relay (when configured) drains it with
at-least-once semantics. Notification failures never roll back matching
state.
"""
from __future__ import annotations

import json
import logging
import threading
import uuid
from dataclasses import dataclass, field, replace
from datetime import datetime
from enum import Enum
from pathlib import Path

from .errors import OutboxFailure, UnknownStation
from .registry import Entry, UploaderInfo, _iso, utcnow
from .verification import StationRegistry

logger = logging.getLogger(__name__)


class NotificationKind(str, Enum):
    MATCH_TO_PARTY = "MATCH_TO_PARTY"
    MATCH_TO_POLICE = "MATCH_TO_POLICE"
    DUPLICATE_ALERT_TO_PARTY = "DUPLICATE_ALERT_TO_PARTY"
    DUPLICATE_ALERT_TO_POLICE = "DUPLICATE_ALERT_TO_POLICE"
    VERIFICATION_REQUEST = "VERIFICATION_REQUEST"


@dataclass
class Notification:
    id: str
    kind: NotificationKind
    to_email: str
    subject: str
    body: str
    related_entry_ids: list[str]
    created_at: datetime = field(default_factory=utcnow)

    def __post_init__(self):
        if not self.to_email:
            raise ValueError("to_email must be non-empty")
        if not self.related_entry_ids:
            raise ValueError("related_entry_ids must be non-empty")


# Message templates are versioned artifacts of this repo; the exact prose
# is ours, the carried fields (names, phone, email, station) are fixed.
MATCH_TO_PARTY_SUBJECT = "Match found for {subject_name}"
MATCH_TO_PARTY_BODY = (
    "A new {new_side} entry has matched your record for {subject_name}.\n"
    "Contact the other side directly:\n"
    "  Name:  {other_name}\n"
    "  Phone: {other_phone}\n"
    "  Email: {other_email}\n"
)
MATCH_TO_POLICE_SUBJECT = "Registry match involving {subject_name}"
MATCH_TO_POLICE_BODY = (
    "A match has been recorded for {subject_name}.\n"
    "Original uploader: {prior_name} ({prior_phone}, {prior_email})\n"
    "New uploader: {other_name} ({other_phone}, {other_email})\n"
)
DUPLICATE_TO_PARTY_SUBJECT = "Duplicate entry attempt for {subject_name}"
DUPLICATE_TO_PARTY_BODY = (
    "Someone attempted to record another entry for {subject_name}, who you "
    "already listed. Attempting uploader: {attempt_name} (NID {attempt_nid}).\n"
)
DUPLICATE_TO_POLICE_SUBJECT = "Duplicate entry attempt for {subject_name}"
DUPLICATE_TO_POLICE_BODY = (
    "A second entry was attempted for the already-listed person "
    "{subject_name}. Attempting uploader: {attempt_name} (NID {attempt_nid}, "
    "phone {attempt_phone}).\n"
)
VERIFICATION_REQUEST_SUBJECT = "Verification request: {side} entry for {subject_name}"
VERIFICATION_REQUEST_BODY = (
    "Please verify the uploader's information and record the diary.\n"
    "  Uploader: {name} (NID {nid}, phone {phone}, email {email})\n"
    "  Subject:  {subject_name}\n"
)


class Outbox:
    """Append-only notification log (``outbox.log``)."""

    def __init__(self, data_dir: str | Path, fsync: bool = False):
        self.log_path = Path(data_dir) / "outbox.log"
        self.fsync = fsync
        self._lock = threading.RLock()
        self._notifications: list[Notification] = []
        try:
            self.log_path.parent.mkdir(parents=True, exist_ok=True)
            self._replay()
            self._log = self.log_path.open("a", encoding="utf-8")
        except OSError as exc:
            raise OutboxFailure(f"cannot open outbox at {self.log_path}: {exc}") from exc

    def _replay(self) -> None:
        if not self.log_path.exists():
            return
        lines = self.log_path.read_text(encoding="utf-8").splitlines()
        for i, line in enumerate(lines):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError:
                if i == len(lines) - 1:
                    break
                raise OutboxFailure(f"corrupt notification at {self.log_path}:{i + 1}")
            self._notifications.append(Notification(
                id=rec["id"],
                kind=NotificationKind(rec["kind"]),
                to_email=rec["to_email"],
                subject=rec["subject"],
                body=rec["body"],
                related_entry_ids=list(rec["related_entry_ids"]),
                created_at=datetime.fromisoformat(rec["created_at"]),
            ))

    def close(self) -> None:
        self._log.close()

    def append(self, notification: Notification) -> Notification:
        with self._lock:
            try:
                self._log.write(json.dumps({
                    "id": notification.id,
                    "kind": notification.kind.value,
                    "to_email": notification.to_email,
                    "subject": notification.subject,
                    "body": notification.body,
                    "related_entry_ids": notification.related_entry_ids,
                    "created_at": _iso(notification.created_at),
                }, sort_keys=True) + "\n")
                self._log.flush()
                if self.fsync:
                    import os

                    os.fsync(self._log.fileno())
            except OSError as exc:
                raise OutboxFailure(f"append to {self.log_path} failed: {exc}") from exc
            self._notifications.append(notification)
            return replace(notification)

    def read(self, kind: NotificationKind | None = None) -> list[Notification]:
        """Notifications in emission order, optionally filtered by kind."""
        with self._lock:
            items = list(self._notifications)
        if kind is not None:
            items = [n for n in items if n.kind is kind]
        return [replace(n) for n in items]


class Notifier:
    """Builds and emits the paper's match / duplicate / verification emails."""

    def __init__(self, outbox: Outbox, stations: StationRegistry):
        self.outbox = outbox
        self.stations = stations

    def _station_email(self, station_id: str) -> str:
        station = self.stations.get(station_id)
        if station is None:
            raise UnknownStation(f"no station {station_id} in the registry")
        return station.email

    def _emit(self, kind, to_email, subject, body, related) -> Notification:
        return self.outbox.append(Notification(
            id=uuid.uuid4().hex,
            kind=kind,
            to_email=to_email,
            subject=subject,
            body=body,
            related_entry_ids=list(related),
        ))

    def notify_match(self, new_entry: Entry, prior_entry: Entry) -> list[Notification]:
        """Exactly two messages, both addressed to the prior entry's side:
        its uploader gets the new uploader's contact details, its police
        station gets both parties' details."""
        assert prior_entry.matched_entry_id == new_entry.id, "entries must be a linked pair"
        related = [new_entry.id, prior_entry.id]
        fields = {
            "subject_name": prior_entry.subject_name,
            "new_side": new_entry.side.value.lower(),
            "other_name": new_entry.uploader.name,
            "other_phone": new_entry.uploader.phone,
            "other_email": new_entry.uploader.email,
            "prior_name": prior_entry.uploader.name,
            "prior_phone": prior_entry.uploader.phone,
            "prior_email": prior_entry.uploader.email,
        }
        party = self._emit(
            NotificationKind.MATCH_TO_PARTY,
            prior_entry.uploader.email,
            MATCH_TO_PARTY_SUBJECT.format(**fields),
            MATCH_TO_PARTY_BODY.format(**fields),
            related,
        )
        police = self._emit(
            NotificationKind.MATCH_TO_POLICE,
            self._station_email(prior_entry.uploader.police_station_id),
            MATCH_TO_POLICE_SUBJECT.format(**fields),
            MATCH_TO_POLICE_BODY.format(**fields),
            related,
        )
        return [party, police]

    def notify_duplicate_attempt(
        self, original: Entry, attempt_uploader: UploaderInfo, attempt_entry_id: str
    ) -> list[Notification]:
        """Alert the original uploader and their station about a repeat entry."""
        related = [original.id, attempt_entry_id]
        fields = {
            "subject_name": original.subject_name,
            "attempt_name": attempt_uploader.name,
            "attempt_nid": attempt_uploader.nid,
            "attempt_phone": attempt_uploader.phone,
        }
        party = self._emit(
            NotificationKind.DUPLICATE_ALERT_TO_PARTY,
            original.uploader.email,
            DUPLICATE_TO_PARTY_SUBJECT.format(**fields),
            DUPLICATE_TO_PARTY_BODY.format(**fields),
            related,
        )
        police = self._emit(
            NotificationKind.DUPLICATE_ALERT_TO_POLICE,
            self._station_email(original.uploader.police_station_id),
            DUPLICATE_TO_POLICE_SUBJECT.format(**fields),
            DUPLICATE_TO_POLICE_BODY.format(**fields),
            related,
        )
        return [party, police]

    def notify_verification_request(self, entry: Entry) -> Notification:
        fields = {
            "side": entry.side.value.lower(),
            "subject_name": entry.subject_name,
            "name": entry.uploader.name,
            "nid": entry.uploader.nid,
            "phone": entry.uploader.phone,
            "email": entry.uploader.email,
        }
        return self._emit(
            NotificationKind.VERIFICATION_REQUEST,
            self._station_email(entry.uploader.police_station_id),
            VERIFICATION_REQUEST_SUBJECT.format(**fields),
            VERIFICATION_REQUEST_BODY.format(**fields),
            [entry.id],
        )
