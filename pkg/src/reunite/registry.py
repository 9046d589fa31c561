"""Two-directory entry registry backed by an append-only JSON-lines event log.

LostPeople holds MISSING entries, FoundPeople holds FINDING entries.
Every mutation is one event line in ``entries.log``; photo bytes live in a
content-addressed ``blobs/`` directory. The full store state is rebuilt by
replaying the log, so recovery after a crash is a plain reopen.
"""
from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

import numpy as np

from .embedding import FaceImage, ImageFormat
from .errors import (
    DuplicateId,
    IllegalTransition,
    SameDirectoryLink,
    StorageFailure,
    UnknownEntry,
)


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


def _iso(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).isoformat()


class Side(str, Enum):
    MISSING = "MISSING"
    FINDING = "FINDING"

    @property
    def opposite(self) -> "Side":
        return Side.FINDING if self is Side.MISSING else Side.MISSING

    @property
    def directory(self) -> str:
        return "LostPeople" if self is Side.MISSING else "FoundPeople"


class EntryStatus(str, Enum):
    AP = "AP"  # administrative processing: held until police verification
    ACTIVE = "ACTIVE"
    MATCHED = "MATCHED"
    REJECTED = "REJECTED"


_LEGAL_TRANSITIONS = {
    (EntryStatus.AP, EntryStatus.ACTIVE),
    (EntryStatus.AP, EntryStatus.REJECTED),
    (EntryStatus.ACTIVE, EntryStatus.MATCHED),
}


@dataclass(frozen=True)
class UploaderInfo:
    name: str
    nid: str
    phone: str
    email: str
    address: str
    police_station_id: str

    def __post_init__(self):
        for fname in ("nid", "phone", "email", "police_station_id"):
            if not getattr(self, fname):
                raise ValueError(f"uploader {fname} must be non-empty")
        if "@" not in self.email:
            raise ValueError(f"uploader email {self.email!r} must contain '@'")


@dataclass(eq=False)
class Entry:
    id: str
    side: Side
    uploader: UploaderInfo
    subject_name: str
    photo: FaceImage
    embedding: np.ndarray | None
    status: EntryStatus
    matched_entry_id: str | None = None
    created_at: datetime = field(default_factory=utcnow)
    updated_at: datetime = field(default_factory=utcnow)

    def same_record(self, other: "Entry") -> bool:
        """Field-wise equality (dataclass eq is disabled for the ndarray field)."""
        return (
            self.id == other.id
            and self.side == other.side
            and self.uploader == other.uploader
            and self.subject_name == other.subject_name
            and self.photo == other.photo
            and self.status == other.status
            and self.matched_entry_id == other.matched_entry_id
            and self.created_at == other.created_at
            and self.updated_at == other.updated_at
            and (
                self.embedding is None
                and other.embedding is None
                or self.embedding is not None
                and other.embedding is not None
                and np.array_equal(self.embedding, other.embedding)
            )
        )


class EntryStore:
    """Single-writer, multi-reader persistent store for both directories."""

    def __init__(self, data_dir: str | Path, fsync: bool = False):
        self.data_dir = Path(data_dir)
        self.blob_dir = self.data_dir / "blobs"
        self.log_path = self.data_dir / "entries.log"
        self.fsync = fsync
        self._lock = threading.RLock()
        self._entries: dict[str, Entry] = {}
        try:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            self.blob_dir.mkdir(exist_ok=True)
            self._replay()
            self._log = self.log_path.open("a", encoding="utf-8")
        except OSError as exc:
            raise StorageFailure(f"cannot open entry store at {self.data_dir}: {exc}") from exc

    # --- persistence ---

    def _replay(self) -> None:
        if not self.log_path.exists():
            return
        lines = self.log_path.read_text(encoding="utf-8").splitlines()
        for i, line in enumerate(lines):
            if not line.strip():
                continue
            try:
                event = json.loads(line)
            except json.JSONDecodeError:
                if i == len(lines) - 1:
                    break  # torn final write from a crash; drop it
                raise StorageFailure(f"corrupt event at {self.log_path}:{i + 1}")
            self._apply(event)

    def _apply(self, event: dict) -> None:
        kind = event["event"]
        if kind == "created":
            entry = self._entry_from_record(event["entry"])
            self._entries[entry.id] = entry
        elif kind == "status":
            entry = self._entries[event["id"]]
            entry.status = EntryStatus(event["to"])
            entry.updated_at = datetime.fromisoformat(event["at"])
        elif kind == "matched":
            at = datetime.fromisoformat(event["at"])
            a, b = self._entries[event["a"]], self._entries[event["b"]]
            for entry, other in ((a, b), (b, a)):
                entry.status = EntryStatus.MATCHED
                entry.matched_entry_id = other.id
                entry.updated_at = at
        else:
            raise StorageFailure(f"unknown event kind {kind!r}")

    def _append(self, event: dict) -> None:
        try:
            self._log.write(json.dumps(event, sort_keys=True) + "\n")
            self._log.flush()
            if self.fsync:
                import os

                os.fsync(self._log.fileno())
        except OSError as exc:
            raise StorageFailure(f"append to {self.log_path} failed: {exc}") from exc

    def _entry_record(self, entry: Entry) -> dict:
        sha = hashlib.sha256(entry.photo.payload).hexdigest()
        blob = self.blob_dir / sha
        if not blob.exists():
            blob.write_bytes(entry.photo.payload)
        return {
            "id": entry.id,
            "side": entry.side.value,
            "uploader": vars(entry.uploader).copy(),
            "subject_name": entry.subject_name,
            "photo_sha256": sha,
            "photo_format": entry.photo.format.value,
            "embedding": None if entry.embedding is None else entry.embedding.tolist(),
            "status": entry.status.value,
            "created_at": _iso(entry.created_at),
            "updated_at": _iso(entry.updated_at),
        }

    def _entry_from_record(self, rec: dict) -> Entry:
        payload = (self.blob_dir / rec["photo_sha256"]).read_bytes()
        emb = rec["embedding"]
        return Entry(
            id=rec["id"],
            side=Side(rec["side"]),
            uploader=UploaderInfo(**rec["uploader"]),
            subject_name=rec["subject_name"],
            photo=FaceImage(payload=payload, format=ImageFormat(rec["photo_format"])),
            embedding=None if emb is None else np.asarray(emb, dtype=np.float64),
            status=EntryStatus(rec["status"]),
            created_at=datetime.fromisoformat(rec["created_at"]),
            updated_at=datetime.fromisoformat(rec["updated_at"]),
        )

    def close(self) -> None:
        self._log.close()

    # --- operations ---

    def store_entry(self, entry: Entry) -> str:
        if entry.status in (EntryStatus.ACTIVE, EntryStatus.MATCHED) and entry.embedding is None:
            raise ValueError(f"{entry.status.value} entry must carry an embedding")
        with self._lock:
            if entry.id in self._entries:
                raise DuplicateId(f"entry id {entry.id} already stored")
            self._append({"event": "created", "entry": self._entry_record(entry)})
            self._entries[entry.id] = replace(entry)
        return entry.id

    def get_entry(self, entry_id: str) -> Entry:
        with self._lock:
            try:
                return replace(self._entries[entry_id])
            except KeyError:
                raise UnknownEntry(f"no entry with id {entry_id}") from None

    def has_entry(self, entry_id: str) -> bool:
        with self._lock:
            return entry_id in self._entries

    def active_entries(self, directory: Side) -> list[Entry]:
        """ACTIVE members of one directory, oldest first (ties by id)."""
        with self._lock:
            members = [
                e for e in self._entries.values()
                if e.side is directory and e.status is EntryStatus.ACTIVE
            ]
        members.sort(key=lambda e: (e.created_at, e.id))
        return [replace(e) for e in members]

    def all_entries(self) -> list[Entry]:
        with self._lock:
            return [replace(e) for e in self._entries.values()]

    def transition_status(self, entry_id: str, to: EntryStatus) -> Entry:
        with self._lock:
            if entry_id not in self._entries:
                raise UnknownEntry(f"no entry with id {entry_id}")
            entry = self._entries[entry_id]
            if (entry.status, to) not in _LEGAL_TRANSITIONS:
                raise IllegalTransition(f"{entry.status.value} -> {to.value} is not allowed")
            now = utcnow()
            self._append({"event": "status", "id": entry_id, "to": to.value, "at": _iso(now)})
            entry.status = to
            entry.updated_at = now
            return replace(entry)

    def link_matched(self, a_id: str, b_id: str) -> tuple[Entry, Entry]:
        """Atomically mark an opposite-directory ACTIVE pair as MATCHED."""
        with self._lock:
            for eid in (a_id, b_id):
                if eid not in self._entries:
                    raise UnknownEntry(f"no entry with id {eid}")
            a, b = self._entries[a_id], self._entries[b_id]
            if a.side is b.side:
                raise SameDirectoryLink(f"both entries are in {a.side.directory}")
            for entry in (a, b):
                if entry.status is not EntryStatus.ACTIVE:
                    raise IllegalTransition(
                        f"entry {entry.id} is {entry.status.value}, must be ACTIVE to link"
                    )
            now = utcnow()
            self._append({"event": "matched", "a": a_id, "b": b_id, "at": _iso(now)})
            for entry, other in ((a, b), (b, a)):
                entry.status = EntryStatus.MATCHED
                entry.matched_entry_id = other.id
                entry.updated_at = now
            return replace(a), replace(b)
