"""Administrative-processing gate: fixture-backed citizen and police-station
registries plus the pending verification cases police decide on.

Cases persist to ``cases.log`` next to the entry log so that a restart
reconstructs pending work without re-running any pipeline side effects.
"""
from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

from .errors import AlreadyDecided, RegistryUnavailable, StorageFailure, UnknownCase
from .registry import _iso, utcnow


@dataclass(frozen=True)
class CitizenRecord:
    nid: str
    full_name: str
    phone: str


@dataclass(frozen=True)
class PoliceStation:
    station_id: str
    name: str
    email: str


def _digits(s: str) -> str:
    return "".join(ch for ch in s if ch.isdigit())


class CitizenRegistry:
    """Local stand-in for the national citizen database."""

    def __init__(self, citizens: list[CitizenRecord]):
        self._by_nid = {}
        for c in citizens:
            if c.nid in self._by_nid:
                raise ValueError(f"duplicate nid {c.nid} in citizen fixture")
            self._by_nid[c.nid] = c

    @classmethod
    def load(cls, path: str | Path) -> "CitizenRegistry":
        try:
            records = json.loads(Path(path).read_text(encoding="utf-8"))
            return cls([CitizenRecord(**r) for r in records])
        except (OSError, json.JSONDecodeError, TypeError) as exc:
            raise RegistryUnavailable(f"cannot load citizen registry {path}: {exc}") from exc

    def __len__(self) -> int:
        return len(self._by_nid)

    def validate_citizen(self, nid: str, name: str, phone: str) -> bool:
        """Exact nid match, case-insensitive name, digits-only phone comparison."""
        record = self._by_nid.get(nid)
        if record is None:
            return False
        return (
            record.full_name.casefold() == name.casefold()
            and _digits(record.phone) == _digits(phone)
        )


class StationRegistry:
    """Local stand-in for the verified police-station directory."""

    def __init__(self, stations: list[PoliceStation]):
        self._by_id = {}
        for s in stations:
            if s.station_id in self._by_id:
                raise ValueError(f"duplicate station_id {s.station_id} in station fixture")
            if not s.email:
                raise ValueError(f"station {s.station_id} has an empty email")
            self._by_id[s.station_id] = s

    @classmethod
    def load(cls, path: str | Path) -> "StationRegistry":
        try:
            records = json.loads(Path(path).read_text(encoding="utf-8"))
            return cls([PoliceStation(**r) for r in records])
        except (OSError, json.JSONDecodeError, TypeError) as exc:
            raise RegistryUnavailable(f"cannot load station registry {path}: {exc}") from exc

    def __len__(self) -> int:
        return len(self._by_id)

    def validate_police_station(self, station_id: str) -> bool:
        return station_id in self._by_id

    def get(self, station_id: str) -> PoliceStation | None:
        return self._by_id.get(station_id)


class CaseState(str, Enum):
    PENDING = "PENDING"
    APPROVED = "APPROVED"
    DENIED = "DENIED"


@dataclass
class VerificationCase:
    case_id: str
    entry_id: str
    station_id: str
    state: CaseState = CaseState.PENDING
    decided_at: datetime | None = None
    opened_at: datetime | None = None


class CaseStore:
    """Append-only persistence for verification cases (``cases.log``)."""

    def __init__(self, data_dir: str | Path, fsync: bool = False):
        self.log_path = Path(data_dir) / "cases.log"
        self.fsync = fsync
        self._lock = threading.RLock()
        self._cases: dict[str, VerificationCase] = {}
        try:
            self.log_path.parent.mkdir(parents=True, exist_ok=True)
            self._replay()
            self._log = self.log_path.open("a", encoding="utf-8")
        except OSError as exc:
            raise StorageFailure(f"cannot open case store at {self.log_path}: {exc}") from exc

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
                    break
                raise StorageFailure(f"corrupt event at {self.log_path}:{i + 1}")
            if event["event"] == "opened":
                c = event["case"]
                self._cases[c["case_id"]] = VerificationCase(
                    case_id=c["case_id"],
                    entry_id=c["entry_id"],
                    station_id=c["station_id"],
                    opened_at=datetime.fromisoformat(c["opened_at"]),
                )
            elif event["event"] == "decided":
                case = self._cases[event["case_id"]]
                case.state = CaseState(event["state"])
                case.decided_at = datetime.fromisoformat(event["at"])
            else:
                raise StorageFailure(f"unknown case event {event['event']!r}")

    def _append(self, event: dict) -> None:
        try:
            self._log.write(json.dumps(event, sort_keys=True) + "\n")
            self._log.flush()
            if self.fsync:
                import os

                os.fsync(self._log.fileno())
        except OSError as exc:
            raise StorageFailure(f"append to {self.log_path} failed: {exc}") from exc

    def close(self) -> None:
        self._log.close()

    def open_case(self, entry_id: str, station_id: str) -> VerificationCase:
        with self._lock:
            case = VerificationCase(
                case_id=uuid.uuid4().hex,
                entry_id=entry_id,
                station_id=station_id,
                opened_at=utcnow(),
            )
            self._append({
                "event": "opened",
                "case": {
                    "case_id": case.case_id,
                    "entry_id": case.entry_id,
                    "station_id": case.station_id,
                    "opened_at": _iso(case.opened_at),
                },
            })
            self._cases[case.case_id] = case
            return replace(case)

    def get_case(self, case_id: str) -> VerificationCase:
        with self._lock:
            try:
                return replace(self._cases[case_id])
            except KeyError:
                raise UnknownCase(f"no verification case {case_id}") from None

    def pending_cases(self) -> list[VerificationCase]:
        return self.cases_by_state(CaseState.PENDING)

    def cases_by_state(self, state: CaseState) -> list[VerificationCase]:
        with self._lock:
            matched = [c for c in self._cases.values() if c.state is state]
        matched.sort(key=lambda c: (c.opened_at, c.case_id))
        return [replace(c) for c in matched]

    def cases_for_entry(self, entry_id: str) -> list[VerificationCase]:
        with self._lock:
            return [replace(c) for c in self._cases.values() if c.entry_id == entry_id]

    def mark_decided(self, case_id: str, approve: bool) -> VerificationCase:
        """Record the decision; exactly one caller wins a concurrent race."""
        with self._lock:
            if case_id not in self._cases:
                raise UnknownCase(f"no verification case {case_id}")
            case = self._cases[case_id]
            if case.state is not CaseState.PENDING:
                raise AlreadyDecided(f"case {case_id} is already {case.state.value}")
            now = utcnow()
            state = CaseState.APPROVED if approve else CaseState.DENIED
            self._append({
                "event": "decided", "case_id": case_id, "state": state.value, "at": _iso(now),
            })
            case.state = state
            case.decided_at = now
            return replace(case)
