"""End-to-end drivers for the four demo cases:

  CASE1  missing entry first, then the finder's entry matches it
  CASE2  finding entry first, then the family's entry matches it
  CASE3  repeat missing entry is rejected as a duplicate
  CASE4  intruder with false NID 99999 is rejected outright

Each run is hermetic: the embedded client starts a fresh service over a
temporary data directory and the pinned synthetic-embedder seed, so the
report is byte-identical across runs. The HTTP client drives a live
service instead, scoping outbox assertions to the entries it created.
"""
from __future__ import annotations

import base64
import json
import tempfile
import uuid
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import messages
from .api import outcome_json
from .config import ServiceConfig
from .embedding import synthetic_payload
from .errors import ReuniteError
from .matching import Submission
from .registry import EntryStatus, Side, UploaderInfo
from .embedding.images import FaceImage, ImageFormat
from .service import RegistryService

FAMILY = {
    "name": "Rahim Uddin", "nid": "111111", "phone": "+880-1711-000111",
    "email": "family@people.example", "address": "12 Green Road, Dhaka",
    "police_station_id": "PS-DHK-01",
}
FINDER = {
    "name": "Karima Begum", "nid": "222222", "phone": "+880-1811-000222",
    "email": "finder@people.example", "address": "7 Port Road, Chattogram",
    "police_station_id": "PS-CTG-02",
}
INTRUDER = {
    "name": "Nameless Intruder", "nid": "99999", "phone": "+880-0000-000000",
    "email": "intruder@people.example", "address": "unknown",
    "police_station_id": "PS-DHK-01",
}
STATION_EMAILS = {
    "PS-DHK-01": "ps-dhk-01@police.example",
    "PS-CTG-02": "ps-ctg-02@police.example",
}

CASE_NAMES = ("CASE1", "CASE2", "CASE3", "CASE4")


@dataclass
class ScenarioStep:
    action: str
    expected: str
    observed: str

    @property
    def passed(self) -> bool:
        return self.expected == self.observed


@dataclass
class ScenarioReport:
    case_name: str
    steps: list[ScenarioStep] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.steps)

    def to_dict(self) -> dict:
        return {
            "case_name": self.case_name,
            "passed": self.passed,
            "steps": [dict(asdict(s), **{"pass": s.passed}) for s in self.steps],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


class EmbeddedClient:
    """Drives a fresh in-process service over a temporary data directory."""

    def __init__(self, auto_approve: bool = True):
        self._tmp = tempfile.TemporaryDirectory(prefix="reunite-scenario-")
        self.service = RegistryService(ServiceConfig(
            data_dir=Path(self._tmp.name), auto_approve=auto_approve,
        ))

    def close(self):
        self.service.close()
        self._tmp.cleanup()

    def submit(self, side: str, uploader: dict, subject_name: str, photo_payload: bytes) -> dict:
        try:
            outcome = self.service.submit(Submission(
                side=Side[side],
                uploader=UploaderInfo(**uploader),
                subject_name=subject_name,
                photo=FaceImage(payload=photo_payload, format=ImageFormat.SYNTHETIC),
            ))
        except ReuniteError as exc:
            return {"error": str(exc)}
        return outcome_json(outcome)

    def pending_cases(self) -> list[dict]:
        return [{"case_id": c.case_id, "entry_id": c.entry_id}
                for c in self.service.pending_cases()]

    def decide(self, case_id: str, approve: bool) -> dict:
        return outcome_json(self.service.decide_case(case_id, approve=approve))

    def entry(self, entry_id: str) -> dict:
        return self.service.entry_view(entry_id)

    def outbox(self) -> list[dict]:
        return [{"kind": n.kind.value, "to_email": n.to_email,
                 "related_entry_ids": n.related_entry_ids}
                for n in self.service.outbox.read()]


class HttpClient:
    """Drives a live service over its HTTP interface."""

    def __init__(self, base_url: str):
        import httpx

        self.base_url = base_url.rstrip("/")
        self._http = httpx.Client(base_url=self.base_url, timeout=30.0)

    def close(self):
        self._http.close()

    def submit(self, side: str, uploader: dict, subject_name: str, photo_payload: bytes) -> dict:
        resp = self._http.post("/api/entries", json={
            "side": side,
            "uploader": uploader,
            "subject_name": subject_name,
            "photo": {
                "format": "SYNTHETIC",
                "payload_base64": base64.b64encode(photo_payload).decode("ascii"),
            },
        })
        return resp.json()

    def pending_cases(self) -> list[dict]:
        return self._http.get("/api/verifications", params={"state": "PENDING"}).json()

    def decide(self, case_id: str, approve: bool) -> dict:
        return self._http.post(f"/api/verifications/{case_id}/decision",
                               json={"approve": approve}).json()

    def entry(self, entry_id: str) -> dict:
        return self._http.get(f"/api/entries/{entry_id}").json()

    def outbox(self) -> list[dict]:
        return self._http.get("/api/outbox").json()


class ScenarioRunner:
    def __init__(self, client, manual_verify: bool = False, identity: str | None = None):
        self.client = client
        self.manual_verify = manual_verify
        self.identity = identity or "I1"
        self.run_entry_ids: set[str] = set()

    def _photo(self, variant: str) -> bytes:
        return synthetic_payload(self.identity, variant, 7)

    def _submit(self, side: str, uploader: dict, variant: str) -> dict:
        outcome = self.client.submit(side, uploader, f"Subject {self.identity}",
                                     self._photo(variant))
        if "entry_id" in outcome:
            self.run_entry_ids.add(outcome["entry_id"])
        if self.manual_verify and outcome.get("disposition") == "PENDING_VERIFICATION":
            case_id = next(
                c["case_id"] for c in self.client.pending_cases()
                if c["entry_id"] == outcome["entry_id"]
            )
            outcome = self.client.decide(case_id, approve=True)
        return outcome

    def _run_outbox(self) -> list[dict]:
        return [n for n in self.client.outbox()
                if self.run_entry_ids & set(n["related_entry_ids"])]

    def _outcome_summary(self, outcome: dict) -> str:
        contact = outcome.get("other_side_contact")
        parts = [outcome.get("disposition", "ERROR"), outcome.get("message", outcome.get("error", ""))]
        if contact:
            parts.append(f"contact={contact['name']}/{contact['phone']}/{contact['email']}")
        return " | ".join(parts)

    def _expect_outcome(self, disposition: str, message: str, contact: dict | None = None) -> str:
        parts = [disposition, message]
        if contact:
            parts.append(f"contact={contact['name']}/{contact['phone']}/{contact['email']}")
        return " | ".join(parts)

    def _notification_counts(self, kinds: tuple[str, ...]) -> str:
        notes = self._run_outbox()
        return ", ".join(
            f"{kind}->{sorted(n['to_email'] for n in notes if n['kind'] == kind)}"
            for kind in kinds
        )

    # --- the four cases ---

    def run(self, case_name: str) -> ScenarioReport:
        case_name = case_name.upper()
        if case_name not in CASE_NAMES:
            raise ValueError(f"unknown case {case_name!r}")
        report = ScenarioReport(case_name=case_name)
        getattr(self, f"_{case_name.lower()}")(report)
        return report

    def _case1(self, report: ScenarioReport) -> None:
        first = self._submit("MISSING", FAMILY, "v1")
        report.steps.append(ScenarioStep(
            action="record missing entry (family side)",
            expected=self._expect_outcome("STORED_NO_MATCH", messages.SAVED_FOR_FURTHER_USAGE),
            observed=self._outcome_summary(first),
        ))
        second = self._submit("FINDING", FINDER, "v2")
        report.steps.append(ScenarioStep(
            action="record finding entry (finder side)",
            expected=self._expect_outcome("MATCHED", messages.MATCH_FOUND, FAMILY),
            observed=self._outcome_summary(second),
        ))
        report.steps.append(ScenarioStep(
            action="match notifications go to the family and its station",
            expected=(
                f"MATCH_TO_PARTY->['{FAMILY['email']}'], "
                f"MATCH_TO_POLICE->['{STATION_EMAILS[FAMILY['police_station_id']]}']"
            ),
            observed=self._notification_counts(("MATCH_TO_PARTY", "MATCH_TO_POLICE")),
        ))

    def _case2(self, report: ScenarioReport) -> None:
        first = self._submit("FINDING", FINDER, "v1")
        report.steps.append(ScenarioStep(
            action="record finding entry (finder side)",
            expected=self._expect_outcome("STORED_NO_MATCH", messages.SAVED_FOR_FURTHER_USAGE),
            observed=self._outcome_summary(first),
        ))
        second = self._submit("MISSING", FAMILY, "v2")
        report.steps.append(ScenarioStep(
            action="record missing entry (family side)",
            expected=self._expect_outcome("MATCHED", messages.MATCH_FOUND, FINDER),
            observed=self._outcome_summary(second),
        ))
        report.steps.append(ScenarioStep(
            action="match notifications go to the finder and its station",
            expected=(
                f"MATCH_TO_PARTY->['{FINDER['email']}'], "
                f"MATCH_TO_POLICE->['{STATION_EMAILS[FINDER['police_station_id']]}']"
            ),
            observed=self._notification_counts(("MATCH_TO_PARTY", "MATCH_TO_POLICE")),
        ))

    def _case3(self, report: ScenarioReport) -> None:
        first = self._submit("MISSING", FAMILY, "v1")
        report.steps.append(ScenarioStep(
            action="record missing entry (family side)",
            expected=self._expect_outcome("STORED_NO_MATCH", messages.SAVED_FOR_FURTHER_USAGE),
            observed=self._outcome_summary(first),
        ))
        second = self._submit("MISSING", FAMILY, "v3")
        report.steps.append(ScenarioStep(
            action="attempt to record the same person again (valid NID 111111)",
            expected=self._expect_outcome("REJECTED_DUPLICATE", messages.ALREADY_LISTED),
            observed=self._outcome_summary(second),
        ))
        report.steps.append(ScenarioStep(
            action="duplicate alerts go to the original uploader and its station",
            expected=(
                f"DUPLICATE_ALERT_TO_PARTY->['{FAMILY['email']}'], "
                f"DUPLICATE_ALERT_TO_POLICE->['{STATION_EMAILS[FAMILY['police_station_id']]}']"
            ),
            observed=self._notification_counts(
                ("DUPLICATE_ALERT_TO_PARTY", "DUPLICATE_ALERT_TO_POLICE")
            ),
        ))
        statuses = (
            self.client.entry(first["entry_id"])["status"],
            self.client.entry(second["entry_id"])["status"],
        )
        report.steps.append(ScenarioStep(
            action="original stays listed, attempt never enters the directory",
            expected="original=ACTIVE, attempt=REJECTED",
            observed=f"original={statuses[0]}, attempt={statuses[1]}",
        ))

    def _case4(self, report: ScenarioReport) -> None:
        outcome = self._submit("MISSING", INTRUDER, "v1")
        report.steps.append(ScenarioStep(
            action="intruder submits with false NID 99999",
            expected=self._expect_outcome("REJECTED_INVALID_INFO", messages.INVALID_INFO),
            observed=self._outcome_summary(outcome),
        ))
        status = self.client.entry(outcome["entry_id"])["status"]
        report.steps.append(ScenarioStep(
            action="the rejected submission never becomes active",
            expected=f"status={EntryStatus.REJECTED.value}",
            observed=f"status={status}",
        ))
        report.steps.append(ScenarioStep(
            action="no match or duplicate notifications are emitted",
            expected="MATCH_TO_PARTY->[], MATCH_TO_POLICE->[], "
                     "DUPLICATE_ALERT_TO_PARTY->[], DUPLICATE_ALERT_TO_POLICE->[]",
            observed=self._notification_counts((
                "MATCH_TO_PARTY", "MATCH_TO_POLICE",
                "DUPLICATE_ALERT_TO_PARTY", "DUPLICATE_ALERT_TO_POLICE",
            )),
        ))


def run_scenario(
    case_name: str,
    base_url: str | None = None,
    manual_verify: bool = False,
    identity: str | None = None,
) -> ScenarioReport:
    """Run one case embedded (fresh temp store) or against a live service."""
    if base_url is None:
        client = EmbeddedClient(auto_approve=not manual_verify)
    else:
        client = HttpClient(base_url)
        if identity is None:
            identity = f"I-{uuid.uuid4().hex[:12]}"  # avoid collisions in a shared store
    try:
        return ScenarioRunner(client, manual_verify=manual_verify, identity=identity).run(case_name)
    finally:
        client.close()
