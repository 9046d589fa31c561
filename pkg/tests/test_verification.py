import json

import pytest

from reunite.config import default_fixture_path
from reunite.errors import AlreadyDecided, RegistryUnavailable, UnknownCase
from reunite.matching import Disposition
from reunite.notification import NotificationKind
from reunite.registry import EntryStatus, Side
from reunite.verification import CaseState, CitizenRegistry, StationRegistry

from conftest import FAMILY, make_submission


@pytest.fixture(scope="module")
def citizens():
    return CitizenRegistry.load(default_fixture_path("citizens.json"))


@pytest.fixture(scope="module")
def stations():
    return StationRegistry.load(default_fixture_path("police_stations.json"))


class TestValidatePoliceStation:
    def test_seeded_station(self, stations):
        assert stations.validate_police_station("PS-DHK-01")

    def test_unseeded_station(self, stations):
        assert not stations.validate_police_station("PS-XX-99")

    def test_empty_string(self, stations):
        assert not stations.validate_police_station("")

    def test_unreadable_fixture(self, tmp_path):
        with pytest.raises(RegistryUnavailable):
            StationRegistry.load(tmp_path / "missing.json")


class TestValidateCitizen:
    def test_valid_identity_111111(self, citizens):
        assert citizens.validate_citizen("111111", "Rahim Uddin", "+880-1711-000111")

    def test_false_nid_99999(self, citizens):
        assert not citizens.validate_citizen("99999", "Anyone", "000")

    def test_wrong_phone(self, citizens):
        assert not citizens.validate_citizen("111111", "Rahim Uddin", "+880-1711-999999")

    def test_name_case_insensitive(self, citizens):
        assert citizens.validate_citizen("111111", "RAHIM UDDIN", "+880-1711-000111")

    def test_phone_digits_only_comparison(self, citizens):
        assert citizens.validate_citizen("111111", "Rahim Uddin", "8801711000111")

    def test_duplicate_nid_fixture_rejected(self, tmp_path):
        path = tmp_path / "citizens.json"
        path.write_text(json.dumps([
            {"nid": "1", "full_name": "A", "phone": "1"},
            {"nid": "1", "full_name": "B", "phone": "2"},
        ]))
        with pytest.raises(ValueError, match="duplicate nid 1"):
            CitizenRegistry.load(path)


class TestApGate:
    def test_submission_opens_pending_case(self, manual_service):
        outcome = manual_service.submit(make_submission())
        assert outcome.disposition is Disposition.PENDING_VERIFICATION
        entry = manual_service.get_entry(outcome.entry_id)
        assert entry.status is EntryStatus.AP
        cases = manual_service.pending_cases()
        assert len(cases) == 1
        assert cases[0].entry_id == outcome.entry_id
        requests = manual_service.outbox.read(NotificationKind.VERIFICATION_REQUEST)
        assert len(requests) == 1
        assert requests[0].to_email == "ps-dhk-01@police.example"

    def test_invalid_station_opens_no_case(self, manual_service):
        uploader = dict(FAMILY, police_station_id="PS-XX-99")
        outcome = manual_service.submit(make_submission(uploader=uploader))
        assert outcome.disposition is Disposition.REJECTED_INVALID_INFO
        assert manual_service.pending_cases() == []
        assert manual_service.outbox.read() == []

    def test_approve_continues_pipeline(self, manual_service):
        outcome = manual_service.submit(make_submission())
        case = manual_service.pending_cases()[0]
        decided = manual_service.decide_case(case.case_id, approve=True)
        assert decided.disposition is Disposition.STORED_NO_MATCH
        assert manual_service.get_entry(outcome.entry_id).status is EntryStatus.ACTIVE

    def test_deny_rejects_entry(self, manual_service):
        outcome = manual_service.submit(make_submission())
        case = manual_service.pending_cases()[0]
        decided = manual_service.decide_case(case.case_id, approve=False)
        assert decided.disposition is Disposition.REJECTED_INVALID_INFO
        entry = manual_service.get_entry(outcome.entry_id)
        assert entry.status is EntryStatus.REJECTED
        assert manual_service.store.active_entries(Side.MISSING) == []

    def test_second_decision_rejected(self, manual_service):
        manual_service.submit(make_submission())
        case = manual_service.pending_cases()[0]
        manual_service.decide_case(case.case_id, approve=True)
        with pytest.raises(AlreadyDecided):
            manual_service.decide_case(case.case_id, approve=False)
        assert manual_service.cases.get_case(case.case_id).state is CaseState.APPROVED

    def test_unknown_case(self, manual_service):
        with pytest.raises(UnknownCase):
            manual_service.decide_case("nope", approve=True)

    def test_no_active_without_approved_case(self, manual_service):
        outcome = manual_service.submit(make_submission())
        from reunite.errors import IllegalTransition

        with pytest.raises(IllegalTransition):
            manual_service.continue_after_approval(outcome.entry_id)
        assert manual_service.get_entry(outcome.entry_id).status is EntryStatus.AP


class TestReplayIdempotence:
    def test_recovery_triggers_no_side_effects(self, tmp_path):
        from reunite.config import ServiceConfig
        from reunite.service import RegistryService

        data_dir = tmp_path / "data"
        svc = RegistryService(ServiceConfig(data_dir=data_dir, auto_approve=True))
        outcome = svc.submit(make_submission())
        notifications_before = [(n.id, n.kind) for n in svc.outbox.read()]
        entry_before = svc.get_entry(outcome.entry_id)
        svc.close()

        recovered = RegistryService(ServiceConfig(data_dir=data_dir, auto_approve=True))
        assert [(n.id, n.kind) for n in recovered.outbox.read()] == notifications_before
        assert recovered.get_entry(outcome.entry_id).same_record(entry_before)
        assert recovered.pending_cases() == []
        recovered.close()
