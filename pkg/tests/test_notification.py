import pytest

from reunite.errors import OutboxFailure
from reunite.matching import Disposition
from reunite.notification import Notification, NotificationKind, Outbox
from reunite.registry import Side

from conftest import FAMILY, FINDER, make_submission

FAMILY_STATION_EMAIL = "ps-dhk-01@police.example"
FINDER_STATION_EMAIL = "ps-ctg-02@police.example"


def run_case1(service, identity="I1"):
    service.submit(make_submission(side=Side.MISSING, uploader=FAMILY, identity=identity, variant="v1"))
    return service.submit(make_submission(side=Side.FINDING, uploader=FINDER, identity=identity, variant="v2"))


class TestNotifyMatch:
    def test_case1_addresses_missing_side(self, service):
        run_case1(service)
        party = service.outbox.read(NotificationKind.MATCH_TO_PARTY)
        police = service.outbox.read(NotificationKind.MATCH_TO_POLICE)
        assert len(party) == 1 and len(police) == 1
        assert party[0].to_email == FAMILY["email"]
        assert police[0].to_email == FAMILY_STATION_EMAIL
        # the prior side receives the triggering uploader's details
        assert FINDER["name"] in party[0].body
        assert FINDER["phone"] in party[0].body
        assert FINDER["email"] in party[0].body

    def test_case2_addresses_finder_side(self, service):
        service.submit(make_submission(side=Side.FINDING, uploader=FINDER, variant="v1"))
        service.submit(make_submission(side=Side.MISSING, uploader=FAMILY, variant="v2"))
        party = service.outbox.read(NotificationKind.MATCH_TO_PARTY)
        police = service.outbox.read(NotificationKind.MATCH_TO_POLICE)
        assert party[0].to_email == FINDER["email"]
        assert police[0].to_email == FINDER_STATION_EMAIL
        assert FAMILY["name"] in party[0].body

    def test_exactly_two_per_match(self, service):
        run_case1(service)
        match_notes = [
            n for n in service.outbox.read()
            if n.kind in (NotificationKind.MATCH_TO_PARTY, NotificationKind.MATCH_TO_POLICE)
        ]
        assert len(match_notes) == 2


class TestNotifyDuplicate:
    def test_exactly_two_alerts_referencing_both_entries(self, service):
        first = service.submit(make_submission(variant="v1"))
        second = service.submit(make_submission(variant="v2"))
        party = service.outbox.read(NotificationKind.DUPLICATE_ALERT_TO_PARTY)
        police = service.outbox.read(NotificationKind.DUPLICATE_ALERT_TO_POLICE)
        assert len(party) == 1 and len(police) == 1
        for note in (party[0], police[0]):
            assert set(note.related_entry_ids) == {first.entry_id, second.entry_id}
            assert FAMILY["name"] in note.body  # names the attempting uploader
        assert party[0].to_email == FAMILY["email"]
        assert police[0].to_email == FAMILY_STATION_EMAIL

    def test_finding_side_original_alerts_finder(self, service):
        service.submit(make_submission(side=Side.FINDING, uploader=FINDER, variant="v1"))
        service.submit(make_submission(side=Side.FINDING, uploader=FINDER, variant="v2"))
        party = service.outbox.read(NotificationKind.DUPLICATE_ALERT_TO_PARTY)
        assert party[0].to_email == FINDER["email"]
        police = service.outbox.read(NotificationKind.DUPLICATE_ALERT_TO_POLICE)
        assert police[0].to_email == FINDER_STATION_EMAIL

    def test_outbox_failure_does_not_change_disposition(self, service, monkeypatch):
        service.submit(make_submission(variant="v1"))

        def failing_append(notification):
            raise OutboxFailure("disk full")

        monkeypatch.setattr(service.outbox, "append", failing_append)
        outcome = service.submit(make_submission(variant="v2"))
        assert outcome.disposition is Disposition.REJECTED_DUPLICATE


class TestReadOutbox:
    def test_case1_emission_order(self, service):
        run_case1(service)
        kinds = [n.kind for n in service.outbox.read()]
        assert kinds == [
            NotificationKind.VERIFICATION_REQUEST,
            NotificationKind.VERIFICATION_REQUEST,
            NotificationKind.MATCH_TO_PARTY,
            NotificationKind.MATCH_TO_POLICE,
        ]

    def test_empty_system(self, service):
        assert service.outbox.read() == []

    def test_kind_filter(self, service):
        run_case1(service)
        assert len(service.outbox.read(NotificationKind.MATCH_TO_POLICE)) == 1

    def test_replay_stable(self, tmp_path):
        outbox = Outbox(tmp_path)
        for i in range(3):
            outbox.append(Notification(
                id=f"n{i}", kind=NotificationKind.VERIFICATION_REQUEST,
                to_email="x@example.com", subject="s", body="b",
                related_entry_ids=["e1"],
            ))
        before = [(n.id, n.kind, n.to_email) for n in outbox.read()]
        outbox.close()
        reloaded = Outbox(tmp_path)
        assert [(n.id, n.kind, n.to_email) for n in reloaded.read()] == before
        reloaded.close()

    def test_invariants_enforced(self):
        with pytest.raises(ValueError):
            Notification(id="n", kind=NotificationKind.MATCH_TO_PARTY,
                         to_email="", subject="s", body="b", related_entry_ids=["e"])
        with pytest.raises(ValueError):
            Notification(id="n", kind=NotificationKind.MATCH_TO_PARTY,
                         to_email="a@b", subject="s", body="b", related_entry_ids=[])
