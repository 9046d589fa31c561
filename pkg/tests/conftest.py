import pytest

from reunite.config import ServiceConfig
from reunite.embedding import synthetic_image
from reunite.matching import Submission
from reunite.registry import Side, UploaderInfo
from reunite.service import RegistryService

FAMILY = dict(
    name="Rahim Uddin", nid="111111", phone="+880-1711-000111",
    email="family@people.example", address="12 Green Road, Dhaka",
    police_station_id="PS-DHK-01",
)
FINDER = dict(
    name="Karima Begum", nid="222222", phone="+880-1811-000222",
    email="finder@people.example", address="7 Port Road, Chattogram",
    police_station_id="PS-CTG-02",
)
INTRUDER = dict(
    name="Nameless Intruder", nid="99999", phone="+880-0000-000000",
    email="intruder@people.example", address="unknown",
    police_station_id="PS-DHK-01",
)


def make_submission(side=Side.MISSING, uploader=None, identity="I1", variant="v1", seed=7):
    return Submission(
        side=side,
        uploader=UploaderInfo(**(uploader or FAMILY)),
        subject_name=f"Subject {identity}",
        photo=synthetic_image(identity, variant, seed),
    )


@pytest.fixture
def service_factory(tmp_path):
    created = []

    def factory(auto_approve=True, subdir=None, **overrides):
        data_dir = tmp_path / (subdir or f"svc{len(created)}")
        svc = RegistryService(ServiceConfig(
            data_dir=data_dir, auto_approve=auto_approve, **overrides,
        ))
        created.append(svc)
        return svc

    yield factory
    for svc in created:
        svc.close()


@pytest.fixture
def service(service_factory):
    return service_factory()


@pytest.fixture
def manual_service(service_factory):
    return service_factory(auto_approve=False)
