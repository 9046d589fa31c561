"""HTTP+JSON surface over the pipeline.

The API layer carries no business rules: every endpoint delegates to
RegistryService and maps its outcomes onto status codes. Request bodies
are parsed strictly (unknown fields rejected) to surface client bugs.
"""
from __future__ import annotations

import base64
import binascii

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, field_validator

from .embedding import FaceImage, ImageFormat
from .errors import (
    AlreadyDecided,
    NoRecognizableFace,
    StorageFailure,
    UndecodableImage,
    UnknownCase,
    UnknownEntry,
)
from .matching import Disposition, Submission, SubmissionOutcome
from .registry import Side, UploaderInfo
from .service import RegistryService
from .verification import CaseState


class _StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class UploaderBody(_StrictModel):
    name: str
    nid: str
    phone: str
    email: str
    address: str
    police_station_id: str


class PhotoBody(_StrictModel):
    format: str
    payload_base64: str

    @field_validator("format")
    @classmethod
    def _known_format(cls, v: str) -> str:
        if v not in ImageFormat.__members__:
            raise ValueError(f"format must be one of {list(ImageFormat.__members__)}")
        return v


class SubmissionBody(_StrictModel):
    side: str
    uploader: UploaderBody
    subject_name: str
    photo: PhotoBody

    @field_validator("side")
    @classmethod
    def _known_side(cls, v: str) -> str:
        if v not in Side.__members__:
            raise ValueError(f"side must be one of {list(Side.__members__)}")
        return v


class DecisionBody(_StrictModel):
    approve: bool


_STATUS_BY_DISPOSITION = {
    Disposition.MATCHED: 201,
    Disposition.STORED_NO_MATCH: 201,
    Disposition.PENDING_VERIFICATION: 202,
    Disposition.REJECTED_INVALID_INFO: 422,
    Disposition.REJECTED_DUPLICATE: 422,
}


def outcome_json(outcome: SubmissionOutcome) -> dict:
    return {
        "entry_id": outcome.entry_id,
        "disposition": outcome.disposition.value,
        "message": outcome.message,
        "match": None if outcome.match is None else {
            "query_entry_id": outcome.match.query_entry_id,
            "matched_entry_id": outcome.match.matched_entry_id,
            "distance": outcome.match.distance,
        },
        "other_side_contact": None if outcome.other_side_contact is None else {
            "name": outcome.other_side_contact.name,
            "phone": outcome.other_side_contact.phone,
            "email": outcome.other_side_contact.email,
        },
    }


def create_app(service: RegistryService) -> FastAPI:
    app = FastAPI(title="reunite", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def _malformed(request: Request, exc: RequestValidationError):
        detail = [
            {"loc": [str(p) for p in e.get("loc", ())], "msg": str(e.get("msg", ""))}
            for e in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"error": "malformed body",
                                                      "detail": detail})

    @app.exception_handler(UndecodableImage)
    @app.exception_handler(NoRecognizableFace)
    async def _bad_photo(request: Request, exc: Exception):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(UnknownEntry)
    @app.exception_handler(UnknownCase)
    async def _not_found(request: Request, exc: Exception):
        return JSONResponse(status_code=404, content={"error": str(exc)})

    @app.exception_handler(AlreadyDecided)
    async def _conflict(request: Request, exc: Exception):
        return JSONResponse(status_code=409, content={"error": str(exc)})

    @app.exception_handler(StorageFailure)
    async def _storage(request: Request, exc: Exception):
        return JSONResponse(status_code=500, content={"error": str(exc)})

    @app.get("/api/health")
    def health():
        return {"status": "ok", "auto_approve": service.config.auto_approve}

    @app.post("/api/entries")
    def post_entry(body: SubmissionBody):
        try:
            payload = base64.b64decode(body.photo.payload_base64, validate=True)
        except (binascii.Error, ValueError):
            return JSONResponse(status_code=400, content={"error": "payload_base64 is not valid base64"})
        try:
            uploader = UploaderInfo(**body.uploader.model_dump())
        except ValueError as exc:
            return JSONResponse(status_code=400, content={"error": str(exc)})
        submission = Submission(
            side=Side[body.side],
            uploader=uploader,
            subject_name=body.subject_name,
            photo=FaceImage(payload=payload, format=ImageFormat[body.photo.format]),
        )
        outcome = service.submit(submission)
        return JSONResponse(
            status_code=_STATUS_BY_DISPOSITION[outcome.disposition],
            content=outcome_json(outcome),
        )

    @app.get("/api/entries/{entry_id}")
    def get_entry(entry_id: str):
        return service.entry_view(entry_id)

    @app.get("/api/verifications")
    def list_verifications(state: str = Query(default="PENDING")):
        if state not in CaseState.__members__:
            return JSONResponse(status_code=400, content={"error": f"unknown state {state!r}"})
        cases = service.cases.cases_by_state(CaseState[state])
        items = []
        for case in cases:
            entry = service.get_entry(case.entry_id)
            items.append({
                "case_id": case.case_id,
                "entry_id": case.entry_id,
                "station_id": case.station_id,
                "state": case.state.value,
                "opened_at": case.opened_at.isoformat(),
                "summary": {
                    "side": entry.side.value,
                    "subject_name": entry.subject_name,
                    "uploader_name": entry.uploader.name,
                    "nid": entry.uploader.nid,
                },
            })
        return items

    @app.post("/api/verifications/{case_id}/decision")
    def decide(case_id: str, body: DecisionBody):
        outcome = service.decide_case(case_id, approve=body.approve)
        return outcome_json(outcome)

    @app.get("/api/outbox")
    def outbox(kind: str | None = Query(default=None)):
        from .notification import NotificationKind

        if kind is not None and kind not in NotificationKind.__members__:
            return JSONResponse(status_code=400, content={"error": f"unknown kind {kind!r}"})
        notifications = service.outbox.read(
            None if kind is None else NotificationKind[kind]
        )
        return [
            {
                "id": n.id,
                "kind": n.kind.value,
                "to_email": n.to_email,
                "subject": n.subject,
                "body": n.body,
                "related_entry_ids": n.related_entry_ids,
                "created_at": n.created_at.isoformat(),
            }
            for n in notifications
        ]

    if service.config.static_dir is not None and service.config.static_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=service.config.static_dir, html=True))

    return app
