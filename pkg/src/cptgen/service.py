"""The what-if HTTP service behind the tuning UI.

One document, one writer. GET /v1/spec and GET /v1/cpt read the current
document; POST /v1/whatif regenerates requested rows under staged weight or
anchor overrides without touching state; POST /v1/commit persists overrides
to the document file under optimistic concurrency (the caller must present
the revision it based its edits on). Every response carries the document
revision token, in the body for JSON and in the X-Document-Revision header
always.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path
from typing import Any, Mapping, Sequence

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from .document import (
    DocumentError,
    ElicitationDocument,
    apply_overrides,
    document_to_jsonable,
    load_document,
    save_document,
)
from .engine import (
    competing_modes,
    generate_cpt,
    generate_row,
    modality_profile,
    row_contributions,
)
from .export import export_cpt
from .geometry import hull_membership
from .model import (
    ParentalConfiguration,
    SpecViolation,
    ValidationError,
    enumerate_configurations,
)

_MEDIA_TYPES = {"csv": "text/csv", "xmlbif": "application/xml"}


class AnchorOverride(BaseModel):
    configuration: dict[str, str]
    distribution: list[float]


class WhatIfRequest(BaseModel):
    weights: dict[str, float] | None = None
    anchors: list[AnchorOverride] | None = None
    targets: list[dict[str, str]] | None = None


class CommitRequest(WhatIfRequest):
    revision: str


class DocumentStore:
    """Holds the current document and serializes writers."""

    def __init__(self, path: Path, document: ElicitationDocument):
        self.path = path
        self.document = document
        self._write_lock = threading.Lock()

    def commit(
        self,
        expected_revision: str,
        weights: Mapping[str, float] | None,
        anchors: Sequence[tuple[Mapping[str, str], Sequence[float]]] | None,
    ) -> str:
        with self._write_lock:
            current = self.document
            if expected_revision != current.revision:
                raise StaleRevisionError(current.revision)
            updated = apply_overrides(current, weights=weights, anchors=anchors)
            data = save_document(updated)
            tmp = self.path.with_name(self.path.name + ".tmp")
            tmp.write_bytes(data)
            os.replace(tmp, self.path)
            self.document = updated
            return updated.revision


class StaleRevisionError(Exception):
    def __init__(self, current_revision: str):
        self.current_revision = current_revision
        super().__init__("commit based on a stale document revision")


def _violations_payload(violations: list[SpecViolation]) -> list[dict[str, str]]:
    return [
        {"code": v.code, "where": v.where, "message": v.message}
        for v in violations
    ]


def _parse_targets(
    doc: ElicitationDocument, targets: list[dict[str, str]] | None
) -> list[ParentalConfiguration]:
    if targets is None:
        return enumerate_configurations(doc.spec)
    parsed: list[ParentalConfiguration] = []
    violations: list[SpecViolation] = []
    for i, raw in enumerate(targets):
        where = f"targets[{i}]"
        try:
            config = ParentalConfiguration.from_labels(doc.spec, raw)
        except KeyError as exc:
            violations.append(SpecViolation(
                "target-bad-configuration", where,
                str(exc.args[0]) if exc.args else str(exc)))
            continue
        problems = config.validate_for(doc.spec)
        if problems:
            violations.extend(
                SpecViolation(v.code, where, v.message) for v in problems)
            continue
        parsed.append(config)
    if violations:
        raise ValidationError(violations)
    return parsed


def _what_if_rows(
    doc: ElicitationDocument, request: WhatIfRequest
) -> dict[str, Any]:
    anchors = (
        [(o.configuration, o.distribution) for o in request.anchors]
        if request.anchors
        else None
    )
    working = apply_overrides(doc, weights=request.weights, anchors=anchors)
    spec = working.spec
    anchor_set = working.anchor_set
    rows = []
    for config in _parse_targets(working, request.targets):
        row = generate_row(spec, anchor_set, config)
        modes = modality_profile(row)
        contributions = row_contributions(spec, anchor_set, config)
        certificate = hull_membership(
            row, [anchor_set.anchors[c] for c, _ in contributions])
        rows.append({
            "configuration": config.labels(spec),
            "distribution": list(row.values),
            "modes": modes,
            "mode_labels": [spec.child_states[i] for i in modes],
            "competing_modes": competing_modes(row),
            "hull": {
                "member": certificate.member,
                "residual": certificate.residual,
                "weights": list(certificate.weights),
            },
        })
    return {
        "weights": {p.name: p.weight for p in spec.parents},
        "rows": rows,
    }


def create_app(document_path: str | Path, *, strict: bool = True) -> FastAPI:
    """Build the service around one document file."""
    path = Path(document_path)
    document = load_document(path.read_bytes(), strict=strict)
    store = DocumentStore(path, document)

    app = FastAPI(title="cptgen what-if service", version="1.0")
    app.state.store = store
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.middleware("http")
    async def revision_header(request: Request, call_next):
        response = await call_next(request)
        response.headers["X-Document-Revision"] = store.document.revision
        return response

    @app.exception_handler(ValidationError)
    async def handle_validation(request: Request, exc: ValidationError):
        return JSONResponse(
            status_code=400,
            content={"errors": _violations_payload(exc.violations),
                     "revision": store.document.revision},
        )

    @app.exception_handler(DocumentError)
    async def handle_document_error(request: Request, exc: DocumentError):
        return JSONResponse(
            status_code=400,
            content={"errors": [{"code": "document-error", "where": exc.path,
                                 "message": str(exc)}],
                     "revision": store.document.revision},
        )

    @app.get("/v1/spec")
    async def get_spec():
        doc = store.document
        return {"revision": doc.revision, "document": document_to_jsonable(doc)}

    @app.get("/v1/cpt")
    async def get_cpt(format: str = "json"):
        doc = store.document
        result = generate_cpt(doc.spec, doc.anchor_set)
        if format == "json":
            payload = json.loads(export_cpt(result, "json"))
            return {"revision": doc.revision, "cpt": payload}
        if format in _MEDIA_TYPES:
            return PlainTextResponse(
                export_cpt(result, format).decode("utf-8"),
                media_type=_MEDIA_TYPES[format],
            )
        raise ValidationError([SpecViolation(
            "bad-format", "format", f"unknown export format {format!r}")])

    @app.post("/v1/whatif")
    async def what_if(request: WhatIfRequest):
        doc = store.document
        payload = _what_if_rows(doc, request)
        payload["revision"] = doc.revision
        return payload

    @app.post("/v1/commit")
    async def commit(request: CommitRequest):
        anchors = (
            [(o.configuration, o.distribution) for o in request.anchors]
            if request.anchors
            else None
        )
        try:
            revision = store.commit(request.revision, request.weights, anchors)
        except StaleRevisionError as exc:
            return JSONResponse(
                status_code=409,
                content={"errors": [{"code": "stale-revision", "where": "revision",
                                     "message": str(exc)}],
                         "revision": exc.current_revision},
            )
        return {"revision": revision}

    return app


def serve(document_path: str | Path, *, host: str = "127.0.0.1",
          port: int = 8765, strict: bool = True) -> None:
    """Run the service until interrupted."""
    import uvicorn

    app = create_app(document_path, strict=strict)
    uvicorn.run(app, host=host, port=port, log_level="info")
