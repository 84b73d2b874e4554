"""HTTP/JSON API over the workbench store, consumed by the CLI and web UI.

All paths are prefixed /api/v1. Mutations are edit events: PATCH bodies carry
{action, payload, idempotency_key} and every append is validated, durably
logged and applied before the response. Auth is a static token table mapped
to annotator ids (file named by FW_TOKENS_FILE, JSON {token: annotator});
without a token table the server runs open and reads the X-Annotator header.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from fastapi import Depends, FastAPI, Header, HTTPException, Query, Response
from pydantic import BaseModel, Field

from .conditions import Condition, ConditionLabel
from .errors import (
    BindFailureError,
    FrozenConditionError,
    LeaseInvalidError,
    MissingDataError,
    NoTimingDataError,
    UnfinalizedASError,
    ValidationFailedError,
    WorkbenchError,
)
from .report import (
    ReportFormat,
    TABLE_NAMES,
    build_table1,
    build_table2,
    build_table3,
    build_table4,
    build_table5,
    emit_report,
)
from .review import EditKind, as_to_dict
from .store import Workbench

ACTION_KINDS = {
    "accept": EditKind.ACCEPT,
    "delete": EditKind.DELETE,
    "replace_frame": EditKind.REPLACE_FRAME,
    "add_fe": EditKind.ADD_FE,
    "remove_fe": EditKind.REMOVE_FE,
    "set_ni": EditKind.SET_NI,
}


class PatchBody(BaseModel):
    action: str
    payload: dict[str, Any] = Field(default_factory=dict)
    idempotency_key: str | None = None


class CreateBody(BaseModel):
    sentence_id: str
    target: dict[str, int]
    frame: str
    idempotency_key: str | None = None


class TimerBody(BaseModel):
    action: str  # start | stop
    ts: float
    idempotency_key: str | None = None


def load_tokens(path: str | Path | None) -> dict[str, str] | None:
    if path is None:
        return None
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(doc, dict) or not all(isinstance(v, str) for v in doc.values()):
        raise MissingDataError("tokens file must map token -> annotator id")
    return {str(k): str(v) for k, v in doc.items()}


def _http_error(exc: WorkbenchError, status: int) -> HTTPException:
    return HTTPException(status_code=status, detail={"code": exc.code, "detail": exc.detail})


def create_app(
    workbench: Workbench,
    tokens: dict[str, str] | None = None,
    webui_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="framewright", version="0.1.0")

    def annotator_of(
        authorization: str | None = Header(default=None),
        x_annotator: str | None = Header(default=None),
    ) -> str:
        if tokens is None:
            return x_annotator or "anonymous"
        if authorization is None or not authorization.startswith("Bearer "):
            raise HTTPException(status_code=401, detail={"code": "UNAUTHORIZED"})
        token = authorization.removeprefix("Bearer ").strip()
        if token not in tokens:
            raise HTTPException(status_code=401, detail={"code": "UNAUTHORIZED"})
        return tokens[token]

    def condition_or_404(label: str) -> Condition:
        try:
            parsed = ConditionLabel(label)
        except ValueError:
            raise HTTPException(
                status_code=400, detail={"code": "BAD_CONDITION", "detail": label}
            ) from None
        condition = workbench.conditions.get(parsed.value)
        if condition is None:
            raise HTTPException(
                status_code=404, detail={"code": "MISSING_DATA", "detail": f"no {label} condition"}
            )
        return condition

    def append_or_raise(**kwargs):
        try:
            return workbench.append(**kwargs)
        except LeaseInvalidError as exc:
            raise _http_error(exc, 409) from None
        except FrozenConditionError as exc:
            raise _http_error(exc, 409) from None
        except MissingDataError as exc:
            raise _http_error(exc, 409) from None
        except ValidationFailedError as exc:
            if "unknown annotation set" in exc.detail or "unknown sentence" in exc.detail:
                raise _http_error(exc, 404) from None
            raise _http_error(exc, 409) from None

    # -- read endpoints ------------------------------------------------------

    @app.get("/api/v1/documents")
    def list_documents(_annotator: str = Depends(annotator_of)):
        out = []
        for doc in workbench.documents:
            counts = {}
            for label, condition in sorted(workbench.conditions.items()):
                n = sum(
                    len(condition.sets_for_sentence(s.id, include_deleted=True))
                    for s in doc.sentences
                )
                counts[label] = n
            out.append(
                {
                    "id": doc.id,
                    "title": doc.title,
                    "sentences": len(doc.sentences),
                    "as_counts": counts,
                }
            )
        return {"documents": out}

    @app.get("/api/v1/documents/{doc_id}/sentences")
    def document_sentences(
        doc_id: str,
        condition: str = Query(default=ConditionLabel.MACHINE_HUMAN.value),
        _annotator: str = Depends(annotator_of),
    ):
        doc = workbench.document_by_id(doc_id)
        if doc is None:
            raise HTTPException(status_code=404, detail={"code": "MISSING_DATA", "detail": doc_id})
        cond = condition_or_404(condition)
        sentences = []
        for s in doc.sentences:
            sentences.append(
                {
                    "id": s.id,
                    "text": s.text,
                    "tokens": [
                        {
                            "index": t.index,
                            "form": t.form,
                            "lemma": t.lemma,
                            "upos": t.upos,
                            "start": t.span.start,
                            "end": t.span.end,
                        }
                        for t in s.tokens
                    ],
                    "annotation_sets": len(cond.sets_for_sentence(s.id, include_deleted=True)),
                }
            )
        return {"document_id": doc.id, "condition": condition, "sentences": sentences}

    @app.get("/api/v1/sentences/{sentence_id}/annotation-sets")
    def sentence_annotation_sets(
        sentence_id: str,
        condition: str = Query(default=ConditionLabel.MACHINE_HUMAN.value),
        _annotator: str = Depends(annotator_of),
    ):
        if sentence_id not in workbench.sentences:
            raise HTTPException(
                status_code=404, detail={"code": "MISSING_DATA", "detail": sentence_id}
            )
        cond = condition_or_404(condition)
        sets = cond.sets_for_sentence(sentence_id, include_deleted=True)
        return {
            "sentence_id": sentence_id,
            "condition": condition,
            "annotation_sets": [as_to_dict(a, workbench.bank) for a in sets],
        }

    # -- edit endpoints --------------------------------------------------------

    @app.post("/api/v1/annotation-sets", status_code=201)
    def create_annotation_set(
        body: CreateBody,
        annotator: str = Depends(annotator_of),
        x_lease_token: str | None = Header(default=None),
    ):
        result = append_or_raise(
            kind=EditKind.CREATE,
            annotator=annotator,
            payload={
                "sentence_id": body.sentence_id,
                "target": body.target,
                "frame": body.frame,
            },
            idem=body.idempotency_key,
            lease_token=x_lease_token,
        )
        return {
            "seq": result.seq,
            "deduplicated": result.deduplicated,
            "annotation_set": as_to_dict(result.annotation_set, workbench.bank),
        }

    @app.patch("/api/v1/annotation-sets/{as_id}")
    def patch_annotation_set(
        as_id: str,
        body: PatchBody,
        annotator: str = Depends(annotator_of),
        x_lease_token: str | None = Header(default=None),
    ):
        kind = ACTION_KINDS.get(body.action)
        if kind is None:
            raise HTTPException(
                status_code=400, detail={"code": "BAD_ACTION", "detail": body.action}
            )
        result = append_or_raise(
            kind=kind,
            annotator=annotator,
            as_id=as_id,
            payload=body.payload,
            idem=body.idempotency_key,
            lease_token=x_lease_token,
        )
        return {
            "seq": result.seq,
            "deduplicated": result.deduplicated,
            "annotation_set": as_to_dict(result.annotation_set, workbench.bank),
        }

    @app.post("/api/v1/annotation-sets/{as_id}/timer")
    def timer_event(
        as_id: str,
        body: TimerBody,
        annotator: str = Depends(annotator_of),
        x_lease_token: str | None = Header(default=None),
    ):
        if body.action not in ("start", "stop"):
            raise HTTPException(
                status_code=400, detail={"code": "BAD_ACTION", "detail": body.action}
            )
        kind = EditKind.TIMER_START if body.action == "start" else EditKind.TIMER_STOP
        result = append_or_raise(
            kind=kind,
            annotator=annotator,
            as_id=as_id,
            ts=body.ts,
            idem=body.idempotency_key,
            lease_token=x_lease_token,
        )
        return {
            "seq": result.seq,
            "deduplicated": result.deduplicated,
            "time_spent": result.annotation_set.time_spent,
        }

    # -- leases ------------------------------------------------------------------

    @app.post("/api/v1/documents/{doc_id}/lease")
    def acquire_lease(doc_id: str, annotator: str = Depends(annotator_of)):
        try:
            lease = workbench.acquire_lease(doc_id, annotator)
        except LeaseInvalidError as exc:
            raise _http_error(exc, 409) from None
        except MissingDataError as exc:
            raise _http_error(exc, 404) from None
        return {
            "doc_id": lease.doc_id,
            "annotator": lease.annotator,
            "token": lease.token,
            "expires_at": lease.expires_at,
        }

    @app.delete("/api/v1/documents/{doc_id}/lease")
    def release_lease(doc_id: str, annotator: str = Depends(annotator_of)):
        try:
            workbench.release_lease(doc_id, annotator)
        except LeaseInvalidError as exc:
            raise _http_error(exc, 409) from None
        return {"released": doc_id}

    # -- framebank ------------------------------------------------------------------

    @app.get("/api/v1/framebank/frames")
    def search_frames(
        query: str = Query(default=""),
        lemma: str = Query(default=""),
        limit: int = Query(default=20, ge=1, le=200),
        _annotator: str = Depends(annotator_of),
    ):
        """Name-substring search; frames evoked by an LU with the given lemma
        rank first (the annotator picks the LU, not just the frame)."""
        needle = query.lower()
        evoked: set[str] = set()
        if lemma:
            evoked = {
                lu.frame_id for lu in workbench.bank.lus() if lu.lemma == lemma
            }
        hits = []
        for frame in workbench.bank.frames():
            if needle and needle not in frame.name.lower():
                continue
            hits.append((frame.id not in evoked, frame.name, frame))
        hits.sort(key=lambda h: (h[0], h[1]))
        return {
            "results": [
                {"name": f.name, "id": f.id, "definition": f.definition, "lu_match": not miss}
                for miss, _, f in hits[:limit]
            ]
        }

    @app.get("/api/v1/framebank/frames/{name}")
    def frame_detail(name: str, _annotator: str = Depends(annotator_of)):
        frame = workbench.bank.frame_by_name(name)
        if frame is None:
            raise HTTPException(status_code=404, detail={"code": "UNKNOWN_FRAME", "detail": name})
        requirement = workbench.bank.requirement(frame)
        return {
            "name": frame.name,
            "id": frame.id,
            "definition": frame.definition,
            "fes": [
                {"name": fe.name, "coreness": fe.coreness.value, "definition": fe.definition}
                for fe in frame.fes
            ],
            "excludes": sorted(sorted(p) for p in frame.excludes),
            "core_sets": [sorted(cs) for cs in frame.core_sets],
            "minimal_core": {
                "count": requirement.count,
                "witness": sorted(requirement.witness),
            },
        }

    # -- reports ------------------------------------------------------------------

    @app.get("/api/v1/reports/{table}")
    def report(
        table: str,
        format: str = Query(default="json"),
        _annotator: str = Depends(annotator_of),
    ):
        short = {name.split("_")[0]: name for name in TABLE_NAMES}
        name = short.get(table, table)
        if name not in TABLE_NAMES:
            raise HTTPException(status_code=404, detail={"code": "MISSING_DATA", "detail": table})
        try:
            fmt = ReportFormat(format)
        except ValueError:
            raise HTTPException(
                status_code=400, detail={"code": "BAD_FORMAT", "detail": format}
            ) from None
        try:
            built = build_report_table(workbench, name)
        except (MissingDataError, NoTimingDataError) as exc:
            raise _http_error(exc, 409) from None
        except UnfinalizedASError as exc:
            raise _http_error(exc, 409) from None
        payload = emit_report(built, fmt)
        media = {
            ReportFormat.CSV: "text/csv; charset=utf-8",
            ReportFormat.MARKDOWN: "text/markdown; charset=utf-8",
            ReportFormat.JSON: "application/json",
        }[fmt]
        return Response(content=payload, media_type=media)

    if webui_dir is not None and Path(webui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(webui_dir), html=True), name="webui")

    return app


def build_report_table(workbench: Workbench, name: str):
    """Assemble one report table from the workbench's current conditions."""
    available = [
        workbench.conditions[label.value]
        for label in ConditionLabel
        if label.value in workbench.conditions
    ]
    if not available:
        raise MissingDataError("no conditions materialized")
    if name == "table1_diversity":
        return build_table1(available, workbench.documents, workbench.bank)
    if name == "table2_similarity":
        return build_table2(available, workbench.documents, workbench.bank)
    if name == "table3_completeness":
        return build_table3(available, workbench.documents, workbench.bank)
    if name == "table4_time":
        human = workbench.conditions.get(ConditionLabel.HUMAN.value)
        mh = workbench.conditions.get(ConditionLabel.MACHINE_HUMAN.value)
        if human is None or mh is None:
            raise MissingDataError("table4 needs the human and machine_human conditions")
        return build_table4(human, mh, workbench.documents)
    mh = workbench.conditions.get(ConditionLabel.MACHINE_HUMAN.value)
    if mh is None:
        raise MissingDataError("table5 needs the machine_human condition")
    return build_table5(mh, workbench.documents)


def serve(
    data_dir: str | Path,
    listen: str = "127.0.0.1:8700",
    tokens_file: str | Path | None = None,
    webui_dir: str | Path | None = None,
) -> None:
    """Load the workbench and run the API server (blocking)."""
    import uvicorn

    workbench = Workbench(data_dir)
    workbench.load()
    app = create_app(workbench, tokens=load_tokens(tokens_file), webui_dir=webui_dir)
    host, _, port = listen.rpartition(":")
    try:
        uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    except (OSError, ValueError) as exc:
        raise BindFailureError(f"cannot bind {listen}: {exc}") from exc
