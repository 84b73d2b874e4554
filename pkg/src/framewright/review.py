"""Annotation sets and the annotator edit state machine.

Statuses are derived from edit history, not from content diffs: an AS whose
edits cancel out is still UPDATED, because the status records what the
annotator did. DELETE is terminal for content edits; timer events stay legal
afterwards since deleting costs annotator time that the time metrics consume.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any

from . import corpus as corpus_mod
from .corpus import Sentence, Span, span_lemma_pos
from .errors import (
    AcceptAfterModifyError,
    DuplicateFEError,
    EditAfterDeleteError,
    InvalidEditError,
    NotRealizedError,
    UnknownFEError,
    UnknownFrameError,
    UnmatchedTimerError,
)
from .framebank import FrameBank, ensure_lu


class NiKind(str, Enum):
    INI = "INI"
    DNI = "DNI"
    CNI = "CNI"


class Provenance(str, Enum):
    MACHINE = "machine"
    HUMAN = "human"


class AsStatus(str, Enum):
    MACHINE_PENDING = "machine_pending"
    ACCEPTED = "accepted"
    DELETED = "deleted"
    UPDATED = "updated"
    CREATED = "created"
    HUMAN = "human"


FINAL_STATUSES = frozenset(
    {AsStatus.ACCEPTED, AsStatus.DELETED, AsStatus.UPDATED, AsStatus.CREATED}
)


class EditKind(str, Enum):
    ACCEPT = "accept"
    DELETE = "delete"
    REPLACE_FRAME = "replace_frame"
    ADD_FE = "add_fe"
    REMOVE_FE = "remove_fe"
    SET_NI = "set_ni"
    CREATE = "create"
    TIMER_START = "timer_start"
    TIMER_STOP = "timer_stop"


CONTENT_KINDS = frozenset(
    {EditKind.REPLACE_FRAME, EditKind.ADD_FE, EditKind.REMOVE_FE, EditKind.SET_NI}
)
TIMER_KINDS = frozenset({EditKind.TIMER_START, EditKind.TIMER_STOP})


@dataclass(frozen=True)
class FERealization:
    """One realized frame element: either a text span or a null instantiation."""

    fe_name: str
    span: Span | None = None
    ni: NiKind | None = None

    def __post_init__(self):
        if (self.span is None) == (self.ni is None):
            raise ValueError("realization is exactly one of span or null instantiation")

    @property
    def is_span(self) -> bool:
        return self.span is not None


@dataclass(frozen=True)
class EditEvent:
    id: str
    as_id: str
    annotator: str
    kind: EditKind
    payload: dict[str, Any] = field(default_factory=dict)
    timestamp: float = 0.0  # client wall clock, unix seconds


@dataclass(frozen=True)
class AnnotationSet:
    id: str
    sentence_id: str
    lu_id: str
    target_span: Span
    fe_realizations: tuple[FERealization, ...] = ()
    status: AsStatus = AsStatus.MACHINE_PENDING
    provenance: Provenance = Provenance.MACHINE
    time_spent: float = 0.0  # seconds accumulated over timer intervals
    edit_log: tuple[EditEvent, ...] = ()

    def realization_for(self, fe_name: str) -> FERealization | None:
        for r in self.fe_realizations:
            if r.fe_name == fe_name:
                return r
        return None


def derive_status(edit_log: tuple[EditEvent, ...] | list[EditEvent], provenance: Provenance) -> AsStatus:
    """Pure status derivation: DELETE > CREATE-first > content edit > ACCEPT,
    falling back to MACHINE_PENDING or HUMAN by provenance. Timer events never
    affect the result."""
    kinds = [e.kind for e in edit_log]
    if EditKind.DELETE in kinds:
        return AsStatus.DELETED
    if kinds and kinds[0] == EditKind.CREATE:
        return AsStatus.CREATED
    if any(k in CONTENT_KINDS for k in kinds):
        return AsStatus.UPDATED
    if EditKind.ACCEPT in kinds:
        return AsStatus.ACCEPTED
    return AsStatus.MACHINE_PENDING if provenance is Provenance.MACHINE else AsStatus.HUMAN


def record_time(as_: AnnotationSet, start: float, stop: float) -> AnnotationSet:
    """Accumulate one closed timer interval. Multiple intervals add up."""
    if stop < start:
        raise UnmatchedTimerError(f"stop {stop} precedes start {start}")
    return replace(as_, time_spent=as_.time_spent + (stop - start))


def _pending_timer_start(as_: AnnotationSet) -> EditEvent | None:
    pending: EditEvent | None = None
    for e in as_.edit_log:
        if e.kind is EditKind.TIMER_START:
            pending = e
        elif e.kind is EditKind.TIMER_STOP:
            pending = None
    return pending


def _payload_str(e: EditEvent, key: str) -> str:
    value = e.payload.get(key)
    if not isinstance(value, str) or not value:
        raise InvalidEditError(f"{e.kind.value} payload needs {key!r}")
    return value


def _payload_span(e: EditEvent, key: str = "span") -> Span:
    raw = e.payload.get(key)
    if (
        not isinstance(raw, dict)
        or not isinstance(raw.get("start"), int)
        or not isinstance(raw.get("end"), int)
        or not raw["start"] < raw["end"]
    ):
        raise InvalidEditError(f"{e.kind.value} payload needs {key!r} with start < end")
    return Span(raw["start"], raw["end"])


def create_annotation_set(
    e: EditEvent, sentence: Sentence, bank: FrameBank
) -> AnnotationSet:
    """Apply a CREATE event: recover lemma/POS from the target span, ensure
    the LU and open a new human-provenance AS."""
    if e.kind is not EditKind.CREATE:
        raise InvalidEditError(f"expected CREATE, got {e.kind.value}")
    frame = bank.frame_by_name(_payload_str(e, "frame"))
    if frame is None:
        raise UnknownFrameError(f"frame {e.payload.get('frame')!r} not in bank")
    target = _payload_span(e, "target")
    lemma, pos = span_lemma_pos(sentence, target)
    lu = ensure_lu(bank, lemma, pos, frame)
    return AnnotationSet(
        id=e.as_id,
        sentence_id=sentence.id,
        lu_id=lu.id,
        target_span=target,
        fe_realizations=(),
        status=AsStatus.CREATED,
        provenance=Provenance.HUMAN,
        edit_log=(e,),
    )


def apply_edit(
    as_: AnnotationSet,
    e: EditEvent,
    bank: FrameBank,
    sentence: Sentence | None = None,
) -> AnnotationSet:
    """Apply one annotator action and return the updated AS.

    The status of the result is always ``derive_status`` of the extended log.
    ``sentence`` enables span-bounds validation for ADD_FE; the store always
    passes it.
    """
    if e.as_id != as_.id:
        raise InvalidEditError(f"event for {e.as_id!r} applied to {as_.id!r}")
    if e.kind is EditKind.CREATE:
        raise InvalidEditError("CREATE is only valid as the first event of a new AS")
    if as_.status is AsStatus.DELETED and e.kind not in TIMER_KINDS:
        raise EditAfterDeleteError(f"{as_.id} is deleted")

    frame = bank.frame_of_lu(as_.lu_id)
    updated = as_

    if e.kind is EditKind.ACCEPT:
        if as_.status is not AsStatus.MACHINE_PENDING:
            raise AcceptAfterModifyError(
                f"{as_.id} is {as_.status.value}; only an unmodified pending AS can be accepted"
            )

    elif e.kind is EditKind.DELETE:
        pass  # status flip handled by derive_status below

    elif e.kind is EditKind.REPLACE_FRAME:
        new_frame = bank.frame_by_name(_payload_str(e, "frame"))
        if new_frame is None:
            raise UnknownFrameError(f"frame {e.payload.get('frame')!r} not in bank")
        lu = bank.lu_by_id(as_.lu_id)
        assert lu is not None
        new_lu = ensure_lu(bank, lu.lemma, lu.pos, new_frame)
        # FE names are frame-relative: realizations cannot be carried over.
        updated = replace(as_, lu_id=new_lu.id, fe_realizations=())

    elif e.kind is EditKind.ADD_FE:
        fe_name = _payload_str(e, "fe_name")
        if fe_name not in frame.fe_names():
            raise UnknownFEError(f"{fe_name!r} is not an FE of {frame.name}")
        if as_.realization_for(fe_name) is not None:
            raise DuplicateFEError(f"{fe_name!r} already realized on {as_.id}")
        span = _payload_span(e)
        if sentence is not None:
            corpus_mod.tokens_in_span(sentence, span)  # raises OUT_OF_BOUNDS
        updated = replace(
            as_, fe_realizations=as_.fe_realizations + (FERealization(fe_name, span=span),)
        )

    elif e.kind is EditKind.REMOVE_FE:
        fe_name = _payload_str(e, "fe_name")
        if fe_name not in frame.fe_names():
            raise UnknownFEError(f"{fe_name!r} is not an FE of {frame.name}")
        if as_.realization_for(fe_name) is None:
            raise NotRealizedError(f"{fe_name!r} has no realization on {as_.id}")
        updated = replace(
            as_,
            fe_realizations=tuple(r for r in as_.fe_realizations if r.fe_name != fe_name),
        )

    elif e.kind is EditKind.SET_NI:
        fe_name = _payload_str(e, "fe_name")
        if fe_name not in frame.fe_names():
            raise UnknownFEError(f"{fe_name!r} is not an FE of {frame.name}")
        try:
            kind = NiKind(e.payload.get("ni", ""))
        except ValueError:
            raise InvalidEditError("set_ni needs ni one of INI/DNI/CNI") from None
        kept = tuple(r for r in as_.fe_realizations if r.fe_name != fe_name)
        updated = replace(as_, fe_realizations=kept + (FERealization(fe_name, ni=kind),))

    elif e.kind is EditKind.TIMER_START:
        last = _last_timer(as_)
        if _pending_timer_start(as_) is not None:
            raise UnmatchedTimerError(f"timer already running on {as_.id}")
        if last is not None and e.timestamp < last.timestamp:
            raise UnmatchedTimerError(f"timer events on {as_.id} must be monotone")

    elif e.kind is EditKind.TIMER_STOP:
        start = _pending_timer_start(as_)
        if start is None:
            raise UnmatchedTimerError(f"no timer running on {as_.id}")
        updated = record_time(as_, start.timestamp, e.timestamp)

    else:  # pragma: no cover - enum is closed
        raise InvalidEditError(f"unhandled kind {e.kind}")

    log = as_.edit_log + (e,)
    return replace(updated, edit_log=log, status=derive_status(log, as_.provenance))


def _last_timer(as_: AnnotationSet) -> EditEvent | None:
    for e in reversed(as_.edit_log):
        if e.kind in TIMER_KINDS:
            return e
    return None


def content_fingerprint(as_: AnnotationSet) -> tuple:
    """Hashable content identity: two ASs with equal fingerprints annotate the
    same LU and realizations on the same sentence. Ids, status, provenance and
    timing are excluded, so a frozen machine AS and its accepted editable copy
    compare equal."""
    fes = tuple(
        sorted(
            (r.fe_name, "span", r.span.start, r.span.end) if r.span else (r.fe_name, "ni", r.ni.value, 0)
            for r in as_.fe_realizations
        )
    )
    return (as_.sentence_id, as_.lu_id, as_.target_span.start, as_.target_span.end, fes)


# -- wire form ---------------------------------------------------------------


def realization_to_dict(r: FERealization) -> dict[str, Any]:
    if r.span is not None:
        return {"name": r.fe_name, "start": r.span.start, "end": r.span.end}
    return {"name": r.fe_name, "ni": r.ni.value}


def as_to_dict(as_: AnnotationSet, bank: FrameBank) -> dict[str, Any]:
    lu = bank.lu_by_id(as_.lu_id)
    frame = bank.frame_of_lu(as_.lu_id)
    return {
        "id": as_.id,
        "sentence_id": as_.sentence_id,
        "lu": {"lemma": lu.lemma, "pos": lu.pos, "frame": frame.name},
        "target": {"start": as_.target_span.start, "end": as_.target_span.end},
        "fes": [realization_to_dict(r) for r in as_.fe_realizations],
        "status": as_.status.value,
        "provenance": as_.provenance.value,
        "time_spent": as_.time_spent,
    }
