"""Event-sourced persistence: append-only edit log with deterministic replay.

The data directory is the unit of state::

    data_dir/
      manifest.json            import hashes, resolution flag
      framebank.json           copied at import
      corpus.jsonl
      preannot.jsonl
      annotations/<label>.jsonl   imported comparison conditions
      events.jsonl             one JSON object per line:
                               {seq, as_id, doc_id, annotator, kind, payload, ts[, idem]}

Raw imports plus the event log are the ground truth; resolution and replay
rebuild every condition deterministically, so any prefix of the log is a
consistent state. Appends are serialized through one lock and fsynced before
acknowledgment.
"""

from __future__ import annotations

import copy
import hashlib
import json
import os
import shutil
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from .conditions import Condition, ConditionLabel, load_annotations
from .corpus import Document, Sentence, load_corpus
from .errors import (
    CorruptLogError,
    DuplicateError,
    FrozenConditionError,
    ImportConflictError,
    InvalidEditError,
    LeaseInvalidError,
    MissingDataError,
    SchemaError,
    ValidationFailedError,
    WorkbenchError,
)
from .framebank import FrameBank, load_framebank
from .preannot import ParserHypothesis, load_preannotation, materialize_conditions, resolve_all
from .review import (
    AnnotationSet,
    AsStatus,
    EditEvent,
    EditKind,
    apply_edit,
    create_annotation_set,
)

LEASE_TTL_SECONDS = 15 * 60.0


@dataclass(frozen=True)
class LogRecord:
    seq: int
    as_id: str
    doc_id: str
    annotator: str
    kind: EditKind
    payload: dict[str, Any]
    ts: float
    idem: str | None = None

    def to_json(self) -> str:
        doc: dict[str, Any] = {
            "seq": self.seq,
            "as_id": self.as_id,
            "doc_id": self.doc_id,
            "annotator": self.annotator,
            "kind": self.kind.value,
            "payload": self.payload,
            "ts": self.ts,
        }
        if self.idem is not None:
            doc["idem"] = self.idem
        return json.dumps(doc, ensure_ascii=False)

    @staticmethod
    def from_json(line: str) -> "LogRecord":
        doc = json.loads(line)
        return LogRecord(
            seq=int(doc["seq"]),
            as_id=str(doc["as_id"]),
            doc_id=str(doc["doc_id"]),
            annotator=str(doc["annotator"]),
            kind=EditKind(doc["kind"]),
            payload=dict(doc.get("payload", {})),
            ts=float(doc.get("ts", 0.0)),
            idem=doc.get("idem"),
        )

    def to_event(self) -> EditEvent:
        return EditEvent(
            id=f"e{self.seq:06d}",
            as_id=self.as_id,
            annotator=self.annotator,
            kind=self.kind,
            payload=self.payload,
            timestamp=self.ts,
        )


def read_log(path: Path) -> list[LogRecord]:
    """Read and validate the event log. A gap in sequence numbers or an
    undecodable interior line is CORRUPT_LOG; an undecodable final line is a
    torn tail from a crash mid-write (never acknowledged) and is dropped."""
    if not path.exists():
        return []
    lines = path.read_text(encoding="utf-8").splitlines()
    records: list[LogRecord] = []
    for i, line in enumerate(lines):
        if not line.strip():
            continue
        try:
            record = LogRecord.from_json(line)
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            if i == len(lines) - 1:
                break
            raise CorruptLogError(f"line {i + 1}: {exc}") from None
        if record.seq != len(records) + 1:
            raise CorruptLogError(f"line {i + 1}: seq {record.seq}, expected {len(records) + 1}")
        records.append(record)
    return records


@dataclass
class Lease:
    doc_id: str
    annotator: str
    token: str
    expires_at: float


@dataclass
class Snapshot:
    """Immutable replay result; equality covers the conditions and position."""

    conditions: dict[str, Condition]
    log_position: int
    bank: FrameBank = field(compare=False, repr=False)

    def condition(self, label: ConditionLabel) -> Condition | None:
        return self.conditions.get(label.value)


@dataclass
class AppendResult:
    seq: int
    annotation_set: AnnotationSet
    deduplicated: bool = False


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


IMPORT_KINDS = ("framebank", "corpus", "preannot", "annotations")
_FILENAMES = {"framebank": "framebank.json", "corpus": "corpus.jsonl", "preannot": "preannot.jsonl"}


class Workbench:
    """The live store: loaded imports, materialized conditions and the event
    log, with per-document write leases. One instance owns a data directory;
    appends go through a single lock (single-writer contract)."""

    def __init__(self, data_dir: str | Path, clock: Callable[[], float] = time.time):
        self.data_dir = Path(data_dir)
        self.clock = clock
        self._lock = threading.Lock()
        self.bank: FrameBank | None = None
        self.documents: list[Document] = []
        self.sentences: dict[str, Sentence] = {}
        self.hypotheses: list[ParserHypothesis] = []
        self.conditions: dict[str, Condition] = {}
        self.crossref: dict[str, str] = {}
        self.records: list[LogRecord] = []
        self._idem_index: dict[str, int] = {}
        self._leases: dict[str, Lease] = {}

    # -- manifest and imports -------------------------------------------------

    @property
    def manifest_path(self) -> Path:
        return self.data_dir / "manifest.json"

    @property
    def events_path(self) -> Path:
        return self.data_dir / "events.jsonl"

    def read_manifest(self) -> dict[str, Any]:
        if self.manifest_path.exists():
            return json.loads(self.manifest_path.read_text(encoding="utf-8"))
        return {"imports": {}, "resolved": False}

    def _write_manifest(self, manifest: dict[str, Any]) -> None:
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.manifest_path.write_text(
            json.dumps(manifest, indent=1, sort_keys=True) + "\n", encoding="utf-8"
        )

    def import_file(
        self, kind: str, source: str | Path, condition: ConditionLabel | None = None
    ) -> dict[str, Any]:
        """Validate and copy an input file into the data directory.

        Imports are content-addressed: re-importing an identical file is a
        no-op, and replacing an import is refused once edit events exist.
        """
        if kind not in IMPORT_KINDS:
            raise SchemaError(f"unknown import kind {kind!r}")
        source = Path(source)
        if not source.exists():
            raise MissingDataError(f"{source} does not exist")
        digest = _sha256(source)
        manifest = self.read_manifest()
        key = kind if kind != "annotations" else f"annotations:{condition.value}"
        existing = manifest["imports"].get(key)
        if existing and existing["sha256"] == digest:
            return {"kind": key, "unchanged": True, **existing["summary"]}
        if existing and self.events_path.exists() and self.events_path.stat().st_size > 0:
            raise ImportConflictError(f"cannot replace {key} import: edit events exist")

        summary = self._validate_import(kind, source, condition)
        if kind == "annotations":
            dest = self.data_dir / "annotations" / f"{condition.value}.jsonl"
        else:
            dest = self.data_dir / _FILENAMES[kind]
        dest.parent.mkdir(parents=True, exist_ok=True)
        shutil.copyfile(source, dest)
        manifest["imports"][key] = {"sha256": digest, "summary": summary}
        if kind in ("framebank", "corpus", "preannot"):
            manifest["resolved"] = False
        self._write_manifest(manifest)
        return {"kind": key, "unchanged": False, **summary}

    def _validate_import(
        self, kind: str, source: Path, condition: ConditionLabel | None
    ) -> dict[str, Any]:
        data = source.read_bytes()
        if kind == "framebank":
            bank = load_framebank(data)
            return {"frames": len(bank.frames()), "lus": len(bank.lus())}
        if kind == "corpus":
            docs = load_corpus(data)
            seen: set[str] = set()
            for doc in docs:
                for s in doc.sentences:
                    if s.id in seen:
                        raise DuplicateError(f"sentence id {s.id!r} repeated across documents")
                    seen.add(s.id)
            return {
                "documents": len(docs),
                "sentences": sum(len(d.sentences) for d in docs),
                "tokens": sum(len(s.tokens) for d in docs for s in d.sentences),
            }
        if kind == "preannot":
            hypotheses = load_preannotation(data)
            return {"hypotheses": len(hypotheses)}
        if condition is None:
            raise SchemaError("annotations import needs a condition label")
        if condition is not ConditionLabel.HUMAN:
            raise SchemaError("only the human condition is importable; the others come from resolve")
        bank_path = self.data_dir / _FILENAMES["framebank"]
        if not bank_path.exists():
            raise MissingDataError("import the framebank before annotations")
        bank = load_framebank(bank_path.read_bytes())
        cond = load_annotations(data, condition, bank)
        return {"annotation_sets": sum(len(v) for v in cond.annotations.values())}

    def mark_resolved(self, summary: dict[str, Any]) -> None:
        manifest = self.read_manifest()
        manifest["resolved"] = True
        manifest["resolution_summary"] = summary
        self._write_manifest(manifest)

    def resolve_imports(self) -> dict[str, Any]:
        """Run batch resolution over the imported hypotheses and mark the
        data directory resolved. Deterministic: a rerun reports the same
        summary and produces no duplicate LUs."""
        manifest = self.read_manifest()
        missing = [k for k in ("framebank", "corpus", "preannot") if k not in manifest["imports"]]
        if missing:
            raise MissingDataError(f"missing imports: {', '.join(missing)}")
        bank = load_framebank((self.data_dir / _FILENAMES["framebank"]).read_bytes())
        documents = load_corpus((self.data_dir / _FILENAMES["corpus"]).read_bytes())
        sentences = {s.id: s for d in documents for s in d.sentences}
        hypotheses = load_preannotation((self.data_dir / _FILENAMES["preannot"]).read_bytes())
        report = resolve_all(hypotheses, sentences, bank)
        summary = {
            "created": len(report.annotation_sets),
            "warnings": report.warning_tally(),
        }
        self.mark_resolved(summary)
        return summary

    # -- state construction ----------------------------------------------------

    def _build_state(
        self, upto: int | None = None
    ) -> tuple[FrameBank, list[Document], dict[str, Sentence], dict[str, Condition], dict[str, str], list[LogRecord]]:
        manifest = self.read_manifest()
        imports = manifest["imports"]
        if "framebank" not in imports or "corpus" not in imports:
            raise MissingDataError("framebank and corpus must be imported first")
        bank = load_framebank((self.data_dir / _FILENAMES["framebank"]).read_bytes())
        documents = load_corpus((self.data_dir / _FILENAMES["corpus"]).read_bytes())
        sentences = {s.id: s for d in documents for s in d.sentences}

        hypotheses: list[ParserHypothesis] = []
        conditions: dict[str, Condition] = {}
        crossref: dict[str, str] = {}
        if "preannot" in imports:
            hypotheses = load_preannotation((self.data_dir / _FILENAMES["preannot"]).read_bytes())
        if manifest.get("resolved"):
            report = resolve_all(hypotheses, sentences, bank)
            materialized = materialize_conditions(report.annotation_sets)
            conditions[ConditionLabel.MACHINE.value] = materialized.machine
            conditions[ConditionLabel.MACHINE_HUMAN.value] = materialized.machine_human_seed
            crossref = materialized.crossref
        for key in imports:
            if key.startswith("annotations:"):
                label = ConditionLabel(key.split(":", 1)[1])
                path = self.data_dir / "annotations" / f"{label.value}.jsonl"
                conditions[label.value] = load_annotations(path.read_bytes(), label, bank)

        records = read_log(self.events_path)
        if upto is not None:
            if upto > len(records):
                raise CorruptLogError(f"upto {upto} beyond last sequence {len(records)}")
            records = records[:upto]
        for record in records:
            _apply_record(record, bank, sentences, conditions)
        return bank, documents, sentences, conditions, crossref, records

    def load(self) -> None:
        """Load imports, re-run resolution and replay the whole event log."""
        (
            self.bank,
            self.documents,
            self.sentences,
            self.conditions,
            self.crossref,
            self.records,
        ) = self._build_state()
        self._idem_index = {
            r.idem: r.seq for r in self.records if r.idem is not None
        }

    def replay(self, upto: int | None = None) -> Snapshot:
        """Deterministic fresh rebuild of the conditions at a log position."""
        bank, _, _, conditions, _, records = self._build_state(upto=upto)
        return Snapshot(conditions=conditions, log_position=len(records), bank=bank)

    def snapshot(self) -> Snapshot:
        assert self.bank is not None, "load() first"
        return Snapshot(
            conditions=copy.deepcopy(self.conditions),
            log_position=len(self.records),
            bank=self.bank,
        )

    # -- leases ----------------------------------------------------------------

    def acquire_lease(self, doc_id: str, annotator: str) -> Lease:
        if not any(d.id == doc_id for d in self.documents):
            raise MissingDataError(f"unknown document {doc_id!r}")
        with self._lock:
            now = self.clock()
            current = self._leases.get(doc_id)
            if current and current.expires_at > now and current.annotator != annotator:
                raise LeaseInvalidError(f"{doc_id} is leased to {current.annotator}")
            if current and current.expires_at > now:
                current.expires_at = now + LEASE_TTL_SECONDS
                return current
            lease = Lease(
                doc_id=doc_id,
                annotator=annotator,
                token=uuid.uuid4().hex,
                expires_at=now + LEASE_TTL_SECONDS,
            )
            self._leases[doc_id] = lease
            return lease

    def release_lease(self, doc_id: str, annotator: str) -> None:
        with self._lock:
            current = self._leases.get(doc_id)
            if current is None or current.annotator != annotator:
                raise LeaseInvalidError(f"{doc_id} is not leased by {annotator}")
            del self._leases[doc_id]

    def _check_lease(self, doc_id: str, annotator: str, token: str | None) -> Lease:
        current = self._leases.get(doc_id)
        now = self.clock()
        if current is None or current.expires_at <= now:
            raise LeaseInvalidError(f"no valid lease on {doc_id}")
        if current.annotator != annotator or (token is not None and token != current.token):
            raise LeaseInvalidError(f"{doc_id} is leased to {current.annotator}")
        current.expires_at = now + LEASE_TTL_SECONDS  # renewal on activity
        return current

    # -- appends -----------------------------------------------------------------

    def append(
        self,
        *,
        kind: EditKind,
        annotator: str,
        payload: dict[str, Any] | None = None,
        as_id: str | None = None,
        ts: float = 0.0,
        idem: str | None = None,
        lease_token: str | None = None,
    ) -> AppendResult:
        """Validate, durably append and apply one edit event.

        The event is applied against the editable machine-plus-human condition;
        review-module rejections surface as VALIDATION_FAILED. The write is
        fsynced before the sequence number is returned.
        """
        assert self.bank is not None, "load() first"
        payload = dict(payload or {})
        with self._lock:
            if idem is not None and idem in self._idem_index:
                seq = self._idem_index[idem]
                record = self.records[seq - 1]
                found = self._find_editable(record.as_id)
                assert found is not None
                return AppendResult(seq=seq, annotation_set=found, deduplicated=True)

            seq = len(self.records) + 1
            if kind is EditKind.CREATE:
                sentence = self.sentences.get(str(payload.get("sentence_id", "")))
                if sentence is None:
                    raise ValidationFailedError(
                        InvalidEditError(f"unknown sentence {payload.get('sentence_id')!r}")
                    )
                as_id = f"cas{seq:05d}"
                doc_id = sentence.document_id
            else:
                if as_id is None:
                    raise ValidationFailedError(InvalidEditError("event needs an as_id"))
                target = self._find_editable(as_id)
                if target is None:
                    self._reject_frozen_or_unknown(as_id)
                sentence = self.sentences[target.sentence_id]
                doc_id = sentence.document_id

            self._check_lease(doc_id, annotator, lease_token)
            record = LogRecord(
                seq=seq,
                as_id=as_id,
                doc_id=doc_id,
                annotator=annotator,
                kind=kind,
                payload=payload,
                ts=ts,
                idem=idem,
            )
            # Validate against live state first; persist durably; then install.
            updated = _apply_record(
                record, self.bank, self.sentences, self.conditions, install=False
            )
            self._persist(record)
            _install(record, updated, self.conditions)
            self.records.append(record)
            if idem is not None:
                self._idem_index[idem] = seq
            return AppendResult(seq=seq, annotation_set=updated)

    def _persist(self, record: LogRecord) -> None:
        self.data_dir.mkdir(parents=True, exist_ok=True)
        with open(self.events_path, "a", encoding="utf-8") as fh:
            fh.write(record.to_json() + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def _find_editable(self, as_id: str) -> AnnotationSet | None:
        editable = self.conditions.get(ConditionLabel.MACHINE_HUMAN.value)
        if editable is None:
            raise MissingDataError("run resolve before editing")
        return editable.find(as_id)

    def _reject_frozen_or_unknown(self, as_id: str) -> None:
        for label, condition in self.conditions.items():
            if label != ConditionLabel.MACHINE_HUMAN.value and condition.find(as_id) is not None:
                raise FrozenConditionError(f"{as_id} belongs to the frozen {label} condition")
        raise ValidationFailedError(InvalidEditError(f"unknown annotation set {as_id!r}"))

    # -- derived views -------------------------------------------------------------

    def document_by_id(self, doc_id: str) -> Document | None:
        for doc in self.documents:
            if doc.id == doc_id:
                return doc
        return None

    def unreviewed_count(self) -> int:
        editable = self.conditions.get(ConditionLabel.MACHINE_HUMAN.value)
        if editable is None:
            return 0
        return sum(
            1 for as_ in editable.iter_sets(include_deleted=True)
            if as_.status is AsStatus.MACHINE_PENDING
        )

    def extend_snapshot(self, snap: Snapshot, upto: int | None = None) -> Snapshot:
        """Continue a snapshot by applying further log records to independent
        copies of its state; the input snapshot stays untouched."""
        all_records = read_log(self.events_path)
        end = len(all_records) if upto is None else upto
        bank = copy.deepcopy(snap.bank)
        conditions = copy.deepcopy(snap.conditions)
        for record in all_records[snap.log_position:end]:
            _apply_record(record, bank, self.sentences, conditions)
        return Snapshot(conditions=conditions, log_position=end, bank=bank)


def _apply_record(
    record: LogRecord,
    bank: FrameBank,
    sentences: dict[str, Sentence],
    conditions: dict[str, Condition],
    install: bool = True,
) -> AnnotationSet:
    """Compute the result of one log record against the editable condition,
    installing it unless ``install`` is False (append validates first and
    installs only after the write is durable)."""
    editable = conditions.get(ConditionLabel.MACHINE_HUMAN.value)
    if editable is None:
        raise MissingDataError("no editable condition materialized")
    event = record.to_event()
    try:
        if record.kind is EditKind.CREATE:
            sentence = sentences.get(str(record.payload.get("sentence_id", "")))
            if sentence is None:
                raise InvalidEditError(f"unknown sentence {record.payload.get('sentence_id')!r}")
            updated = create_annotation_set(event, sentence, bank)
        else:
            current = editable.find(record.as_id)
            if current is None:
                raise InvalidEditError(f"unknown annotation set {record.as_id!r}")
            updated = apply_edit(current, event, bank, sentences.get(current.sentence_id))
    except WorkbenchError as exc:
        if isinstance(exc, (ValidationFailedError, FrozenConditionError, MissingDataError)):
            raise
        raise ValidationFailedError(exc) from exc
    if install:
        _install(record, updated, conditions)
    return updated


def _install(record: LogRecord, updated: AnnotationSet, conditions: dict[str, Condition]) -> None:
    editable = conditions[ConditionLabel.MACHINE_HUMAN.value]
    if record.kind is EditKind.CREATE:
        editable.add(updated)
    else:
        editable.replace_set(updated)
