"""Labeled annotation conditions: immutable copies of a corpus's annotations.

A condition maps sentence ids to annotation sets. The machine condition is
frozen at materialization; imported conditions (e.g. the human-only one) are
frozen comparison data; only the machine-plus-human condition accepts edits.

Annotation JSONL (export/import), one AS per line::

    {"id", "sentence_id", "lu": {"lemma", "pos", "frame"},
     "target": {"start", "end"},
     "fes": [{"name", "start", "end"} | {"name", "ni": "INI|DNI|CNI"}],
     "status", "provenance", "time_spent"}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import BinaryIO, Iterator

from .corpus import Span
from .errors import DuplicateError, SchemaError, UnknownFrameError
from .framebank import FrameBank, ensure_lu
from .review import (
    AnnotationSet,
    AsStatus,
    FERealization,
    NiKind,
    Provenance,
    as_to_dict,
)


class ConditionLabel(str, Enum):
    HUMAN = "human"
    MACHINE = "machine"
    MACHINE_HUMAN = "machine_human"


@dataclass
class Condition:
    label: ConditionLabel
    annotations: dict[str, list[AnnotationSet]] = field(default_factory=dict)
    frozen: bool = False

    def add(self, as_: AnnotationSet) -> None:
        if self.frozen:
            raise DuplicateError(f"condition {self.label.value} is frozen")
        self.annotations.setdefault(as_.sentence_id, []).append(as_)

    def iter_sets(self, include_deleted: bool = False) -> Iterator[AnnotationSet]:
        for sets in self.annotations.values():
            for as_ in sets:
                if include_deleted or as_.status is not AsStatus.DELETED:
                    yield as_

    def sets_for_sentence(
        self, sentence_id: str, include_deleted: bool = False
    ) -> list[AnnotationSet]:
        return [
            as_
            for as_ in self.annotations.get(sentence_id, [])
            if include_deleted or as_.status is not AsStatus.DELETED
        ]

    def find(self, as_id: str) -> AnnotationSet | None:
        for sets in self.annotations.values():
            for as_ in sets:
                if as_.id == as_id:
                    return as_
        return None

    def replace_set(self, updated: AnnotationSet) -> None:
        sets = self.annotations.get(updated.sentence_id, [])
        for i, as_ in enumerate(sets):
            if as_.id == updated.id:
                sets[i] = updated
                return
        raise KeyError(updated.id)


def dump_annotations(condition: Condition, bank: FrameBank) -> bytes:
    lines = []
    for sentence_id in condition.annotations:
        for as_ in condition.annotations[sentence_id]:
            lines.append(json.dumps(as_to_dict(as_, bank), ensure_ascii=False))
    return ("\n".join(lines) + "\n").encode("utf-8") if lines else b""


def _parse_realization(raw: object, line: int) -> FERealization:
    if not isinstance(raw, dict) or "name" not in raw:
        raise SchemaError("FE realization needs a name", line=line)
    if "ni" in raw:
        try:
            kind = NiKind(raw["ni"])
        except ValueError:
            raise SchemaError(f"bad null-instantiation kind {raw['ni']!r}", line=line) from None
        return FERealization(str(raw["name"]), ni=kind)
    if not (isinstance(raw.get("start"), int) and isinstance(raw.get("end"), int)):
        raise SchemaError("span realization needs integer start/end", line=line)
    return FERealization(str(raw["name"]), span=Span(raw["start"], raw["end"]))


def load_annotations(
    source: BinaryIO | bytes, label: ConditionLabel, bank: FrameBank
) -> Condition:
    """Load a condition from annotation JSONL. LUs named by the file are
    resolved against the bank, creating auto LUs when missing; the loaded
    condition is frozen (imported conditions are comparison data)."""
    data = source if isinstance(source, bytes) else source.read()
    condition = Condition(label=label)
    seen_ids: set[str] = set()
    for line_no, line in enumerate(data.decode("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"bad JSON: {exc.msg}", line=line_no) from None
        if not isinstance(raw, dict) or not {"id", "sentence_id", "lu", "target"} <= raw.keys():
            raise SchemaError("AS needs id, sentence_id, lu and target", line=line_no)
        as_id = str(raw["id"])
        if as_id in seen_ids:
            raise DuplicateError(f"AS id {as_id!r} repeated")
        seen_ids.add(as_id)
        lu_raw = raw["lu"]
        if not isinstance(lu_raw, dict) or not {"lemma", "pos", "frame"} <= lu_raw.keys():
            raise SchemaError("lu needs lemma, pos and frame", line=line_no)
        frame = bank.frame_by_name(str(lu_raw["frame"]))
        if frame is None:
            raise UnknownFrameError(f"line {line_no}: frame {lu_raw['frame']!r} not in bank")
        lu = ensure_lu(bank, str(lu_raw["lemma"]), str(lu_raw["pos"]), frame)
        target_raw = raw["target"]
        if not (
            isinstance(target_raw, dict)
            and isinstance(target_raw.get("start"), int)
            and isinstance(target_raw.get("end"), int)
        ):
            raise SchemaError("target needs integer start/end", line=line_no)
        fes = tuple(_parse_realization(r, line_no) for r in raw.get("fes", []))
        names = [r.fe_name for r in fes]
        if len(names) != len(set(names)):
            raise SchemaError(f"AS {as_id!r}: repeated FE realization", line=line_no)
        unknown = set(names) - frame.fe_names()
        if unknown:
            raise SchemaError(
                f"AS {as_id!r}: {sorted(unknown)} are not FEs of {frame.name}", line=line_no
            )
        try:
            status = AsStatus(raw.get("status", "human"))
            provenance = Provenance(raw.get("provenance", "human"))
        except ValueError as exc:
            raise SchemaError(str(exc), line=line_no) from None
        time_spent = raw.get("time_spent", 0.0)
        if not isinstance(time_spent, (int, float)) or time_spent < 0:
            raise SchemaError("time_spent must be a non-negative number", line=line_no)
        condition.add(
            AnnotationSet(
                id=as_id,
                sentence_id=str(raw["sentence_id"]),
                lu_id=lu.id,
                target_span=Span(target_raw["start"], target_raw["end"]),
                fe_realizations=fes,
                status=status,
                provenance=provenance,
                time_spent=float(time_spent),
            )
        )
    condition.frozen = True
    return condition
