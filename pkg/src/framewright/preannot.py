"""Resolution of frame-parser hypotheses into annotation sets.

Input is JSONL, one hypothesis per line::

    {"sentence_id", "target": {"start", "end"}, "frame",
     "fes": [{"name", "start", "end"}]}

Resolution is total over a batch: anything unusable is dropped with a warning
instead of aborting the document, and the warning log preserves the dropped
items for audit.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field, replace
from typing import BinaryIO

from .conditions import Condition, ConditionLabel
from .corpus import Sentence, Span
from .errors import EmptySpanError, OutOfBoundsError, SchemaError
from .framebank import FrameBank, ensure_lu
from .review import AnnotationSet, AsStatus, FERealization, Provenance, span_lemma_pos


@dataclass(frozen=True)
class FESpan:
    fe_name: str
    span: Span


@dataclass(frozen=True)
class ParserHypothesis:
    sentence_id: str
    target_span: Span
    frame_name: str
    fe_spans: tuple[FESpan, ...] = ()


@dataclass(frozen=True)
class ResolutionWarning:
    code: str
    detail: str


@dataclass
class ResolutionOutcome:
    annotation_set: AnnotationSet | None
    warnings: list[ResolutionWarning] = field(default_factory=list)


def _parse_span(raw: object, what: str, line: int) -> Span:
    if (
        not isinstance(raw, dict)
        or not isinstance(raw.get("start"), int)
        or not isinstance(raw.get("end"), int)
    ):
        raise SchemaError(f"{what} needs integer start/end", line=line)
    return Span(raw["start"], raw["end"])


def load_preannotation(source: BinaryIO | bytes) -> list[ParserHypothesis]:
    """Parse parser hypotheses in file order. FEs are optional (frames may
    come with no assigned FEs); span validity is checked at resolution, not
    here."""
    data = source if isinstance(source, bytes) else source.read()
    hypotheses: list[ParserHypothesis] = []
    for line_no, line in enumerate(data.decode("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"bad JSON: {exc.msg}", line=line_no) from None
        if not isinstance(raw, dict) or not {"sentence_id", "target", "frame"} <= raw.keys():
            raise SchemaError("hypothesis needs sentence_id, target and frame", line=line_no)
        fes = []
        fes_raw = raw.get("fes", [])
        if not isinstance(fes_raw, list):
            raise SchemaError("fes must be a list", line=line_no)
        for fe in fes_raw:
            if not isinstance(fe, dict) or "name" not in fe:
                raise SchemaError("FE span needs a name", line=line_no)
            fes.append(FESpan(str(fe["name"]), _parse_span(fe, "FE span", line_no)))
        hypotheses.append(
            ParserHypothesis(
                sentence_id=str(raw["sentence_id"]),
                target_span=_parse_span(raw["target"], "target", line_no),
                frame_name=str(raw["frame"]),
                fe_spans=tuple(fes),
            )
        )
    return hypotheses


def resolve(
    h: ParserHypothesis,
    sentence: Sentence,
    bank: FrameBank,
    as_id: str = "as-0000",
) -> ResolutionOutcome:
    """Resolve one hypothesis: recover lemma/POS under the target span, ensure
    the LU, and build a pending machine AS with the valid FE realizations.

    Never raises for bad hypothesis content; failures are reported as
    warnings. Unknown frame or unusable target span yields no AS.
    """
    warnings: list[ResolutionWarning] = []
    frame = bank.frame_by_name(h.frame_name)
    if frame is None:
        warnings.append(ResolutionWarning("UNKNOWN_FRAME", f"{h.frame_name!r} not in bank"))
        return ResolutionOutcome(annotation_set=None, warnings=warnings)

    try:
        lemma, pos = span_lemma_pos(sentence, h.target_span)
    except OutOfBoundsError as exc:
        warnings.append(ResolutionWarning("BAD_SPAN", f"target: {exc.detail}"))
        return ResolutionOutcome(annotation_set=None, warnings=warnings)
    except EmptySpanError as exc:
        warnings.append(ResolutionWarning("EMPTY_SPAN", f"target: {exc.detail}"))
        return ResolutionOutcome(annotation_set=None, warnings=warnings)

    lu = ensure_lu(bank, lemma, pos, frame)

    realizations: list[FERealization] = []
    seen: set[str] = set()
    for fe in h.fe_spans:
        if fe.fe_name not in frame.fe_names():
            warnings.append(ResolutionWarning("UNKNOWN_FE", f"{fe.fe_name!r} is not an FE of {frame.name}"))
            continue
        if fe.fe_name in seen:
            warnings.append(ResolutionWarning("DUPLICATE_FE", f"{fe.fe_name!r} assigned twice; kept first"))
            continue
        if not 0 <= fe.span.start < fe.span.end <= len(sentence.text):
            warnings.append(
                ResolutionWarning("BAD_SPAN", f"{fe.fe_name!r} span [{fe.span.start},{fe.span.end}) "
                                    f"outside sentence {sentence.id!r}")
            )
            continue
        seen.add(fe.fe_name)
        realizations.append(FERealization(fe.fe_name, span=fe.span))

    as_ = AnnotationSet(
        id=as_id,
        sentence_id=sentence.id,
        lu_id=lu.id,
        target_span=h.target_span,
        fe_realizations=tuple(realizations),
        status=AsStatus.MACHINE_PENDING,
        provenance=Provenance.MACHINE,
    )
    return ResolutionOutcome(annotation_set=as_, warnings=warnings)


@dataclass
class ResolutionReport:
    annotation_sets: list[AnnotationSet]
    warnings: list[ResolutionWarning]

    def warning_tally(self) -> dict[str, int]:
        tally: dict[str, int] = {}
        for w in self.warnings:
            tally[w.code] = tally.get(w.code, 0) + 1
        return dict(sorted(tally.items()))


def resolve_all(
    hypotheses: list[ParserHypothesis],
    sentences: dict[str, Sentence],
    bank: FrameBank,
) -> ResolutionReport:
    """Resolve a batch in input order, assigning sequential AS ids. Hypotheses
    naming unknown sentences are dropped with UNKNOWN_SENTENCE."""
    sets: list[AnnotationSet] = []
    warnings: list[ResolutionWarning] = []
    for h in hypotheses:
        sentence = sentences.get(h.sentence_id)
        if sentence is None:
            warnings.append(ResolutionWarning("UNKNOWN_SENTENCE", f"{h.sentence_id!r} not in corpus"))
            continue
        outcome = resolve(h, sentence, bank, as_id=f"as{len(sets) + 1:04d}")
        warnings.extend(outcome.warnings)
        if outcome.annotation_set is not None:
            sets.append(outcome.annotation_set)
    return ResolutionReport(annotation_sets=sets, warnings=warnings)


@dataclass
class MaterializedConditions:
    machine: Condition
    machine_human_seed: Condition
    crossref: dict[str, str]  # editable AS id -> frozen machine AS id


def materialize_conditions(resolved: list[AnnotationSet]) -> MaterializedConditions:
    """Fork the resolved ASs into the frozen machine condition and the
    editable machine-plus-human seed, with id-disjoint deep copies linked by a
    cross-reference map."""
    machine = Condition(label=ConditionLabel.MACHINE)
    seed = Condition(label=ConditionLabel.MACHINE_HUMAN)
    crossref: dict[str, str] = {}
    for as_ in resolved:
        machine_copy = copy.deepcopy(as_)
        seed_copy = copy.deepcopy(as_)
        machine_copy = _reid(machine_copy, f"m-{as_.id}")
        seed_copy = _reid(seed_copy, f"mh-{as_.id}")
        machine.add(machine_copy)
        seed.add(seed_copy)
        crossref[seed_copy.id] = machine_copy.id
    machine.frozen = True
    return MaterializedConditions(machine=machine, machine_human_seed=seed, crossref=crossref)


def _reid(as_: AnnotationSet, new_id: str) -> AnnotationSet:
    return replace(as_, id=new_id)
