"""Per-document evaluation metrics over annotation conditions.

Deleted ASs are excluded from element counts, diversity, similarity and
completeness, but included in time accounting (deleting costs annotator time)
and in edit statistics (a deletion is a verdict). A sentence counts as
annotated only when it carries at least one non-deleted AS.

Sentence semantic representations are sparse frame-count vectors built from
the condition's own ASs; cosine over those measures frame-choice agreement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .conditions import Condition
from .corpus import Document
from .errors import (
    EmptyInputError,
    NoAnnotatedSentencesError,
    NoComparableSentencesError,
    NoTimingDataError,
    UnfinalizedASError,
    UnknownFrameError,
)
from .framebank import FrameBank
from .review import AsStatus


@dataclass(frozen=True)
class ElementCounts:
    documents: int
    sentences_with_as: int
    annotation_sets: int
    fe_realizations: int


@dataclass(frozen=True)
class DiversityRow:
    doc_id: str
    sentences_with_as: int
    unique_frames: int
    avg_frames_per_sentence: float


@dataclass(frozen=True)
class SimilarityRow:
    doc_id: str
    pair: tuple[str, str]
    mean_cosine: float


@dataclass(frozen=True)
class CompletenessRow:
    doc_id: str
    core_annotated: int
    min_required: int
    pct: float


@dataclass(frozen=True)
class TimeRow:
    doc_id: str
    sentences: int
    avg_sentence_length: float
    human_avg_min: float
    mh_avg_min: float
    diff: float


@dataclass(frozen=True)
class EditStatsRow:
    doc_id: str
    total: int
    accepted: int
    created: int
    deleted: int
    updated: int
    pct_accepted: float
    pct_created: float
    pct_deleted: float
    pct_updated: float


def count_elements(c: Condition, documents: list[Document]) -> ElementCounts:
    """Counts of annotated documents, sentences, ASs and FE realizations.
    Sentences count only with at least one non-deleted AS."""
    sentence_to_doc = {
        s.id: doc.id for doc in documents for s in doc.sentences
    }
    annotated_sentences = {
        sid for sid in c.annotations if c.sets_for_sentence(sid)
    }
    docs = {sentence_to_doc[sid] for sid in annotated_sentences if sid in sentence_to_doc}
    sets = list(c.iter_sets())
    return ElementCounts(
        documents=len(docs),
        sentences_with_as=len(annotated_sentences),
        annotation_sets=len(sets),
        fe_realizations=sum(len(a.fe_realizations) for a in sets),
    )


def frame_diversity(c: Condition, doc: Document, bank: FrameBank) -> DiversityRow:
    """Unique frames in the document and the average per annotated sentence."""
    sentence_ids = [s.id for s in doc.sentences]
    annotated = [sid for sid in sentence_ids if c.sets_for_sentence(sid)]
    if not annotated:
        raise NoAnnotatedSentencesError(f"{doc.id} has no annotated sentence in {c.label.value}")
    frames: set[str] = set()
    for sid in annotated:
        for as_ in c.sets_for_sentence(sid):
            frames.add(bank.frame_of_lu(as_.lu_id).id)
    return DiversityRow(
        doc_id=doc.id,
        sentences_with_as=len(annotated),
        unique_frames=len(frames),
        avg_frames_per_sentence=len(frames) / len(annotated),
    )


def sentence_frame_vector(c: Condition, sentence_id: str, bank: FrameBank) -> dict[str, int]:
    """Sparse frame-count vector: frame id -> number of non-deleted ASs
    evoking it in the sentence."""
    vector: dict[str, int] = {}
    for as_ in c.sets_for_sentence(sentence_id):
        frame_id = bank.frame_of_lu(as_.lu_id).id
        vector[frame_id] = vector.get(frame_id, 0) + 1
    return vector


def cosine(a: dict[str, int], b: dict[str, int]) -> float:
    """Cosine over sparse count vectors; summation over sorted shared keys so
    the result is exactly symmetric in its arguments."""
    shared = sorted(set(a) & set(b))
    dot = sum(a[k] * b[k] for k in shared)
    norm_a = math.sqrt(sum(v * v for v in a.values()))
    norm_b = math.sqrt(sum(v * v for v in b.values()))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    return dot / (norm_a * norm_b)


def condition_similarity(
    a: Condition, b: Condition, doc: Document, bank: FrameBank
) -> SimilarityRow:
    """Unweighted mean per-sentence cosine between two conditions. Sentences
    empty on either side are skipped, not scored zero."""
    cosines: list[float] = []
    for sentence in doc.sentences:
        va = sentence_frame_vector(a, sentence.id, bank)
        vb = sentence_frame_vector(b, sentence.id, bank)
        if not va or not vb:
            continue
        cosines.append(cosine(va, vb))
    if not cosines:
        raise NoComparableSentencesError(
            f"{doc.id}: no sentence annotated in both {a.label.value} and {b.label.value}"
        )
    return SimilarityRow(
        doc_id=doc.id,
        pair=(a.label.value, b.label.value),
        mean_cosine=sum(cosines) / len(cosines),
    )


def core_completeness(c: Condition, doc: Document, bank: FrameBank) -> CompletenessRow:
    """Annotated core-FE count against the summed minimal requirement.

    Null instantiations count as annotated: an inferred core FE satisfies the
    annotation policy even without a text span. The percentage is capped at
    100 (annotating both members of a core set overshoots the minimum).
    """
    sentence_ids = {s.id for s in doc.sentences}
    core_annotated = 0
    min_required = 0
    for sid in sentence_ids & set(c.annotations):
        for as_ in c.sets_for_sentence(sid):
            frame = bank.frame_of_lu(as_.lu_id)
            if frame is None:
                raise UnknownFrameError(f"AS {as_.id} has unresolvable frame")
            core_names = frame.core_fe_names()
            core_annotated += sum(1 for r in as_.fe_realizations if r.fe_name in core_names)
            min_required += bank.requirement(frame).count
    pct = 100.0 if min_required == 0 else min(100.0, 100.0 * core_annotated / min_required)
    return CompletenessRow(
        doc_id=doc.id, core_annotated=core_annotated, min_required=min_required, pct=pct
    )


def time_report(human: Condition, mh: Condition, doc: Document) -> TimeRow:
    """Average annotation minutes per sentence in the two timed conditions.

    A sentence's time is the sum over its ASs including deleted ones; each
    condition averages over its own sentences with at least one timed AS.
    The row's sentence count and average length cover the union of timed
    sentences.
    """

    def timed_sentences(c: Condition) -> dict[str, float]:
        out: dict[str, float] = {}
        for sentence in doc.sentences:
            sets = c.sets_for_sentence(sentence.id, include_deleted=True)
            if any(a.time_spent > 0 for a in sets):
                out[sentence.id] = sum(a.time_spent for a in sets) / 60.0
        return out

    human_times = timed_sentences(human)
    mh_times = timed_sentences(mh)
    if not human_times or not mh_times:
        raise NoTimingDataError(f"{doc.id}: no timed sentences in one of the conditions")
    union = set(human_times) | set(mh_times)
    lengths = [len(s.text) for s in doc.sentences if s.id in union]
    human_avg = sum(human_times.values()) / len(human_times)
    mh_avg = sum(mh_times.values()) / len(mh_times)
    return TimeRow(
        doc_id=doc.id,
        sentences=len(union),
        avg_sentence_length=sum(lengths) / len(lengths),
        human_avg_min=human_avg,
        mh_avg_min=mh_avg,
        diff=human_avg - mh_avg,
    )


def edit_stats(mh: Condition, doc: Document) -> EditStatsRow:
    """Verdict counts over every AS of the document, deleted and created
    included. The created percentage is taken against the final dataset size
    (total minus deleted); the other three against the raw total.
    """
    statuses: list[AsStatus] = []
    for sentence in doc.sentences:
        for as_ in mh.sets_for_sentence(sentence.id, include_deleted=True):
            if as_.status not in (
                AsStatus.ACCEPTED,
                AsStatus.DELETED,
                AsStatus.UPDATED,
                AsStatus.CREATED,
            ):
                raise UnfinalizedASError(f"AS {as_.id} is {as_.status.value}")
            statuses.append(as_.status)
    total = len(statuses)
    accepted = statuses.count(AsStatus.ACCEPTED)
    created = statuses.count(AsStatus.CREATED)
    deleted = statuses.count(AsStatus.DELETED)
    updated = statuses.count(AsStatus.UPDATED)

    def pct(n: int, denom: int) -> float:
        return 100.0 * n / denom if denom else 0.0

    return EditStatsRow(
        doc_id=doc.id,
        total=total,
        accepted=accepted,
        created=created,
        deleted=deleted,
        updated=updated,
        pct_accepted=pct(accepted, total),
        pct_created=pct(created, total - deleted),
        pct_deleted=pct(deleted, total),
        pct_updated=pct(updated, total),
    )


def aggregate(rows: list) -> dict[str, float]:
    """Unweighted arithmetic mean of every numeric column over per-document
    rows. Means are over document values, never recomputed from pooled
    totals."""
    if not rows:
        raise EmptyInputError("no rows to aggregate")
    out: dict[str, float] = {}
    for f in fields(rows[0]):
        values = [getattr(r, f.name) for r in rows]
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values):
            out[f.name] = sum(values) / len(values)
    return out
