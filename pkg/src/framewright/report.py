"""Report tables: per-document metric rows plus an unweighted-mean aggregate
row, rendered as CSV, Markdown or JSON.

Values are kept unrounded in the table and rounded only at render time: two
decimals everywhere except the similarity table, which renders four.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from enum import Enum

from .conditions import Condition, ConditionLabel
from .corpus import Document
from .errors import (
    NoAnnotatedSentencesError,
    NoComparableSentencesError,
    NoTimingDataError,
)
from .framebank import FrameBank
from . import metrics

Cell = str | int | float | None

TABLE_NAMES = (
    "table1_diversity",
    "table2_similarity",
    "table3_completeness",
    "table4_time",
    "table5_edits",
)

CONDITION_TITLES = {
    ConditionLabel.HUMAN: "Human",
    ConditionLabel.MACHINE: "Machine",
    ConditionLabel.MACHINE_HUMAN: "Machine+Human",
}


class ReportFormat(str, Enum):
    CSV = "csv"
    MARKDOWN = "markdown"
    JSON = "json"


@dataclass
class ReportTable:
    name: str
    columns: list[str]
    rows: list[list[Cell]] = field(default_factory=list)
    precision: int = 2

    def aggregate_row(self) -> list[Cell]:
        """Per-column unweighted mean over the document rows; blank cells are
        skipped, the label column shows "Avg"."""
        agg: list[Cell] = ["Avg"]
        for col in range(1, len(self.columns)):
            values = [
                row[col]
                for row in self.rows
                if isinstance(row[col], (int, float)) and not isinstance(row[col], bool)
            ]
            agg.append(sum(values) / len(values) if values else None)
        return agg


def _render_cell(value: Cell, precision: int) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.{precision}f}"
    return str(value)


def emit_report(table: ReportTable, fmt: ReportFormat) -> bytes:
    """Deterministic render: identical tables produce byte-identical output."""
    agg = table.aggregate_row() if table.rows else None
    if fmt is ReportFormat.CSV:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_render_cell(v, table.precision) for v in row])
        if agg is not None:
            writer.writerow([_render_cell(v, table.precision) for v in agg])
        return buf.getvalue().encode("utf-8")

    if fmt is ReportFormat.MARKDOWN:
        lines = [
            "| " + " | ".join(table.columns) + " |",
            "| " + " | ".join("---" for _ in table.columns) + " |",
        ]
        for row in table.rows:
            lines.append("| " + " | ".join(_render_cell(v, table.precision) for v in row) + " |")
        if agg is not None:
            lines.append("| " + " | ".join(_render_cell(v, table.precision) for v in agg) + " |")
        return ("\n".join(lines) + "\n").encode("utf-8")

    def round_cell(value: Cell) -> Cell:
        if isinstance(value, float):
            return round(value, table.precision)
        return value

    doc = {
        "name": table.name,
        "columns": table.columns,
        "rows": [[round_cell(v) for v in row] for row in table.rows],
        "aggregate": [round_cell(v) for v in agg] if agg is not None else None,
    }
    return (json.dumps(doc, ensure_ascii=False, indent=1) + "\n").encode("utf-8")


# -- table builders -----------------------------------------------------------


def _titles(conditions: list[Condition], parts: list[str]) -> list[str]:
    if len(conditions) == 1:
        return parts[:]
    out: list[str] = []
    for c in conditions:
        title = CONDITION_TITLES[c.label]
        out.extend(f"{title} {p}" for p in parts)
    return out


def build_table1(
    conditions: list[Condition], documents: list[Document], bank: FrameBank
) -> ReportTable:
    table = ReportTable(
        name="table1_diversity",
        columns=["Doc"] + _titles(conditions, ["Sent", "Frames", "AvgF/S"]),
    )
    for doc in documents:
        row: list[Cell] = [doc.id]
        any_data = False
        for c in conditions:
            try:
                r = metrics.frame_diversity(c, doc, bank)
                row.extend([r.sentences_with_as, r.unique_frames, r.avg_frames_per_sentence])
                any_data = True
            except NoAnnotatedSentencesError:
                row.extend([None, None, None])
        if any_data:
            table.rows.append(row)
    return table


_PAIR_ORDER = [
    (ConditionLabel.HUMAN, ConditionLabel.MACHINE),
    (ConditionLabel.HUMAN, ConditionLabel.MACHINE_HUMAN),
    (ConditionLabel.MACHINE, ConditionLabel.MACHINE_HUMAN),
]


def build_table2(
    conditions: list[Condition], documents: list[Document], bank: FrameBank
) -> ReportTable:
    """Pairwise condition similarity; symmetric pairs are deduplicated to the
    canonical combinations."""
    by_label = {c.label: c for c in conditions}
    pairs = [(a, b) for a, b in _PAIR_ORDER if a in by_label and b in by_label]
    table = ReportTable(
        name="table2_similarity",
        columns=["Doc"]
        + [f"{CONDITION_TITLES[a]} vs {CONDITION_TITLES[b]}" for a, b in pairs],
        precision=4,
    )
    for doc in documents:
        row: list[Cell] = [doc.id]
        any_data = False
        for a, b in pairs:
            try:
                r = metrics.condition_similarity(by_label[a], by_label[b], doc, bank)
                row.append(r.mean_cosine)
                any_data = True
            except NoComparableSentencesError:
                row.append(None)
        if any_data:
            table.rows.append(row)
    return table


def build_table3(
    conditions: list[Condition], documents: list[Document], bank: FrameBank
) -> ReportTable:
    table = ReportTable(
        name="table3_completeness",
        columns=["Doc"] + _titles(conditions, ["Core", "Min", "%"]),
    )
    for doc in documents:
        row: list[Cell] = [doc.id]
        any_data = False
        for c in conditions:
            r = metrics.core_completeness(c, doc, bank)
            if r.min_required == 0 and r.core_annotated == 0:
                row.extend([None, None, None])
            else:
                row.extend([r.core_annotated, r.min_required, r.pct])
                any_data = True
        if any_data:
            table.rows.append(row)
    return table


def build_table4(human: Condition, mh: Condition, documents: list[Document]) -> ReportTable:
    table = ReportTable(
        name="table4_time",
        columns=["Doc", "Sent", "Avg Length", "Human Anno", "Machine+Human Anno", "Diff"],
    )
    for doc in documents:
        try:
            r = metrics.time_report(human, mh, doc)
        except NoTimingDataError:
            continue
        table.rows.append(
            [r.doc_id, r.sentences, r.avg_sentence_length, r.human_avg_min, r.mh_avg_min, r.diff]
        )
    return table


def build_table5(mh: Condition, documents: list[Document]) -> ReportTable:
    """Raises UnfinalizedASError when any AS is still pending review."""
    table = ReportTable(
        name="table5_edits",
        columns=["Doc", "Total", "ACCEPTED", "%", "CREATED", "%", "DELETED", "%", "UPDATED", "%"],
    )
    for doc in documents:
        r = metrics.edit_stats(mh, doc)
        if r.total == 0:
            continue
        table.rows.append(
            [
                r.doc_id,
                r.total,
                r.accepted,
                r.pct_accepted,
                r.created,
                r.pct_created,
                r.deleted,
                r.pct_deleted,
                r.updated,
                r.pct_updated,
            ]
        )
    return table
