"""Simulate the reviewing phase over a resolved data directory: annotators
take document leases, time their work, accept/delete/update the machine
suggestions and create new annotation sets, then the five report tables are
written.

    python scripts/make_demo_data.py --out demo
    python scripts/run_review_simulation.py --data demo/data --out demo/reports
"""

from __future__ import annotations

import argparse
import random
from pathlib import Path

from framewright.conditions import ConditionLabel
from framewright.report import ReportFormat, TABLE_NAMES, emit_report
from framewright.review import AsStatus, EditKind
from framewright.server import build_report_table
from framewright.store import Workbench

MH = ConditionLabel.MACHINE_HUMAN.value


def review_document(wb: Workbench, doc, annotator: str, rng: random.Random, clock: list[float]):
    lease = wb.acquire_lease(doc.id, annotator)
    editable = wb.conditions[MH]

    def append(kind, as_id=None, payload=None, ts=0.0):
        return wb.append(kind=kind, annotator=annotator, as_id=as_id,
                         payload=payload, ts=ts, lease_token=lease.token)

    for sentence in doc.sentences:
        for as_ in list(editable.sets_for_sentence(sentence.id)):
            if as_.status is not AsStatus.MACHINE_PENDING:
                continue
            append(EditKind.TIMER_START, as_id=as_.id, ts=clock[0])
            clock[0] += rng.uniform(20, 300)
            verdict = rng.random()
            if verdict < 0.25:
                append(EditKind.ACCEPT, as_id=as_.id)
            elif verdict < 0.40:
                append(EditKind.DELETE, as_id=as_.id)
            else:
                frame = wb.bank.frame_of_lu(as_.lu_id)
                unrealized = sorted(frame.fe_names() - {r.fe_name for r in as_.fe_realizations})
                if unrealized and rng.random() < 0.7:
                    token = rng.choice(sentence.tokens)
                    append(EditKind.ADD_FE, as_id=as_.id,
                           payload={"fe_name": rng.choice(unrealized),
                                    "span": {"start": token.span.start, "end": token.span.end}})
                elif unrealized and rng.random() < 0.5:
                    append(EditKind.SET_NI, as_id=as_.id,
                           payload={"fe_name": rng.choice(unrealized),
                                    "ni": rng.choice(["INI", "DNI", "CNI"])})
                else:
                    other = rng.choice([f.name for f in wb.bank.frames()])
                    append(EditKind.REPLACE_FRAME, as_id=as_.id, payload={"frame": other})
            append(EditKind.TIMER_STOP, as_id=as_.id, ts=clock[0])
            clock[0] += rng.uniform(1, 10)
        if rng.random() < 0.3:  # a from-scratch AS on a random noun
            nouns = [t for t in sentence.tokens if t.upos in ("NOUN", "PROPN")]
            if nouns:
                token = rng.choice(nouns)
                frame = rng.choice([f.name for f in wb.bank.frames()])
                result = append(
                    EditKind.CREATE,
                    payload={"sentence_id": sentence.id,
                             "target": {"start": token.span.start, "end": token.span.end},
                             "frame": frame},
                )
                append(EditKind.TIMER_START, as_id=result.annotation_set.id, ts=clock[0])
                clock[0] += rng.uniform(30, 200)
                append(EditKind.TIMER_STOP, as_id=result.annotation_set.id, ts=clock[0])
    wb.release_lease(doc.id, annotator)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data", type=Path, required=True)
    parser.add_argument("--out", type=Path, default=Path("reports"))
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--format", default="csv", choices=[f.value for f in ReportFormat])
    args = parser.parse_args()

    rng = random.Random(args.seed)
    wb = Workbench(args.data)
    wb.load()
    clock = [0.0]
    for i, doc in enumerate(wb.documents):
        review_document(wb, doc, f"annotator-{i % 5 + 1}", rng, clock)

    statuses = {}
    for as_ in wb.conditions[MH].iter_sets(include_deleted=True):
        statuses[as_.status.value] = statuses.get(as_.status.value, 0) + 1
    print(f"review complete over {len(wb.records)} events: {statuses}")

    args.out.mkdir(parents=True, exist_ok=True)
    extension = {"csv": "csv", "json": "json", "markdown": "md"}[args.format]
    for name in TABLE_NAMES:
        table = build_report_table(wb, name)
        path = args.out / f"{name}.{extension}"
        path.write_bytes(emit_report(table, ReportFormat(args.format)))
        print(path)


if __name__ == "__main__":
    main()
