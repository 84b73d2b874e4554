"""Shared test fixtures builders and independent oracles."""

from __future__ import annotations

import itertools
import json
import random

from framewright.conditions import Condition, ConditionLabel
from framewright.corpus import Document, Sentence, Span, Token
from framewright.framebank import Coreness, Frame, FrameBank, FrameElement, ensure_lu
from framewright.review import AnnotationSet, AsStatus, FERealization, Provenance


def make_frame(
    frame_id: str,
    name: str,
    core: list[str],
    non_core: list[str] | None = None,
    excludes: list[tuple[str, str]] | None = None,
    core_sets: list[list[str]] | None = None,
) -> Frame:
    fes = tuple(
        [FrameElement(n, Coreness.CORE) for n in core]
        + [FrameElement(n, Coreness.NON_CORE) for n in (non_core or [])]
    )
    return Frame(
        id=frame_id,
        name=name,
        definition="",
        fes=fes,
        excludes=frozenset(frozenset(p) for p in (excludes or [])),
        core_sets=tuple(frozenset(cs) for cs in (core_sets or [])),
    )


def self_motion_frame(frame_id: str = "f0001") -> Frame:
    return make_frame(
        frame_id,
        "Self_motion",
        core=["Area", "Direction", "Goal", "Path", "Self_mover", "Source"],
        non_core=["Manner", "Time"],
        excludes=[("Area", "Direction"), ("Area", "Goal"), ("Area", "Path"), ("Area", "Source")],
        core_sets=[["Source", "Goal", "Path", "Direction"]],
    )


def self_motion_json(with_lus: bool = False) -> bytes:
    doc = {
        "frames": [
            {
                "name": "Self_motion",
                "definition": "A living being moves under its own direction.",
                "fes": [
                    {"name": "Area", "coreness": "core"},
                    {"name": "Direction", "coreness": "core"},
                    {"name": "Goal", "coreness": "core"},
                    {"name": "Path", "coreness": "core"},
                    {"name": "Self_mover", "coreness": "core"},
                    {"name": "Source", "coreness": "core"},
                    {"name": "Manner", "coreness": "non_core"},
                    {"name": "Time", "coreness": "non_core"},
                ],
                "excludes": [
                    ["Area", "Direction"],
                    ["Area", "Goal"],
                    ["Area", "Path"],
                    ["Area", "Source"],
                ],
                "core_sets": [["Source", "Goal", "Path", "Direction"]],
            }
        ],
        "lus": [{"lemma": "correr", "pos": "VERB", "frame": "Self_motion"}] if with_lus else [],
    }
    return json.dumps(doc).encode("utf-8")


def bank_with(*frames: Frame) -> FrameBank:
    bank = FrameBank()
    for frame in frames:
        bank.add_frame(frame)
    return bank


def sentence_from_specs(
    sid: str, doc_id: str, specs: list[tuple[str, str, str]]
) -> Sentence:
    """Build a sentence from (form, lemma, upos) triples, space-joined."""
    tokens = []
    pos = 0
    parts = []
    for i, (form, lemma, upos) in enumerate(specs):
        if i > 0:
            pos += 1  # single space
        tokens.append(Token(index=i, form=form, lemma=lemma, upos=upos, span=Span(pos, pos + len(form))))
        parts.append(form)
        pos += len(form)
    return Sentence(id=sid, document_id=doc_id, text=" ".join(parts), tokens=tuple(tokens))


def doc_of(doc_id: str, *sentences: Sentence) -> Document:
    return Document(id=doc_id, title=doc_id, sentences=tuple(sentences))


def make_as(
    as_id: str,
    sentence_id: str,
    bank: FrameBank,
    frame_name: str,
    lemma: str = "w",
    pos: str = "NOUN",
    status: AsStatus = AsStatus.HUMAN,
    provenance: Provenance = Provenance.HUMAN,
    time_spent: float = 0.0,
    fes: tuple = (),
    target: Span = Span(0, 1),
) -> AnnotationSet:
    """AS over an ensured LU; ``fes`` entries are FE names (span-realized at
    [0,1)) or ready FERealization objects."""
    frame = bank.frame_by_name(frame_name)
    lu = ensure_lu(bank, lemma, pos, frame)
    realizations = tuple(
        r if isinstance(r, FERealization) else FERealization(r, span=Span(0, 1)) for r in fes
    )
    return AnnotationSet(
        id=as_id,
        sentence_id=sentence_id,
        lu_id=lu.id,
        target_span=target,
        fe_realizations=realizations,
        status=status,
        provenance=provenance,
        time_spent=time_spent,
    )


def condition_of(label: ConditionLabel, *sets: AnnotationSet) -> Condition:
    condition = Condition(label=label)
    for as_ in sets:
        condition.add(as_)
    return condition


def plain_doc(doc_id: str, sentence_ids: list[str], text: str = "x y z") -> Document:
    sentences = tuple(
        Sentence(id=sid, document_id=doc_id, text=text, tokens=()) for sid in sentence_ids
    )
    return Document(id=doc_id, title=doc_id, sentences=sentences)


# -- on-disk demo inputs --------------------------------------------------------


def demo_framebank_json() -> bytes:
    doc = json.loads(self_motion_json(with_lus=True).decode())
    doc["frames"].append(
        {
            "name": "Motion",
            "definition": "",
            "fes": [
                {"name": "Theme", "coreness": "core"},
                {"name": "Goal", "coreness": "core"},
                {"name": "Source", "coreness": "core"},
                {"name": "Path", "coreness": "core"},
            ],
            "excludes": [],
            "core_sets": [["Goal", "Source", "Path"]],
        }
    )
    doc["frames"].append(
        {
            "name": "Commerce_sell",
            "definition": "",
            "fes": [
                {"name": "Seller", "coreness": "core"},
                {"name": "Goods", "coreness": "core"},
                {"name": "Buyer", "coreness": "non_core"},
            ],
            "excludes": [],
            "core_sets": [],
        }
    )
    return json.dumps(doc).encode("utf-8")


def demo_corpus_jsonl() -> bytes:
    def tok(form, lemma, upos, start):
        return {"form": form, "lemma": lemma, "upos": upos, "start": start, "end": start + len(form)}

    d1 = {
        "id": "d1",
        "title": "news one",
        "sentences": [
            {
                "id": "s1",
                "text": "João corre para a escola",
                "tokens": [
                    tok("João", "João", "PROPN", 0),
                    tok("corre", "correr", "VERB", 5),
                    tok("para", "para", "ADP", 11),
                    tok("a", "a", "DET", 16),
                    tok("escola", "escola", "NOUN", 18),
                ],
            },
            {
                "id": "s2",
                "text": "Maria vende o carro",
                "tokens": [
                    tok("Maria", "Maria", "PROPN", 0),
                    tok("vende", "vender", "VERB", 6),
                    tok("o", "o", "DET", 12),
                    tok("carro", "carro", "NOUN", 14),
                ],
            },
        ],
    }
    d2 = {
        "id": "d2",
        "title": "news two",
        "sentences": [
            {
                "id": "s3",
                "text": "Pedro anda na rua",
                "tokens": [
                    tok("Pedro", "Pedro", "PROPN", 0),
                    tok("anda", "andar", "VERB", 6),
                    tok("na", "em", "ADP", 11),
                    tok("rua", "rua", "NOUN", 14),
                ],
            }
        ],
    }
    return (json.dumps(d1, ensure_ascii=False) + "\n" + json.dumps(d2, ensure_ascii=False) + "\n").encode()


def demo_preannot_jsonl() -> bytes:
    hyps = [
        {"sentence_id": "s1", "target": {"start": 5, "end": 10}, "frame": "Self_motion",
         "fes": [{"name": "Self_mover", "start": 0, "end": 4}, {"name": "Goal", "start": 11, "end": 24}]},
        {"sentence_id": "s1", "target": {"start": 18, "end": 24}, "frame": "Commerce_sell",
         "fes": [{"name": "Goods", "start": 18, "end": 24}]},
        {"sentence_id": "s2", "target": {"start": 6, "end": 11}, "frame": "Motion",
         "fes": [{"name": "Theme", "start": 0, "end": 5}]},
        {"sentence_id": "s2", "target": {"start": 14, "end": 19}, "frame": "Unknown_frame", "fes": []},
        {"sentence_id": "s3", "target": {"start": 6, "end": 10}, "frame": "Self_motion",
         "fes": [{"name": "Self_mover", "start": 0, "end": 5}, {"name": "Goall", "start": 14, "end": 17}]},
        {"sentence_id": "s3", "target": {"start": 14, "end": 17}, "frame": "Motion", "fes": []},
    ]
    return ("\n".join(json.dumps(h) for h in hyps) + "\n").encode()


def demo_human_annotations_jsonl() -> bytes:
    sets = [
        {"id": "h1", "sentence_id": "s1", "lu": {"lemma": "correr", "pos": "VERB", "frame": "Self_motion"},
         "target": {"start": 5, "end": 10},
         "fes": [{"name": "Self_mover", "start": 0, "end": 4}, {"name": "Goal", "start": 11, "end": 24}],
         "status": "human", "provenance": "human", "time_spent": 120.0},
        {"id": "h2", "sentence_id": "s1", "lu": {"lemma": "escola", "pos": "NOUN", "frame": "Commerce_sell"},
         "target": {"start": 18, "end": 24},
         "fes": [{"name": "Goods", "start": 18, "end": 24}, {"name": "Seller", "ni": "CNI"}],
         "status": "human", "provenance": "human", "time_spent": 60.0},
        {"id": "h3", "sentence_id": "s2", "lu": {"lemma": "vender", "pos": "VERB", "frame": "Commerce_sell"},
         "target": {"start": 6, "end": 11},
         "fes": [{"name": "Seller", "start": 0, "end": 5}, {"name": "Goods", "start": 12, "end": 19}],
         "status": "human", "provenance": "human", "time_spent": 90.0},
        {"id": "h4", "sentence_id": "s3", "lu": {"lemma": "andar", "pos": "VERB", "frame": "Self_motion"},
         "target": {"start": 6, "end": 10},
         "fes": [{"name": "Self_mover", "start": 0, "end": 5}, {"name": "Path", "ni": "DNI"}],
         "status": "human", "provenance": "human", "time_spent": 270.0},
    ]
    return ("\n".join(json.dumps(s, ensure_ascii=False) for s in sets) + "\n").encode()


def write_demo_inputs(directory) -> dict:
    """Write the 3-sentence demo inputs under a directory and return paths."""
    from pathlib import Path

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {
        "framebank": directory / "framebank.json",
        "corpus": directory / "corpus.jsonl",
        "preannot": directory / "preannot.jsonl",
        "annotations": directory / "human.jsonl",
    }
    paths["framebank"].write_bytes(demo_framebank_json())
    paths["corpus"].write_bytes(demo_corpus_jsonl())
    paths["preannot"].write_bytes(demo_preannot_jsonl())
    paths["annotations"].write_bytes(demo_human_annotations_jsonl())
    return paths


# -- independent minimum-cover oracle -----------------------------------------


def oracle_min_cover(frame: Frame) -> int:
    """Brute-force minimum size of a core-FE set covering all core FEs,
    enumerating every subset as a bitmask over an explicitly built adjacency
    matrix (independent of the production solver's search order)."""
    core = sorted(fe.name for fe in frame.fes if fe.coreness is Coreness.CORE)
    n = len(core)
    if n == 0:
        return 0
    index = {name: i for i, name in enumerate(core)}
    reach = [1 << i for i in range(n)]
    for pair in frame.excludes:
        a, b = tuple(pair)
        reach[index[a]] |= 1 << index[b]
        reach[index[b]] |= 1 << index[a]
    for cs in frame.core_sets:
        members = [index[m] for m in cs]
        for x, y in itertools.permutations(members, 2):
            reach[x] |= 1 << y
    full = (1 << n) - 1
    best = n
    for mask in range(1, 1 << n):
        if bin(mask).count("1") >= best:
            continue
        covered = 0
        for i in range(n):
            if mask & (1 << i):
                covered |= reach[i]
        if covered == full:
            best = bin(mask).count("1")
    return best


# -- random but always-valid edit walks ----------------------------------------


def reference_status(kinds, provenance):
    """Independent restatement of the status precedence for oracle checks."""
    from framewright.review import AsStatus, EditKind

    content = {EditKind.REPLACE_FRAME, EditKind.ADD_FE, EditKind.REMOVE_FE, EditKind.SET_NI}
    if any(k is EditKind.DELETE for k in kinds):
        return AsStatus.DELETED
    if len(kinds) > 0 and kinds[0] is EditKind.CREATE:
        return AsStatus.CREATED
    if any(k in content for k in kinds):
        return AsStatus.UPDATED
    if any(k is EditKind.ACCEPT for k in kinds):
        return AsStatus.ACCEPTED
    return AsStatus.MACHINE_PENDING if provenance is Provenance.MACHINE else AsStatus.HUMAN


def random_valid_walk(rng: random.Random, as_, bank, sentence, steps: int):
    """Apply ``steps`` random valid edits to one AS, returning the final AS.

    Only proposes edits legal in the current state, so every apply must
    succeed; timer intervals use a strictly increasing clock.
    """
    from framewright.review import AsStatus, EditEvent, EditKind, apply_edit

    clock = 0.0
    timer_running = False
    counter = 0
    for _ in range(steps):
        frame = bank.frame_of_lu(as_.lu_id)
        realized = {r.fe_name for r in as_.fe_realizations}
        unrealized = sorted(frame.fe_names() - realized)
        options = []
        if timer_running:
            options.append("timer_stop")
        else:
            options.append("timer_start")
        if as_.status is not AsStatus.DELETED:
            options.append("delete")
            if as_.status is AsStatus.MACHINE_PENDING:
                options.append("accept")
            if unrealized:
                options.append("add_fe")
                options.append("set_ni")
            if realized:
                options.append("remove_fe")
            options.append("replace_frame")
        choice = rng.choice(options)
        clock += rng.uniform(0.5, 30.0)
        payload = {}
        if choice == "add_fe":
            token = rng.choice(sentence.tokens)
            payload = {
                "fe_name": rng.choice(unrealized),
                "span": {"start": token.span.start, "end": token.span.end},
            }
        elif choice == "remove_fe":
            payload = {"fe_name": rng.choice(sorted(realized))}
        elif choice == "set_ni":
            payload = {"fe_name": rng.choice(unrealized), "ni": rng.choice(["INI", "DNI", "CNI"])}
        elif choice == "replace_frame":
            payload = {"frame": rng.choice([f.name for f in bank.frames()])}
        counter += 1
        event = EditEvent(
            id=f"w{counter}", as_id=as_.id, annotator="ann",
            kind=EditKind(choice), payload=payload, timestamp=clock,
        )
        as_ = apply_edit(as_, event, bank, sentence)
        if choice == "timer_start":
            timer_running = True
        elif choice == "timer_stop":
            timer_running = False
    return as_


def random_review_script(rng: random.Random, workbench, annotator: str, steps: int):
    """Drive random valid appends against a loaded workbench (leases already
    held for every document). Returns the number of events appended."""
    from framewright.conditions import ConditionLabel
    from framewright.review import AsStatus, EditKind

    leases = {doc.id: workbench.acquire_lease(doc.id, annotator) for doc in workbench.documents}
    editable = workbench.conditions[ConditionLabel.MACHINE_HUMAN.value]
    clocks: dict[str, float] = {}
    running: dict[str, bool] = {}
    appended = 0
    for _ in range(steps):
        sets = list(editable.iter_sets(include_deleted=True))
        as_ = rng.choice(sets) if sets else None
        options = ["create"]
        if as_ is not None:
            options.append("timer")
            if as_.status is not AsStatus.DELETED:
                options.append("delete")
                frame = workbench.bank.frame_of_lu(as_.lu_id)
                if as_.status is AsStatus.MACHINE_PENDING:
                    options.append("accept")
                if frame.fe_names() - {r.fe_name for r in as_.fe_realizations}:
                    options.append("add_fe")
                options.append("replace_frame")
        choice = rng.choice(options)
        sentence = workbench.sentences[as_.sentence_id] if as_ is not None else None
        if choice == "create":
            sid = rng.choice(sorted(workbench.sentences))
            sentence = workbench.sentences[sid]
            token = rng.choice(sentence.tokens)
            workbench.append(
                kind=EditKind.CREATE, annotator=annotator,
                payload={"sentence_id": sid,
                         "target": {"start": token.span.start, "end": token.span.end},
                         "frame": rng.choice([f.name for f in workbench.bank.frames()])},
                lease_token=leases[sentence.document_id].token,
            )
        elif choice == "timer":
            ts = clocks.get(as_.id, 0.0) + rng.uniform(0.5, 20.0)
            clocks[as_.id] = ts
            kind = EditKind.TIMER_STOP if running.get(as_.id) else EditKind.TIMER_START
            running[as_.id] = not running.get(as_.id, False)
            workbench.append(kind=kind, annotator=annotator, as_id=as_.id, ts=ts,
                             lease_token=leases[sentence.document_id].token)
        elif choice == "accept":
            workbench.append(kind=EditKind.ACCEPT, annotator=annotator, as_id=as_.id,
                             lease_token=leases[sentence.document_id].token)
        elif choice == "delete":
            workbench.append(kind=EditKind.DELETE, annotator=annotator, as_id=as_.id,
                             lease_token=leases[sentence.document_id].token)
        elif choice == "add_fe":
            frame = workbench.bank.frame_of_lu(as_.lu_id)
            unrealized = sorted(frame.fe_names() - {r.fe_name for r in as_.fe_realizations})
            token = rng.choice(sentence.tokens)
            workbench.append(
                kind=EditKind.ADD_FE, annotator=annotator, as_id=as_.id,
                payload={"fe_name": rng.choice(unrealized),
                         "span": {"start": token.span.start, "end": token.span.end}},
                lease_token=leases[sentence.document_id].token,
            )
        else:  # replace_frame
            workbench.append(
                kind=EditKind.REPLACE_FRAME, annotator=annotator, as_id=as_.id,
                payload={"frame": rng.choice([f.name for f in workbench.bank.frames()])},
                lease_token=leases[sentence.document_id].token,
            )
        appended += 1
    return appended


def random_frame(rng: random.Random, frame_id: str, max_core: int = 10) -> Frame:
    """Random frame with up to ``max_core`` core FEs, random excludes pairs
    and core sets over them."""
    n = rng.randint(1, max_core)
    core = [f"FE{i:02d}" for i in range(n)]
    excludes = []
    if n >= 2:
        for _ in range(rng.randint(0, n)):
            a, b = rng.sample(core, 2)
            excludes.append((a, b))
    core_sets = []
    for _ in range(rng.randint(0, 2)):
        if n >= 2:
            size = rng.randint(2, min(4, n))
            core_sets.append(rng.sample(core, size))
    return make_frame(frame_id, f"Random_{frame_id}", core=core, excludes=excludes, core_sets=core_sets)
