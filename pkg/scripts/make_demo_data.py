"""Generate a synthetic annotation study: frame inventory, news-style corpus,
parser hypotheses and a phase-1 human condition, imported and resolved into a
workbench data directory.

    python scripts/make_demo_data.py --out demo --docs 4 --sentences 10 --seed 7

Afterwards run scripts/run_review_simulation.py on demo/data, or serve it:

    fw --data-dir demo/data serve
"""

from __future__ import annotations

import argparse
import json
import random
from pathlib import Path

from framewright.conditions import ConditionLabel
from framewright.store import Workbench

SUBJECTS = [
    ("Maria", "Maria"), ("João", "João"), ("Pedro", "Pedro"), ("Ana", "Ana"),
    ("o repórter", "o repórter"), ("a prefeita", "a prefeita"),
]
# verb -> (lemma, human frame, machine frame)
VERBS = {
    "corre": ("correr", "Self_motion", "Self_motion"),
    "anda": ("andar", "Self_motion", "Motion"),
    "vende": ("vender", "Commerce_sell", "Commerce_sell"),
    "compra": ("comprar", "Commerce_buy", "Commerce_sell"),
    "chega": ("chegar", "Arriving", "Arriving"),
    "fala": ("falar", "Statement", "Statement"),
    "observa": ("observar", "Perception_active", "Perception_active"),
    "viaja": ("viajar", "Travel", "Motion"),
}
OBJECTS = ["o carro", "a casa", "as frutas", "o problema", "a notícia"]
ADJUNCTS = ["na rua", "para a escola", "no mercado", "pela manhã", "da janela"]

FRAMES = [
    {
        "name": "Self_motion",
        "definition": "A living being moves under its own power.",
        "fes": [
            {"name": "Self_mover", "coreness": "core"},
            {"name": "Area", "coreness": "core"},
            {"name": "Direction", "coreness": "core"},
            {"name": "Goal", "coreness": "core"},
            {"name": "Path", "coreness": "core"},
            {"name": "Source", "coreness": "core"},
            {"name": "Manner", "coreness": "non_core"},
        ],
        "excludes": [["Area", "Direction"], ["Area", "Goal"], ["Area", "Path"], ["Area", "Source"]],
        "core_sets": [["Source", "Goal", "Path", "Direction"]],
    },
    {
        "name": "Motion",
        "definition": "An entity changes place.",
        "fes": [
            {"name": "Theme", "coreness": "core"},
            {"name": "Goal", "coreness": "core"},
            {"name": "Source", "coreness": "core"},
            {"name": "Path", "coreness": "core"},
        ],
        "excludes": [],
        "core_sets": [["Goal", "Source", "Path"]],
    },
    {
        "name": "Commerce_sell",
        "definition": "A seller transfers goods to a buyer.",
        "fes": [
            {"name": "Seller", "coreness": "core"},
            {"name": "Goods", "coreness": "core"},
            {"name": "Buyer", "coreness": "non_core"},
        ],
        "excludes": [],
        "core_sets": [],
    },
    {
        "name": "Commerce_buy",
        "definition": "A buyer acquires goods from a seller.",
        "fes": [
            {"name": "Buyer", "coreness": "core"},
            {"name": "Goods", "coreness": "core"},
            {"name": "Seller", "coreness": "non_core"},
        ],
        "excludes": [],
        "core_sets": [],
    },
    {
        "name": "Arriving",
        "definition": "A theme reaches a goal.",
        "fes": [
            {"name": "Theme", "coreness": "core"},
            {"name": "Goal", "coreness": "core"},
            {"name": "Source", "coreness": "non_core"},
        ],
        "excludes": [],
        "core_sets": [],
    },
    {
        "name": "Statement",
        "definition": "A speaker conveys a message.",
        "fes": [
            {"name": "Speaker", "coreness": "core"},
            {"name": "Message", "coreness": "core"},
            {"name": "Topic", "coreness": "core"},
            {"name": "Medium", "coreness": "non_core"},
        ],
        "excludes": [["Message", "Topic"]],
        "core_sets": [],
    },
    {
        "name": "Perception_active",
        "definition": "A perceiver directs attention at a phenomenon.",
        "fes": [
            {"name": "Perceiver_agentive", "coreness": "core"},
            {"name": "Phenomenon", "coreness": "core"},
        ],
        "excludes": [],
        "core_sets": [],
    },
    {
        "name": "Travel",
        "definition": "A traveler goes on a journey.",
        "fes": [
            {"name": "Traveler", "coreness": "core"},
            {"name": "Goal", "coreness": "core"},
            {"name": "Path", "coreness": "core"},
        ],
        "excludes": [],
        "core_sets": [["Goal", "Path"]],
    },
]

SUBJECT_FE = {
    "Self_motion": "Self_mover", "Motion": "Theme", "Commerce_sell": "Seller",
    "Commerce_buy": "Buyer", "Arriving": "Theme", "Statement": "Speaker",
    "Perception_active": "Perceiver_agentive", "Travel": "Traveler",
}
ADJUNCT_FE = {
    "Self_motion": "Goal", "Motion": "Goal", "Commerce_sell": None, "Commerce_buy": None,
    "Arriving": "Goal", "Statement": "Topic", "Perception_active": "Phenomenon", "Travel": "Goal",
}


def tokenize(words: list[tuple[str, str, str]]) -> tuple[str, list[dict]]:
    tokens, parts, pos = [], [], 0
    for form, lemma, upos in words:
        if parts:
            pos += 1
        for piece_i, piece in enumerate(form.split(" ")):
            piece_lemma = lemma.split(" ")[piece_i] if " " in lemma else (lemma if piece_i == 0 else piece)
            if piece_i:
                pos += 1
            tokens.append({"form": piece, "lemma": piece_lemma, "upos": upos,
                           "start": pos, "end": pos + len(piece)})
            parts.append(piece)
            pos += len(piece)
    return " ".join(parts), tokens


def build_sentence(rng: random.Random):
    subject, _ = rng.choice(SUBJECTS)
    verb = rng.choice(sorted(VERBS))
    obj = rng.choice(OBJECTS)
    adjunct = rng.choice(ADJUNCTS)
    words = [
        (subject, subject.lower(), "PROPN" if subject[0].isupper() else "NOUN"),
        (verb, VERBS[verb][0], "VERB"),
        (obj, obj, "NOUN"),
        (adjunct, adjunct, "ADP"),
    ]
    text, tokens = tokenize(words)
    spans = {}
    cursor = 0
    for chunk, key in ((subject, "subject"), (verb, "verb"), (obj, "object"), (adjunct, "adjunct")):
        start = text.index(chunk, cursor)
        spans[key] = (start, start + len(chunk))
        cursor = start + len(chunk)
    return text, tokens, spans, verb


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("demo"))
    parser.add_argument("--docs", type=int, default=4)
    parser.add_argument("--sentences", type=int, default=10, help="sentences per document")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    inputs = args.out / "inputs"
    inputs.mkdir(parents=True, exist_ok=True)

    lus = sorted(
        {(VERBS[v][0], "VERB", VERBS[v][1]) for v in VERBS}
        | {(VERBS[v][0], "VERB", VERBS[v][2]) for v in VERBS}
    )
    framebank = {
        "frames": FRAMES,
        "lus": [{"lemma": l, "pos": p, "frame": f} for l, p, f in lus],
    }
    (inputs / "framebank.json").write_text(json.dumps(framebank, ensure_ascii=False, indent=1))

    corpus_lines, hypothesis_lines, human_lines = [], [], []
    for d in range(args.docs):
        doc_id = f"{d + 1:02d}_01"
        sentences = []
        for s in range(args.sentences):
            sid = f"{doc_id}-s{s + 1:02d}"
            text, tokens, spans, verb = build_sentence(rng)
            sentences.append({"id": sid, "text": text, "tokens": tokens})
            lemma, human_frame, machine_frame = VERBS[verb]

            # machine hypothesis, with occasional parser noise
            fes = [{"name": SUBJECT_FE[machine_frame], "start": spans["subject"][0], "end": spans["subject"][1]}]
            if rng.random() < 0.7 and ADJUNCT_FE[machine_frame]:
                fes.append({"name": ADJUNCT_FE[machine_frame],
                            "start": spans["adjunct"][0], "end": spans["adjunct"][1]})
            roll = rng.random()
            frame_name = machine_frame
            if roll < 0.04:
                frame_name = "Hallucinated_frame"
            elif roll < 0.08:
                fes.append({"name": "Bad_FE", "start": spans["object"][0], "end": spans["object"][1]})
            hypothesis_lines.append(json.dumps(
                {"sentence_id": sid, "target": {"start": spans["verb"][0], "end": spans["verb"][1]},
                 "frame": frame_name, "fes": fes},
                ensure_ascii=False,
            ))

            # phase-1 human annotation with timing
            human_fes = [
                {"name": SUBJECT_FE[human_frame], "start": spans["subject"][0], "end": spans["subject"][1]}
            ]
            if ADJUNCT_FE[human_frame]:
                if rng.random() < 0.8:
                    human_fes.append({"name": ADJUNCT_FE[human_frame],
                                      "start": spans["adjunct"][0], "end": spans["adjunct"][1]})
                else:
                    human_fes.append({"name": ADJUNCT_FE[human_frame], "ni": "DNI"})
            human_lines.append(json.dumps(
                {"id": f"h-{sid}", "sentence_id": sid,
                 "lu": {"lemma": lemma, "pos": "VERB", "frame": human_frame},
                 "target": {"start": spans["verb"][0], "end": spans["verb"][1]},
                 "fes": human_fes, "status": "human", "provenance": "human",
                 "time_spent": round(rng.uniform(60, 540), 1)},
                ensure_ascii=False,
            ))
        corpus_lines.append(json.dumps(
            {"id": doc_id, "title": f"news story {doc_id}", "sentences": sentences},
            ensure_ascii=False,
        ))

    (inputs / "corpus.jsonl").write_text("\n".join(corpus_lines) + "\n")
    (inputs / "preannot.jsonl").write_text("\n".join(hypothesis_lines) + "\n")
    (inputs / "human.jsonl").write_text("\n".join(human_lines) + "\n")

    wb = Workbench(args.out / "data")
    for kind, filename in (("framebank", "framebank.json"), ("corpus", "corpus.jsonl"),
                           ("preannot", "preannot.jsonl")):
        summary = wb.import_file(kind, inputs / filename)
        print(f"imported {kind}: {summary}")
    summary = wb.import_file("annotations", inputs / "human.jsonl", condition=ConditionLabel.HUMAN)
    print(f"imported human annotations: {summary}")
    print(f"resolved: {wb.resolve_imports()}")
    print(f"data directory ready: {args.out / 'data'}")


if __name__ == "__main__":
    main()
