"""Documents, sentences and UD tokens, with span-based lemma/POS recovery.

Corpus input is JSONL, one document per line::

    {"id", "title", "sentences": [{"id", "text",
        "tokens": [{"form", "lemma", "upos", "start", "end"}]}]}

Character offsets count Unicode scalar values (Python string indices), not
bytes. Spans are half-open ``[start, end)``.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from typing import BinaryIO

from .errors import EmptySpanError, OutOfBoundsError, SchemaError, SpanMismatchError
from .framebank import UPOS_TAGS


@dataclass(frozen=True, order=True)
class Span:
    start: int
    end: int

    def intersects(self, other: "Span") -> bool:
        return self.start < other.end and other.start < self.end


@dataclass(frozen=True)
class Token:
    index: int
    form: str
    lemma: str
    upos: str
    span: Span


@dataclass(frozen=True)
class Sentence:
    id: str
    document_id: str
    text: str
    tokens: tuple[Token, ...]


@dataclass(frozen=True)
class Document:
    id: str
    title: str
    sentences: tuple[Sentence, ...]

    def sentence_by_id(self, sentence_id: str) -> Sentence | None:
        for sentence in self.sentences:
            if sentence.id == sentence_id:
                return sentence
        return None


def _parse_token(raw: object, index: int, text: str, sid: str, line: int) -> Token:
    if not isinstance(raw, dict) or not {"form", "lemma", "upos", "start", "end"} <= raw.keys():
        raise SchemaError(f"sentence {sid!r}: token needs form/lemma/upos/start/end", line=line)
    start, end = raw["start"], raw["end"]
    if not (isinstance(start, int) and isinstance(end, int)) or not 0 <= start < end <= len(text):
        raise SchemaError(f"sentence {sid!r}: token span [{start},{end}) out of bounds", line=line)
    upos = str(raw["upos"])
    if upos not in UPOS_TAGS:
        raise SchemaError(f"sentence {sid!r}: {upos!r} is not a UPOS tag", line=line)
    form = str(raw["form"])
    if text[start:end] != form:
        raise SpanMismatchError(
            f"sentence {sid!r}: token form {form!r} != text[{start}:{end}] {text[start:end]!r}"
        )
    return Token(index=index, form=form, lemma=str(raw["lemma"]), upos=upos, span=Span(start, end))


def _parse_sentence(raw: object, doc_id: str, line: int) -> Sentence:
    if not isinstance(raw, dict) or not {"id", "text"} <= raw.keys():
        raise SchemaError(f"document {doc_id!r}: sentence needs id and text", line=line)
    sid = str(raw["id"])
    text = str(raw["text"])
    tokens = tuple(
        _parse_token(tok, i, text, sid, line) for i, tok in enumerate(raw.get("tokens", []))
    )
    prev_end = -1
    for tok in tokens:
        if tok.span.start < prev_end:
            raise SchemaError(f"sentence {sid!r}: tokens overlap or are out of order", line=line)
        prev_end = tok.span.end
    return Sentence(id=sid, document_id=doc_id, text=text, tokens=tokens)


def load_corpus(source: BinaryIO | bytes) -> list[Document]:
    """Parse and validate a JSONL corpus. Raises SchemaError with the 1-based
    line number, or SpanMismatchError when a token form disagrees with the
    sentence text at its span."""
    data = source if isinstance(source, bytes) else source.read()
    documents: list[Document] = []
    for line_no, line in enumerate(data.decode("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"bad JSON: {exc.msg}", line=line_no) from None
        if not isinstance(raw, dict) or "id" not in raw:
            raise SchemaError("document must be an object with an id", line=line_no)
        doc_id = str(raw["id"])
        sentences = tuple(
            _parse_sentence(s, doc_id, line_no) for s in raw.get("sentences", [])
        )
        seen_ids = {s.id for s in sentences}
        if len(seen_ids) != len(sentences):
            raise SchemaError(f"document {doc_id!r}: sentence ids not unique", line=line_no)
        documents.append(Document(id=doc_id, title=str(raw.get("title", "")), sentences=sentences))
    return documents


def dump_corpus(documents: list[Document]) -> bytes:
    lines = []
    for doc in documents:
        lines.append(
            json.dumps(
                {
                    "id": doc.id,
                    "title": doc.title,
                    "sentences": [
                        {
                            "id": s.id,
                            "text": s.text,
                            "tokens": [
                                {
                                    "form": t.form,
                                    "lemma": t.lemma,
                                    "upos": t.upos,
                                    "start": t.span.start,
                                    "end": t.span.end,
                                }
                                for t in s.tokens
                            ],
                        }
                        for s in doc.sentences
                    ],
                },
                ensure_ascii=False,
            )
        )
    return ("\n".join(lines) + "\n").encode("utf-8") if lines else b""


def load_corpus_file(path: str) -> list[Document]:
    with io.open(path, "rb") as fh:
        return load_corpus(fh)


def tokens_in_span(sentence: Sentence, span: Span) -> list[Token]:
    """All tokens whose spans intersect the query span, in order.

    Intersection (not containment) semantics: off-by-one spans emitted by
    parsers still hit the intended tokens.
    """
    if not (0 <= span.start < span.end <= len(sentence.text)):
        raise OutOfBoundsError(
            f"span [{span.start},{span.end}) outside sentence {sentence.id!r} "
            f"of length {len(sentence.text)}"
        )
    return [tok for tok in sentence.tokens if tok.span.intersects(span)]


def span_lemma_pos(sentence: Sentence, span: Span) -> tuple[str, str]:
    """Lemma and UPOS for the tokens under a span.

    A single token yields its own lemma/POS. Multi-token spans yield the
    space-joined lemmas with the last token's POS (head-final stand-in for
    multiword targets).
    """
    tokens = tokens_in_span(sentence, span)
    if not tokens:
        raise EmptySpanError(
            f"span [{span.start},{span.end}) covers no token of sentence {sentence.id!r}"
        )
    lemma = " ".join(tok.lemma for tok in tokens)
    return lemma, tokens[-1].upos
