"""Frame inventory: frames, frame elements, excludes relations, core sets
and lexical units, plus the minimal core-FE requirement solver.

The JSON input format is a single object::

    {"frames": [{"name", "definition", "fes": [{"name", "coreness", "definition"}],
                 "excludes": [["A", "B"], ...], "core_sets": [["S", "G"], ...]}],
     "lus": [{"lemma", "pos", "frame"}]}

``coreness`` is ``"core"`` or ``"non_core"``; ``pos`` is a UPOS tag.
"""

from __future__ import annotations

import io
import itertools
import json
from dataclasses import dataclass
from enum import Enum
from typing import BinaryIO, Iterable

from .errors import (
    DanglingRefError,
    DuplicateError,
    SchemaError,
    TooManyCoreFEsError,
    UnknownFrameError,
)

UPOS_TAGS = frozenset(
    "ADJ ADP ADV AUX CCONJ DET INTJ NOUN NUM PART PRON PROPN PUNCT SCONJ SYM VERB X".split()
)

# Exhaustive search over core-FE subsets is capped; real frame inventories
# rarely exceed ~10 core FEs per frame.
DEFAULT_CORE_FE_CAP = 16


class Coreness(str, Enum):
    CORE = "core"
    NON_CORE = "non_core"


class LuProvenance(str, Enum):
    CURATED = "curated"
    AUTO_CREATED = "auto_created"


@dataclass(frozen=True)
class FrameElement:
    name: str
    coreness: Coreness
    definition: str = ""


@dataclass(frozen=True)
class Frame:
    id: str
    name: str
    definition: str
    fes: tuple[FrameElement, ...]
    excludes: frozenset[frozenset[str]]  # unordered pairs of core FE names
    core_sets: tuple[frozenset[str], ...]

    def fe_names(self) -> set[str]:
        return {fe.name for fe in self.fes}

    def core_fe_names(self) -> set[str]:
        return {fe.name for fe in self.fes if fe.coreness is Coreness.CORE}


@dataclass(frozen=True)
class LexicalUnit:
    id: str
    lemma: str
    pos: str
    frame_id: str
    provenance: LuProvenance


@dataclass(frozen=True)
class CoreRequirement:
    """Smallest number of core FEs that completes an annotation of the frame,
    with one witness set of that size."""

    count: int
    witness: frozenset[str]


class FrameBank:
    """Frames indexed by name and id; LUs indexed by (lemma, pos, frame_id).

    Read-mostly: :meth:`ensure_lu` is the only mutation and must be called
    from a single writer (the store serializes it).
    """

    def __init__(self) -> None:
        self._frames_by_name: dict[str, Frame] = {}
        self._frames_by_id: dict[str, Frame] = {}
        self._lus_by_key: dict[tuple[str, str, str], LexicalUnit] = {}
        self._lus_by_id: dict[str, LexicalUnit] = {}
        self._lu_counter = 0
        self._requirement_cache: dict[str, CoreRequirement] = {}

    # -- frames ------------------------------------------------------------

    def add_frame(self, frame: Frame) -> None:
        if frame.name in self._frames_by_name:
            raise DuplicateError(f"frame name {frame.name!r} repeated")
        if frame.id in self._frames_by_id:
            raise DuplicateError(f"frame id {frame.id!r} repeated")
        self._frames_by_name[frame.name] = frame
        self._frames_by_id[frame.id] = frame

    def frame_by_name(self, name: str) -> Frame | None:
        return self._frames_by_name.get(name)

    def frame_by_id(self, frame_id: str) -> Frame | None:
        return self._frames_by_id.get(frame_id)

    def frames(self) -> list[Frame]:
        return list(self._frames_by_name.values())

    # -- lexical units -----------------------------------------------------

    def add_lu(self, lu: LexicalUnit) -> None:
        key = (lu.lemma, lu.pos, lu.frame_id)
        if key in self._lus_by_key:
            raise DuplicateError(f"LU {key!r} repeated")
        if lu.frame_id not in self._frames_by_id:
            raise DanglingRefError(f"LU {key!r} names unknown frame id {lu.frame_id!r}")
        self._lus_by_key[key] = lu
        self._lus_by_id[lu.id] = lu

    def next_lu_id(self) -> str:
        self._lu_counter += 1
        return f"lu{self._lu_counter:05d}"

    def lu_by_id(self, lu_id: str) -> LexicalUnit | None:
        return self._lus_by_id.get(lu_id)

    def lus(self) -> list[LexicalUnit]:
        return list(self._lus_by_key.values())

    def frame_of_lu(self, lu_id: str) -> Frame:
        lu = self._lus_by_id.get(lu_id)
        if lu is None:
            raise DanglingRefError(f"unknown LU id {lu_id!r}")
        return self._frames_by_id[lu.frame_id]

    def requirement(self, frame: Frame, cap: int = DEFAULT_CORE_FE_CAP) -> CoreRequirement:
        """Cached :func:`minimal_core_requirement` (metrics call it per AS)."""
        req = self._requirement_cache.get(frame.id)
        if req is None:
            req = minimal_core_requirement(frame, cap=cap)
            self._requirement_cache[frame.id] = req
        return req


# -- loading ----------------------------------------------------------------


def _parse_fe(raw: object, frame_name: str) -> FrameElement:
    if not isinstance(raw, dict) or "name" not in raw or "coreness" not in raw:
        raise SchemaError(f"frame {frame_name!r}: FE must be an object with name and coreness")
    try:
        coreness = Coreness(raw["coreness"])
    except ValueError:
        raise SchemaError(
            f"frame {frame_name!r}: bad coreness {raw['coreness']!r} (core|non_core)"
        ) from None
    return FrameElement(
        name=str(raw["name"]), coreness=coreness, definition=str(raw.get("definition", ""))
    )


def _parse_frame(raw: object, frame_id: str) -> Frame:
    if not isinstance(raw, dict) or "name" not in raw:
        raise SchemaError("frame must be an object with a name")
    name = str(raw["name"])
    fes_raw = raw.get("fes", [])
    if not isinstance(fes_raw, list):
        raise SchemaError(f"frame {name!r}: fes must be a list")
    fes = tuple(_parse_fe(fe, name) for fe in fes_raw)

    seen: set[str] = set()
    for fe in fes:
        if fe.name in seen:
            raise DuplicateError(f"frame {name!r}: FE {fe.name!r} repeated")
        seen.add(fe.name)
    core = {fe.name for fe in fes if fe.coreness is Coreness.CORE}

    def check_core_ref(fe_name: str, where: str) -> None:
        if fe_name not in seen:
            raise DanglingRefError(f"frame {name!r}: {where} names unknown FE {fe_name!r}")
        if fe_name not in core:
            raise DanglingRefError(f"frame {name!r}: {where} names non-core FE {fe_name!r}")

    excludes: set[frozenset[str]] = set()
    for pair in raw.get("excludes", []):
        if not isinstance(pair, list) or len(pair) != 2 or pair[0] == pair[1]:
            raise SchemaError(f"frame {name!r}: excludes entry must pair two distinct FEs")
        for fe_name in pair:
            check_core_ref(str(fe_name), "excludes")
        excludes.add(frozenset(str(p) for p in pair))

    core_sets: list[frozenset[str]] = []
    for cs in raw.get("core_sets", []):
        if not isinstance(cs, list) or len(set(cs)) < 2:
            raise SchemaError(f"frame {name!r}: core_set must hold at least two distinct FEs")
        for fe_name in cs:
            check_core_ref(str(fe_name), "core_set")
        core_sets.append(frozenset(str(m) for m in cs))

    return Frame(
        id=frame_id,
        name=name,
        definition=str(raw.get("definition", "")),
        fes=fes,
        excludes=frozenset(excludes),
        core_sets=tuple(core_sets),
    )


def load_framebank(source: BinaryIO | bytes) -> FrameBank:
    """Parse and validate a frame-inventory JSON file.

    Raises SchemaError on malformed input, DanglingRefError when excludes or
    core_sets reference a non-core or unknown FE (or an LU names an unknown
    frame), DuplicateError on repeated frame names or LU triples.
    """
    data = source if isinstance(source, bytes) else source.read()
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SchemaError(f"not valid UTF-8 JSON: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("frames", []), list):
        raise SchemaError("top level must be an object with a frames list")

    bank = FrameBank()
    for i, raw in enumerate(doc.get("frames", []), start=1):
        bank.add_frame(_parse_frame(raw, frame_id=f"f{i:04d}"))

    lus_raw = doc.get("lus", [])
    if not isinstance(lus_raw, list):
        raise SchemaError("lus must be a list")
    for raw in lus_raw:
        if not isinstance(raw, dict) or not {"lemma", "pos", "frame"} <= raw.keys():
            raise SchemaError("LU must be an object with lemma, pos and frame")
        pos = str(raw["pos"])
        if pos not in UPOS_TAGS:
            raise SchemaError(f"LU pos {pos!r} is not a UPOS tag")
        frame = bank.frame_by_name(str(raw["frame"]))
        if frame is None:
            raise DanglingRefError(f"LU names unknown frame {raw['frame']!r}")
        try:
            provenance = LuProvenance(raw.get("provenance", "curated"))
        except ValueError:
            raise SchemaError(f"bad LU provenance {raw['provenance']!r}") from None
        lu = LexicalUnit(
            id=bank.next_lu_id(),
            lemma=str(raw["lemma"]),
            pos=pos,
            frame_id=frame.id,
            provenance=provenance,
        )
        bank.add_lu(lu)
    return bank


def dump_framebank(bank: FrameBank) -> bytes:
    """Serialize a bank back to the input JSON format (round-trips losslessly;
    LU provenance is kept as an extra key the loader accepts)."""
    frames = []
    for frame in bank.frames():
        frames.append(
            {
                "name": frame.name,
                "definition": frame.definition,
                "fes": [
                    {"name": fe.name, "coreness": fe.coreness.value, "definition": fe.definition}
                    for fe in frame.fes
                ],
                "excludes": sorted(sorted(pair) for pair in frame.excludes),
                "core_sets": [sorted(cs) for cs in frame.core_sets],
            }
        )
    frames_by_id = {f.id: f for f in bank.frames()}
    lus = [
        {
            "lemma": lu.lemma,
            "pos": lu.pos,
            "frame": frames_by_id[lu.frame_id].name,
            "provenance": lu.provenance.value,
        }
        for lu in bank.lus()
    ]
    return json.dumps({"frames": frames, "lus": lus}, ensure_ascii=False, indent=1).encode("utf-8")


# -- minimal core requirement -------------------------------------------------


def coverage_neighbors(frame: Frame) -> dict[str, frozenset[str]]:
    """For each core FE, the set of core FEs its annotation covers: itself,
    its excludes partners and its core-set co-members."""
    core = frame.core_fe_names()
    neighbors: dict[str, set[str]] = {name: {name} for name in core}
    for pair in frame.excludes:
        a, b = tuple(pair)
        neighbors[a].add(b)
        neighbors[b].add(a)
    for cs in frame.core_sets:
        for name in cs:
            neighbors[name] |= cs
    return {name: frozenset(cov) for name, cov in neighbors.items()}


def covers_all_core(frame: Frame, fe_names: Iterable[str]) -> bool:
    """True when annotating ``fe_names`` covers every core FE of the frame."""
    core = frame.core_fe_names()
    neighbors = coverage_neighbors(frame)
    covered: set[str] = set()
    for name in fe_names:
        covered |= neighbors.get(name, frozenset())
    return covered >= core


def minimal_core_requirement(frame: Frame, cap: int = DEFAULT_CORE_FE_CAP) -> CoreRequirement:
    """Exact smallest set of core FEs whose annotation covers all core FEs.

    Exhaustive search over subsets of core FEs in increasing size order; with
    the candidates of each size enumerated in lexicographic order, the first
    hit is the lexicographically smallest witness of minimal size.
    """
    core = sorted(frame.core_fe_names())
    n = len(core)
    if n > cap:
        raise TooManyCoreFEsError(f"frame {frame.name!r} has {n} core FEs (cap {cap})")
    if n == 0:
        return CoreRequirement(count=0, witness=frozenset())

    neighbors = coverage_neighbors(frame)
    full = frozenset(core)
    for k in range(1, n + 1):
        for subset in itertools.combinations(core, k):
            covered: set[str] = set()
            for name in subset:
                covered |= neighbors[name]
            if covered >= full:
                return CoreRequirement(count=k, witness=frozenset(subset))
    # Unreachable: the full core set always covers itself.
    return CoreRequirement(count=n, witness=full)


# -- lexical-unit lookup ------------------------------------------------------


def lookup_lu(bank: FrameBank, lemma: str, pos: str, frame: Frame) -> LexicalUnit | None:
    """The unique LU for (lemma, pos, frame), or None."""
    return bank._lus_by_key.get((lemma, pos, frame.id))


def ensure_lu(bank: FrameBank, lemma: str, pos: str, frame: Frame) -> LexicalUnit:
    """Return the existing LU for the triple or create an AUTO_CREATED one.

    Idempotent: a second call with the same arguments returns the same LU id.
    Single-writer: callers serialize through the store.
    """
    if bank.frame_by_id(frame.id) is None:
        raise UnknownFrameError(f"frame {frame.name!r} not in bank")
    existing = lookup_lu(bank, lemma, pos, frame)
    if existing is not None:
        return existing
    lu = LexicalUnit(
        id=bank.next_lu_id(),
        lemma=lemma,
        pos=pos,
        frame_id=frame.id,
        provenance=LuProvenance.AUTO_CREATED,
    )
    bank.add_lu(lu)
    return lu


def load_framebank_file(path: str) -> FrameBank:
    with io.open(path, "rb") as fh:
        return load_framebank(fh)
