import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import (  # noqa: E402
    bank_with,
    doc_of,
    make_frame,
    self_motion_frame,
    sentence_from_specs,
)


@pytest.fixture
def self_motion():
    return self_motion_frame()


@pytest.fixture
def small_bank():
    """Self_motion plus two plain frames and one curated LU."""
    bank = bank_with(
        self_motion_frame("f0001"),
        make_frame("f0002", "Motion", core=["Theme", "Goal", "Source", "Path"],
                   core_sets=[["Goal", "Source", "Path"]]),
        make_frame("f0003", "Commerce_sell", core=["Seller", "Goods"], non_core=["Buyer"]),
    )
    from framewright.framebank import LexicalUnit, LuProvenance

    bank.add_lu(
        LexicalUnit(id=bank.next_lu_id(), lemma="correr", pos="VERB",
                    frame_id="f0001", provenance=LuProvenance.CURATED)
    )
    return bank


@pytest.fixture
def sentence_joao():
    return sentence_from_specs(
        "s1",
        "d1",
        [
            ("João", "João", "PROPN"),
            ("corre", "correr", "VERB"),
            ("para", "para", "ADP"),
            ("a", "a", "DET"),
            ("escola", "escola", "NOUN"),
        ],
    )


@pytest.fixture
def doc_joao(sentence_joao):
    return doc_of("d1", sentence_joao)
