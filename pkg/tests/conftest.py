"""Shared fixtures: the reference lexicon and CLI workspace builders."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from letz_forge import DictionaryEntry, Sense, build_noun_vocabulary

SENTENCE_MOMENT = "Gedëlleg dech a waart op de richtegen Abléck!"
SENTENCE_DENT = "Däin Auto huet hannen um Parechoc eng Téitsch."
SENTENCE_CHOICE = "Bei esou vill Kandidate muss eng Auswiel gemaach ginn."
SENTENCE_ADDRESS = "Ech schécken der d'Adress vun engem lëschtege Site."

# Seed for which the drawn negatives pair "Libell" with the dent sentence
# and "Schrauwenzéier" with the address sentence (found by search, frozen).
REFERENCE_SEED = 48

REFERENCE_ROWS = (
    (SENTENCE_MOMENT, "Moment", 1),
    (SENTENCE_DENT, "Libell", 0),
    (SENTENCE_CHOICE, "Selektioun", 1),
    (SENTENCE_ADDRESS, "Schrauwenzéier", 0),
)


def make_reference_entries() -> list[DictionaryEntry]:
    return [
        DictionaryEntry("Abléck", "NOUN", (Sense("Abléck#1", synonyms=("Moment",), examples=(SENTENCE_MOMENT,)),)),
        DictionaryEntry("Téitsch", "NOUN", (Sense("Téitsch#1", synonyms=("Bëls",), examples=(SENTENCE_DENT,)),)),
        DictionaryEntry("Auswiel", "NOUN", (Sense("Auswiel#1", synonyms=("Selektioun",), examples=(SENTENCE_CHOICE,)),)),
        DictionaryEntry("Adress", "NOUN", (Sense("Adress#1", synonyms=("Uschrëft",), examples=(SENTENCE_ADDRESS,)),)),
        DictionaryEntry("Libell", "NOUN", ()),
        DictionaryEntry("Schrauwenzéier", "NOUN", ()),
    ]


RAW_DICTIONARY_TEXT = "\n".join(
    json.dumps(record, ensure_ascii=False)
    for record in [
        {"headword": "Abléck", "pos": "Substantiv", "senses": [{"synonyms": ["Moment"], "examples": [SENTENCE_MOMENT]}]},
        {"headword": "Téitsch", "pos": "Substantiv", "senses": [{"synonyms": ["Bëls"], "examples": [SENTENCE_DENT]}]},
        {"headword": "Auswiel", "pos": "Substantiv", "senses": [{"synonyms": ["Selektioun"], "examples": [SENTENCE_CHOICE]}]},
        {"headword": "Adress", "pos": "Substantiv", "senses": [{"synonyms": ["Uschrëft"], "examples": [SENTENCE_ADDRESS]}]},
        {"headword": "Libell", "pos": "Substantiv", "senses": []},
        {"headword": "Schrauwenzéier", "pos": "Substantiv", "senses": []},
        {"headword": "lafen", "pos": "Verb", "senses": [{"synonyms": ["rennen"], "examples": ["Si laft all Moien."]}]},
    ]
) + "\n"

POS_MAP_TEXT = json.dumps({"Substantiv": "NOUN", "Verb": "VERB", "Adjektiv": "ADJ"}) + "\n"


@pytest.fixture
def reference_entries() -> list[DictionaryEntry]:
    return make_reference_entries()


@pytest.fixture
def reference_vocab(reference_entries):
    return build_noun_vocabulary(reference_entries)


@pytest.fixture
def cli_workspace(tmp_path: Path) -> Path:
    """Directory holding the raw dictionary, POS map and a config file."""
    (tmp_path / "raw.jsonl").write_text(RAW_DICTIONARY_TEXT, encoding="utf-8")
    (tmp_path / "posmap.json").write_text(POS_MAP_TEXT, encoding="utf-8")
    (tmp_path / "config.json").write_text(
        json.dumps({"seed": REFERENCE_SEED, "generation": {"mode": "synonym"}}) + "\n",
        encoding="utf-8",
    )
    return tmp_path


ACCEPTANCE_PREFIX = "tests/test_acceptance.py::"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    rows = []
    for outcome, word in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py::" in nodeid and getattr(report, "when", "call") == "call":
                name = nodeid.split("::")[-1]
                rows.append((name, word))
    if not rows:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, word in sorted(rows):
        terminalreporter.write_line(f"{word} {name}")
