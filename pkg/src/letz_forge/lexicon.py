"""Canonical lexicon model: parsing, POS filtering, noun vocabulary.

Input is the line-delimited record format described in the README: one
JSON object per line with fields `headword`, `pos` and `senses`, where a
sense groups synonyms, per-language translations and example sentences.
Records that do not fit the schema are rejected with the line number and
field path, never skipped silently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO, Iterable

from .errors import ParseError, ValidationError

NORMALIZED_POS_TAGS = ("NOUN", "VERB", "ADJ", "ADV", "OTHER")
NOUN = "NOUN"


@dataclass(frozen=True)
class Sense:
    """One distinct meaning of a headword."""

    sense_id: str
    synonyms: tuple[str, ...] = ()
    translations: dict[str, tuple[str, ...]] = field(default_factory=dict)
    examples: tuple[str, ...] = ()


@dataclass(frozen=True)
class DictionaryEntry:
    """A headword with its part of speech and ordered senses."""

    headword: str
    pos: str
    senses: tuple[Sense, ...] = ()

    def __post_init__(self) -> None:
        if not self.headword.strip():
            raise ValidationError("entry headword must be non-empty")
        if self.pos not in NORMALIZED_POS_TAGS:
            raise ValidationError(
                f"entry pos must be one of {NORMALIZED_POS_TAGS}, got {self.pos!r}"
            )
        seen = set()
        for sense in self.senses:
            if sense.sense_id in seen:
                raise ValidationError(
                    f"duplicate sense_id {sense.sense_id!r} in entry {self.headword!r}"
                )
            seen.add(sense.sense_id)


@dataclass(frozen=True)
class NounVocabulary:
    """Deduplicated noun headwords in code-point lexicographic order."""

    words: tuple[str, ...]

    def __contains__(self, word: str) -> bool:
        return word in set(self.words)

    def __len__(self) -> int:
        return len(self.words)


def normalize_pos(tag: str, pos_map: dict[str, str] | None = None) -> str:
    """Map a source POS tag onto the closed normalized tag set.

    Lookup order: explicit mapping, then case-insensitive match against the
    normalized set itself. Anything else becomes OTHER so unknown tags can
    never slip into the noun vocabulary.
    """
    if pos_map and tag in pos_map:
        mapped = pos_map[tag]
        if mapped not in NORMALIZED_POS_TAGS:
            raise ValidationError(
                f"pos map target {mapped!r} for tag {tag!r} is not a normalized tag"
            )
        return mapped
    upper = tag.strip().upper()
    if upper in NORMALIZED_POS_TAGS:
        return upper
    return "OTHER"


def _require(condition: bool, message: str, line: int, fieldpath: str) -> None:
    if not condition:
        raise ParseError(message, line=line, field=fieldpath)


def _parse_string_list(value: object, line: int, fieldpath: str) -> tuple[str, ...]:
    _require(isinstance(value, list), "expected an array of strings", line, fieldpath)
    out = []
    for i, item in enumerate(value):
        _require(isinstance(item, str), "expected a string", line, f"{fieldpath}[{i}]")
        stripped = item.strip()
        _require(bool(stripped), "string must be non-empty after trimming", line, f"{fieldpath}[{i}]")
        out.append(stripped)
    return tuple(out)


def _parse_sense(obj: object, headword: str, ordinal: int, line: int) -> Sense:
    path = f"senses[{ordinal - 1}]"
    _require(isinstance(obj, dict), "expected an object", line, path)
    assert isinstance(obj, dict)
    allowed = {"sense_id", "synonyms", "translations", "examples"}
    unknown = set(obj) - allowed
    _require(not unknown, f"unknown field(s) {sorted(unknown)}", line, path)

    sense_id = obj.get("sense_id", f"{headword}#{ordinal}")
    _require(isinstance(sense_id, str) and bool(sense_id.strip()), "sense_id must be a non-empty string", line, f"{path}.sense_id")

    synonyms = _parse_string_list(obj.get("synonyms", []), line, f"{path}.synonyms")

    translations_obj = obj.get("translations", {})
    _require(isinstance(translations_obj, dict), "expected an object mapping language code to strings", line, f"{path}.translations")
    assert isinstance(translations_obj, dict)
    translations = {}
    for lang, words in translations_obj.items():
        _require(isinstance(lang, str) and bool(lang.strip()), "language code must be a non-empty string", line, f"{path}.translations")
        translations[lang] = _parse_string_list(words, line, f"{path}.translations.{lang}")

    examples_raw = obj.get("examples", [])
    _require(isinstance(examples_raw, list), "expected an array of strings", line, f"{path}.examples")
    examples = []
    for i, ex in enumerate(examples_raw):
        _require(isinstance(ex, str), "expected a string", line, f"{path}.examples[{i}]")
        _require(bool(ex.strip()), "example sentence must be non-empty", line, f"{path}.examples[{i}]")
        examples.append(ex)
    return Sense(
        sense_id=sense_id.strip(),
        synonyms=synonyms,
        translations=translations,
        examples=tuple(examples),
    )


def parse_dictionary(
    stream: IO[str] | Iterable[str],
    pos_map: dict[str, str] | None = None,
) -> list[DictionaryEntry]:
    """Parse line-delimited lexicon records into entries, order-preserving.

    When pos_map is given, source POS tags are normalized through it;
    otherwise tags must already belong to the normalized set (unknown tags
    still degrade to OTHER rather than erroring, so a lexicon can never
    gain nouns by accident).
    """
    entries = []
    for line_no, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line=line_no) from exc
        _require(isinstance(record, dict), "expected a JSON object", line_no, "")
        assert isinstance(record, dict)
        unknown = set(record) - {"headword", "pos", "senses"}
        _require(not unknown, f"unknown field(s) {sorted(unknown)}", line_no, "")

        headword = record.get("headword")
        _require(isinstance(headword, str), "headword must be a string", line_no, "headword")
        assert isinstance(headword, str)
        headword = headword.strip()
        _require(bool(headword), "headword must be non-empty after trimming", line_no, "headword")

        pos_raw = record.get("pos")
        _require(isinstance(pos_raw, str) and bool(pos_raw.strip()), "pos must be a non-empty string", line_no, "pos")
        assert isinstance(pos_raw, str)
        pos = normalize_pos(pos_raw, pos_map)

        senses_raw = record.get("senses", [])
        _require(isinstance(senses_raw, list), "senses must be an array", line_no, "senses")
        senses = tuple(
            _parse_sense(obj, headword, ordinal, line_no)
            for ordinal, obj in enumerate(senses_raw, start=1)
        )
        try:
            entries.append(DictionaryEntry(headword=headword, pos=pos, senses=senses))
        except ValidationError as exc:
            raise ParseError(str(exc), line=line_no) from exc
    return entries


def entry_to_record(entry: DictionaryEntry) -> dict:
    """Plain-dict form of an entry, matching the on-disk schema."""
    return {
        "headword": entry.headword,
        "pos": entry.pos,
        "senses": [
            {
                "sense_id": sense.sense_id,
                "synonyms": list(sense.synonyms),
                "translations": {lang: list(words) for lang, words in sense.translations.items()},
                "examples": list(sense.examples),
            }
            for sense in entry.senses
        ],
    }


def serialize_entries(entries: Iterable[DictionaryEntry]) -> str:
    """Render entries back to the canonical line-delimited format."""
    lines = [
        json.dumps(entry_to_record(entry), ensure_ascii=False, separators=(",", ":"))
        for entry in entries
    ]
    return "".join(line + "\n" for line in lines)


def filter_nouns(entries: Iterable[DictionaryEntry]) -> list[DictionaryEntry]:
    """Keep exactly the NOUN entries, preserving input order."""
    return [entry for entry in entries if entry.pos == NOUN]


def build_noun_vocabulary(entries: Iterable[DictionaryEntry]) -> NounVocabulary:
    """Deduplicated, code-point-sorted headword list of the noun entries.

    Non-noun entries are ignored, so the call is safe on both filtered and
    unfiltered entry lists.
    """
    return NounVocabulary(
        words=tuple(sorted({entry.headword for entry in entries if entry.pos == NOUN}))
    )
