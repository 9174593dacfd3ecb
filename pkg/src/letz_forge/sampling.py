"""Topic-relevance sample construction from a noun lexicon.

Positive samples pair each example sentence of a noun sense with that
sense's candidate topic words: its synonyms, or its translations when the
pipeline runs in translation mode. The headword itself is never used as a
label, and candidates that are orthographic variants of the headword are
discarded. Negatives reuse each positive's sentence with a random noun
drawn from the whole vocabulary, rejecting any draw that is similar to a
word of the sentence or to the positive's own label or headword.

All randomness is derived per positive from the run seed, so output is
identical regardless of execution order or worker count.
"""

from __future__ import annotations

import hashlib
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from .errors import ConfigError, GenerationError, ValidationError
from .lexicon import NOUN, DictionaryEntry, NounVocabulary
from .similarity import SimilarityConfig, fold, is_similar, normalized_distance, similar_to_any_token, tokenize

logger = logging.getLogger(__name__)

MODE_SYNONYM = "synonym"
MODE_TRANSLATION = "translation"

SOURCE_SYNONYM = "synonym"
SOURCE_TRANSLATION = "translation"
SOURCE_NEGATIVE = "negative"

DEFAULT_TRANSLATION_LANGUAGES = ("de", "fr", "en")
_MAX_SEED = 2**64


@dataclass(frozen=True)
class Provenance:
    """Where a sample came from: the originating entry, sense and route."""

    headword: str
    sense_id: str
    source: str

    def __post_init__(self) -> None:
        if self.source not in (SOURCE_SYNONYM, SOURCE_TRANSLATION, SOURCE_NEGATIVE):
            raise ValidationError(f"invalid provenance source {self.source!r}")


@dataclass(frozen=True)
class LabeledSample:
    """(sentence, candidate topic word, relevance class) with provenance."""

    text: str
    label: str
    cls: int
    provenance: Provenance

    def __post_init__(self) -> None:
        if self.cls not in (0, 1):
            raise ValidationError(f"sample class must be 0 or 1, got {self.cls}")
        if not self.text:
            raise ValidationError("sample text must be non-empty")
        if not self.label:
            raise ValidationError("sample label must be non-empty")
        if self.cls == 1 and self.provenance.source not in (SOURCE_SYNONYM, SOURCE_TRANSLATION):
            raise ValidationError("class-1 samples must come from synonyms or translations")
        if self.cls == 0 and self.provenance.source != SOURCE_NEGATIVE:
            raise ValidationError("class-0 samples must come from negative sampling")


@dataclass(frozen=True)
class GenerationConfig:
    """Knobs of the construction procedure."""

    mode: str = MODE_SYNONYM
    translation_languages: tuple[str, ...] = DEFAULT_TRANSLATION_LANGUAGES
    similarity: SimilarityConfig = field(default_factory=SimilarityConfig)
    negatives_per_positive: int = 1
    max_negative_resamples: int = 100
    seed: int = 0

    def __post_init__(self) -> None:
        if self.mode not in (MODE_SYNONYM, MODE_TRANSLATION):
            raise ConfigError(f"mode must be {MODE_SYNONYM!r} or {MODE_TRANSLATION!r}, got {self.mode!r}")
        if self.negatives_per_positive < 1:
            raise ConfigError("negatives_per_positive must be >= 1")
        if self.max_negative_resamples < 1:
            raise ConfigError("max_negative_resamples must be >= 1")
        if not 0 <= self.seed < _MAX_SEED:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.mode == MODE_TRANSLATION and not self.translation_languages:
            raise ConfigError("translation mode requires at least one translation language")


def _candidate_labels(sense, cfg: GenerationConfig) -> list[str]:
    if cfg.mode == MODE_SYNONYM:
        return list(sense.synonyms)
    labels = []
    for lang in cfg.translation_languages:
        labels.extend(sense.translations.get(lang, ()))
    return labels


def generate_positives(entry: DictionaryEntry, cfg: GenerationConfig) -> list[LabeledSample]:
    """Class-1 samples for one noun entry.

    Order is deterministic: senses, then example sentences, then candidate
    labels. A candidate is dropped when it is the headword itself or
    similar to it under the configured cutoff.
    """
    if entry.pos != NOUN:
        raise ValidationError(f"positive generation requires a NOUN entry, got {entry.pos} for {entry.headword!r}")
    source = SOURCE_SYNONYM if cfg.mode == MODE_SYNONYM else SOURCE_TRANSLATION
    samples = []
    for sense in entry.senses:
        labels = [
            label
            for label in _candidate_labels(sense, cfg)
            if not is_similar(label, entry.headword, cfg.similarity)
        ]
        if not labels:
            continue
        for sentence in sense.examples:
            for label in labels:
                samples.append(
                    LabeledSample(
                        text=sentence,
                        label=label,
                        cls=1,
                        provenance=Provenance(entry.headword, sense.sense_id, source),
                    )
                )
    return samples


def _slot_rng(seed: int, positive_index: int) -> random.Random:
    # Stable across platforms and processes, unlike hash().
    digest = hashlib.sha256(f"{seed}:{positive_index}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _negatives_for(
    positive: LabeledSample,
    positive_index: int,
    vocab: NounVocabulary,
    cfg: GenerationConfig,
) -> list[LabeledSample]:
    rng = _slot_rng(cfg.seed, positive_index)
    sim = cfg.similarity
    blocked = {fold(positive.label, sim), fold(positive.provenance.headword, sim)}
    negatives = []
    for _ in range(cfg.negatives_per_positive):
        rejections = 0
        while True:
            candidate = vocab.words[rng.randrange(len(vocab.words))]
            if fold(candidate, sim) not in blocked and not similar_to_any_token(candidate, positive.text, sim):
                break
            rejections += 1
            if rejections >= cfg.max_negative_resamples:
                raise GenerationError(
                    f"exhausted {cfg.max_negative_resamples} resamples looking for a negative "
                    f"label for sentence {positive.text!r}; vocabulary too small or similarity "
                    f"threshold too aggressive"
                )
        negatives.append(
            LabeledSample(
                text=positive.text,
                label=candidate,
                cls=0,
                provenance=replace(positive.provenance, source=SOURCE_NEGATIVE),
            )
        )
    return negatives


def generate_negatives(
    positives: list[LabeledSample],
    vocab: NounVocabulary,
    cfg: GenerationConfig,
    jobs: int = 1,
) -> list[LabeledSample]:
    """Class-0 companions: negatives_per_positive per positive, in order.

    Each negative reuses its positive's sentence with a label drawn
    uniformly (seeded per positive) from the vocabulary; draws similar to
    any sentence token, or folding equal to the positive's label or
    headword, are rejected and redrawn up to the configured cap.
    """
    if not vocab.words:
        raise ValidationError("negative sampling requires a non-empty vocabulary")
    if any(p.cls != 1 for p in positives):
        raise ValidationError("negative sampling expects class-1 positives only")
    if jobs > 1 and len(positives) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_positive = list(
                pool.map(
                    _negatives_for,
                    positives,
                    range(len(positives)),
                    [vocab] * len(positives),
                    [cfg] * len(positives),
                )
            )
    else:
        per_positive = [
            _negatives_for(positive, index, vocab, cfg)
            for index, positive in enumerate(positives)
        ]
    return [negative for group in per_positive for negative in group]


@dataclass(frozen=True)
class BuildReport:
    """Counts recorded in the dataset's metadata sidecar."""

    positives: int
    negatives: int
    duplicate_positives_removed: int


def dedupe_positives(positives: list[LabeledSample]) -> tuple[list[LabeledSample], int]:
    """Drop repeated (text, label) pairs, keeping the first occurrence.

    Multiple senses of one headword can attach the same label to the same
    sentence; only one copy is kept and the removal count is reported.
    """
    seen: set[tuple[str, str]] = set()
    kept = []
    for sample in positives:
        key = (sample.text, sample.label)
        if key in seen:
            continue
        seen.add(key)
        kept.append(sample)
    return kept, len(positives) - len(kept)


def build_dataset(
    entries: list[DictionaryEntry],
    vocab: NounVocabulary,
    cfg: GenerationConfig,
    jobs: int = 1,
) -> list[LabeledSample]:
    """All positives followed by all negatives, deterministically ordered."""
    samples, _ = build_dataset_with_report(entries, vocab, cfg, jobs=jobs)
    return samples


def build_dataset_with_report(
    entries: list[DictionaryEntry],
    vocab: NounVocabulary,
    cfg: GenerationConfig,
    jobs: int = 1,
) -> tuple[list[LabeledSample], BuildReport]:
    """build_dataset plus the counts that go into the metadata sidecar."""
    if jobs > 1 and len(entries) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_entry = list(pool.map(lambda e: generate_positives(e, cfg), entries))
    else:
        per_entry = [generate_positives(entry, cfg) for entry in entries]
    positives = [sample for group in per_entry for sample in group]
    positives, removed = dedupe_positives(positives)
    if removed:
        logger.info("dropped %d duplicate positive (text, label) pairs", removed)
    negatives = generate_negatives(positives, vocab, cfg, jobs=jobs) if positives else []
    report = BuildReport(
        positives=len(positives),
        negatives=len(negatives),
        duplicate_positives_removed=removed,
    )
    return positives + negatives, report


def find_invariant_violations(samples: list[LabeledSample], sim: SimilarityConfig) -> list[str]:
    """Re-check the generation contract on a (possibly deserialized) dataset.

    Returns human-readable violation messages; an empty list means the
    dataset is consistent with the construction rules. The checks mirror
    generation but are evaluated from scratch on the stored samples.
    """
    violations = []
    for i, sample in enumerate(samples):
        headword = sample.provenance.headword
        if sample.cls == 1:
            if fold(sample.label, sim) == fold(headword, sim):
                violations.append(
                    f"sample {i}: positive label {sample.label!r} equals its headword {headword!r} after folding"
                )
            elif is_similar(sample.label, headword, sim):
                violations.append(
                    f"sample {i}: positive label {sample.label!r} is an orthographic variant of "
                    f"headword {headword!r} (normalized distance "
                    f"{normalized_distance(sample.label, headword, sim):.4f})"
                )
        else:
            if fold(sample.label, sim) == fold(headword, sim):
                violations.append(
                    f"sample {i}: negative label {sample.label!r} equals the sentence's headword {headword!r}"
                )
            for token in tokenize(sample.text):
                if is_similar(sample.label, token, sim):
                    violations.append(
                        f"sample {i}: negative label {sample.label!r} is similar to sentence token {token!r}"
                    )
                    break
    return violations
