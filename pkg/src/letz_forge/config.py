"""Pipeline configuration: JSON file loading, validation, stable hashing.

The file is a single JSON object with optional sections. Unknown keys are
rejected at every level so typos fail loudly instead of silently falling
back to defaults.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .datasets import DEFAULT_RATIOS
from .errors import ConfigError
from .sampling import (
    DEFAULT_TRANSLATION_LANGUAGES,
    MODE_SYNONYM,
    MODE_TRANSLATION,
    GenerationConfig,
)
from .similarity import SimilarityConfig


@dataclass(frozen=True)
class IngestConfig:
    """Dictionary ingestion options."""

    drop_multiword_headwords: bool = False


@dataclass(frozen=True)
class SplitConfig:
    """Partitioning options."""

    ratios: tuple[float, float, float] = DEFAULT_RATIOS
    group_by_headword: bool = False

    def __post_init__(self) -> None:
        if len(self.ratios) != 3:
            raise ConfigError(f"split.ratios must have 3 entries, got {len(self.ratios)}")
        if any(r <= 0 for r in self.ratios):
            raise ConfigError(f"split.ratios must be positive, got {self.ratios}")
        if abs(sum(self.ratios) - 1.0) > 1e-9:
            raise ConfigError(f"split.ratios must sum to 1, got {self.ratios}")


@dataclass(frozen=True)
class ScorerConfig:
    """Remote scoring endpoint options."""

    endpoint: str = ""
    timeout_ms: int = 10_000
    max_retries: int = 2
    backoff_ms: int = 100

    def __post_init__(self) -> None:
        if self.timeout_ms <= 0:
            raise ConfigError(f"scorer.timeout_ms must be positive, got {self.timeout_ms}")
        if self.max_retries < 0:
            raise ConfigError(f"scorer.max_retries must be >= 0, got {self.max_retries}")
        if self.backoff_ms < 0:
            raise ConfigError(f"scorer.backoff_ms must be >= 0, got {self.backoff_ms}")


@dataclass(frozen=True)
class PipelineConfig:
    """Effective configuration for every pipeline stage."""

    seed: int = 0
    ingest: IngestConfig = field(default_factory=IngestConfig)
    similarity: SimilarityConfig = field(default_factory=SimilarityConfig)
    generation_mode: str = MODE_SYNONYM
    translation_languages: tuple[str, ...] = DEFAULT_TRANSLATION_LANGUAGES
    negatives_per_positive: int = 1
    max_negative_resamples: int = 100
    split: SplitConfig = field(default_factory=SplitConfig)
    scorer: ScorerConfig = field(default_factory=ScorerConfig)

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must fit in an unsigned 64-bit integer, got {self.seed}")
        if self.generation_mode not in (MODE_SYNONYM, MODE_TRANSLATION):
            raise ConfigError(
                f"generation.mode must be {MODE_SYNONYM!r} or {MODE_TRANSLATION!r},"
                f" got {self.generation_mode!r}"
            )

    def generation(self) -> GenerationConfig:
        """Bundle the generation-facing fields into one value."""
        return GenerationConfig(
            mode=self.generation_mode,
            translation_languages=self.translation_languages,
            similarity=self.similarity,
            negatives_per_positive=self.negatives_per_positive,
            max_negative_resamples=self.max_negative_resamples,
            seed=self.seed,
        )

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "ingest": {"drop_multiword_headwords": self.ingest.drop_multiword_headwords},
            "similarity": {
                "threshold": self.similarity.threshold,
                "case_fold": self.similarity.case_fold,
                "strip_diacritics": self.similarity.strip_diacritics,
                "use_raw_distance": self.similarity.use_raw_distance,
                "raw_threshold": self.similarity.raw_threshold,
            },
            "generation": {
                "mode": self.generation_mode,
                "translation_languages": list(self.translation_languages),
                "negatives_per_positive": self.negatives_per_positive,
                "max_negative_resamples": self.max_negative_resamples,
            },
            "split": {
                "ratios": list(self.split.ratios),
                "group_by_headword": self.split.group_by_headword,
            },
            "scorer": {
                "endpoint": self.scorer.endpoint,
                "timeout_ms": self.scorer.timeout_ms,
                "max_retries": self.scorer.max_retries,
                "backoff_ms": self.scorer.backoff_ms,
            },
        }


def _require_keys(section: str, data: dict, allowed: set[str]) -> None:
    unknown = set(data) - allowed
    if unknown:
        where = f" in section {section!r}" if section else ""
        raise ConfigError(f"unknown configuration key(s){where}: {sorted(unknown)}")


def _expect(section: str, key: str, value: object, kind: type, type_name: str) -> object:
    if isinstance(value, bool) and kind is not bool:
        raise ConfigError(f"{section}.{key} must be {type_name}, got a boolean")
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    if not isinstance(value, kind):
        raise ConfigError(f"{section}.{key} must be {type_name}, got {value!r}")
    return value


def config_from_dict(data: dict) -> PipelineConfig:
    """Build a validated PipelineConfig from parsed JSON."""
    if not isinstance(data, dict):
        raise ConfigError("configuration root must be a JSON object")
    _require_keys("", data, {"seed", "ingest", "similarity", "generation", "split", "scorer"})

    kwargs: dict = {}
    if "seed" in data:
        kwargs["seed"] = _expect("", "seed", data["seed"], int, "an integer")

    ingest = data.get("ingest", {})
    _require_keys("ingest", _expect("", "ingest", ingest, dict, "an object"), {"drop_multiword_headwords"})
    if "drop_multiword_headwords" in ingest:
        kwargs["ingest"] = IngestConfig(
            drop_multiword_headwords=_expect(
                "ingest", "drop_multiword_headwords", ingest["drop_multiword_headwords"], bool, "a boolean"
            )
        )

    similarity = data.get("similarity", {})
    _require_keys(
        "similarity",
        _expect("", "similarity", similarity, dict, "an object"),
        {"threshold", "case_fold", "strip_diacritics", "use_raw_distance", "raw_threshold"},
    )
    sim_kwargs: dict = {}
    if "threshold" in similarity:
        sim_kwargs["threshold"] = _expect("similarity", "threshold", similarity["threshold"], float, "a number")
    for key in ("case_fold", "strip_diacritics", "use_raw_distance"):
        if key in similarity:
            sim_kwargs[key] = _expect("similarity", key, similarity[key], bool, "a boolean")
    if "raw_threshold" in similarity:
        sim_kwargs["raw_threshold"] = _expect(
            "similarity", "raw_threshold", similarity["raw_threshold"], int, "an integer"
        )
    if sim_kwargs:
        kwargs["similarity"] = SimilarityConfig(**sim_kwargs)

    generation = data.get("generation", {})
    _require_keys(
        "generation",
        _expect("", "generation", generation, dict, "an object"),
        {"mode", "translation_languages", "negatives_per_positive", "max_negative_resamples"},
    )
    if "mode" in generation:
        kwargs["generation_mode"] = _expect("generation", "mode", generation["mode"], str, "a string")
    if "translation_languages" in generation:
        langs = _expect(
            "generation", "translation_languages", generation["translation_languages"], list, "a list"
        )
        if not all(isinstance(x, str) and x for x in langs):
            raise ConfigError("generation.translation_languages must be non-empty strings")
        kwargs["translation_languages"] = tuple(langs)
    for key in ("negatives_per_positive", "max_negative_resamples"):
        if key in generation:
            kwargs[key] = _expect("generation", key, generation[key], int, "an integer")

    split = data.get("split", {})
    _require_keys("split", _expect("", "split", split, dict, "an object"), {"ratios", "group_by_headword"})
    split_kwargs: dict = {}
    if "ratios" in split:
        ratios = _expect("split", "ratios", split["ratios"], list, "a list")
        if len(ratios) != 3 or not all(isinstance(r, (int, float)) and not isinstance(r, bool) for r in ratios):
            raise ConfigError(f"split.ratios must be a list of 3 numbers, got {ratios!r}")
        split_kwargs["ratios"] = tuple(float(r) for r in ratios)
    if "group_by_headword" in split:
        split_kwargs["group_by_headword"] = _expect(
            "split", "group_by_headword", split["group_by_headword"], bool, "a boolean"
        )
    if split_kwargs:
        kwargs["split"] = SplitConfig(**split_kwargs)

    scorer = data.get("scorer", {})
    _require_keys(
        "scorer",
        _expect("", "scorer", scorer, dict, "an object"),
        {"endpoint", "timeout_ms", "max_retries", "backoff_ms"},
    )
    scorer_kwargs: dict = {}
    if "endpoint" in scorer:
        scorer_kwargs["endpoint"] = _expect("scorer", "endpoint", scorer["endpoint"], str, "a string")
    for key in ("timeout_ms", "max_retries", "backoff_ms"):
        if key in scorer:
            scorer_kwargs[key] = _expect("scorer", key, scorer[key], int, "an integer")
    if scorer_kwargs:
        kwargs["scorer"] = ScorerConfig(**scorer_kwargs)

    try:
        return PipelineConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str | Path) -> PipelineConfig:
    """Load and validate a JSON configuration file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read configuration file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"configuration file {path} is not valid JSON: {exc.msg}") from exc
    return config_from_dict(data)


def config_hash(config: PipelineConfig) -> str:
    """Stable digest of the effective configuration."""
    canonical = json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
