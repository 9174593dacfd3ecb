"""Train/dev/test splitting, dataset serialization, descriptive statistics.

Splits are stratified by class with largest-remainder seat allocation done
per class; leftover-seat ties are broken toward the split that is furthest
behind its running size target. That rule keeps every split balanced and
reproduces exact 80/10/10 geometry on balanced inputs (e.g. 14,778 ->
11,822/1,478/1,478 and 48,916 -> 39,132/4,892/4,892).
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .errors import SchemaError, ValidationError
from .sampling import LabeledSample, Provenance
from .similarity import tokenize

SPLIT_NAMES = ("train", "dev", "test")
DEFAULT_RATIOS = (0.8, 0.1, 0.1)


@dataclass(frozen=True)
class DatasetSplits:
    """Disjoint train/dev/test partitions plus the configuration that made them."""

    train: tuple[LabeledSample, ...]
    dev: tuple[LabeledSample, ...]
    test: tuple[LabeledSample, ...]
    ratios: tuple[float, float, float]
    seed: int
    config_snapshot: str = ""

    def as_mapping(self) -> dict[str, tuple[LabeledSample, ...]]:
        return {"train": self.train, "dev": self.dev, "test": self.test}


@dataclass(frozen=True)
class DatasetStats:
    """Sample counts and the word-count length distribution."""

    total: int
    per_class_counts: dict[int, int]
    word_count_histogram: dict[int, int]
    mean_word_count: float
    median_word_count: float

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "per_class_counts": {str(k): v for k, v in sorted(self.per_class_counts.items())},
            "word_count_histogram": {str(k): v for k, v in sorted(self.word_count_histogram.items())},
            "mean_word_count": self.mean_word_count,
            "median_word_count": self.median_word_count,
        }


def _check_ratios(ratios: tuple[float, float, float]) -> None:
    if len(ratios) != len(SPLIT_NAMES):
        raise ValidationError(f"expected {len(SPLIT_NAMES)} split ratios, got {len(ratios)}")
    if any(r <= 0 for r in ratios):
        raise ValidationError(f"split ratios must be positive, got {ratios}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValidationError(f"split ratios must sum to 1, got {ratios} (sum {sum(ratios)})")


def _largest_remainder(n: int, ratios: tuple[float, ...], deficits: list[float]) -> list[int]:
    """Integer seat allocation for one class of n samples.

    Seats left after flooring go to the largest fractional remainders;
    exact remainder ties prefer the split with the larger cumulative
    deficit, then the lower split index.
    """
    exact = [n * r for r in ratios]
    sizes = [math.floor(x) for x in exact]
    seats = n - sum(sizes)
    order = sorted(
        range(len(ratios)),
        key=lambda i: (-(exact[i] - sizes[i]), -deficits[i], i),
    )
    for i in order[:seats]:
        sizes[i] += 1
    return sizes


def split_dataset(
    samples: list[LabeledSample],
    ratios: tuple[float, float, float] = DEFAULT_RATIOS,
    seed: int = 0,
    group_by_headword: bool = False,
    config_snapshot: str = "",
) -> DatasetSplits:
    """Partition samples into stratified train/dev/test splits.

    With group_by_headword every sample sharing a provenance headword lands
    in the same split (sizes then track the ratios only as closely as the
    group sizes allow).
    """
    _check_ratios(ratios)
    if len(samples) < len(SPLIT_NAMES):
        raise ValidationError(
            f"cannot split {len(samples)} samples into {len(SPLIT_NAMES)} parts"
        )
    rng = random.Random(seed)
    buckets: tuple[list[LabeledSample], ...] = ([], [], [])

    if group_by_headword:
        groups: dict[str, list[LabeledSample]] = {}
        for sample in samples:
            groups.setdefault(sample.provenance.headword, []).append(sample)
        keys = sorted(groups)
        rng.shuffle(keys)
        targets = [len(samples) * r for r in ratios]
        filled = [0, 0, 0]
        for key in keys:
            # Greedy: place the group where the remaining gap is largest.
            i = max(range(len(targets)), key=lambda j: (targets[j] - filled[j], -j))
            buckets[i].extend(groups[key])
            filled[i] += len(groups[key])
    else:
        by_class: dict[int, list[LabeledSample]] = {}
        for sample in samples:
            by_class.setdefault(sample.cls, []).append(sample)
        cumulative_target = [0.0, 0.0, 0.0]
        cumulative_alloc = [0, 0, 0]
        for cls in sorted(by_class):
            members = list(by_class[cls])
            rng.shuffle(members)
            deficits = [cumulative_target[i] - cumulative_alloc[i] for i in range(3)]
            sizes = _largest_remainder(len(members), ratios, deficits)
            offset = 0
            for i, size in enumerate(sizes):
                buckets[i].extend(members[offset : offset + size])
                offset += size
                cumulative_alloc[i] += size
                cumulative_target[i] += len(members) * ratios[i]

    return DatasetSplits(
        train=tuple(buckets[0]),
        dev=tuple(buckets[1]),
        test=tuple(buckets[2]),
        ratios=tuple(ratios),
        seed=seed,
        config_snapshot=config_snapshot,
    )


def _sample_to_record(sample: LabeledSample) -> dict:
    return {
        "text": sample.text,
        "label": sample.label,
        "class": sample.cls,
        "provenance": {
            "headword": sample.provenance.headword,
            "sense_id": sample.provenance.sense_id,
            "source": sample.provenance.source,
        },
    }


def _record_to_sample(record: object, line: int) -> LabeledSample:
    if not isinstance(record, dict):
        raise SchemaError("expected a JSON object", line=line)
    unknown = set(record) - {"text", "label", "class", "provenance"}
    if unknown:
        raise SchemaError(f"unknown field(s) {sorted(unknown)}", line=line)
    for name in ("text", "label", "class", "provenance"):
        if name not in record:
            raise SchemaError(f"missing field {name!r}", line=line, field=name)
    cls = record["class"]
    if isinstance(cls, bool) or not isinstance(cls, int) or cls not in (0, 1):
        raise SchemaError(f"class must be the integer 0 or 1, got {cls!r}", line=line, field="class")
    prov = record["provenance"]
    if not isinstance(prov, dict) or set(prov) != {"headword", "sense_id", "source"}:
        raise SchemaError(
            "provenance must be an object with headword, sense_id and source",
            line=line,
            field="provenance",
        )
    for name in ("text", "label"):
        if not isinstance(record[name], str) or not record[name]:
            raise SchemaError(f"{name} must be a non-empty string", line=line, field=name)
    try:
        return LabeledSample(
            text=record["text"],
            label=record["label"],
            cls=cls,
            provenance=Provenance(
                headword=str(prov["headword"]),
                sense_id=str(prov["sense_id"]),
                source=str(prov["source"]),
            ),
        )
    except ValidationError as exc:
        raise SchemaError(str(exc), line=line) from exc


def sample_lines(samples: list[LabeledSample] | tuple[LabeledSample, ...]) -> str:
    """Serialize samples to the line-delimited on-disk form."""
    return "".join(
        json.dumps(_sample_to_record(s), ensure_ascii=False, separators=(",", ":")) + "\n"
        for s in samples
    )


def metadata_path(dataset_path: Path) -> Path:
    return dataset_path.with_name(dataset_path.name + ".meta.json")


def _write_metadata(path: Path, metadata: dict) -> None:
    body = dict(metadata)
    body["created_at"] = datetime.now(timezone.utc).isoformat()
    path.write_text(json.dumps(body, ensure_ascii=False, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def write_samples(
    samples: list[LabeledSample] | tuple[LabeledSample, ...],
    path: str | Path,
    metadata: dict | None = None,
) -> None:
    """Write one dataset file plus its metadata sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(sample_lines(samples), encoding="utf-8")
    sidecar = {"samples": len(samples)}
    sidecar.update(metadata or {})
    _write_metadata(metadata_path(path), sidecar)


def write_splits(splits: DatasetSplits, out_dir: str | Path, metadata: dict | None = None) -> dict[str, Path]:
    """Write train/dev/test files into a directory with one shared sidecar."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {}
    for name, part in splits.as_mapping().items():
        part_path = out_dir / f"{name}.jsonl"
        part_path.write_text(sample_lines(part), encoding="utf-8")
        paths[name] = part_path
    sidecar = {
        "splits": {name: len(part) for name, part in splits.as_mapping().items()},
        "ratios": list(splits.ratios),
        "seed": splits.seed,
        "config_snapshot": splits.config_snapshot,
    }
    sidecar.update(metadata or {})
    _write_metadata(out_dir / "splits.meta.json", sidecar)
    return paths


def write_dataset(
    data: list[LabeledSample] | tuple[LabeledSample, ...] | DatasetSplits,
    path: str | Path,
    metadata: dict | None = None,
) -> None:
    """Write either a flat sample list (file) or DatasetSplits (directory)."""
    if isinstance(data, DatasetSplits):
        write_splits(data, path, metadata)
    else:
        write_samples(data, path, metadata)


def read_dataset(path: str | Path) -> list[LabeledSample]:
    """Read one line-delimited dataset file, enforcing the record schema."""
    path = Path(path)
    samples = []
    with path.open(encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"invalid JSON: {exc.msg}", line=line_no) from exc
            samples.append(_record_to_sample(record, line_no))
    return samples


def read_split_dir(path: str | Path) -> dict[str, list[LabeledSample]]:
    """Read the train/dev/test files present in a split directory."""
    path = Path(path)
    parts = {}
    for name in SPLIT_NAMES:
        part_path = path / f"{name}.jsonl"
        if part_path.exists():
            parts[name] = read_dataset(part_path)
    if not parts:
        raise ValidationError(f"no {'/'.join(SPLIT_NAMES)} files found in {path}")
    return parts


def dataset_stats(samples: list[LabeledSample] | tuple[LabeledSample, ...]) -> DatasetStats:
    """Class counts plus the tokenized word-count distribution."""
    histogram: dict[int, int] = {}
    per_class: dict[int, int] = {}
    counts = []
    for sample in samples:
        n_words = len(tokenize(sample.text))
        counts.append(n_words)
        histogram[n_words] = histogram.get(n_words, 0) + 1
        per_class[sample.cls] = per_class.get(sample.cls, 0) + 1
    counts.sort()
    total = len(counts)
    if total:
        mean = sum(counts) / total
        mid = total // 2
        median = float(counts[mid]) if total % 2 else (counts[mid - 1] + counts[mid]) / 2
    else:
        mean = 0.0
        median = 0.0
    return DatasetStats(
        total=total,
        per_class_counts=per_class,
        word_count_histogram=histogram,
        mean_word_count=mean,
        median_word_count=median,
    )
