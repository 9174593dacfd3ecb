"""Zero-shot topic classification as textual entailment.

Each input text is scored as a premise against one rendered hypothesis per
candidate topic label, and the prediction is the class whose hypothesis
receives the highest entailment probability. Metrics are computed with
plain arithmetic so reports are reproducible with no numeric dependencies.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import SchemaError, ScoringError, ValidationError

DEFAULT_HYPOTHESIS_TEMPLATE = "Dëst Beispill ass iwwer {label}."
LABEL_PLACEHOLDER = "{label}"
BUNDLED_LABEL_MAPS = ("luxnews", "sib200")


@dataclass(frozen=True)
class HypothesisTemplate:
    """Hypothesis pattern containing exactly one {label} placeholder."""

    template: str = DEFAULT_HYPOTHESIS_TEMPLATE

    def __post_init__(self) -> None:
        count = self.template.count(LABEL_PLACEHOLDER)
        if count != 1:
            raise ValidationError(
                f"hypothesis template must contain exactly one {LABEL_PLACEHOLDER!r}"
                f" placeholder, found {count}: {self.template!r}"
            )

    @property
    def prefix(self) -> str:
        return self.template[: self.template.index(LABEL_PLACEHOLDER)]

    @property
    def suffix(self) -> str:
        return self.template[self.template.index(LABEL_PLACEHOLDER) + len(LABEL_PLACEHOLDER) :]

    def render(self, label_word: str) -> str:
        return self.prefix + label_word + self.suffix


def render_hypothesis(template: HypothesisTemplate | str, label_word: str) -> str:
    """Substitute a label word into the template."""
    if isinstance(template, str):
        template = HypothesisTemplate(template)
    return template.render(label_word)


@dataclass(frozen=True)
class LabelEntry:
    """One candidate class: numeric id, label word, optional expected count."""

    class_id: int
    label: str
    expected_n: int | None = None

    def __post_init__(self) -> None:
        if isinstance(self.class_id, bool) or not isinstance(self.class_id, int) or self.class_id < 0:
            raise ValidationError(f"class id must be a non-negative integer, got {self.class_id!r}")
        if not self.label:
            raise ValidationError("label word must be non-empty")
        if self.expected_n is not None and (self.expected_n < 0 or isinstance(self.expected_n, bool)):
            raise ValidationError(f"expected count must be >= 0, got {self.expected_n!r}")


@dataclass(frozen=True)
class LabelMap:
    """Ordered candidate classes for one evaluation dataset."""

    entries: tuple[LabelEntry, ...]
    name: str = ""

    def __post_init__(self) -> None:
        if len(self.entries) < 2:
            raise ValidationError(f"a label map needs at least 2 classes, got {len(self.entries)}")
        ids = [e.class_id for e in self.entries]
        if len(set(ids)) != len(ids):
            raise ValidationError(f"duplicate class ids in label map: {ids}")
        words = [e.label for e in self.entries]
        if len(set(words)) != len(words):
            raise ValidationError(f"duplicate label words in label map: {words}")
        object.__setattr__(self, "entries", tuple(sorted(self.entries, key=lambda e: e.class_id)))

    @property
    def class_ids(self) -> tuple[int, ...]:
        return tuple(e.class_id for e in self.entries)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(e.label for e in self.entries)

    def label_for(self, class_id: int) -> str:
        for entry in self.entries:
            if entry.class_id == class_id:
                return entry.label
        raise ValidationError(f"class id {class_id} not in label map")


@dataclass(frozen=True)
class EvalExample:
    """One premise text with its gold class id."""

    text: str
    gold_class: int

    def __post_init__(self) -> None:
        if not self.text:
            raise ValidationError("example text must be non-empty")
        if isinstance(self.gold_class, bool) or not isinstance(self.gold_class, int) or self.gold_class < 0:
            raise ValidationError(f"gold class must be a non-negative integer, got {self.gold_class!r}")


@dataclass(frozen=True)
class EvalDataset:
    """Labeled evaluation examples plus their candidate label map."""

    examples: tuple[EvalExample, ...]
    label_map: LabelMap
    name: str = ""

    def __post_init__(self) -> None:
        if not self.examples:
            raise ValidationError("evaluation dataset must contain at least one example")
        known = set(self.label_map.class_ids)
        for i, example in enumerate(self.examples):
            if example.gold_class not in known:
                raise ValidationError(
                    f"example {i} has gold class {example.gold_class}, which is not in the label map"
                )


@dataclass(frozen=True)
class ScoreMatrix:
    """Per-example entailment probabilities, one column per candidate class."""

    values: tuple[tuple[float, ...], ...]
    class_ids: tuple[int, ...]

    def __post_init__(self) -> None:
        width = len(self.class_ids)
        for i, row in enumerate(self.values):
            if len(row) != width:
                raise ValidationError(f"score row {i} has {len(row)} entries, expected {width}")
            for j, value in enumerate(row):
                if not math.isfinite(value) or not 0.0 <= value <= 1.0:
                    raise ValidationError(
                        f"score[{i}][{j}] = {value!r} is outside the probability range [0, 1]"
                    )


def _check_row(row: object, n_labels: int, index: int) -> tuple[float, ...]:
    if not isinstance(row, (list, tuple)):
        raise ScoringError(f"scorer returned {type(row).__name__}, expected a sequence", index)
    if len(row) != n_labels:
        raise ScoringError(
            f"scorer returned {len(row)} probabilities for {n_labels} hypotheses", index
        )
    checked = []
    for value in row:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ScoringError(f"scorer returned non-numeric probability {value!r}", index)
        value = float(value)
        if not math.isfinite(value) or not 0.0 <= value <= 1.0:
            raise ScoringError(
                f"scorer returned probability {value!r} outside [0, 1]", index
            )
        checked.append(value)
    return tuple(checked)


def score_matrix(
    dataset: EvalDataset,
    template: HypothesisTemplate | str,
    scorer,
    max_workers: int = 1,
) -> ScoreMatrix:
    """Score every example against every rendered hypothesis.

    The scorer is any object with score(premise, hypotheses) -> sequence of
    probabilities, one per hypothesis in label-map order. Worker count only
    affects wall time; row order always follows the dataset.
    """
    if isinstance(template, str):
        template = HypothesisTemplate(template)
    hypotheses = [template.render(word) for word in dataset.label_map.labels]

    def one(indexed: tuple[int, EvalExample]) -> tuple[float, ...]:
        index, example = indexed
        try:
            row = scorer.score(example.text, list(hypotheses))
        except ScoringError:
            raise
        except Exception as exc:
            raise ScoringError(f"scorer failed: {exc}", index) from exc
        return _check_row(row, len(hypotheses), index)

    items = list(enumerate(dataset.examples))
    if max_workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(one, items))
    else:
        rows = [one(item) for item in items]
    return ScoreMatrix(values=tuple(rows), class_ids=dataset.label_map.class_ids)


def predict(row: tuple[float, ...] | list[float]) -> int:
    """Column index of the highest probability; ties go to the lowest index."""
    if not row:
        raise ValidationError("cannot predict from an empty score row")
    for value in row:
        if math.isnan(value):
            raise ValidationError(f"cannot predict from a row containing NaN: {row}")
    return max(range(len(row)), key=lambda i: row[i])


@dataclass(frozen=True)
class ClassMetrics:
    """Precision, recall, F1 and gold-support for one class."""

    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class EvalReport:
    """Aggregate and per-class classification quality."""

    accuracy: float
    macro_f1: float
    per_class: dict[int, ClassMetrics]
    confusion: tuple[tuple[int, ...], ...]
    class_ids: tuple[int, ...]
    labels: tuple[str, ...]
    n_examples: int
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "macro_f1": self.macro_f1,
            "n_examples": self.n_examples,
            "class_ids": list(self.class_ids),
            "labels": list(self.labels),
            "per_class": {
                str(cid): {
                    "label": self.labels[self.class_ids.index(cid)],
                    "precision": m.precision,
                    "recall": m.recall,
                    "f1": m.f1,
                    "support": m.support,
                }
                for cid, m in sorted(self.per_class.items())
            },
            "confusion": [list(row) for row in self.confusion],
            "confusion_layout": "rows are gold classes, columns are predicted classes",
            "metadata": dict(self.metadata),
        }


def evaluate(dataset: EvalDataset, matrix: ScoreMatrix, metadata: dict | None = None) -> EvalReport:
    """Turn a score matrix into predictions and classification metrics."""
    if len(matrix.values) != len(dataset.examples):
        raise ValidationError(
            f"score matrix has {len(matrix.values)} rows for {len(dataset.examples)} examples"
        )
    if matrix.class_ids != dataset.label_map.class_ids:
        raise ValidationError("score matrix class order does not match the label map")

    class_ids = dataset.label_map.class_ids
    index_of = {cid: i for i, cid in enumerate(class_ids)}
    k = len(class_ids)
    confusion = [[0] * k for _ in range(k)]
    correct = 0
    for example, row in zip(dataset.examples, matrix.values):
        gold = index_of[example.gold_class]
        pred = predict(row)
        confusion[gold][pred] += 1
        if gold == pred:
            correct += 1

    per_class: dict[int, ClassMetrics] = {}
    f1_sum = 0.0
    for i, cid in enumerate(class_ids):
        true_pos = confusion[i][i]
        gold_total = sum(confusion[i])
        pred_total = sum(confusion[g][i] for g in range(k))
        precision = true_pos / pred_total if pred_total else 0.0
        recall = true_pos / gold_total if gold_total else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[cid] = ClassMetrics(precision=precision, recall=recall, f1=f1, support=gold_total)
        f1_sum += f1

    report_metadata = {
        "f1_convention": "precision, recall and F1 are 0.0 when their denominator is 0",
    }
    report_metadata.update(metadata or {})
    return EvalReport(
        accuracy=correct / len(dataset.examples),
        macro_f1=f1_sum / k,
        per_class=per_class,
        confusion=tuple(tuple(row) for row in confusion),
        class_ids=class_ids,
        labels=dataset.label_map.labels,
        n_examples=len(dataset.examples),
        metadata=report_metadata,
    )


def _label_map_record(record: object, line: int) -> LabelEntry:
    if not isinstance(record, dict):
        raise SchemaError("expected a JSON object", line=line)
    unknown = set(record) - {"class", "label", "n"}
    if unknown:
        raise SchemaError(f"unknown field(s) {sorted(unknown)}", line=line)
    for name in ("class", "label"):
        if name not in record:
            raise SchemaError(f"missing field {name!r}", line=line, field=name)
    try:
        return LabelEntry(
            class_id=record["class"],
            label=record["label"],
            expected_n=record.get("n"),
        )
    except ValidationError as exc:
        raise SchemaError(str(exc), line=line) from exc


def read_label_map(path: str | Path, name: str = "") -> LabelMap:
    """Read a line-delimited label map file ({class, label, n?} per line)."""
    path = Path(path)
    entries = []
    with path.open(encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"invalid JSON: {exc.msg}", line=line_no) from exc
            entries.append(_label_map_record(record, line_no))
    return LabelMap(entries=tuple(entries), name=name or path.stem)


def bundled_label_map(name: str) -> LabelMap:
    """Load one of the label maps shipped with the package."""
    if name not in BUNDLED_LABEL_MAPS:
        raise ValidationError(
            f"unknown bundled label map {name!r}; available: {', '.join(BUNDLED_LABEL_MAPS)}"
        )
    source = resources.files("letz_forge").joinpath(f"data/{name}_labels.jsonl")
    entries = []
    with resources.as_file(source) as path:
        loaded = read_label_map(path, name=name)
    return loaded


def resolve_label_map(name_or_path: str) -> LabelMap:
    """Interpret --labels values: a bundled map name or a file path."""
    if name_or_path in BUNDLED_LABEL_MAPS:
        return bundled_label_map(name_or_path)
    return read_label_map(name_or_path)


def _eval_record(record: object, line: int) -> EvalExample:
    if not isinstance(record, dict):
        raise SchemaError("expected a JSON object", line=line)
    unknown = set(record) - {"text", "gold_class"}
    if unknown:
        raise SchemaError(f"unknown field(s) {sorted(unknown)}", line=line)
    for name in ("text", "gold_class"):
        if name not in record:
            raise SchemaError(f"missing field {name!r}", line=line, field=name)
    if not isinstance(record["text"], str) or not record["text"]:
        raise SchemaError("text must be a non-empty string", line=line, field="text")
    gold = record["gold_class"]
    if isinstance(gold, bool) or not isinstance(gold, int) or gold < 0:
        raise SchemaError(
            f"gold_class must be a non-negative integer, got {gold!r}", line=line, field="gold_class"
        )
    return EvalExample(text=record["text"], gold_class=gold)


def read_eval_dataset(path: str | Path, label_map: LabelMap, name: str = "") -> EvalDataset:
    """Read a line-delimited evaluation file ({text, gold_class} per line)."""
    path = Path(path)
    examples = []
    with path.open(encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"invalid JSON: {exc.msg}", line=line_no) from exc
            examples.append(_eval_record(record, line_no))
    return EvalDataset(examples=tuple(examples), label_map=label_map, name=name or path.stem)


def write_eval_dataset(examples: list[EvalExample] | tuple[EvalExample, ...], path: str | Path) -> None:
    """Write evaluation examples in the line-delimited on-disk form."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = "".join(
        json.dumps({"text": e.text, "gold_class": e.gold_class}, ensure_ascii=False, separators=(",", ":"))
        + "\n"
        for e in examples
    )
    path.write_text(lines, encoding="utf-8")


def expected_count_mismatches(dataset: EvalDataset) -> list[str]:
    """Differences between label-map expected counts and actual gold counts."""
    actual: dict[int, int] = {}
    for example in dataset.examples:
        actual[example.gold_class] = actual.get(example.gold_class, 0) + 1
    problems = []
    for entry in dataset.label_map.entries:
        if entry.expected_n is None:
            continue
        seen = actual.get(entry.class_id, 0)
        if seen != entry.expected_n:
            problems.append(
                f"class {entry.class_id} ({entry.label}): label map expects"
                f" {entry.expected_n} examples, dataset has {seen}"
            )
    return problems
