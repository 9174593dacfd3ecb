"""Hypothesis rendering, prediction, metric arithmetic, evaluation IO."""

import json
import math
import random

import pytest

from letz_forge import (
    DEFAULT_HYPOTHESIS_TEMPLATE,
    EvalDataset,
    EvalExample,
    HypothesisTemplate,
    LabelEntry,
    LabelMap,
    LexicalOverlapScorer,
    OracleScorer,
    SchemaError,
    ScoreMatrix,
    ScoringError,
    ValidationError,
    bundled_label_map,
    evaluate,
    predict,
    read_eval_dataset,
    read_label_map,
    render_hypothesis,
    resolve_label_map,
    score_matrix,
    write_eval_dataset,
)
from letz_forge.evaluation import expected_count_mismatches
from oracles import metrics_reference


def two_class_map():
    return LabelMap(entries=(LabelEntry(0, "Sport"), LabelEntry(1, "Rezept")))


def dataset_for(golds, label_map=None):
    examples = tuple(EvalExample(f"Beispill {i} Text.", g) for i, g in enumerate(golds))
    return EvalDataset(examples=examples, label_map=label_map or two_class_map())


class FixedScorer:
    """Returns pre-baked rows keyed by premise."""

    name = "fixed"

    def __init__(self, rows_by_text):
        self.rows_by_text = rows_by_text

    def score(self, premise, hypotheses):
        return self.rows_by_text[premise]


class TestTemplate:
    def test_render(self):
        template = HypothesisTemplate()
        assert template.render("Sport") == "Dëst Beispill ass iwwer Sport."
        assert render_hypothesis(DEFAULT_HYPOTHESIS_TEMPLATE, "Konscht") == (
            "Dëst Beispill ass iwwer Konscht."
        )
        assert render_hypothesis("{label}", "x") == "x"
        assert render_hypothesis("Topic: {label}!", "Rees") == "Topic: Rees!"

    def test_placeholder_count_enforced(self):
        with pytest.raises(ValidationError):
            HypothesisTemplate("no placeholder here")
        with pytest.raises(ValidationError):
            HypothesisTemplate("{label} and {label}")

    def test_prefix_suffix(self):
        template = HypothesisTemplate("A {label} B")
        assert template.prefix == "A "
        assert template.suffix == " B"


class TestPredict:
    def test_argmax(self):
        assert predict([0.1, 0.9, 0.3]) == 1
        assert predict([0.9, 0.1]) == 0

    def test_ties_resolve_to_lowest_index(self):
        assert predict([0.5, 0.5]) == 0
        assert predict([0.2, 0.7, 0.7]) == 1
        assert predict([0.0, 0.0, 0.0]) == 0

    def test_nan_rejected(self):
        with pytest.raises(ValidationError):
            predict([0.1, float("nan")])

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            predict([])

    def test_invariant_under_monotone_transforms(self):
        rng = random.Random(17)
        for _ in range(1000):
            row = [rng.random() for _ in range(rng.randint(2, 7))]
            baseline = predict(row)
            assert predict([v * 0.37 for v in row]) == baseline
            assert predict([math.sqrt(v) for v in row]) == baseline
            assert predict([v**3 + 2.0 for v in row]) == baseline


class TestLabelMap:
    def test_entries_sorted_by_class_id(self):
        label_map = LabelMap(entries=(LabelEntry(1, "b"), LabelEntry(0, "a")))
        assert label_map.class_ids == (0, 1)
        assert label_map.labels == ("a", "b")
        assert label_map.label_for(1) == "b"

    def test_duplicate_ids_and_words_rejected(self):
        with pytest.raises(ValidationError):
            LabelMap(entries=(LabelEntry(0, "a"), LabelEntry(0, "b")))
        with pytest.raises(ValidationError):
            LabelMap(entries=(LabelEntry(0, "a"), LabelEntry(1, "a")))

    def test_at_least_two_classes(self):
        with pytest.raises(ValidationError):
            LabelMap(entries=(LabelEntry(0, "a"),))

    def test_gold_class_outside_map_rejected(self):
        with pytest.raises(ValidationError):
            dataset_for([0, 2])


class TestBundledMaps:
    def test_news_topics(self):
        label_map = bundled_label_map("luxnews")
        assert label_map.labels == ("Sport", "Konscht", "Technologie", "Videospiller", "Rezept")
        assert [e.expected_n for e in label_map.entries] == [567, 266, 199, 82, 20]

    def test_sib200_topics(self):
        label_map = bundled_label_map("sib200")
        assert label_map.labels == (
            "Technologie",
            "Rees",
            "Politik",
            "Sport",
            "Gesondheet",
            "Entertainment",
            "Geografie",
        )
        assert [e.expected_n for e in label_map.entries] == [51, 40, 30, 25, 22, 19, 17]

    def test_unknown_bundle_rejected(self):
        with pytest.raises(ValidationError):
            bundled_label_map("nope")

    def test_resolve_prefers_bundle_then_path(self, tmp_path):
        assert resolve_label_map("sib200").name == "sib200"
        path = tmp_path / "mine.jsonl"
        path.write_text('{"class":0,"label":"a"}\n{"class":1,"label":"b"}\n')
        assert resolve_label_map(str(path)).labels == ("a", "b")


class TestScoreMatrix:
    def test_rows_follow_dataset_order(self):
        dataset = dataset_for([0, 1, 0])
        rows = {e.text: [0.1 * (i + 1), 0.05] for i, e in enumerate(dataset.examples)}
        matrix = score_matrix(dataset, HypothesisTemplate(), FixedScorer(rows))
        assert [row[0] for row in matrix.values] == pytest.approx([0.1, 0.2, 0.3])

    def test_parallel_equals_sequential(self):
        dataset = dataset_for([0, 1, 0, 1, 0, 1])
        rows = {e.text: [i / 10, 1 - i / 10] for i, e in enumerate(dataset.examples)}
        sequential = score_matrix(dataset, HypothesisTemplate(), FixedScorer(rows), max_workers=1)
        parallel = score_matrix(dataset, HypothesisTemplate(), FixedScorer(rows), max_workers=4)
        assert sequential == parallel

    def test_scorer_receives_rendered_hypotheses(self):
        captured = {}

        class Capture:
            name = "capture"

            def score(self, premise, hypotheses):
                captured[premise] = list(hypotheses)
                return [0.5] * len(hypotheses)

        dataset = dataset_for([0])
        score_matrix(dataset, HypothesisTemplate(), Capture())
        assert captured[dataset.examples[0].text] == [
            "Dëst Beispill ass iwwer Sport.",
            "Dëst Beispill ass iwwer Rezept.",
        ]

    def test_wrong_length_row_rejected_with_index(self):
        dataset = dataset_for([0, 1])
        rows = {e.text: [0.5] for e in dataset.examples}
        with pytest.raises(ScoringError) as err:
            score_matrix(dataset, HypothesisTemplate(), FixedScorer(rows))
        assert "example 0" in str(err.value)

    def test_out_of_range_rejected(self):
        dataset = dataset_for([0])
        rows = {dataset.examples[0].text: [1.3, 0.2]}
        with pytest.raises(ScoringError):
            score_matrix(dataset, HypothesisTemplate(), FixedScorer(rows))

    def test_nan_rejected(self):
        dataset = dataset_for([0])
        rows = {dataset.examples[0].text: [float("nan"), 0.2]}
        with pytest.raises(ScoringError):
            score_matrix(dataset, HypothesisTemplate(), FixedScorer(rows))

    def test_scorer_exception_wrapped(self):
        class Broken:
            name = "broken"

            def score(self, premise, hypotheses):
                raise RuntimeError("boom")

        with pytest.raises(ScoringError) as err:
            score_matrix(dataset_for([0]), HypothesisTemplate(), Broken())
        assert "boom" in str(err.value)

    def test_matrix_constructor_validates(self):
        with pytest.raises(ValidationError):
            ScoreMatrix(values=((0.5, 1.2),), class_ids=(0, 1))
        with pytest.raises(ValidationError):
            ScoreMatrix(values=((0.5,),), class_ids=(0, 1))


class TestEvaluate:
    def frozen_fixture(self):
        dataset = dataset_for([0, 0, 1, 1])
        rows = [
            [0.9, 0.1],
            [0.2, 0.8],
            [0.3, 0.7],
            [0.1, 0.6],
        ]
        matrix = ScoreMatrix(values=tuple(tuple(r) for r in rows), class_ids=(0, 1))
        return dataset, matrix

    def test_frozen_two_class_numbers(self):
        dataset, matrix = self.frozen_fixture()
        report = evaluate(dataset, matrix)
        assert report.confusion == ((1, 1), (0, 2))
        assert report.accuracy == pytest.approx(0.75, abs=1e-12)
        assert report.macro_f1 == pytest.approx(11 / 15, abs=1e-12)
        assert report.per_class[0].precision == pytest.approx(1.0)
        assert report.per_class[0].recall == pytest.approx(0.5)
        assert report.per_class[0].f1 == pytest.approx(2 / 3)
        assert report.per_class[1].f1 == pytest.approx(0.8)
        assert report.per_class[0].support == 2
        assert "denominator" in report.metadata["f1_convention"]

    def test_report_serializes(self):
        dataset, matrix = self.frozen_fixture()
        payload = evaluate(dataset, matrix).to_dict()
        text = json.dumps(payload)
        parsed = json.loads(text)
        assert parsed["confusion"] == [[1, 1], [0, 2]]
        assert parsed["per_class"]["0"]["label"] == "Sport"

    def test_zero_denominators_give_zero_metrics(self):
        # Class 1 is never gold and never predicted.
        dataset = dataset_for([0, 0])
        matrix = ScoreMatrix(values=((0.9, 0.1), (0.8, 0.2)), class_ids=(0, 1))
        report = evaluate(dataset, matrix)
        assert report.per_class[1].precision == 0.0
        assert report.per_class[1].recall == 0.0
        assert report.per_class[1].f1 == 0.0
        assert report.per_class[1].support == 0
        assert report.macro_f1 == pytest.approx(0.5)

    def test_agrees_with_reference_on_random_configurations(self):
        rng = random.Random(23)
        for _ in range(300):
            k = rng.randint(2, 5)
            label_map = LabelMap(entries=tuple(LabelEntry(i, f"lbl{i}") for i in range(k)))
            examples = []
            rows = []
            confusion = [[0] * k for _ in range(k)]
            n = rng.randint(k, 40)
            for i in range(n):
                gold = rng.randrange(k)
                pred = rng.randrange(k)
                confusion[gold][pred] += 1
                row = [0.0] * k
                row[pred] = 1.0
                examples.append(EvalExample(f"text {i}", gold))
                rows.append(tuple(row))
            dataset = EvalDataset(examples=tuple(examples), label_map=label_map)
            matrix = ScoreMatrix(values=tuple(rows), class_ids=label_map.class_ids)
            report = evaluate(dataset, matrix)
            expected = metrics_reference(confusion)
            assert report.accuracy == pytest.approx(expected["accuracy"], abs=1e-12)
            assert report.macro_f1 == pytest.approx(expected["macro_f1"], abs=1e-12)
            assert [list(r) for r in report.confusion] == confusion
            for i in range(k):
                assert report.per_class[i].f1 == pytest.approx(expected["per_class"][i]["f1"], abs=1e-12)

    def test_agrees_with_sklearn(self):
        from sklearn.metrics import accuracy_score, confusion_matrix, f1_score

        rng = random.Random(31)
        k = 4
        label_map = LabelMap(entries=tuple(LabelEntry(i, f"lbl{i}") for i in range(k)))
        golds, preds, rows, examples = [], [], [], []
        for i in range(200):
            gold, pred = rng.randrange(k), rng.randrange(k)
            golds.append(gold)
            preds.append(pred)
            row = [0.0] * k
            row[pred] = 1.0
            rows.append(tuple(row))
            examples.append(EvalExample(f"text {i}", gold))
        dataset = EvalDataset(examples=tuple(examples), label_map=label_map)
        matrix = ScoreMatrix(values=tuple(rows), class_ids=label_map.class_ids)
        report = evaluate(dataset, matrix)
        assert report.accuracy == pytest.approx(accuracy_score(golds, preds))
        assert report.macro_f1 == pytest.approx(f1_score(golds, preds, average="macro"))
        assert [list(r) for r in report.confusion] == confusion_matrix(golds, preds).tolist()

    def test_size_mismatch_rejected(self):
        dataset, matrix = self.frozen_fixture()
        short = ScoreMatrix(values=matrix.values[:-1], class_ids=matrix.class_ids)
        with pytest.raises(ValidationError):
            evaluate(dataset, short)


class TestOracleAndLexicalScorers:
    def test_oracle_scorer_is_perfect(self):
        dataset = dataset_for([0, 1, 1, 0, 1])
        scorer = OracleScorer(dataset, HypothesisTemplate())
        report = evaluate(dataset, score_matrix(dataset, HypothesisTemplate(), scorer))
        assert report.accuracy == 1.0
        assert report.macro_f1 == 1.0

    def test_lexical_scorer_prefers_verbatim_topic(self):
        label_map = LabelMap(entries=(LabelEntry(0, "Sport"), LabelEntry(1, "Rees")))
        dataset = EvalDataset(
            examples=(EvalExample("Si kucken all Weekend Sport an der Tëlee.", 0),),
            label_map=label_map,
        )
        matrix = score_matrix(dataset, HypothesisTemplate(), LexicalOverlapScorer(HypothesisTemplate()))
        (row,) = matrix.values
        assert row[0] == pytest.approx(1.0)
        assert row[0] > row[1]
        assert evaluate(dataset, matrix).accuracy == 1.0


class TestEvalIO:
    def test_round_trip(self, tmp_path):
        examples = [EvalExample("Éischten Text.", 0), EvalExample("Zweeten Text.", 1)]
        path = tmp_path / "eval.jsonl"
        write_eval_dataset(examples, path)
        dataset = read_eval_dataset(path, two_class_map())
        assert list(dataset.examples) == examples
        assert dataset.name == "eval"

    def test_bad_gold_class_reports_line(self, tmp_path):
        path = tmp_path / "eval.jsonl"
        path.write_text('{"text":"ok","gold_class":0}\n{"text":"bad","gold_class":"x"}\n')
        with pytest.raises(SchemaError) as err:
            read_eval_dataset(path, two_class_map())
        assert "line 2" in str(err.value)

    def test_unknown_field_rejected(self, tmp_path):
        path = tmp_path / "eval.jsonl"
        path.write_text('{"text":"ok","gold_class":0,"label":"x"}\n')
        with pytest.raises(SchemaError):
            read_eval_dataset(path, two_class_map())

    def test_label_map_file_round_trip(self, tmp_path):
        path = tmp_path / "labels.jsonl"
        path.write_text('{"class":1,"label":"b","n":3}\n{"class":0,"label":"a"}\n')
        label_map = read_label_map(path)
        assert label_map.class_ids == (0, 1)
        assert label_map.entries[1].expected_n == 3

    def test_expected_count_mismatch_reported(self):
        label_map = LabelMap(entries=(LabelEntry(0, "a", expected_n=2), LabelEntry(1, "b", expected_n=1)))
        dataset = EvalDataset(
            examples=(EvalExample("x", 0), EvalExample("y", 1)), label_map=label_map
        )
        problems = expected_count_mismatches(dataset)
        assert len(problems) == 1
        assert "class 0" in problems[0]
