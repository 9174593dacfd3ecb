"""Command line interface.

Subcommands cover the whole pipeline: ingest a raw dictionary, build a
labeled dataset, split it, inspect statistics, validate invariants, and run
a zero-shot evaluation. Exit codes: 0 on success, 1 for validation and data
errors, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .config import PipelineConfig, config_hash, load_config
from .datasets import (
    dataset_stats,
    read_dataset,
    read_split_dir,
    split_dataset,
    write_samples,
    write_splits,
)
from .errors import ConfigError, LetzForgeError, ValidationError
from .evaluation import (
    DEFAULT_HYPOTHESIS_TEMPLATE,
    HypothesisTemplate,
    evaluate,
    expected_count_mismatches,
    read_eval_dataset,
    resolve_label_map,
    score_matrix,
)
from .lexicon import filter_nouns, build_noun_vocabulary, parse_dictionary, serialize_entries
from .sampling import (
    MODE_SYNONYM,
    MODE_TRANSLATION,
    build_dataset_with_report,
    find_invariant_violations,
)
from .scorers import LexicalOverlapScorer, OracleScorer, RemoteScorer

logger = logging.getLogger(__name__)

MODE_FLAGS = {"syn": MODE_SYNONYM, "wot": MODE_TRANSLATION}


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON configuration file")
    common.add_argument("--seed", type=int, metavar="U64", help="override the configured seed")
    common.add_argument("--jobs", type=int, default=1, metavar="N", help="worker count (default 1)")
    common.add_argument(
        "--log-level",
        default="info",
        choices=("debug", "info", "warning", "error"),
        help="logging verbosity (default info)",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="letz-forge",
        description="Build and evaluate topic-relevance datasets from a dictionary.",
    )
    common = _common_parser()
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p_ingest = sub.add_parser(
        "ingest", parents=[common], help="normalize a raw dictionary dump into lexicon records"
    )
    p_ingest.add_argument("--input", required=True, metavar="PATH", help="raw dictionary file (JSON lines)")
    p_ingest.add_argument("--pos-map", metavar="PATH", help="JSON object mapping raw POS tags to normalized tags")
    p_ingest.add_argument("--output", required=True, metavar="PATH", help="normalized lexicon output file")

    p_build = sub.add_parser(
        "build", parents=[common], help="build a labeled dataset from a normalized lexicon"
    )
    p_build.add_argument("--lexicon", required=True, metavar="PATH", help="normalized lexicon file")
    p_build.add_argument(
        "--mode",
        choices=sorted(MODE_FLAGS),
        help="labeling source: syn = synonyms, wot = translations (default from config)",
    )
    p_build.add_argument("--output", required=True, metavar="PATH", help="dataset output file")

    p_split = sub.add_parser("split", parents=[common], help="partition a dataset into train/dev/test")
    p_split.add_argument("--input", required=True, metavar="PATH", help="dataset file to split")
    p_split.add_argument("--ratios", metavar="R,R,R", help="three ratios summing to 1 (default 0.8,0.1,0.1)")
    p_split.add_argument(
        "--group-by-headword",
        action="store_true",
        default=None,
        help="keep all samples of one headword in the same split",
    )
    p_split.add_argument("--out-dir", required=True, metavar="DIR", help="directory for the split files")

    p_stats = sub.add_parser("stats", parents=[common], help="print dataset statistics")
    p_stats.add_argument("--input", required=True, metavar="PATH", help="dataset file or split directory")
    p_stats.add_argument("--histogram-csv", metavar="PATH", help="write the length histogram as CSV")
    p_stats.add_argument("--no-figures", action="store_true", help="skip rendering figure files")

    p_validate = sub.add_parser("validate", parents=[common], help="check dataset invariants")
    p_validate.add_argument("--input", required=True, metavar="PATH", help="dataset file or split directory")

    p_eval = sub.add_parser("evaluate", parents=[common], help="run zero-shot entailment evaluation")
    p_eval.add_argument("--dataset", required=True, metavar="PATH", help="evaluation examples file")
    p_eval.add_argument(
        "--labels",
        required=True,
        metavar="PATH|NAME",
        help="label map file, or a bundled name (luxnews, sib200)",
    )
    p_eval.add_argument(
        "--template",
        default=DEFAULT_HYPOTHESIS_TEMPLATE,
        metavar="TEXT",
        help="hypothesis template with one {label} placeholder",
    )
    p_eval.add_argument(
        "--scorer",
        required=True,
        choices=("oracle", "lexical", "remote"),
        help="entailment scorer implementation",
    )
    p_eval.add_argument("--report", required=True, metavar="PATH", help="report JSON output path")
    p_eval.add_argument("--no-figures", action="store_true", help="skip rendering figure files")

    return parser


def _load_effective_config(args: argparse.Namespace) -> PipelineConfig:
    config = load_config(args.config) if args.config else PipelineConfig()
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ConfigError(f"--seed must fit in an unsigned 64-bit integer, got {args.seed}")
        config = replace(config, seed=args.seed)
    return config


def _parse_ratios(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValidationError(f"--ratios needs three comma-separated numbers, got {text!r}")
    try:
        values = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ValidationError(f"--ratios needs numbers, got {text!r}") from exc
    return values


def _cmd_ingest(args: argparse.Namespace, config: PipelineConfig) -> int:
    pos_map = None
    if args.pos_map:
        try:
            raw = json.loads(Path(args.pos_map).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read POS map {args.pos_map}: {exc}") from exc
        if not isinstance(raw, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in raw.items()
        ):
            raise ConfigError("POS map must be a JSON object of string pairs")
        pos_map = raw

    with open(args.input, encoding="utf-8") as handle:
        entries = parse_dictionary(handle, pos_map=pos_map)
    total = len(entries)
    if config.ingest.drop_multiword_headwords:
        entries = [e for e in entries if " " not in e.headword]
        logger.info("dropped %d multi-word headwords", total - len(entries))

    output = Path(args.output)
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(serialize_entries(entries), encoding="utf-8")
    nouns = len(filter_nouns(entries))
    print(f"ingested {total} entries ({nouns} nouns) -> {output}")
    return 0


def _cmd_build(args: argparse.Namespace, config: PipelineConfig) -> int:
    if args.mode:
        mode = MODE_FLAGS[args.mode]
    else:
        mode = config.generation_mode
    generation = replace(config.generation(), mode=mode)

    with open(args.lexicon, encoding="utf-8") as handle:
        entries = parse_dictionary(handle)
    nouns = filter_nouns(entries)
    vocabulary = build_noun_vocabulary(entries)
    samples, report = build_dataset_with_report(nouns, vocabulary, generation, jobs=args.jobs)

    write_samples(
        samples,
        args.output,
        metadata={
            "seed": generation.seed,
            "config_hash": config_hash(config),
            "mode": generation.mode,
            "positives": report.positives,
            "negatives": report.negatives,
            "duplicate_positives_removed": report.duplicate_positives_removed,
        },
    )
    print(
        f"built {len(samples)} samples ({report.positives} positive,"
        f" {report.negatives} negative) -> {args.output}"
    )
    return 0


def _cmd_split(args: argparse.Namespace, config: PipelineConfig) -> int:
    ratios = _parse_ratios(args.ratios) if args.ratios else config.split.ratios
    group = config.split.group_by_headword if args.group_by_headword is None else True
    samples = read_dataset(args.input)
    splits = split_dataset(
        samples,
        ratios=ratios,
        seed=config.seed,
        group_by_headword=group,
        config_snapshot=config_hash(config),
    )
    write_splits(splits, args.out_dir, metadata={"source": str(args.input)})
    sizes = {name: len(part) for name, part in splits.as_mapping().items()}
    print(
        f"split {len(samples)} samples -> "
        + ", ".join(f"{name}={n}" for name, n in sizes.items())
        + f" in {args.out_dir}"
    )
    return 0


def _load_parts(path_text: str) -> dict[str, list]:
    path = Path(path_text)
    if path.is_dir():
        return read_split_dir(path)
    return {"all": read_dataset(path)}


def _cmd_stats(args: argparse.Namespace, config: PipelineConfig) -> int:
    parts = _load_parts(args.input)
    stats_by_part = {name: dataset_stats(samples) for name, samples in parts.items()}
    payload = {name: stats.to_dict() for name, stats in stats_by_part.items()}
    print(json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True))

    if args.histogram_csv:
        csv_path = Path(args.histogram_csv)
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        with csv_path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["split", "word_count", "count"])
            for name, stats in stats_by_part.items():
                for word_count in sorted(stats.word_count_histogram):
                    writer.writerow([name, word_count, stats.word_count_histogram[word_count]])
        logger.info("wrote histogram CSV to %s", csv_path)
        if not args.no_figures:
            from .figures import render_length_histogram

            figure_path = render_length_histogram(stats_by_part, csv_path.with_suffix(".png"))
            logger.info("wrote histogram figure to %s", figure_path)
    return 0


def _cmd_validate(args: argparse.Namespace, config: PipelineConfig) -> int:
    parts = _load_parts(args.input)
    violations: list[str] = []
    for name, samples in parts.items():
        for message in find_invariant_violations(samples, config.similarity):
            violations.append(f"{name}: {message}")
        positives = sum(1 for s in samples if s.cls == 1)
        negatives = len(samples) - positives
        expected = positives * config.negatives_per_positive
        tolerance = 0 if len(parts) == 1 else 1
        if abs(negatives - expected) > tolerance:
            violations.append(
                f"{name}: class balance broken, {positives} positives but {negatives} negatives"
                f" (expected {expected})"
            )

    if len(parts) > 1:
        names = sorted(parts)
        # Sentences legitimately recur across splits (each negative reuses
        # its positive's sentence), so leakage means a full record repeats.
        keys = {
            name: {(s.text, s.label, s.cls) for s in samples} for name, samples in parts.items()
        }
        for i, first in enumerate(names):
            for second in names[i + 1 :]:
                shared = keys[first] & keys[second]
                if shared:
                    violations.append(
                        f"splits {first} and {second} share {len(shared)} identical sample(s)"
                    )
        if not config.split.group_by_headword:
            headwords = [
                {s.provenance.headword for s in samples} for samples in parts.values()
            ]
            shared = set.intersection(*headwords) if headwords else set()
            print(
                f"note: {len(shared)} headword(s) appear in multiple splits;"
                " headword disjointness is not enforced unless split.group_by_headword is set"
            )

    total = sum(len(samples) for samples in parts.values())
    if violations:
        for message in violations:
            print(f"violation: {message}", file=sys.stderr)
        print(f"validated {total} samples: {len(violations)} violation(s)", file=sys.stderr)
        return 1
    print(f"validated {total} samples: no violations")
    return 0


def _make_scorer(name: str, config: PipelineConfig, template: HypothesisTemplate, dataset):
    if name == "oracle":
        return OracleScorer(dataset, template)
    if name == "lexical":
        return LexicalOverlapScorer(template, config.similarity)
    if not config.scorer.endpoint:
        raise ConfigError("remote scoring requires scorer.endpoint in the configuration")
    return RemoteScorer(
        config.scorer.endpoint,
        timeout_ms=config.scorer.timeout_ms,
        max_retries=config.scorer.max_retries,
        backoff_ms=config.scorer.backoff_ms,
    )


def _cmd_evaluate(args: argparse.Namespace, config: PipelineConfig) -> int:
    label_map = resolve_label_map(args.labels)
    dataset = read_eval_dataset(args.dataset, label_map)
    template = HypothesisTemplate(args.template)
    for warning in expected_count_mismatches(dataset):
        logger.warning(warning)

    scorer = _make_scorer(args.scorer, config, template, dataset)
    matrix = score_matrix(dataset, template, scorer, max_workers=args.jobs)
    report = evaluate(
        dataset,
        matrix,
        metadata={
            "scorer": scorer.name,
            "template": template.template,
            "dataset": str(args.dataset),
            "labels": str(args.labels),
            "seed": config.seed,
            "config_hash": config_hash(config),
        },
    )

    report_path = Path(args.report)
    report_path.parent.mkdir(parents=True, exist_ok=True)
    report_path.write_text(
        json.dumps(report.to_dict(), ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )

    csv_path = report_path.with_name(report_path.stem + "_per_class.csv")
    with csv_path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["class_id", "label", "precision", "recall", "f1", "support"])
        for class_id in report.class_ids:
            metrics = report.per_class[class_id]
            writer.writerow(
                [
                    class_id,
                    label_map.label_for(class_id),
                    f"{metrics.precision:.6f}",
                    f"{metrics.recall:.6f}",
                    f"{metrics.f1:.6f}",
                    metrics.support,
                ]
            )
    logger.info("wrote per-class metrics to %s", csv_path)

    if not args.no_figures:
        from .figures import render_confusion_matrix

        figure_path = render_confusion_matrix(report, report_path.with_name(report_path.stem + "_confusion.png"))
        logger.info("wrote confusion figure to %s", figure_path)

    print(
        f"evaluated {report.n_examples} examples: accuracy {report.accuracy:.4f},"
        f" macro-F1 {report.macro_f1:.4f} -> {report_path}"
    )
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "build": _cmd_build,
    "split": _cmd_split,
    "stats": _cmd_stats,
    "validate": _cmd_validate,
    "evaluate": _cmd_evaluate,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level.upper()),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = _load_effective_config(args)
        logger.info("configuration hash %s, seed %d", config_hash(config), config.seed)
        return _COMMANDS[args.command](args, config)
    except LetzForgeError as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
