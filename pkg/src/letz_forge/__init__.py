"""letz-forge: dictionary-driven topic-relevance datasets and zero-shot evaluation.

The library turns a normalized dictionary into balanced binary datasets
(does this sentence relate to this topic word?) using synonym or translation
labeling, edit-distance filtering and seeded negative sampling, and
evaluates topic classifiers through an entailment-style scoring interface.
"""

from .config import (
    IngestConfig,
    PipelineConfig,
    ScorerConfig,
    SplitConfig,
    config_from_dict,
    config_hash,
    load_config,
)
from .datasets import (
    DatasetSplits,
    DatasetStats,
    dataset_stats,
    read_dataset,
    read_split_dir,
    split_dataset,
    write_dataset,
    write_samples,
    write_splits,
)
from .errors import (
    ConfigError,
    GenerationError,
    LetzForgeError,
    ParseError,
    SchemaError,
    ScorerError,
    ScorerProtocolError,
    ScorerTransportError,
    ScoringError,
    ValidationError,
)
from .evaluation import (
    DEFAULT_HYPOTHESIS_TEMPLATE,
    EvalDataset,
    EvalExample,
    EvalReport,
    HypothesisTemplate,
    LabelEntry,
    LabelMap,
    ScoreMatrix,
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
from .lexicon import (
    DictionaryEntry,
    NounVocabulary,
    Sense,
    build_noun_vocabulary,
    filter_nouns,
    normalize_pos,
    parse_dictionary,
    serialize_entries,
)
from .sampling import (
    GenerationConfig,
    LabeledSample,
    Provenance,
    build_dataset,
    build_dataset_with_report,
    find_invariant_violations,
    generate_negatives,
    generate_positives,
)
from .scorers import (
    EntailmentScorer,
    LexicalOverlapScorer,
    OracleScorer,
    RemoteScorer,
    remote_score,
)
from .similarity import (
    SimilarityConfig,
    fold,
    is_similar,
    levenshtein,
    normalized_distance,
    similar_to_any_token,
    tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DEFAULT_HYPOTHESIS_TEMPLATE",
    "DatasetSplits",
    "DatasetStats",
    "DictionaryEntry",
    "EntailmentScorer",
    "EvalDataset",
    "EvalExample",
    "EvalReport",
    "GenerationConfig",
    "GenerationError",
    "HypothesisTemplate",
    "IngestConfig",
    "LabelEntry",
    "LabelMap",
    "LabeledSample",
    "LetzForgeError",
    "LexicalOverlapScorer",
    "NounVocabulary",
    "OracleScorer",
    "ParseError",
    "PipelineConfig",
    "Provenance",
    "RemoteScorer",
    "SchemaError",
    "ScoreMatrix",
    "ScorerConfig",
    "ScorerError",
    "ScorerProtocolError",
    "ScorerTransportError",
    "ScoringError",
    "Sense",
    "SimilarityConfig",
    "SplitConfig",
    "ValidationError",
    "build_dataset",
    "build_dataset_with_report",
    "build_noun_vocabulary",
    "bundled_label_map",
    "config_from_dict",
    "config_hash",
    "dataset_stats",
    "evaluate",
    "filter_nouns",
    "find_invariant_violations",
    "fold",
    "generate_negatives",
    "generate_positives",
    "is_similar",
    "levenshtein",
    "load_config",
    "normalize_pos",
    "normalized_distance",
    "parse_dictionary",
    "predict",
    "read_dataset",
    "read_eval_dataset",
    "read_label_map",
    "read_split_dir",
    "remote_score",
    "render_hypothesis",
    "resolve_label_map",
    "score_matrix",
    "serialize_entries",
    "similar_to_any_token",
    "split_dataset",
    "tokenize",
    "write_dataset",
    "write_eval_dataset",
    "write_samples",
    "write_splits",
]
