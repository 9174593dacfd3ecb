"""Edit-distance kernel and the string-similarity predicate.

Two filters in the dataset construction rest on this module: discarding
synonym labels that are mere orthographic variants of their headword
(e.g. "Million" / "Millioun"), and rejecting negative-sample labels that
are close to any word of the sentence they would be attached to. Both use
the same normalized Levenshtein distance so one threshold governs both.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

from .errors import ConfigError

DEFAULT_THRESHOLD = 0.34


@dataclass(frozen=True)
class SimilarityConfig:
    """Controls string folding and the cutoff of the similarity predicate.

    threshold is a normalized-distance cutoff in [0, 1]: two strings count
    as similar when their normalized distance falls strictly below it.
    With use_raw_distance the unnormalized edit distance is compared
    against raw_threshold instead (<=), for callers that prefer an
    absolute edit budget over a length-relative one.
    """

    threshold: float = DEFAULT_THRESHOLD
    case_fold: bool = True
    strip_diacritics: bool = True
    use_raw_distance: bool = False
    raw_threshold: int = 1

    def __post_init__(self) -> None:
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError(f"similarity threshold must be in [0, 1], got {self.threshold}")
        if self.raw_threshold < 0:
            raise ConfigError(f"raw_threshold must be >= 0, got {self.raw_threshold}")


def fold(s: str, cfg: SimilarityConfig) -> str:
    """Apply the configured case/diacritic folding."""
    if cfg.case_fold:
        s = s.casefold()
    if cfg.strip_diacritics:
        decomposed = unicodedata.normalize("NFKD", s)
        s = "".join(c for c in decomposed if not unicodedata.combining(c))
    return s


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance (insert/delete/substitute) over code points."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) < len(b):
        a, b = b, a
    # Two-row dynamic program; previous[j] = distance(a[:i-1], b[:j]).
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost))
        previous = current
    return previous[-1]


def normalized_distance(a: str, b: str, cfg: SimilarityConfig | None = None) -> float:
    """Edit distance of the folded strings divided by the longer folded length.

    Defined as 0.0 when both strings fold to empty.
    """
    cfg = cfg or SimilarityConfig()
    fa = fold(a, cfg)
    fb = fold(b, cfg)
    longest = max(len(fa), len(fb))
    if longest == 0:
        return 0.0
    return levenshtein(fa, fb) / longest


def is_similar(a: str, b: str, cfg: SimilarityConfig | None = None) -> bool:
    """True when the strings fold equal or their distance is under the cutoff.

    Folded equality is checked explicitly so a threshold of 0 still treats
    identical strings as similar.
    """
    cfg = cfg or SimilarityConfig()
    fa = fold(a, cfg)
    fb = fold(b, cfg)
    if fa == fb:
        return True
    longest = max(len(fa), len(fb))
    if cfg.use_raw_distance:
        # Length gap is a lower bound on the edit distance.
        if abs(len(fa) - len(fb)) > cfg.raw_threshold:
            return False
        return levenshtein(fa, fb) <= cfg.raw_threshold
    if abs(len(fa) - len(fb)) / longest >= cfg.threshold:
        return False
    return levenshtein(fa, fb) / longest < cfg.threshold


def tokenize(sentence: str) -> list[str]:
    """Split on Unicode whitespace and strip edge punctuation from each token.

    Only leading/trailing punctuation is removed, so clitics such as
    "d'Adress" survive as a single token. Empty tokens are dropped.
    """
    tokens = []
    for raw in sentence.split():
        start = 0
        end = len(raw)
        while start < end and unicodedata.category(raw[start]).startswith("P"):
            start += 1
        while end > start and unicodedata.category(raw[end - 1]).startswith("P"):
            end -= 1
        if end > start:
            tokens.append(raw[start:end])
    return tokens


def similar_to_any_token(word: str, sentence: str, cfg: SimilarityConfig | None = None) -> bool:
    """True when the word is similar to at least one token of the sentence."""
    cfg = cfg or SimilarityConfig()
    return any(is_similar(word, token, cfg) for token in tokenize(sentence))
