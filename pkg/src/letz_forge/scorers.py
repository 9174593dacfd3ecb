"""Entailment scorer implementations.

Every scorer exposes score(premise, hypotheses) -> list of probabilities in
[0, 1], one per hypothesis. The remote scorer speaks a small HTTP JSON
protocol; the oracle and lexical scorers exist so the evaluation pipeline
can be exercised end to end without a model server.
"""

from __future__ import annotations

import json
import logging
import math
import time
from collections.abc import Sequence

import requests

from .errors import ScorerError, ScorerProtocolError, ScorerTransportError, ValidationError
from .evaluation import EvalDataset, HypothesisTemplate
from .similarity import SimilarityConfig, fold, normalized_distance, tokenize

logger = logging.getLogger(__name__)


class EntailmentScorer:
    """Interface: probability that the premise entails each hypothesis."""

    name = "abstract"

    def score(self, premise: str, hypotheses: Sequence[str]) -> list[float]:
        raise NotImplementedError


class OracleScorer(EntailmentScorer):
    """Answer key scorer: 1.0 for the gold hypothesis, 0.0 elsewhere.

    Built from a labeled dataset, it memorizes which rendered hypothesis is
    correct for each premise. Useful for validating that the surrounding
    pipeline preserves a perfect signal (accuracy and macro-F1 of 1.0).
    """

    name = "oracle"

    def __init__(self, dataset: EvalDataset, template: HypothesisTemplate | str) -> None:
        if isinstance(template, str):
            template = HypothesisTemplate(template)
        self._gold: dict[str, str] = {}
        for example in dataset.examples:
            hypothesis = template.render(dataset.label_map.label_for(example.gold_class))
            existing = self._gold.get(example.text)
            if existing is not None and existing != hypothesis:
                raise ValidationError(
                    f"oracle scorer needs one gold class per text; {example.text!r} has two"
                )
            self._gold[example.text] = hypothesis

    def score(self, premise: str, hypotheses: Sequence[str]) -> list[float]:
        gold = self._gold.get(premise)
        if gold is None:
            raise ScorerError(f"oracle scorer has no gold answer for premise {premise!r}")
        return [1.0 if hypothesis == gold else 0.0 for hypothesis in hypotheses]


class LexicalOverlapScorer(EntailmentScorer):
    """Heuristic scorer: edit-distance proximity of the label to the premise.

    The label word is recovered from each hypothesis by stripping the
    template's fixed prefix and suffix. Its score is the best similarity
    (1 - normalized edit distance) against any premise token, so a label
    that appears nearly verbatim in the text scores close to 1.0.
    """

    name = "lexical"

    def __init__(self, template: HypothesisTemplate | str, similarity: SimilarityConfig | None = None) -> None:
        if isinstance(template, str):
            template = HypothesisTemplate(template)
        self._template = template
        self._similarity = similarity if similarity is not None else SimilarityConfig()

    def _label_of(self, hypothesis: str) -> str:
        prefix, suffix = self._template.prefix, self._template.suffix
        if not hypothesis.startswith(prefix) or not hypothesis.endswith(suffix):
            raise ScorerError(
                f"hypothesis {hypothesis!r} does not match template {self._template.template!r}"
            )
        end = len(hypothesis) - len(suffix)
        return hypothesis[len(prefix) : end]

    def score(self, premise: str, hypotheses: Sequence[str]) -> list[float]:
        tokens = tokenize(premise)
        scores = []
        for hypothesis in hypotheses:
            label = self._label_of(hypothesis)
            best = 0.0
            for token in tokens:
                similarity = 1.0 - normalized_distance(label, token, self._similarity)
                if similarity > best:
                    best = similarity
            scores.append(min(1.0, max(0.0, best)))
        return scores


def _validate_probabilities(payload: object, n_hypotheses: int) -> list[float]:
    if not isinstance(payload, dict):
        raise ScorerProtocolError(f"response body must be a JSON object, got {type(payload).__name__}")
    if "probabilities" not in payload:
        raise ScorerProtocolError("response object is missing the 'probabilities' field")
    values = payload["probabilities"]
    if not isinstance(values, list):
        raise ScorerProtocolError("'probabilities' must be a JSON array")
    if len(values) != n_hypotheses:
        raise ScorerProtocolError(
            f"endpoint returned {len(values)} probabilities for {n_hypotheses} hypotheses"
        )
    checked = []
    for value in values:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ScorerProtocolError(f"probability {value!r} is not a number")
        value = float(value)
        if not math.isfinite(value) or not 0.0 <= value <= 1.0:
            raise ScorerProtocolError(f"probability {value!r} is outside [0, 1]")
        checked.append(value)
    return checked


def remote_score(
    endpoint: str,
    premise: str,
    hypotheses: Sequence[str],
    timeout_ms: int = 10_000,
    max_retries: int = 2,
    backoff_ms: int = 100,
    session: requests.Session | None = None,
) -> list[float]:
    """POST one scoring request, retrying transient and malformed replies.

    Every failure category (connection errors, timeouts, non-2xx statuses,
    malformed bodies, wrong-length or out-of-range probabilities) is retried
    up to max_retries times with linear backoff; after that the last error
    is raised as ScorerTransportError or ScorerProtocolError.
    """
    if not endpoint:
        raise ScorerError("remote scoring requires a non-empty endpoint")
    body = {"premise": premise, "hypotheses": list(hypotheses)}
    timeout_s = timeout_ms / 1000.0
    post = session.post if session is not None else requests.post
    last_error: ScorerError | None = None
    for attempt in range(1 + max_retries):
        if attempt and backoff_ms:
            time.sleep(backoff_ms * attempt / 1000.0)
        try:
            response = post(endpoint, json=body, timeout=timeout_s)
        except requests.RequestException as exc:
            last_error = ScorerTransportError(f"request to {endpoint} failed: {exc}")
            logger.warning("scoring attempt %d/%d failed: %s", attempt + 1, 1 + max_retries, last_error)
            continue
        if not 200 <= response.status_code < 300:
            last_error = ScorerTransportError(
                f"endpoint {endpoint} answered HTTP {response.status_code}"
            )
            logger.warning("scoring attempt %d/%d failed: %s", attempt + 1, 1 + max_retries, last_error)
            continue
        try:
            payload = response.json()
        except (json.JSONDecodeError, ValueError):
            last_error = ScorerProtocolError("response body is not valid JSON")
            logger.warning("scoring attempt %d/%d failed: %s", attempt + 1, 1 + max_retries, last_error)
            continue
        try:
            return _validate_probabilities(payload, len(hypotheses))
        except ScorerProtocolError as exc:
            last_error = exc
            logger.warning("scoring attempt %d/%d failed: %s", attempt + 1, 1 + max_retries, last_error)
            continue
    assert last_error is not None
    raise last_error


class RemoteScorer(EntailmentScorer):
    """Scorer backed by an HTTP endpoint.

    Wire format: request {"premise": str, "hypotheses": [str]}, response
    {"probabilities": [float]} aligned with the request's hypotheses.
    """

    name = "remote"

    def __init__(
        self,
        endpoint: str,
        timeout_ms: int = 10_000,
        max_retries: int = 2,
        backoff_ms: int = 100,
    ) -> None:
        if not endpoint:
            raise ScorerError("remote scoring requires a non-empty endpoint")
        self._endpoint = endpoint
        self._timeout_ms = timeout_ms
        self._max_retries = max_retries
        self._backoff_ms = backoff_ms
        self._session = requests.Session()

    def score(self, premise: str, hypotheses: Sequence[str]) -> list[float]:
        return remote_score(
            self._endpoint,
            premise,
            hypotheses,
            timeout_ms=self._timeout_ms,
            max_retries=self._max_retries,
            backoff_ms=self._backoff_ms,
            session=self._session,
        )
