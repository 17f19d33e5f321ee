"""Pronoun-gender classifier plumbing: probe construction, mask-fill
decoding, an antecedent-heuristic baseline, and an external-model client.

Fine-tuning/serving real models is out of process; this module defines the
exact probe bytes so any external model is evaluated identically.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import requests

from . import lexicons
from .extract import PRODROP, PronounExample
from .model import GenderLabel, SubtokenCounter, strip_diacritics, tokenize

T_TAGS = "t_tags"
MASK_TOKEN = "mask_token"
DEFAULT_MASK = "***"


class ProbeError(ValueError):
    pass


class RemoteProtocolError(RuntimeError):
    """The classifier endpoint replied with an unparseable body."""


@dataclass(frozen=True)
class Probe:
    """Classifier input: trimmed context plus the target sentence with the
    target pronoun position marked exactly once. No sentence after the
    target is ever included."""

    text: str
    mark_style: str
    budget: int


@dataclass(frozen=True)
class Prediction:
    label: Optional[GenderLabel]
    confidence: Optional[float]
    source: str

    def __post_init__(self):
        if (self.label is None) != (self.confidence is None):
            raise ValueError("confidence must be present iff label is present")

    @property
    def abstained(self) -> bool:
        return self.label is None


def abstain(source: str) -> Prediction:
    return Prediction(None, None, source)


def build_probe(example: PronounExample, style: str = T_TAGS, budget: int = 128,
                counter: Optional[SubtokenCounter] = None,
                mask: str = DEFAULT_MASK) -> Probe:
    """Render one example as classifier input.

    ``t_tags`` wraps the anchor token in ``<t> ... </t>``; ``mask_token``
    (prodrop only) inserts a mask placeholder at the dropped-subject
    position. The budget counts raw subtokens (marks excluded); context
    sentences are dropped oldest-first to fit, and a target that alone
    exceeds the budget is an error.
    """
    counter = counter or SubtokenCounter()
    target = example.target_sentence
    tokens = tokenize(target)
    if example.anchor_index >= len(tokens):
        raise ProbeError(f"anchor index {example.anchor_index} out of range")
    anchor = tokens[example.anchor_index]

    if style == T_TAGS:
        marked = f"{target[:anchor.start]}<t> {anchor.surface} </t>{target[anchor.end:]}"
    elif style == MASK_TOKEN:
        if example.kind != PRODROP:
            raise ProbeError("mask_token style applies to prodrop examples only")
        marked = f"{target[:anchor.start]}{mask} {target[anchor.start:]}"
    else:
        raise ProbeError(f"unknown mark style {style!r}")

    used = counter.count(target)
    if used > budget:
        raise ProbeError("target too long")
    kept: list[str] = []
    for text in reversed(example.context_sentences):
        cost = counter.count(text)
        if used + cost > budget:
            break
        kept.append(text)
        used += cost
    return Probe(" ".join(list(reversed(kept)) + [marked]), style, budget)


def _pronoun_key(token: str, ignore_diacritics: bool) -> str:
    token = token.lower()
    return strip_diacritics(token) if ignore_diacritics else token


def decode_mask_fills(kbest: Sequence[tuple[str, float]], top_k: int = 10,
                      ignore_diacritics: bool = True,
                      source: str = "mask_fill") -> Prediction:
    """Scan the top ``top_k`` fills in order; the first occurrence of the
    masculine subject pronoun wins MASC, of the feminine one FEM; neither
    present abstains. Confidence is the winning score normalized over the
    scanned window."""
    window = list(kbest[:top_k])
    total = sum(score for _, score in window)
    masc = _pronoun_key("él", ignore_diacritics)
    fem = _pronoun_key("ella", ignore_diacritics)
    for token, score in window:
        key = _pronoun_key(token, ignore_diacritics)
        if key == masc or key == fem:
            confidence = min(1.0, max(0.0, score / total)) if total > 0 else 0.0
            label = GenderLabel.MASC if key == masc else GenderLabel.FEM
            return Prediction(label, confidence, source)
    return abstain(source)


class HeuristicClassifier:
    """Baseline: label from the nearest preceding gendered noun or name."""

    name = "heuristic"

    def __init__(self, lexicon: Optional[dict[str, GenderLabel]] = None):
        self.lexicon = lexicon if lexicon is not None else dict(lexicons.GENDERED_ES)

    def classify(self, example: PronounExample) -> Prediction:
        target_tokens = tokenize(example.target_sentence)
        before = [t.surface for t in target_tokens[: example.anchor_index]]
        for surface in reversed(before):
            label = self.lexicon.get(surface.lower())
            if label is not None:
                return Prediction(label, 1.0, self.name)
        for text in reversed(example.context_sentences):
            for tok in reversed(tokenize(text)):
                label = self.lexicon.get(tok.surface.lower())
                if label is not None:
                    return Prediction(label, 1.0, self.name)
        return abstain(self.name)


def heuristic_classify(example: PronounExample,
                       lexicon: Optional[dict[str, GenderLabel]] = None) -> Prediction:
    return HeuristicClassifier(lexicon).classify(example)


class RemoteClassifier:
    """HTTP client for an externally served gender classifier.

    Contract: ``POST {base_url}/classify {"text": ..., "mark_style": ...}``
    returning ``{"label": "FEM"|"MASC"|null, "confidence": float}``.
    Transport failures retry with backoff and finally abstain (recorded in
    ``warnings``); a malformed body raises RemoteProtocolError.
    """

    name = "remote"

    def __init__(self, base_url: str, timeout: float = 10.0, retries: int = 3,
                 backoff: float = 0.5, max_in_flight: int = 8,
                 session: Optional[requests.Session] = None):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self.max_in_flight = max_in_flight
        self.warnings: list[dict] = []
        self._session = session or requests.Session()

    def classify(self, probe: Probe) -> Prediction:
        payload = {"text": probe.text, "mark_style": probe.mark_style}
        last_error: Optional[Exception] = None
        for attempt in range(self.retries + 1):
            if attempt:
                time.sleep(self.backoff * (2 ** (attempt - 1)))
            try:
                resp = self._session.post(f"{self.base_url}/classify", json=payload,
                                          timeout=self.timeout)
                resp.raise_for_status()
                return self._parse(resp)
            except (requests.RequestException,) as exc:
                last_error = exc
        self.warnings.append({"warning": "classifier-unreachable", "error": str(last_error)})
        return abstain(self.name)

    def _parse(self, resp) -> Prediction:
        try:
            body = resp.json()
        except ValueError as exc:
            raise RemoteProtocolError(f"non-JSON response: {exc}") from None
        if not isinstance(body, dict):
            raise RemoteProtocolError(f"expected object, got {body!r}")
        label = body.get("label")
        if label is None or body.get("abstain"):
            return abstain(self.name)
        try:
            parsed = GenderLabel.parse(label)
            confidence = float(body["confidence"])
        except (KeyError, TypeError, ValueError) as exc:
            raise RemoteProtocolError(f"bad response body {body!r}: {exc}") from None
        if not (0.0 <= confidence <= 1.0):
            raise RemoteProtocolError(f"confidence out of range: {confidence!r}")
        return Prediction(parsed, confidence, self.name)

    def classify_batch(self, probes: Iterable[Probe]) -> list[Prediction]:
        probes = list(probes)
        if not probes:
            return []
        with ThreadPoolExecutor(max_workers=min(self.max_in_flight, len(probes))) as pool:
            return list(pool.map(self.classify, probes))
