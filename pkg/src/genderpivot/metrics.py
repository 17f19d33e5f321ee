"""Measurement: per-gender pronoun P/R/F1, human-agreement confusion
analysis, prodrop-rate analysis, and corpus BLEU."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .model import GenderLabel
from .sentalign import SentencePair

UNCLEAR = "UNCLEAR"
HUMAN_LABELS = ("MASC", "FEM", UNCLEAR)


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r > 0 else 0.0


@dataclass(frozen=True)
class GenderPRF:
    masc: PRF
    fem: PRF

    def by_gender(self) -> dict[str, PRF]:
        return {"MASC": self.masc, "FEM": self.fem}


@dataclass(frozen=True)
class ConfusionMatrix:
    """Pipeline label (MASC/FEM) x human label (MASC/FEM/UNCLEAR) counts."""

    counts: dict[tuple[str, str], int]

    def __post_init__(self):
        for (pipe, human), count in self.counts.items():
            if pipe not in ("MASC", "FEM") or human not in HUMAN_LABELS:
                raise ValueError(f"bad confusion cell ({pipe!r}, {human!r})")
            if count < 0:
                raise ValueError("confusion counts must be >= 0")

    @classmethod
    def from_rows(cls, masc_row: Sequence[int], fem_row: Sequence[int]) -> "ConfusionMatrix":
        """Rows are (agreeing, opposite, unclear) counts for pipeline-MASC
        and pipeline-FEM respectively."""
        return cls({
            ("MASC", "MASC"): masc_row[0], ("MASC", "FEM"): masc_row[1], ("MASC", UNCLEAR): masc_row[2],
            ("FEM", "MASC"): fem_row[0], ("FEM", "FEM"): fem_row[1], ("FEM", UNCLEAR): fem_row[2],
        })

    def total(self) -> int:
        return sum(self.counts.values())

    def unclear(self) -> int:
        return sum(c for (_, human), c in self.counts.items() if human == UNCLEAR)

    def diagonal(self) -> int:
        return sum(c for (pipe, human), c in self.counts.items() if pipe == human)


@dataclass(frozen=True)
class ProdropRate:
    count: int
    dropped: int

    @property
    def rate(self) -> float:
        return self.dropped / self.count if self.count else 0.0


@dataclass
class EvalReport:
    prf: Optional[GenderPRF] = None
    confusion: Optional[ConfusionMatrix] = None
    bleu: Optional[float] = None
    prodrop_rates: dict[str, ProdropRate] = field(default_factory=dict)


def pronoun_prf(predictions: Sequence[tuple[GenderLabel, Optional[GenderLabel]]]) -> GenderPRF:
    """One-vs-rest precision/recall/F1 per gender.

    An abstention is neither a true nor a false positive; it only costs
    recall for the gold gender.
    """
    if not predictions:
        raise ValueError("cannot score an empty prediction list")
    out = {}
    for gender in (GenderLabel.MASC, GenderLabel.FEM):
        tp = sum(1 for gold, pred in predictions if gold == gender and pred == gender)
        fp = sum(1 for gold, pred in predictions if gold != gender and pred == gender)
        fn = sum(1 for gold, pred in predictions if gold == gender and pred != gender)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        out[gender] = PRF(precision, recall)
    return GenderPRF(out[GenderLabel.MASC], out[GenderLabel.FEM])


def agreement_stats(matrix: ConfusionMatrix) -> tuple[float, float]:
    """(disambiguation rate, agreement rate): the share of examples humans
    could disambiguate, and the share of those where the pipeline agreed."""
    total = matrix.total()
    if total == 0:
        raise ValueError("confusion matrix is empty")
    clear = total - matrix.unclear()
    if clear == 0:
        raise ValueError("agreement undefined: all examples unclear")
    return (clear / total, matrix.diagonal() / clear)


def prodrop_rate(pairs: Iterable[SentencePair]) -> dict[str, ProdropRate]:
    """Count he/she occurrences in the English side; each counts as dropped
    when the Spanish sentence has no el-acute/ella token (sentence-level
    presence, diacritic-sensitive)."""
    want = {"he": ("MASC", "él"), "she": ("FEM", "ella")}
    counts = {"MASC": [0, 0], "FEM": [0, 0]}
    for pair in pairs:
        es_lower = {t.surface.lower() for t in pair.es_sent.tokens}
        for tok in pair.en_sent.tokens:
            hit = want.get(tok.surface.lower())
            if hit is None:
                continue
            gender, es_pron = hit
            counts[gender][0] += 1
            if es_pron not in es_lower:
                counts[gender][1] += 1
    return {g: ProdropRate(c, d) for g, (c, d) in counts.items()}


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu(hypotheses: Sequence[Sequence[str]], references: Sequence[Sequence[str]],
         max_order: int = 4, smooth: Optional[str] = None) -> float:
    """Corpus BLEU in [0, 100]: geometric mean of modified n-gram precisions
    (n = 1..max_order) times the brevity penalty. Case-sensitive; callers
    tokenize. No smoothing by default, so any zero precision zeroes the
    score; ``smooth='add1'`` add-one smooths orders above 1."""
    if len(hypotheses) != len(references):
        raise ValueError("hypothesis and reference counts differ")
    if not hypotheses:
        raise ValueError("cannot score an empty corpus")
    matched = [0] * max_order
    total = [0] * max_order
    hyp_len = 0
    ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp, ref = list(hyp), list(ref)
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, max_order + 1):
            hyp_counts = _ngrams(hyp, n)
            ref_counts = _ngrams(ref, n)
            total[n - 1] += max(0, len(hyp) - n + 1)
            matched[n - 1] += sum(min(c, ref_counts[g]) for g, c in hyp_counts.items())
    if hyp_len == 0:
        return 0.0
    log_sum = 0.0
    for n in range(max_order):
        m, t = matched[n], total[n]
        if smooth == "add1" and n > 0:
            m, t = m + 1, t + 1
        if m == 0 or t == 0:
            return 0.0
        log_sum += math.log(m / t)
    brevity = 1.0 if hyp_len > ref_len else math.exp(1.0 - ref_len / hyp_len)
    return 100.0 * brevity * math.exp(log_sum / max_order)
