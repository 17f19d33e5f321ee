"""Local linear approximation of any pronoun-gender classifier.

Token-presence perturbations of one example are scored by the classifier
and fit with an exponentially-kernelled weighted ridge regression; the
signed token weights say which context words drove the decision.
"""

from __future__ import annotations

import dataclasses
import math
import random
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .classify import Prediction
from .extract import PronounExample
from .model import GenderLabel, tokenize


@dataclass(frozen=True)
class Explanation:
    token_weights: tuple[tuple[str, float], ...]  # sorted by |weight| desc
    predicted_class: GenderLabel
    n_samples: int

    def to_record(self) -> dict:
        return {
            "predicted_class": self.predicted_class.value,
            "token_weights": [[t, w] for t, w in self.token_weights],
            "n_samples": self.n_samples,
        }


def perturb(tokens: Sequence[str], n_samples: int, rng: random.Random) -> list[tuple[tuple[int, ...], str]]:
    """Presence/absence samples over tokens: sample 0 is the unperturbed
    text, every other sample drops a uniform random subset (each token kept
    independently with probability one half)."""
    if not tokens:
        raise ValueError("cannot perturb an empty token list")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    samples = [(tuple([1] * len(tokens)), " ".join(tokens))]
    for _ in range(n_samples - 1):
        mask = tuple(1 if rng.random() < 0.5 else 0 for _ in tokens)
        kept = [t for t, keep in zip(tokens, mask) if keep]
        samples.append((mask, " ".join(kept)))
    return samples


def kernel_weight(mask: Sequence[int], sigma: float) -> float:
    """exp(-(Hamming distance)^2 / sigma^2); 1 for the identity sample."""
    dropped = len(mask) - sum(mask)
    return math.exp(-(dropped ** 2) / (sigma ** 2))


def fit_local_linear(masks, responses, sample_weights, ridge_lambda: float) -> tuple[np.ndarray, float]:
    """Solve the weighted ridge normal equations with an unpenalized
    intercept; returns (feature weights, intercept)."""
    if ridge_lambda <= 0:
        raise ValueError("ridge_lambda must be > 0")
    X = np.asarray(masks, dtype=float)
    y = np.asarray(responses, dtype=float)
    w = np.asarray(sample_weights, dtype=float)
    if X.ndim != 2 or X.shape[0] != y.shape[0] or y.shape[0] != w.shape[0]:
        raise ValueError("masks, responses, and sample_weights disagree in length")
    design = np.hstack([np.ones((X.shape[0], 1)), X])
    penalty = ridge_lambda * np.eye(design.shape[1])
    penalty[0, 0] = 0.0
    lhs = design.T @ (design * w[:, None]) + penalty
    rhs = design.T @ (w * y)
    beta = np.linalg.solve(lhs, rhs)
    residual = float(np.linalg.norm(lhs @ beta - rhs))
    if residual > 1e-8 * max(1.0, float(np.linalg.norm(rhs))):
        raise ArithmeticError(f"normal equations residual too large: {residual}")
    return beta[1:], float(beta[0])


def _call(classifier, example: PronounExample) -> Prediction:
    if hasattr(classifier, "classify"):
        return classifier.classify(example)
    return classifier(example)


def _perturbable_tokens(example: PronounExample) -> tuple[list[str], list[int], list[str], int]:
    """(flat token list, per-context-sentence lengths, target surfaces,
    anchor position). The anchor token is never perturbed."""
    context_tokens: list[str] = []
    lengths: list[int] = []
    for text in example.context_sentences:
        surfs = [t.surface for t in tokenize(text)]
        lengths.append(len(surfs))
        context_tokens.extend(surfs)
    target_surfs = [t.surface for t in tokenize(example.target_sentence)]
    return context_tokens, lengths, target_surfs, example.anchor_index


def _rebuild(example: PronounExample, mask: Sequence[int], lengths: Sequence[int],
             context_tokens: Sequence[str], target_surfs: Sequence[str],
             anchor: int) -> PronounExample:
    ctx_sents = []
    offset = 0
    for n in lengths:
        kept = [t for t, keep in zip(context_tokens[offset: offset + n], mask[offset: offset + n]) if keep]
        ctx_sents.append(" ".join(kept))
        offset += n
    tgt_mask = mask[offset:]
    kept_target = []
    new_anchor = 0
    k = 0
    for i, surf in enumerate(target_surfs):
        if i == anchor:
            new_anchor = len(kept_target)
            kept_target.append(surf)
        else:
            if tgt_mask[k]:
                kept_target.append(surf)
            k += 1
    return dataclasses.replace(example, context_sentences=tuple(ctx_sents),
                               target_sentence=" ".join(kept_target),
                               anchor_index=new_anchor)


def explain(classifier: Union[Callable[[PronounExample], Prediction], object],
            example: PronounExample, n_samples: int, rng: random.Random,
            ridge_lambda: float = 1.0, sigma_scale: float = 0.75) -> Explanation:
    """Fit a local linear surrogate around one example.

    The regression target is the classifier's score for the class it
    predicts on the unperturbed example: its confidence when it repeats
    that label, 0.5 when it abstains, one minus confidence otherwise.
    """
    context_tokens, lengths, target_surfs, anchor = _perturbable_tokens(example)
    tokens = context_tokens + [s for i, s in enumerate(target_surfs) if i != anchor]
    identity = _call(classifier, example)
    if identity.abstained:
        raise ValueError("nothing to explain: classifier abstained on the input")
    predicted = identity.label

    samples = perturb(tokens, n_samples, rng)
    sigma = sigma_scale * math.sqrt(len(tokens))
    masks, weights, responses = [], [], []
    for mask, _text in samples:
        perturbed = _rebuild(example, mask, lengths, context_tokens, target_surfs, anchor)
        pred = _call(classifier, perturbed)
        if pred.label is None:
            score = 0.5
        elif pred.label == predicted:
            score = pred.confidence
        else:
            score = 1.0 - pred.confidence
        masks.append(mask)
        weights.append(kernel_weight(mask, sigma))
        responses.append(score)

    coef, _intercept = fit_local_linear(masks, responses, weights, ridge_lambda)
    order = sorted(range(len(tokens)), key=lambda i: (-abs(coef[i]), i))
    pairs = tuple((tokens[i], float(coef[i])) for i in order)
    return Explanation(pairs, predicted, n_samples)
