"""Augment Spanish MT input with classifier gender tags plus training noise.

Tags go after the sentence (positional encodings stay stable): one ``<c>``
context token followed by exactly one ``<FEM>``/``<MASC>`` tag. Training
noise flips the has-target-pronoun indicator at a small rate and replaces
the tag with a uniform random one at another; inference mode is noise-free.
"""

from __future__ import annotations

import hashlib
import random
import re
from typing import Optional, Sequence

from .classify import Prediction
from .extract import PronounSlot
from .model import GenderLabel

CONTEXT_TOKEN = "<c>"
TRAIN = "train"
INFER = "infer"

_TAG_SUFFIX = re.compile(r" <c> <(?:FEM|MASC)>$")


def substream(seed: int, sentence_id) -> random.Random:
    """Per-sentence RNG derived from (seed, sentence id), so injection output
    is independent of processing order."""
    digest = hashlib.sha256(f"{seed}\x1f{sentence_id}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def inject_tag(sentence: str, slots: Sequence[PronounSlot], prediction: Optional[Prediction],
               rng: random.Random, flip_rate: float = 0.02, random_tag_rate: float = 0.05,
               mode: str = TRAIN, allow_add_flip: bool = True,
               audit: Optional[list] = None) -> str:
    """Return the sentence, tagged when it carries a target pronoun.

    Train mode flips the indicator with probability ``flip_rate`` (the
    add direction, tagging a slotless sentence, can be disabled via
    ``allow_add_flip``) and replaces the tag with a uniform random label
    with probability ``random_tag_rate``. Infer mode requires a prediction
    when slots are present and applies no noise; an abstaining prediction
    leaves the sentence untagged.
    """
    if mode not in (TRAIN, INFER):
        raise ValueError(f"mode must be '{TRAIN}' or '{INFER}', got {mode!r}")
    indicator = bool(slots)
    if mode == INFER and indicator and prediction is None:
        raise ValueError("inference on a slotted sentence requires a prediction")

    flipped = False
    randomized = False
    if mode == TRAIN and rng.random() < flip_rate:
        if indicator or allow_add_flip:
            indicator = not indicator
            flipped = True

    tag: Optional[str] = None
    if indicator:
        label = prediction.label if prediction is not None else None
        if mode == TRAIN and rng.random() < random_tag_rate:
            label = rng.choice((GenderLabel.MASC, GenderLabel.FEM))
            randomized = True
        if label is None:
            indicator = False  # nothing trustworthy to emit
        else:
            tag = label.tag

    if audit is not None:
        audit.append({"flipped": flipped, "randomized": randomized, "tag": tag})
    if tag is None:
        return sentence
    return f"{sentence} {CONTEXT_TOKEN} {tag}"


def strip_tag(text: str) -> str:
    """Remove a trailing ``<c> <TAG>``, recovering the original sentence
    byte-exactly."""
    return _TAG_SUFFIX.sub("", text)


def has_tag(text: str) -> bool:
    return bool(_TAG_SUFFIX.search(text))
