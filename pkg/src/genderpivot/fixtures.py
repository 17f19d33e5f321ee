"""Frozen evaluation fixtures: human-agreement confusion counts and
prodrop-rate counts, expandable into sentence pairs for the rate analysis."""

from __future__ import annotations

from .metrics import ConfusionMatrix
from .model import Sentence
from .sentalign import SentencePair

AGREEMENT_FIXTURES: dict[str, ConfusionMatrix] = {
    # rows: (human agrees, human disagrees, human unclear)
    "prodrop-agreement": ConfusionMatrix.from_rows((221, 3, 36), (7, 179, 43)),
    "possessive-agreement": ConfusionMatrix.from_rows((198, 6, 48), (25, 179, 55)),
}

# per English pronoun: (occurrences, occurrences with the Spanish subject
# pronoun missing) on a held-out news development corpus
PRODROP_RATE_COUNTS: dict[str, tuple[int, int]] = {
    "he": (1220, 1106),
    "she": (314, 251),
}


def _pair(es_text: str, en_text: str) -> SentencePair:
    return SentencePair(Sentence.from_text(0, es_text), Sentence.from_text(0, en_text),
                        cost=0, shared_content=("worked",))


def prodrop_rate_pairs() -> list[SentencePair]:
    """Expand the frozen counts into minimal sentence pairs."""
    pairs = []
    for pronoun, (count, dropped) in PRODROP_RATE_COUNTS.items():
        es_pron = "Él" if pronoun == "he" else "Ella"
        en = f"{pronoun.capitalize()} worked there."
        for _ in range(dropped):
            pairs.append(_pair("Trabajó allí.", en))
        for _ in range(count - dropped):
            pairs.append(_pair(f"{es_pron} trabajó allí.", en))
    return pairs
