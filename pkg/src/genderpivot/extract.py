"""Stage (C): detect Spanish dropped-subject and possessive-pronoun positions
and project gender from aligned English pronouns.

Detection reads dependency annotations (CoNLL-U input or the built-in
analyzer). Projection is conservative: ambiguous or unwitnessed slots are
dropped with a reason code rather than guessed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import lexicons
from .model import ROOT, GenderLabel, Sentence, SubtokenCounter, Token
from .sentalign import SentencePair
from .wordalign import TokenAlignment

PRODROP = "prodrop"
POSSESSIVE = "possessive"

_POSSESSIVE_SURFACES = {"su", "sus"}
_NOMINATIVE_EN = {"he": GenderLabel.MASC, "she": GenderLabel.FEM}
_POSSESSIVE_EN = {"his": GenderLabel.MASC, "her": GenderLabel.FEM}


@dataclass(frozen=True)
class PronounSlot:
    sentence: Sentence
    kind: str
    anchor: int

    def __post_init__(self):
        surface = self.sentence.tokens[self.anchor].surface
        if self.kind == POSSESSIVE and surface.lower() not in _POSSESSIVE_SURFACES:
            raise ValueError(f"possessive anchor must be su/sus, got {surface!r}")


@dataclass(frozen=True)
class PronounExample:
    """One labeled example, serializable losslessly to the dataset JSONL."""

    id: str
    kind: str
    label: GenderLabel
    context_sentences: tuple[str, ...]
    target_sentence: str
    anchor_index: int
    doc_id: str
    sent_id: int
    witness: str

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "label": self.label.value,
            "context_sentences": list(self.context_sentences),
            "target_sentence": self.target_sentence,
            "anchor_index": self.anchor_index,
            "doc_id": self.doc_id,
            "sent_id": self.sent_id,
            "witness": self.witness,
        }

    @classmethod
    def from_record(cls, record: dict) -> "PronounExample":
        return cls(
            id=record["id"],
            kind=record["kind"],
            label=GenderLabel.parse(record["label"]),
            context_sentences=tuple(record["context_sentences"]),
            target_sentence=record["target_sentence"],
            anchor_index=record["anchor_index"],
            doc_id=record["doc_id"],
            sent_id=record["sent_id"],
            witness=record["witness"],
        )


class SpanishAnalyzer:
    """Lexicon-driven shallow analyzer for unannotated Spanish fixtures.

    Tags verbs/nouns/names/pronouns/determiners from word lists, roots the
    first finite verb, and attaches the nearest preceding subject candidate
    as nsubj. Not a parser; real runs should supply CoNLL-U input.
    """

    def __init__(self, verbs: frozenset = lexicons.ES_VERBS_3SG,
                 nouns: frozenset = lexicons.ES_NOUNS,
                 names: frozenset = lexicons.NAMES_FEM | lexicons.NAMES_MASC | lexicons.SURNAMES,
                 pronouns: frozenset = lexicons.ES_SUBJECT_PRONOUNS,
                 determiners: frozenset = lexicons.ES_DETERMINERS):
        self.verbs = verbs
        self.nouns = nouns
        self.names = names
        self.pronouns = pronouns
        self.determiners = determiners

    def _pos(self, surface: str) -> str:
        lower = surface.lower()
        if lower in self.verbs:
            return "VERB"
        if lower in self.nouns:
            return "NOUN"
        if lower in self.names:
            return "PROPN"
        if lower in self.pronouns:
            return "PRON"
        if lower in self.determiners:
            return "DET"
        return "X"

    def annotate(self, sentence: Sentence) -> Sentence:
        pos_tags = [self._pos(t.surface) for t in sentence.tokens]
        try:
            root = pos_tags.index("VERB")
        except ValueError:
            return sentence  # no verb: left unannotated, detection will skip
        subject: Optional[int] = None
        for i in range(root - 1, -1, -1):
            if pos_tags[i] in ("PRON", "NOUN", "PROPN"):
                subject = i
                break
        tokens = []
        for i, (tok, pos) in enumerate(zip(sentence.tokens, pos_tags)):
            if i == root:
                dep, head = "root", ROOT
            elif i == subject:
                dep, head = "nsubj", root
            else:
                dep, head = "dep", root
            tokens.append(Token(tok.surface, tok.start, tok.end, pos, dep, head, tok.lemma))
        return Sentence(sentence.sent_id, sentence.text, tuple(tokens))


def detect_prodrop(sentence: Sentence, verb_filter: Optional[frozenset] = None,
                   audit: Optional[list] = None) -> list[PronounSlot]:
    """One slot per ROOT verb with no nsubj dependent and no noun to its
    left (same sentence). ``verb_filter``, when given, keeps only anchors
    whose lowercased surface is in the set (third-person-singular forms)."""
    if not sentence.annotated:
        if audit is not None:
            audit.append({"sent_id": sentence.sent_id, "kind": PRODROP,
                          "reason": "skipped: unannotated"})
        return []
    slots = []
    for r in sentence.root_indices():
        tok = sentence.tokens[r]
        if tok.pos != "VERB":
            continue
        has_nsubj = any(
            t.head == r and t.dep_label is not None and
            (t.dep_label == "nsubj" or t.dep_label.startswith("nsubj:"))
            for t in sentence.tokens)
        if has_nsubj:
            continue
        if any(t.pos in ("NOUN", "PROPN") for t in sentence.tokens[:r]):
            continue
        if verb_filter is not None and tok.surface.lower() not in verb_filter:
            continue
        slots.append(PronounSlot(sentence, PRODROP, r))
    return slots


def detect_possessive(sentence: Sentence) -> list[PronounSlot]:
    """One slot per su/sus token (possessive-determiner tag when present)."""
    slots = []
    for i, tok in enumerate(sentence.tokens):
        if tok.surface.lower() not in _POSSESSIVE_SURFACES:
            continue
        if tok.pos is not None and tok.pos not in ("DET", "PRON") and not tok.pos.endswith("$"):
            continue
        slots.append(PronounSlot(sentence, POSSESSIVE, i))
    return slots


def _trim_context(context: Sequence[str], target: str, budget: int,
                  counter: SubtokenCounter) -> Optional[tuple[str, ...]]:
    """Most recent whole context sentences that fit the budget alongside the
    target; None if the target alone exceeds it."""
    total = counter.count(target)
    if total > budget:
        return None
    kept: list[str] = []
    for text in reversed(context):
        cost = counter.count(text)
        if total + cost > budget:
            break
        kept.append(text)
        total += cost
    return tuple(reversed(kept))


def project_gender(pair: SentencePair, alignment: TokenAlignment,
                   slots: Iterable[PronounSlot], context: Sequence[str] = (),
                   doc_id: str = "", budget: int = 128,
                   counter: Optional[SubtokenCounter] = None,
                   audit: Optional[list] = None) -> list[PronounExample]:
    """Copy the gender of the aligned English pronoun onto each slot.

    Possessive slots label iff aligned to his/her. Prodrop slots label from
    the nearest subject-position he/she that is unaligned or aligned to the
    anchor verb; equal-distance candidates drop the slot as ambiguous.
    ``context`` holds the Spanish sentences preceding the target, oldest
    first; it is trimmed to the subtoken budget.
    """
    counter = counter or SubtokenCounter()
    en_tokens = pair.en_sent.tokens
    linked_en = alignment.linked_en_indices()
    out: list[PronounExample] = []

    def drop(slot: PronounSlot, reason: str):
        if audit is not None:
            audit.append({"doc_id": doc_id, "sent_id": slot.sentence.sent_id,
                          "kind": slot.kind, "anchor": slot.anchor, "reason": reason})

    for slot in slots:
        if slot.kind == POSSESSIVE:
            j = alignment.en_for_es(slot.anchor)
            if j is None:
                drop(slot, "unaligned")
                continue
            witness = en_tokens[j].surface
            label = _POSSESSIVE_EN.get(witness.lower())
            if label is None:
                drop(slot, "non-person pronoun")
                continue
        else:
            v_en = alignment.en_for_es(slot.anchor)
            candidates = [
                (j, tok.surface) for j, tok in enumerate(en_tokens)
                if tok.surface.lower() in _NOMINATIVE_EN
                and (j not in linked_en or (slot.anchor, j) in alignment.links)
            ]
            if v_en is not None:
                candidates = [(j, s) for j, s in candidates if j <= v_en]
                if not candidates:
                    drop(slot, "no witness")
                    continue
                candidates.sort(key=lambda c: (abs(c[0] - v_en), c[0]))
                if len(candidates) > 1 and abs(candidates[0][0] - v_en) == abs(candidates[1][0] - v_en):
                    drop(slot, "ambiguous")
                    continue
            else:
                if not candidates:
                    drop(slot, "no witness")
                    continue
                if len(candidates) > 1:
                    drop(slot, "ambiguous")
                    continue
            witness = candidates[0][1]
            label = _NOMINATIVE_EN[witness.lower()]

        trimmed = _trim_context(context, slot.sentence.text, budget, counter)
        if trimmed is None:
            drop(slot, "target exceeds budget")
            continue
        out.append(PronounExample(
            id=f"{doc_id}:{slot.sentence.sent_id}:{slot.kind}:{slot.anchor}",
            kind=slot.kind,
            label=label,
            context_sentences=trimmed,
            target_sentence=slot.sentence.text,
            anchor_index=slot.anchor,
            doc_id=doc_id,
            sent_id=slot.sentence.sent_id,
            witness=witness,
        ))
    return out


def audit_jsonl(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n" for r in records)
