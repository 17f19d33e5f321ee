"""Stage (B): one-to-one sentence matching inside a page pair.

Spanish sentences are bridge-translated to English, then matched against the
English page by minimum token edit distance under two admissibility
constraints: distance at most half the longer sentence, and a shared noun or
verb. The matching maximizes pair count, then minimizes total cost.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .model import Sentence, tokenize
from .pages import PagePair
from .translate import TranslationError

# fallback when no POS lexicon is supplied (documented deviation, off by default)
DEFAULT_STOPWORDS = frozenset("""
the a an and or but of in on at to for with from by as is are was were be been
this that these those it its he she his her they them their there not no
""".split())


def edit_distance(a: Sequence, b: Sequence) -> int:
    """Levenshtein distance with unit costs over arbitrary item sequences."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        cur = [i]
        for j, y in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


class PosLexicon:
    """Maps lowercased surface forms to a coarse tag: noun, verb, or other."""

    def __init__(self, tags: dict[str, str]):
        self.tags = {k.lower(): v.lower() for k, v in tags.items()}

    @classmethod
    def from_tsv(cls, stream) -> "PosLexicon":
        if isinstance(stream, str):
            lines = stream.splitlines()
        else:
            lines = [ln.rstrip("\r\n") for ln in stream]
        tags = {}
        for no, line in enumerate(lines, start=1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"line {no}: POS lexicon rows are 'token<TAB>tag'")
            tags[parts[0]] = parts[1]
        return cls(tags)

    def tag(self, surface: str) -> str:
        return self.tags.get(surface.lower(), "other")


def shares_content_word(en_a: Sequence[str], en_b: Sequence[str],
                        pos_lexicon: Optional[PosLexicon] = None,
                        stopwords: frozenset = DEFAULT_STOPWORDS) -> tuple[bool, list[str]]:
    """True iff some token tagged noun or verb appears in both lists
    (lowercased). Without a lexicon, falls back to any shared non-stopword
    token of length >= 3."""
    lower_a = {t.lower() for t in en_a}
    lower_b = {t.lower() for t in en_b}
    common = lower_a & lower_b
    if pos_lexicon is not None:
        witnesses = sorted(w for w in common if pos_lexicon.tag(w) in ("noun", "verb"))
    else:
        witnesses = sorted(w for w in common if len(w) >= 3 and w not in stopwords)
    return (bool(witnesses), witnesses)


@dataclass(frozen=True)
class SentencePair:
    es_sent: Sentence
    en_sent: Sentence
    cost: int
    shared_content: tuple[str, ...] = ()


@dataclass
class PageAlignmentMeta:
    method: str = "exact"
    skipped_es: list[int] = field(default_factory=list)  # translator failures


def _admissible(bridge_tokens: list[str], en_tokens: list[str],
                pos_lexicon: Optional[PosLexicon], edit_unit: str,
                use_token_fallback: bool) -> Optional[tuple[int, list[str]]]:
    if edit_unit == "char":
        cost = edit_distance(" ".join(bridge_tokens), " ".join(en_tokens))
        limit = max(len(" ".join(bridge_tokens)), len(" ".join(en_tokens))) // 2
    else:
        cost = edit_distance(bridge_tokens, en_tokens)
        limit = max(len(bridge_tokens), len(en_tokens)) // 2
    if cost > limit:
        return None
    if pos_lexicon is None and not use_token_fallback:
        return None
    ok, witnesses = shares_content_word(bridge_tokens, en_tokens, pos_lexicon)
    if not ok:
        return None
    return cost, witnesses


def align_sentences(pair: PagePair, translator, pos_lexicon: Optional[PosLexicon] = None,
                    edit_unit: str = "token", exact_limit: int = 200,
                    use_token_fallback: bool = False,
                    meta: Optional[PageAlignmentMeta] = None) -> list[SentencePair]:
    """Match sentences of a page pair one-to-one.

    Among admissible pairs the result has maximum cardinality and, within
    that, minimum total cost; ties break deterministically toward smaller
    (es index, en index). Bridge-translation failures exclude only the
    affected Spanish sentence. Pages larger than ``exact_limit`` on either
    side fall back to greedy smallest-cost-first matching, flagged in
    ``meta.method``.
    """
    if edit_unit not in ("token", "char"):
        raise ValueError(f"edit_unit must be 'token' or 'char', got {edit_unit!r}")
    meta = meta if meta is not None else PageAlignmentMeta()
    es_sents = list(pair.es_doc.sentences)
    en_sents = list(pair.en_doc.sentences)

    bridges: dict[int, list[str]] = {}
    for i, sent in enumerate(es_sents):
        try:
            record = translator.translate(sent)
        except TranslationError:
            meta.skipped_es.append(i)
            continue
        bridges[i] = [t.surface for t in tokenize(record.translation)]
    en_tokens = [[t.surface for t in s.tokens] for s in en_sents]

    admissible: dict[tuple[int, int], tuple[int, list[str]]] = {}
    for i, bridge in bridges.items():
        for j, en in enumerate(en_tokens):
            got = _admissible(bridge, en, pos_lexicon, edit_unit, use_token_fallback)
            if got is not None:
                admissible[(i, j)] = got

    n, m = len(es_sents), len(en_sents)
    if not admissible:
        return []

    if max(n, m) <= exact_limit:
        matched = _exact_assignment(n, m, admissible)
        meta.method = "exact"
    else:
        matched = _greedy_assignment(admissible)
        meta.method = "greedy"

    out = []
    for i, j in sorted(matched):
        cost, witnesses = admissible[(i, j)]
        out.append(SentencePair(es_sents[i], en_sents[j], cost, tuple(witnesses)))
    return out


def _exact_assignment(n: int, m: int, admissible: dict) -> list[tuple[int, int]]:
    size = max(n, m)
    costs = np.array([c for c, _ in admissible.values()], dtype=float)
    max_cost = float(costs.max()) if costs.size else 0.0
    big = (max_cost + 1.0) * (min(n, m) + 1)
    # index epsilon: total over a matching stays below the smallest cost gap (1)
    eps = 1.0 / (max(1, n * m) * max(1, n * m))
    grid = np.full((size, size), big, dtype=float)
    for (i, j), (cost, _) in admissible.items():
        grid[i, j] = cost + (i * m + j) * eps
    rows, cols = linear_sum_assignment(grid)
    return [(int(i), int(j)) for i, j in zip(rows, cols) if (int(i), int(j)) in admissible]


def _greedy_assignment(admissible: dict) -> list[tuple[int, int]]:
    used_es: set[int] = set()
    used_en: set[int] = set()
    matched = []
    for (i, j), (cost, _) in sorted(admissible.items(), key=lambda kv: (kv[1][0], kv[0])):
        if i in used_es or j in used_en:
            continue
        used_es.add(i)
        used_en.add(j)
        matched.append((i, j))
    return matched


def pair_record(pair: PagePair, sp: SentencePair) -> dict:
    return {
        "es_doc_id": pair.es_doc.doc_id,
        "en_doc_id": pair.en_doc.doc_id,
        "es_sent_id": sp.es_sent.sent_id,
        "en_sent_id": sp.en_sent.sent_id,
        "cost": sp.cost,
        "witnesses": list(sp.shared_content),
    }


def write_pairs_jsonl(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n" for r in records)
