"""Statistical word alignment between matched sentence pairs.

IBM Model 1 trained by EM with a NULL source token, decoded as the
intersection of forward and reverse argmax links. Tokens are lowercased for
table statistics; alignment links refer to original token positions.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .model import tokenize
from .sentalign import SentencePair

NULL_TOKEN = "<NULL>"
PROB_FLOOR = 1e-12


@dataclass(frozen=True)
class TranslationTable:
    """Conditional lexical translation probabilities t(tgt | src).

    Rows (fixed src) over observed tgt tokens sum to 1; unobserved pairs
    fall back to a 1e-12 floor so unknown words drift to NULL.
    """

    probs: dict[tuple[str, str], float]
    iterations: int
    corpus_hash: str
    log_likelihood: tuple[float, ...] = ()

    def prob(self, src: str, tgt: str) -> float:
        return self.probs.get((src, tgt), PROB_FLOOR)

    def row(self, src: str) -> dict[str, float]:
        return {t: p for (s, t), p in self.probs.items() if s == src}

    def argmax(self, src: str) -> Optional[str]:
        row = self.row(src)
        if not row:
            return None
        return max(sorted(row), key=lambda t: row[t])


@dataclass(frozen=True)
class TokenAlignment:
    links: frozenset[tuple[int, int]]  # (es index, en index)
    method: str = "intersect_argmax"

    def __post_init__(self):
        if self.method == "intersect_argmax":
            es_side = [i for i, _ in self.links]
            en_side = [j for _, j in self.links]
            if len(set(es_side)) != len(es_side) or len(set(en_side)) != len(en_side):
                raise ValueError("intersect_argmax links must be one-to-one in both directions")

    def en_for_es(self, es_index: int) -> Optional[int]:
        for i, j in self.links:
            if i == es_index:
                return j
        return None

    def linked_en_indices(self) -> set[int]:
        return {j for _, j in self.links}


def _coerce_tokens(item) -> list[str]:
    if isinstance(item, str):
        return [t.surface.lower() for t in tokenize(item)]
    return [t.lower() for t in item]


def _corpus_pairs(corpus: Iterable) -> list[tuple[list[str], list[str]]]:
    pairs = []
    for entry in corpus:
        if isinstance(entry, SentencePair):
            src = [t.surface.lower() for t in entry.es_sent.tokens]
            tgt = [t.surface.lower() for t in entry.en_sent.tokens]
        else:
            a, b = entry
            src, tgt = _coerce_tokens(a), _coerce_tokens(b)
        pairs.append((src, tgt))
    return pairs


def corpus_digest(pairs: Sequence[tuple[list[str], list[str]]]) -> str:
    h = hashlib.sha256()
    for src, tgt in pairs:
        h.update("\x1f".join(src).encode("utf-8"))
        h.update(b"\x1e")
        h.update("\x1f".join(tgt).encode("utf-8"))
        h.update(b"\x1d")
    return h.hexdigest()


def train_ibm1(corpus: Iterable, iterations: int, reverse: bool = False) -> TranslationTable:
    """EM training from uniform initialization, NULL on the source side.

    ``corpus`` holds SentencePairs or (source text, target text) tuples;
    ``reverse=True`` swaps the sides before training. Per-iteration corpus
    log-likelihood (recorded before each update) is non-decreasing.
    Training is deterministic for a fixed corpus order.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    pairs = _corpus_pairs(corpus)
    if reverse:
        pairs = [(tgt, src) for src, tgt in pairs]
    if not pairs:
        raise ValueError("cannot train on an empty corpus")
    digest = corpus_digest(pairs)

    tgt_vocab: set[str] = set()
    for _, tgt in pairs:
        tgt_vocab.update(tgt)
    if not tgt_vocab:
        raise ValueError("corpus has no target tokens")
    uniform = 1.0 / len(tgt_vocab)

    # sparse init over co-occurring (src, tgt) pairs; NULL co-occurs with all
    t: dict[tuple[str, str], float] = {}
    for src, tgt in pairs:
        for tw in tgt:
            t[(NULL_TOKEN, tw)] = uniform
            for sw in src:
                t[(sw, tw)] = uniform

    ll_history: list[float] = []
    for _ in range(iterations):
        counts: dict[tuple[str, str], float] = {}
        totals: dict[str, float] = {}
        ll = 0.0
        for src, tgt in pairs:
            context = [NULL_TOKEN] + src
            for tw in tgt:
                scores = [t.get((sw, tw), PROB_FLOOR) for sw in context]
                denom = sum(scores)
                ll += math.log(denom / len(context))
                for sw, score in zip(context, scores):
                    share = score / denom
                    counts[(sw, tw)] = counts.get((sw, tw), 0.0) + share
                    totals[sw] = totals.get(sw, 0.0) + share
        ll_history.append(ll)
        t = {(sw, tw): c / totals[sw] for (sw, tw), c in counts.items()}

    return TranslationTable(t, iterations, digest, tuple(ll_history))


def _relpos(i: int, n: int) -> float:
    return i / (n - 1) if n > 1 else 0.0


def _argmax_candidate(table: TranslationTable, context: list[str], tgt_word: str,
                      tgt_pos: int, tgt_len: int) -> Optional[int]:
    """Best source position for one target token, or None for NULL.

    ``context[0]`` is NULL. Exact score ties prefer NULL (unknowns stay
    unlinked), then the candidate nearest in relative position, then the
    smaller index.
    """
    scores = [table.prob(sw, tgt_word) for sw in context]
    best = max(scores)
    winners = [k for k, s in enumerate(scores) if s == best]
    if winners[0] == 0:
        return None
    src_len = len(context) - 1
    tpos = _relpos(tgt_pos, tgt_len)
    return min(winners, key=lambda k: (abs(_relpos(k - 1, src_len) - tpos), k)) - 1


def align_tokens(pair: Union[SentencePair, tuple], table_fwd: TranslationTable,
                 table_rev: TranslationTable) -> TokenAlignment:
    """Intersection of forward (en given es) and reverse (es given en)
    argmax links for one sentence pair."""
    if isinstance(pair, SentencePair):
        es = [t.surface.lower() for t in pair.es_sent.tokens]
        en = [t.surface.lower() for t in pair.en_sent.tokens]
    else:
        es, en = (_coerce_tokens(side) for side in pair)

    fwd_links = set()
    context_es = [NULL_TOKEN] + es
    for j, ew in enumerate(en):
        i = _argmax_candidate(table_fwd, context_es, ew, j, len(en))
        if i is not None:
            fwd_links.add((i, j))

    rev_links = set()
    context_en = [NULL_TOKEN] + en
    for i, sw in enumerate(es):
        j = _argmax_candidate(table_rev, context_en, sw, i, len(es))
        if j is not None:
            rev_links.add((i, j))

    return TokenAlignment(frozenset(fwd_links & rev_links))


def save_table(table: TranslationTable) -> str:
    """TSV serialization: header comments carry iteration count and corpus
    hash; rows are src, tgt, probability."""
    lines = [
        f"# iterations = {table.iterations}",
        f"# corpus_hash = {table.corpus_hash}",
    ]
    for (src, tgt) in sorted(table.probs):
        lines.append(f"{src}\t{tgt}\t{table.probs[(src, tgt)]:.17g}")
    return "\n".join(lines) + "\n"


def load_table(stream) -> TranslationTable:
    if isinstance(stream, str):
        lines = stream.splitlines()
    else:
        lines = [ln.rstrip("\r\n") for ln in stream]
    iterations = 0
    corpus_hash = ""
    probs: dict[tuple[str, str], float] = {}
    for no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("iterations"):
                iterations = int(body.split("=", 1)[1])
            elif body.startswith("corpus_hash"):
                corpus_hash = body.split("=", 1)[1].strip()
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"line {no}: table rows are 'src<TAB>tgt<TAB>prob'")
        probs[(parts[0], parts[1])] = float(parts[2])
    return TranslationTable(probs, iterations, corpus_hash)
