"""Core text data model: tokens, sentences, documents, CoNLL-U ingestion.

Everything here is immutable after construction and safe to share across
threads. The tokenizer is deterministic: whitespace splitting with
leading/trailing punctuation peeled into separate tokens, after Unicode
NFC normalization.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

ROOT = -1
"""Head index sentinel marking the syntactic root of a sentence."""

_CHUNK = re.compile(r"\S+")


class GenderLabel(Enum):
    """Binary pronoun gender label, serialized as ``<MASC>`` / ``<FEM>``."""

    MASC = "MASC"
    FEM = "FEM"

    @property
    def tag(self) -> str:
        return f"<{self.value}>"

    @classmethod
    def parse(cls, text: str) -> "GenderLabel":
        key = text.strip().strip("<>").upper()
        try:
            return cls[key]
        except KeyError:
            raise ValueError(f"not a gender label: {text!r}") from None


@dataclass(frozen=True)
class Token:
    """One surface token with half-open character span into its sentence.

    ``pos``/``dep_label``/``head``/``lemma`` are populated only when the
    sentence came from annotated input or the built-in analyzer. ``head``
    is a 0-based token index, or :data:`ROOT`.
    """

    surface: str
    start: int
    end: int
    pos: Optional[str] = None
    dep_label: Optional[str] = None
    head: Optional[int] = None
    lemma: Optional[str] = None

    @property
    def char_span(self) -> tuple[int, int]:
        return (self.start, self.end)

    def with_annotations(self, pos=None, dep_label=None, head=None, lemma=None) -> "Token":
        return Token(self.surface, self.start, self.end,
                     pos if pos is not None else self.pos,
                     dep_label if dep_label is not None else self.dep_label,
                     head if head is not None else self.head,
                     lemma if lemma is not None else self.lemma)


@dataclass(frozen=True)
class Sentence:
    sent_id: int
    text: str
    tokens: tuple[Token, ...]

    def __post_init__(self):
        prev_end = -1
        for tok in self.tokens:
            if not (0 <= tok.start <= tok.end <= len(self.text)):
                raise ValueError(f"token span {tok.char_span} outside sentence of length {len(self.text)}")
            if tok.start < prev_end:
                raise ValueError("token spans overlap or are out of order")
            prev_end = tok.end
            if tok.head is not None and tok.head != ROOT and not (0 <= tok.head < len(self.tokens)):
                raise ValueError(f"head index {tok.head} out of range")

    @classmethod
    def from_text(cls, sent_id: int, text: str) -> "Sentence":
        norm = normalize_text(text)
        return cls(sent_id, norm, tuple(tokenize(norm)))

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]

    def root_indices(self) -> list[int]:
        return [i for i, t in enumerate(self.tokens) if t.head == ROOT]

    @property
    def annotated(self) -> bool:
        return any(t.dep_label is not None for t in self.tokens)


@dataclass(frozen=True)
class Document:
    doc_id: str
    lang: str
    title: str
    sentences: tuple[Sentence, ...]

    def __post_init__(self):
        ids = [s.sent_id for s in self.sentences]
        if any(b <= a for a, b in zip(ids, ids[1:])):
            raise ValueError(f"sentence ids not strictly increasing in {self.doc_id!r}")


def normalize_text(text: str) -> str:
    """Unicode NFC normalization; all other characters preserved."""
    return unicodedata.normalize("NFC", text)


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str) -> list[Token]:
    """Deterministic tokenizer: split on whitespace, peel leading/trailing
    punctuation characters into their own tokens.

    Character spans index into the NFC-normalized text. Interior
    punctuation (hyphens, apostrophes) stays attached.
    """
    text = normalize_text(text)
    out: list[Token] = []
    for m in _CHUNK.finditer(text):
        lo, hi = m.start(), m.end()
        # peel leading punctuation
        while lo < hi and _is_punct(text[lo]):
            out.append(Token(text[lo], lo, lo + 1))
            lo += 1
        # find trailing punctuation run
        tail = hi
        while tail > lo and _is_punct(text[tail - 1]):
            tail -= 1
        if lo < tail:
            out.append(Token(text[lo:tail], lo, tail))
        for i in range(tail, hi):
            out.append(Token(text[i], i, i + 1))
    return out


def detokenize(tokens: Iterable[Token]) -> str:
    """Inverse of :func:`tokenize` up to whitespace normalization: adjacent
    spans rejoin without a space, gaps collapse to a single space."""
    toks = list(tokens)
    if not toks:
        return ""
    parts = [toks[0].surface]
    for prev, cur in zip(toks, toks[1:]):
        if cur.start > prev.end:
            parts.append(" ")
        parts.append(cur.surface)
    return "".join(parts)


def strip_diacritics(text: str) -> str:
    decomposed = unicodedata.normalize("NFD", text)
    return unicodedata.normalize("NFC", "".join(c for c in decomposed if unicodedata.category(c) != "Mn"))


class ParseError(ValueError):
    """Malformed input file; carries the offending 1-based line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _coerce_lines(stream) -> list[str]:
    if isinstance(stream, bytes):
        return stream.decode("utf-8").splitlines()
    if isinstance(stream, str):
        return stream.splitlines()
    out = []
    for line in stream:
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        out.append(line.rstrip("\r\n"))
    return out


def _meta_value(line: str, key: str) -> Optional[str]:
    body = line[1:].strip()
    for sep in ("=",):
        if body.startswith(key) and body[len(key):].lstrip().startswith(sep):
            return body.split(sep, 1)[1].strip()
    return None


def parse_conllu(stream, default_lang: str = "es") -> list[Document]:
    """Parse 10-column CoNLL-U into Documents.

    Multiword ranges (``1-2``) and empty nodes (``1.1``) are skipped; pos
    comes from column 4, head from column 7 (0 = root), dep_label from
    column 8, lemma from column 3. Document boundaries come from
    ``# newdoc``/``# doc_id`` comments; ``# title``/``# lang`` are honored.
    """
    lines = _coerce_lines(stream)
    docs: list[Document] = []
    cur_rows: list[tuple[list[str], int]] = []
    cur_sents: list[Sentence] = []
    cur_meta = {"doc_id": None, "title": "", "lang": default_lang}
    started = False

    def flush_sentence():
        nonlocal cur_rows
        if not cur_rows:
            return
        tokens: list[Token] = []
        surfaces: list[str] = []
        annos: list[tuple[Optional[str], Optional[int], Optional[str], Optional[str]]] = []
        for cols, line_no in cur_rows:
            tid = cols[0]
            if "-" in tid or "." in tid:
                continue
            try:
                int(tid)
            except ValueError:
                raise ParseError(f"non-integer token id {tid!r}", line_no)
            head_col = cols[6]
            if head_col == "_":
                head: Optional[int] = None
            else:
                try:
                    h = int(head_col)
                except ValueError:
                    raise ParseError(f"non-integer head {head_col!r}", line_no)
                head = ROOT if h == 0 else h - 1
            surfaces.append(cols[1])
            annos.append((
                None if cols[3] == "_" else cols[3],
                head,
                None if cols[7] == "_" else cols[7],
                None if cols[2] == "_" else cols[2],
            ))
        pos_chr = 0
        text_parts = []
        for surf, (pos, head, dep, lemma) in zip(surfaces, annos):
            if text_parts:
                text_parts.append(" ")
                pos_chr += 1
            tokens.append(Token(surf, pos_chr, pos_chr + len(surf), pos, dep, head, lemma))
            text_parts.append(surf)
            pos_chr += len(surf)
        cur_sents.append(Sentence(len(cur_sents), "".join(text_parts), tuple(tokens)))
        cur_rows = []

    def flush_document():
        nonlocal cur_sents, cur_meta
        flush_sentence()
        if cur_sents or cur_meta["doc_id"] is not None:
            doc_id = cur_meta["doc_id"] or f"doc{len(docs):04d}"
            docs.append(Document(doc_id, cur_meta["lang"], cur_meta["title"], tuple(cur_sents)))
        cur_sents = []
        cur_meta = {"doc_id": None, "title": "", "lang": default_lang}

    for idx, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            flush_sentence()
            continue
        if line.startswith("#"):
            newdoc = _meta_value(line, "newdoc id")
            docid = _meta_value(line, "doc_id")
            if newdoc is not None or docid is not None or line[1:].strip() == "newdoc":
                if started:
                    flush_document()
                started = True
                cur_meta["doc_id"] = newdoc if newdoc is not None else docid
                continue
            title = _meta_value(line, "title")
            if title is not None:
                cur_meta["title"] = title
                continue
            lang = _meta_value(line, "lang")
            if lang is not None:
                cur_meta["lang"] = lang
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ParseError(f"expected 10 tab-separated columns, got {len(cols)}", idx)
        started = True
        cur_rows.append((cols, idx))

    if started:
        flush_document()
    return docs


def serialize_conllu(docs: Iterable[Document]) -> str:
    """Inverse of :func:`parse_conllu` on the fields the model retains."""
    out: list[str] = []
    for doc in docs:
        out.append(f"# newdoc id = {doc.doc_id}")
        if doc.title:
            out.append(f"# title = {doc.title}")
        out.append(f"# lang = {doc.lang}")
        for sent in doc.sentences:
            out.append(f"# sent_id = {sent.sent_id}")
            out.append(f"# text = {sent.text}")
            for i, tok in enumerate(sent.tokens):
                if tok.head is None:
                    head = "_"
                else:
                    head = "0" if tok.head == ROOT else str(tok.head + 1)
                out.append("\t".join([
                    str(i + 1), tok.surface, tok.lemma or "_", tok.pos or "_", "_", "_",
                    head, tok.dep_label or "_", "_", "_",
                ]))
            out.append("")
    return "\n".join(out) + ("\n" if out else "")


def read_plaintext(stream, lang: str = "es") -> list[Document]:
    """Read one-sentence-per-line documents with ``# doc_id=`` / ``# title=``
    comment headers. A new ``# doc_id=`` starts a new document."""
    lines = _coerce_lines(stream)
    docs: list[Document] = []
    meta = {"doc_id": None, "title": "", "lang": lang}
    sents: list[Sentence] = []

    def flush():
        nonlocal sents, meta
        if meta["doc_id"] is not None or sents:
            doc_id = meta["doc_id"] or f"doc{len(docs):04d}"
            docs.append(Document(doc_id, meta["lang"], meta["title"], tuple(sents)))
        sents = []
        meta = {"doc_id": None, "title": "", "lang": lang}

    started = False
    for raw in lines:
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        if line.startswith("#"):
            docid = _meta_value(line, "doc_id")
            if docid is not None:
                if started:
                    flush()
                started = True
                meta["doc_id"] = docid
                continue
            title = _meta_value(line, "title")
            if title is not None:
                meta["title"] = title
                continue
            langv = _meta_value(line, "lang")
            if langv is not None:
                meta["lang"] = langv
            continue
        started = True
        sents.append(Sentence.from_text(len(sents), line))
    if started:
        flush()
    return docs


def write_plaintext(docs: Iterable[Document]) -> str:
    out: list[str] = []
    for doc in docs:
        out.append(f"# doc_id={doc.doc_id}")
        if doc.title:
            out.append(f"# title={doc.title}")
        out.append(f"# lang={doc.lang}")
        for sent in doc.sentences:
            out.append(sent.text)
        out.append("")
    return "\n".join(out) + ("\n" if out else "")


class SubtokenCounter:
    """Counts window units for context budgets.

    Without a vocabulary this counts tokenizer tokens. With a wordpiece
    vocabulary (one piece per line, ``##`` marking continuations) it counts
    greedy longest-match wordpieces, unknown tokens counting as one unit.
    """

    def __init__(self, vocab: Optional[Iterable[str]] = None):
        self.vocab = set(v.strip() for v in vocab) if vocab is not None else None

    @classmethod
    def from_file(cls, path) -> "SubtokenCounter":
        with open(path, encoding="utf-8") as fh:
            return cls(line for line in fh if line.strip())

    def count(self, text: str) -> int:
        tokens = tokenize(text)
        if self.vocab is None:
            return len(tokens)
        return sum(self._pieces(t.surface) for t in tokens)

    def _pieces(self, word: str) -> int:
        pieces = 0
        pos = 0
        while pos < len(word):
            end = len(word)
            while end > pos:
                cand = word[pos:end] if pos == 0 else "##" + word[pos:end]
                if cand in self.vocab:
                    break
                end -= 1
            if end == pos:
                return max(1, pieces + 1)  # unknown word: one [UNK] unit
            pieces += 1
            pos = end
        return max(1, pieces)
