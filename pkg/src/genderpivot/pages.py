"""Stage (A): pair Spanish and English documents by exact title match."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .model import Document

_WS = re.compile(r"\s+")


def normalize_title(title: str, loose: bool = False) -> str:
    """NFC + trim + collapse internal whitespace. Case is preserved unless
    ``loose`` is set (recall experiments)."""
    norm = _WS.sub(" ", unicodedata.normalize("NFC", title).strip())
    return norm.casefold() if loose else norm


@dataclass(frozen=True)
class PagePair:
    es_doc: Document
    en_doc: Document
    match_key: str


@dataclass
class PageAlignResult:
    pairs: list[PagePair] = field(default_factory=list)
    warnings: list[dict] = field(default_factory=list)


def align_pages(es_docs: Iterable[Document], en_docs: Iterable[Document],
                loose_titles: bool = False) -> PageAlignResult:
    """Pair documents whose normalized titles match exactly.

    Duplicate titles within one side are dropped entirely (both copies) and
    reported as warnings; output is sorted by match key, so the result does
    not depend on input ordering.
    """
    result = PageAlignResult()

    def index(docs: Iterable[Document], lang: str) -> dict[str, Document]:
        by_key: dict[str, Document] = {}
        dupes: set[str] = set()
        for doc in docs:
            if doc.lang != lang:
                raise ValueError(f"expected lang={lang!r}, got {doc.lang!r} for {doc.doc_id!r}")
            key = normalize_title(doc.title, loose_titles)
            if key in by_key or key in dupes:
                dupes.add(key)
                by_key.pop(key, None)
            else:
                by_key[key] = doc
        for key in sorted(dupes):
            result.warnings.append({"warning": "duplicate-title", "lang": lang, "match_key": key})
        return by_key

    es_by_key = index(es_docs, "es")
    en_by_key = index(en_docs, "en")
    for key in sorted(es_by_key.keys() & en_by_key.keys()):
        result.pairs.append(PagePair(es_by_key[key], en_by_key[key], key))
    return result


def pairs_manifest_lines(pairs: Iterable[PagePair]) -> list[str]:
    """TSV rows (match_key, es_doc_id, en_doc_id) for the pairs manifest."""
    return [f"{p.match_key}\t{p.es_doc.doc_id}\t{p.en_doc.doc_id}" for p in pairs]


def read_pairs_manifest(stream) -> list[tuple[str, str, str]]:
    rows = []
    lines = stream.splitlines() if isinstance(stream, str) else stream
    for line in lines:
        line = line.rstrip("\r\n")
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"pairs manifest row needs 3 columns: {line!r}")
        rows.append((parts[0], parts[1], parts[2]))
    return rows
