"""Pluggable Spanish->English bridge translation for sentence alignment.

Providers translate sentence text; quality only needs to support alignment.
The external client speaks a one-endpoint JSON-over-HTTP contract and is
rate-limited; dictionary and identity providers are deterministic and make
runs reproducible offline.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass
from typing import Optional, Union

import requests

from .model import Sentence, detokenize, tokenize


class TranslationError(RuntimeError):
    """Provider failed for one sentence; callers skip that sentence."""


@dataclass(frozen=True)
class TranslationRecord:
    source: str
    translation: str
    provider: str
    cache_hit: bool = False


def _text_of(sentence: Union[Sentence, str]) -> str:
    return sentence.text if isinstance(sentence, Sentence) else str(sentence)


class IdentityProvider:
    """Returns the source text unchanged. Useful for monolingual tests."""

    name = "identity"

    def translate(self, sentence: Union[Sentence, str]) -> TranslationRecord:
        text = _text_of(sentence)
        return TranslationRecord(text, text, self.name)


class DictionaryProvider:
    """Token-by-token lookup; unknown tokens pass through unchanged.

    Lookup tries the exact surface first, then the lowercased form.
    """

    name = "dictionary"

    def __init__(self, entries: dict[str, str], warnings: Optional[list] = None):
        self.entries = dict(entries)
        self.warnings = warnings if warnings is not None else []

    def translate(self, sentence: Union[Sentence, str]) -> TranslationRecord:
        text = _text_of(sentence)
        mapped = []
        for tok in tokenize(text):
            tgt = self.entries.get(tok.surface)
            if tgt is None:
                tgt = self.entries.get(tok.surface.lower())
            mapped.append(tgt if tgt is not None else tok.surface)
        return TranslationRecord(text, " ".join(mapped), self.name)


def load_dictionary(stream, warnings: Optional[list] = None) -> DictionaryProvider:
    """Build a DictionaryProvider from TSV lines ``es-token<TAB>en-token``.

    Duplicate keys: last entry wins with a warning. Malformed lines raise
    with their line number. An empty file yields pass-through behavior.
    """
    if isinstance(stream, bytes):
        lines = stream.decode("utf-8").splitlines()
    elif isinstance(stream, str):
        lines = stream.splitlines()
    else:
        lines = [ln.rstrip("\r\n") for ln in stream]
    entries: dict[str, str] = {}
    warns = warnings if warnings is not None else []
    for no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0]:
            raise ValueError(f"line {no}: dictionary rows are 'src<TAB>tgt', got {line!r}")
        src, tgt = parts
        if src in entries:
            warns.append({"warning": "duplicate-dictionary-key", "key": src, "line": no})
        entries[src] = tgt
    return DictionaryProvider(entries, warns)


class ExternalProvider:
    """HTTP client for an external MT service.

    Contract: ``POST {base_url}/translate {"src": ..., "lang_pair": "es-en"}``
    returning ``{"translation": ...}``. Failures retry with exponential
    backoff before raising TranslationError. Concurrent calls are bounded.
    """

    name = "external"

    def __init__(self, base_url: str, lang_pair: str = "es-en", timeout: float = 10.0,
                 retries: int = 3, backoff: float = 0.5, max_in_flight: int = 8,
                 session: Optional[requests.Session] = None):
        self.base_url = base_url.rstrip("/")
        self.lang_pair = lang_pair
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self._sem = threading.BoundedSemaphore(max_in_flight)
        self._session = session or requests.Session()

    def translate(self, sentence: Union[Sentence, str]) -> TranslationRecord:
        text = _text_of(sentence)
        payload = {"src": text, "lang_pair": self.lang_pair}
        last_error: Optional[Exception] = None
        for attempt in range(self.retries + 1):
            if attempt:
                time.sleep(self.backoff * (2 ** (attempt - 1)))
            try:
                with self._sem:
                    resp = self._session.post(f"{self.base_url}/translate", json=payload,
                                              timeout=self.timeout)
                resp.raise_for_status()
                body = resp.json()
                translation = body.get("translation")
                if not isinstance(translation, str) or not translation:
                    raise TranslationError(f"bad response body: {body!r}")
                return TranslationRecord(text, translation, self.name)
            except TranslationError:
                raise
            except (requests.RequestException, ValueError) as exc:
                last_error = exc
        raise TranslationError(f"translation failed after {self.retries + 1} attempts: {last_error}")


def source_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class TranslationCache:
    """Append-only cache file: one JSON array ``[hash, source, translation]``
    per line. The first entry for a hash wins for the whole run, so a
    previously returned translation never changes."""

    def __init__(self, path=None):
        self.path = str(path) if path is not None else None
        self._entries: dict[str, str] = {}
        if self.path is not None:
            try:
                with open(self.path, encoding="utf-8") as fh:
                    for line in fh:
                        line = line.strip()
                        if not line:
                            continue
                        key, _src, translation = json.loads(line)
                        self._entries.setdefault(key, translation)
            except FileNotFoundError:
                pass
        self._lock = threading.Lock()

    def get(self, source: str) -> Optional[str]:
        return self._entries.get(source_hash(source))

    def put(self, source: str, translation: str) -> None:
        key = source_hash(source)
        with self._lock:
            if key in self._entries:
                return
            self._entries[key] = translation
            if self.path is not None:
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps([key, source, translation], ensure_ascii=False) + "\n")


class CachingTranslator:
    """Wraps any provider with a content-hash cache."""

    def __init__(self, provider, cache: Optional[TranslationCache] = None):
        self.provider = provider
        self.cache = cache or TranslationCache()

    @property
    def name(self) -> str:
        return self.provider.name

    def translate(self, sentence: Union[Sentence, str]) -> TranslationRecord:
        text = _text_of(sentence)
        hit = self.cache.get(text)
        if hit is not None:
            return TranslationRecord(text, hit, self.provider.name, cache_hit=True)
        record = self.provider.translate(text)
        self.cache.put(text, record.translation)
        return record
