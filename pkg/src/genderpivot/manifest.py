"""Stage manifests: content hashes of inputs, parameters, and seeds, so a
rerun with the same manifest is byte-identical. Text artifacts embed the
hash of the manifest that produced them."""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path
from typing import Optional

VERSION = "0.1.0"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_text(text: str) -> str:
    return sha256_bytes(text.encode("utf-8"))


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


class Manifest:
    def __init__(self, stage: str, seed: int, params: Optional[dict] = None):
        self.stage = stage
        self.seed = seed
        self.params = dict(params or {})
        self.inputs: dict[str, str] = {}

    def add_input(self, path) -> None:
        p = Path(path)
        self.inputs[p.name] = sha256_file(p)

    def add_value(self, name: str, text: str) -> None:
        self.inputs[name] = sha256_text(text)

    def body(self) -> dict:
        return {
            "stage": self.stage,
            "seed": self.seed,
            "version": VERSION,
            "params": self.params,
            "inputs": self.inputs,
        }

    @property
    def hash(self) -> str:
        return sha256_text(canonical_json(self.body()))

    def write(self, out_dir) -> Path:
        out = Path(out_dir) / f"{self.stage}.manifest.json"
        record = self.body()
        record["hash"] = self.hash
        out.write_text(json.dumps(record, sort_keys=True, ensure_ascii=False, indent=2) + "\n",
                       encoding="utf-8")
        return out


def jlog(event: str, **fields) -> None:
    """Structured JSONL log line on stderr; data never goes to stdout."""
    record = {"event": event}
    record.update(fields)
    print(canonical_json(record), file=sys.stderr)
