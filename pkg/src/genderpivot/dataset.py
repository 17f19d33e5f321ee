"""Final dataset assembly: gender balancing, splitting, JSONL round-trip."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .extract import PronounExample
from .model import GenderLabel

SPLIT_NAMES = ("train", "dev", "test")

# back-derived from published corpus sizes so the preset reproduces them
SPLIT_PRESETS: dict[str, tuple[float, float, float]] = {
    "default": (0.90, 0.05, 0.05),
    "prodrop-benchmark": (72120 / 79240, 2968 / 79240, 4152 / 79240),
    "possessive-benchmark": (167222 / 187224, 8862 / 187224, 11140 / 187224),
}


@dataclass(frozen=True)
class DatasetSplit:
    name: str
    examples: tuple[PronounExample, ...]


def balance(examples: Sequence[PronounExample], seed: int) -> list[PronounExample]:
    """Downsample the majority gender uniformly (seeded) to the minority
    count; input order is preserved among survivors."""
    by_label = {GenderLabel.MASC: [], GenderLabel.FEM: []}
    for i, ex in enumerate(examples):
        by_label[ex.label].append(i)
    n_masc, n_fem = len(by_label[GenderLabel.MASC]), len(by_label[GenderLabel.FEM])
    if n_masc == 0 or n_fem == 0:
        raise ValueError("cannot balance: one gender is absent")
    if n_masc == n_fem:
        return list(examples)
    majority = GenderLabel.MASC if n_masc > n_fem else GenderLabel.FEM
    target = min(n_masc, n_fem)
    rng = random.Random(seed)
    keep = set(rng.sample(by_label[majority], target))
    return [ex for i, ex in enumerate(examples)
            if ex.label != majority or i in keep]


def largest_remainder_sizes(total: int, fractions: Sequence[float]) -> list[int]:
    if any(f < 0 for f in fractions):
        raise ValueError("fractions must be non-negative")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError(f"fractions must sum to 1, got {sum(fractions)!r}")
    quotas = [f * total for f in fractions]
    sizes = [int(q) for q in quotas]
    remainders = sorted(range(len(fractions)), key=lambda i: (-(quotas[i] - sizes[i]), i))
    for i in remainders[: total - sum(sizes)]:
        sizes[i] += 1
    return sizes


def split(examples: Sequence[PronounExample], fractions: Sequence[float],
          seed: int, key: str = "article") -> tuple[DatasetSplit, DatasetSplit, DatasetSplit]:
    """Seeded shuffle then contiguous cut into train/dev/test.

    ``key='example'`` shuffles examples individually and the cut sizes match
    largest-remainder rounding exactly. ``key='article'`` (default) shuffles
    whole doc_id groups so no article spans two splits; sizes are then
    best-effort around the same quotas.
    """
    if len(fractions) != 3:
        raise ValueError("exactly three fractions (train, dev, test)")
    sizes = largest_remainder_sizes(len(examples), fractions)
    rng = random.Random(seed)

    if key == "example":
        order = list(examples)
        rng.shuffle(order)
        cuts = [order[: sizes[0]],
                order[sizes[0]: sizes[0] + sizes[1]],
                order[sizes[0] + sizes[1]:]]
    elif key == "article":
        groups: dict[str, list[PronounExample]] = {}
        for ex in examples:
            groups.setdefault(ex.doc_id, []).append(ex)
        group_ids = list(groups)
        rng.shuffle(group_ids)
        cuts = [[], [], []]
        boundary = [sizes[0], sizes[0] + sizes[1], len(examples)]
        filled = 0
        part = 0
        for gid in group_ids:
            while part < 2 and filled >= boundary[part]:
                part += 1
            cuts[part].extend(groups[gid])
            filled += len(groups[gid])
    else:
        raise ValueError(f"key must be 'example' or 'article', got {key!r}")

    return tuple(DatasetSplit(name, tuple(cut))
                 for name, cut in zip(SPLIT_NAMES, cuts))


def dedupe(examples: Iterable[PronounExample]) -> list[PronounExample]:
    """Drop exact duplicates by example id, keeping first occurrences."""
    seen: set[str] = set()
    out = []
    for ex in examples:
        if ex.id in seen:
            continue
        seen.add(ex.id)
        out.append(ex)
    return out


def write_examples(examples: Iterable[PronounExample], manifest_hash: Optional[str] = None) -> str:
    lines = []
    if manifest_hash:
        lines.append(json.dumps({"_manifest": manifest_hash}, sort_keys=True))
    for ex in examples:
        lines.append(json.dumps(ex.to_record(), ensure_ascii=False, sort_keys=True))
    return "\n".join(lines) + ("\n" if lines else "")


def read_examples(stream) -> list[PronounExample]:
    """Parse example JSONL; records whose keys all start with ``_`` are
    artifact metadata and skipped. Malformed records raise with their
    1-based record number."""
    if isinstance(stream, str):
        lines = stream.splitlines()
    else:
        lines = [ln.rstrip("\r\n") for ln in stream]
    out = []
    for no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"record {no}: invalid JSON ({exc})") from None
        if isinstance(record, dict) and record and all(k.startswith("_") for k in record):
            continue
        try:
            out.append(PronounExample.from_record(record))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"record {no}: {exc}") from None
    return out
