"""Flat key/value run configuration with one section per stage.

Every numeric constant the pipeline uses is a key here with its documented
default, so a config file plus a seed pins a run completely.
"""

from __future__ import annotations

import configparser
from typing import Optional

DEFAULTS: dict[str, dict[str, str]] = {
    "corpus": {
        "source": "synth",          # synth | files
        "es_docs": "",              # plaintext or .conllu path when source=files
        "en_docs": "",
        "dictionary": "",           # bridge dictionary TSV (synth writes its own)
        "pos_lexicon": "",
    },
    "pages": {
        "loose_titles": "false",
    },
    "sentalign": {
        "edit_unit": "token",       # token | char
        "exact_limit": "200",
        "use_token_fallback": "false",
    },
    "aligner": {
        "iterations": "5",
    },
    "extract": {
        "budget": "128",
        "use_analyzer": "true",
        "subtoken_vocab": "",
    },
    "dataset": {
        "balance_seed": "13",
        "split_seed": "13",
        "split_key": "article",     # article | example
        "preset": "default",        # default | prodrop-benchmark | possessive-benchmark
        "fractions": "",            # overrides preset: "0.9,0.05,0.05"
    },
    "classify": {
        "provider": "heuristic",    # heuristic | remote
        "mark_style": "t_tags",     # t_tags | mask_token
        "budget": "128",
        "top_k": "10",
        "ignore_diacritics": "true",
    },
    "inject": {
        "mode": "train",
        "flip_rate": "0.02",
        "random_tag_rate": "0.05",
        "allow_add_flip": "true",
        "seed": "13",
    },
    "explain": {
        "n_samples": "1000",
        "ridge_lambda": "1.0",
        "sigma_scale": "0.75",
        "seed": "13",
    },
    "translate": {
        "timeout": "10",
        "retries": "3",
        "backoff": "0.5",
        "max_in_flight": "8",
        "cache": "",
    },
    "run": {
        "seed": "13",
        "jobs": "1",
        "out_dir": "out",
    },
}


class ConfigError(ValueError):
    pass


class Config:
    def __init__(self, values: Optional[dict[str, dict[str, str]]] = None):
        self.values = {section: dict(keys) for section, keys in DEFAULTS.items()}
        for section, keys in (values or {}).items():
            self.values.setdefault(section, {}).update(keys)

    @classmethod
    def load(cls, path: Optional[str]) -> "Config":
        if path is None:
            return cls()
        parser = configparser.ConfigParser()
        read = parser.read(path, encoding="utf-8")
        if not read:
            raise ConfigError(f"config file not found: {path}")
        values = {section: dict(parser.items(section)) for section in parser.sections()}
        return cls(values)

    def set(self, dotted_key: str, value: str) -> None:
        if "." not in dotted_key:
            raise ConfigError(f"overrides use section.key form, got {dotted_key!r}")
        section, key = dotted_key.split(".", 1)
        self.values.setdefault(section, {})[key] = value

    def get(self, section: str, key: str) -> str:
        try:
            return self.values[section][key]
        except KeyError:
            raise ConfigError(f"unknown config key {section}.{key}") from None

    def get_int(self, section: str, key: str) -> int:
        return int(self.get(section, key))

    def get_float(self, section: str, key: str) -> float:
        return float(self.get(section, key))

    def get_bool(self, section: str, key: str) -> bool:
        raw = self.get(section, key).strip().lower()
        if raw in ("true", "1", "yes", "on"):
            return True
        if raw in ("false", "0", "no", "off"):
            return False
        raise ConfigError(f"{section}.{key} must be boolean, got {raw!r}")

    def section(self, section: str) -> dict[str, str]:
        return dict(self.values.get(section, {}))

    def dump(self) -> str:
        lines = []
        for section in sorted(self.values):
            lines.append(f"[{section}]")
            for key in sorted(self.values[section]):
                lines.append(f"{key} = {self.values[section][key]}")
            lines.append("")
        return "\n".join(lines)
