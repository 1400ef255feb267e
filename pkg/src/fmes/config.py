"""Configuration: a key=value file merged with command-line flags.

Flags always win over the file; the file location comes from --config,
the FMES_CONFIG environment variable, or ./fmes.cfg if present.  Resource
ceilings guard the echelon builds: weights above the ceiling, or with an
estimated memory footprint above the budget, are refused rather than
attempted.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field, fields

from .words import count_words


class ResourceRefusal(RuntimeError):
    """Raised when a request exceeds the configured resource ceilings."""


@dataclass
class Config:
    weight_cutoff: int = 12          # evaluation cutoff for expressions
    q_order: int = 25                # truncation order for q-expansions
    cache_dir: str | None = None     # echelon cache directory
    threads: int = 4                 # verify-suite worker count
    echelon_max_weight: int = 8      # largest weight an echelon build may take
    max_memory_mb: int = 2048        # rough budget for echelon generator storage

    def guard_echelon(self, weight: int) -> None:
        if weight > self.echelon_max_weight:
            raise ResourceRefusal(
                f"echelon at weight {weight} exceeds the configured ceiling "
                f"{self.echelon_max_weight}; raise echelon_max_weight to allow it")
        estimate_mb = _echelon_memory_estimate_mb(weight)
        if estimate_mb > self.max_memory_mb:
            raise ResourceRefusal(
                f"echelon at weight {weight} is estimated at {estimate_mb} MB, "
                f"over the {self.max_memory_mb} MB budget")


def _echelon_memory_estimate_mb(weight: int) -> int:
    # generators ~ sum_j a(j) a(weight - j); ~100 bytes per stored entry,
    # ~60 entries per row on average at desk scale
    rows = sum(count_words(j) * count_words(weight - j) for j in range(1, weight + 1))
    return rows * 60 * 100 // (1024 * 1024)


_KEYS = {f.name for f in fields(Config)}


def load_config(path: str | None = None, overrides: dict | None = None) -> Config:
    cfg = Config()
    candidates = []
    if path:
        candidates.append(path)
    elif os.environ.get("FMES_CONFIG"):
        candidates.append(os.environ["FMES_CONFIG"])
    elif os.path.exists("fmes.cfg"):
        candidates.append("fmes.cfg")
    for cand in candidates:
        with open(cand, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, sep, value = line.partition("=")
                key, value = key.strip(), value.strip()
                if not sep or key not in _KEYS:
                    raise ValueError(f"{cand}:{lineno}: bad config line {line!r}")
                setattr(cfg, key, _coerce(key, value))
    for key, value in (overrides or {}).items():
        if value is not None:
            setattr(cfg, key, value)
    return cfg


def _coerce(key: str, value: str):
    if key == "cache_dir":
        return value or None
    return int(value)
