"""Field-of-activity classification from an organization's name."""

from __future__ import annotations

import re
from enum import Enum
from functools import lru_cache
from pathlib import Path

from .._data import data_path


class Sector(str, Enum):
    PUBLIC_SAFETY = "PublicSafety"
    GOVERNMENTAL = "Governmental"
    LAW_ENFORCEMENT = "LawEnforcement"
    MILITARY = "Military"
    EDUCATIONAL = "Educational"
    OTHER = "Other"


def _translate(pattern: str) -> str:
    # POSIX classes and single-quoted phrases as written in the table
    pattern = pattern.replace("[:alnum:]", "a-zA-Z0-9").replace("[:alpha:]", "a-zA-Z")
    return re.sub(r"'([^']*)'", lambda m: re.escape(m.group(1)), pattern)


def load_patterns(path: str | Path | None = None) -> list[tuple[Sector, re.Pattern]]:
    path = Path(path) if path else data_path("sector_patterns.tsv")
    patterns = []
    for raw in path.read_text(encoding="utf-8").splitlines():
        if not raw.strip() or raw.startswith("#"):
            continue
        name, expr = raw.split("\t", 1)
        patterns.append((Sector(name.strip()), re.compile(_translate(expr.strip()), re.I)))
    return patterns


@lru_cache(maxsize=None)
def _default_patterns():
    return tuple(load_patterns())


def classify_sector(name: str, patterns=None) -> Sector:
    """First sector whose pattern occurs in ``name``; Other when none does."""
    if not name:
        raise ValueError("empty organization name")
    for sector, regex in patterns if patterns is not None else _default_patterns():
        if regex.search(name):
            return sector
    return Sector.OTHER
