"""Public-suffix rules plus the curated US registry overlay."""

from __future__ import annotations

import datetime as dt
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .._data import data_path


class TldCategory(str, Enum):
    GTLD = "Gtld"
    CCTLD = "Cctld"
    CCSLD = "CcSld"
    STLD = "Stld"


@dataclass(frozen=True)
class TldEntry:
    category: TldCategory
    restricted: bool
    registry: str = ""
    # e.g. "reserved_names" for the partially restricted .us apex
    annotation: str = ""


_STATE_SUFFIX = re.compile(r"^[a-z]{2}\.us$")


@dataclass
class TldRegistry:
    rules: set[str]
    wildcards: set[str]
    exceptions: set[str]
    overlay: dict[str, TldEntry]
    source: str
    loaded: dt.date = field(default_factory=dt.date.today)

    @classmethod
    def load(cls, psl: str | Path | None = None, overlay: str | Path | None = None,
             loaded: dt.date | None = None) -> "TldRegistry":
        psl = Path(psl) if psl else data_path("public_suffix_list.dat")
        overlay = Path(overlay) if overlay else data_path("us_registry.tsv")
        rules, wildcards, exceptions = parse_psl(psl.read_text(encoding="utf-8"))
        table = parse_overlay(overlay.read_text(encoding="utf-8"))
        # overlay suffixes are authoritative even if the snapshot lacks them
        rules |= set(table)
        snapshot_id = psl.name
        for line in psl.read_text(encoding="utf-8").splitlines()[:10]:
            if line.startswith("// Snapshot-Id:"):
                snapshot_id = line.split(":", 1)[1].strip()
        return cls(rules, wildcards, exceptions, table, snapshot_id,
                   loaded or dt.date.today())

    def public_suffix(self, fqdn: str) -> tuple[str, bool]:
        """Longest matching suffix of ``fqdn`` and whether any rule matched.

        Follows the PSL algorithm: exception rules beat wildcards, and an
        unmatched name falls back to its last label.
        """
        labels = fqdn.split(".")
        best = None
        for i in range(len(labels)):
            candidate = ".".join(labels[i:])
            if candidate in self.exceptions:
                best = ".".join(labels[i + 1:])
                break
            if candidate in self.rules:
                best = candidate
                break
            parent = ".".join(labels[i + 1:])
            if i + 1 < len(labels) and parent in self.wildcards:
                best = candidate
                break
        if best is None:
            return labels[-1], False
        return best, True

    def entry(self, suffix: str) -> TldEntry:
        if suffix in self.overlay:
            return self.overlay[suffix]
        if _STATE_SUFFIX.match(suffix):
            return TldEntry(TldCategory.CCSLD, True)
        tld = suffix.rsplit(".", 1)[-1]
        if len(tld) == 2:
            return TldEntry(TldCategory.CCTLD, False)
        return TldEntry(TldCategory.GTLD, False)


def parse_psl(text: str) -> tuple[set[str], set[str], set[str]]:
    rules: set[str] = set()
    wildcards: set[str] = set()
    exceptions: set[str] = set()
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("//"):
            continue
        rule = line.split()[0].lower()
        if rule.startswith("!"):
            exceptions.add(rule[1:])
        elif rule.startswith("*."):
            wildcards.add(rule[2:])
        else:
            rules.add(rule)
    return rules, wildcards, exceptions


def parse_overlay(text: str) -> dict[str, TldEntry]:
    table = {}
    for raw in text.splitlines():
        if not raw.strip() or raw.startswith("#"):
            continue
        cols = raw.split("\t")
        cols += [""] * (5 - len(cols))
        suffix, category, restricted, registry, note = (c.strip() for c in cols[:5])
        table[suffix.lower()] = TldEntry(
            TldCategory(category), restricted.lower() in ("yes", "true", "1"),
            registry, note)
    return table
