"""URL parsing, suffix splitting and dedicated-name detection."""

from __future__ import annotations

import csv
import logging
import warnings
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Iterable
from urllib.parse import urlsplit

from ..errors import MalformedUrl, UnknownSuffix
from .registry import TldCategory, TldRegistry
from .sectors import Sector, classify_sector

log = logging.getLogger(__name__)

US_STATES = frozenset(
    "ak al ar az ca co ct dc de fl ga hi ia id il in ks ky la ma md me mi mn mo ms "
    "mt nc nd ne nh nj nm nv ny oh ok or pa ri sc sd tn tx ut va vt wa wi wv wy".split())


@dataclass(frozen=True)
class OrgRecord:
    id: str
    name: str
    territory: str
    url: str


class LocalityPrefix(str, Enum):
    CITY = "ci"
    COUNTY = "co"
    NONE = "none"


@dataclass(frozen=True)
class UsLocality:
    prefix: LocalityPrefix
    locality: str
    state: str


@dataclass(frozen=True)
class DomainProfile:
    fqdn: str
    public_suffix: str
    effective_sld: str
    tld_category: TldCategory
    restricted: bool
    suffix_known: bool = True
    annotation: str = ""
    us_locality: UsLocality | None = None
    dedicated: bool | None = None
    sector: Sector | None = None

    @property
    def labels(self) -> list[str]:
        """Labels left of the effective SLD, leftmost first."""
        head = self.fqdn[: -len(self.effective_sld + "." + self.public_suffix)]
        return [l for l in head.split(".") if l]


def parse_url(url: str) -> tuple[str, str]:
    """Split an absolute http(s) URL into ``(fqdn, path)``.

    >>> parse_url("https://www.fresno.gov/police")
    ('www.fresno.gov', '/police')
    """
    try:
        parts = urlsplit(url.strip())
        host = parts.hostname
    except ValueError as exc:
        raise MalformedUrl(url) from exc
    if parts.scheme.lower() not in ("http", "https") or not host:
        raise MalformedUrl(url)
    fqdn = host.lower().rstrip(".")
    if not fqdn:
        raise MalformedUrl(url)
    path = parts.path
    if path == "/":
        path = ""
    return fqdn, path


def split_domain(fqdn: str, registry: TldRegistry) -> DomainProfile:
    fqdn = fqdn.lower().rstrip(".")
    if "." not in fqdn:
        raise ValueError(f"{fqdn!r} needs at least two labels")
    suffix, known = registry.public_suffix(fqdn)
    if suffix == fqdn:
        raise ValueError(f"{fqdn!r} is itself a public suffix")
    if not known:
        warnings.warn(f"no registry rule for {fqdn!r}; treating .{suffix} as gTLD",
                      UnknownSuffix, stacklevel=2)
        return DomainProfile(fqdn, suffix, _sld(fqdn, suffix), TldCategory.GTLD,
                             False, suffix_known=False)
    entry = registry.entry(suffix)
    return DomainProfile(fqdn, suffix, _sld(fqdn, suffix), entry.category,
                         entry.restricted, annotation=entry.annotation)


def _sld(fqdn: str, suffix: str) -> str:
    return fqdn[: -len(suffix) - 1].rsplit(".", 1)[-1]


def parse_us_locality(fqdn: str) -> UsLocality | None:
    """Recognise ``[ci|co.]<locality>.<state>.us`` names."""
    labels = fqdn.lower().rstrip(".").split(".")
    if len(labels) < 3 or labels[-1] != "us" or labels[-2] not in US_STATES:
        return None
    locality, state = labels[-3], labels[-2]
    prefix = LocalityPrefix.NONE
    if len(labels) >= 4 and labels[-4] in ("ci", "co"):
        prefix = LocalityPrefix(labels[-4])
    return UsLocality(prefix, locality, state)


def detect_dedicated(record: OrgRecord, overrides: Iterable[str] = ()) -> bool:
    fqdn, path = parse_url(record.url)
    return path == "" or fqdn in set(overrides)


def profile_record(record: OrgRecord, registry: TldRegistry,
                   overrides: Iterable[str] = ()) -> DomainProfile:
    """Full namespace profile of one roster entry."""
    fqdn, _ = parse_url(record.url)
    base = split_domain(fqdn, registry)
    locality = parse_us_locality(fqdn) if base.public_suffix.split(".")[-1] == "us" else None
    return replace(base, us_locality=locality,
                   dedicated=detect_dedicated(record, overrides),
                   sector=classify_sector(record.name))


def load_roster(path: str | Path) -> list[OrgRecord]:
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.DictReader(fh)
        missing = {"id", "name", "territory", "url"} - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"roster {path} lacks columns {sorted(missing)}")
        records = [OrgRecord(r["id"], r["name"], r["territory"], r["url"]) for r in reader]
    seen = set()
    for r in records:
        if r.id in seen:
            raise ValueError(f"duplicate roster id {r.id!r}")
        seen.add(r.id)
    return records


def load_overrides(path: str | Path | None) -> frozenset[str]:
    if not path:
        return frozenset()
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return frozenset(l.strip().lower().rstrip(".") for l in lines
                     if l.strip() and not l.startswith("#"))
