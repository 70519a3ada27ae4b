"""Historical analytics over Certificate Transparency results.

Input is one newline-delimited JSON file per host (``<fqdn>.jsonl``). Each
line is an object with ``sha256``, ``issuer_o``, ``subject``, ``sans``,
``not_before``, ``not_after``, ``policy_oids`` and ``is_precert``.
"""

from __future__ import annotations

import datetime as dt
import json
import logging
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable

import numpy as np

from .assurance import CertClass, Profile, profile
from .errors import SchemaError
from .webpki.certs import CaConfig, CertRecord, default_config
from .webpki.classify import ValidationClass, classify_validation
from .webpki.validation import name_covers

log = logging.getLogger(__name__)

UTC = dt.timezone.utc
OTHER = "other"
_HEX64 = re.compile(r"[0-9a-f]{64}")


class MatchKind(str, Enum):
    EXACT_SAN = "ExactSan"
    WILDCARD_SAN = "WildcardSan"
    SUBJECT_CN = "SubjectCn"


@dataclass(frozen=True)
class CtRecord:
    host: str
    cert: CertRecord
    matched_by: MatchKind


@dataclass
class IngestStats:
    kept: int = 0
    precerts: int = 0
    duplicates: int = 0
    out_of_decade: int = 0
    unmatched: int = 0
    schema_errors: int = 0

    def merge(self, other: "IngestStats") -> None:
        for name in self.__dataclass_fields__:
            setattr(self, name, getattr(self, name) + getattr(other, name))


def match_host(host: str, cert: CertRecord) -> MatchKind | None:
    host = host.lower().rstrip(".")
    if host in cert.san_dns:
        return MatchKind.EXACT_SAN
    if any(name_covers(san, host) for san in cert.san_dns if san.startswith("*.")):
        return MatchKind.WILDCARD_SAN
    cn = cert.subject.get("CN")
    if cn and name_covers(cn, host):
        return MatchKind.SUBJECT_CN
    return None


def parse_time(value) -> dt.datetime:
    if not isinstance(value, str):
        raise SchemaError(f"timestamp must be a string, got {type(value).__name__}")
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        stamp = dt.datetime.fromisoformat(text)
    except ValueError as exc:
        raise SchemaError(f"bad timestamp {value!r}") from exc
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=UTC)
    return stamp.astimezone(UTC)


def _issuer_field(obj: dict) -> dict:
    if "issuer_o" in obj:
        if not isinstance(obj["issuer_o"], str):
            raise SchemaError("issuer_o must be a string")
        return {"O": obj["issuer_o"]}
    issuer = obj.get("issuer")
    if isinstance(issuer, str):
        return {"O": issuer}
    if isinstance(issuer, dict):
        return dict(issuer)
    raise SchemaError("missing issuer_o")


def record_from_json(obj, config: CaConfig | None = None) -> CertRecord:
    """Validate one CT object and turn it into a CertRecord."""
    if not isinstance(obj, dict):
        raise SchemaError("record is not an object")
    digest = obj.get("sha256")
    if not isinstance(digest, str) or not _HEX64.fullmatch(digest.lower()):
        raise SchemaError(f"bad sha256 {digest!r}")
    subject = obj.get("subject", {})
    sans = obj.get("sans", [])
    oids = obj.get("policy_oids", [])
    precert = obj.get("is_precert", False)
    if not isinstance(subject, dict):
        raise SchemaError("subject must be an object")
    if not isinstance(sans, list) or not all(isinstance(s, str) for s in sans):
        raise SchemaError("sans must be a list of strings")
    if not isinstance(oids, list) or not all(isinstance(o, str) for o in oids):
        raise SchemaError("policy_oids must be a list of strings")
    if not isinstance(precert, bool):
        raise SchemaError("is_precert must be a boolean")
    if "not_before" not in obj or "not_after" not in obj:
        raise SchemaError("missing validity bounds")
    issuer = _issuer_field(obj)
    try:
        return CertRecord(
            der_sha256=digest.lower(),
            subject=dict(subject),
            issuer=issuer,
            san_dns=frozenset(sans),
            not_before=parse_time(obj["not_before"]),
            not_after=parse_time(obj["not_after"]),
            policy_oids=tuple(oids),
            is_precert=precert,
            issuer_ca_label=(config or default_config()).label(issuer),
        )
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def record_to_json(cert: CertRecord) -> dict:
    def stamp(t):
        return t.astimezone(UTC).strftime("%Y-%m-%dT%H:%M:%SZ")
    return {
        "sha256": cert.der_sha256,
        "issuer_o": cert.issuer.get("O", ""),
        "subject": dict(cert.subject),
        "sans": sorted(cert.san_dns),
        "not_before": stamp(cert.not_before),
        "not_after": stamp(cert.not_after),
        "policy_oids": list(cert.policy_oids),
        "is_precert": cert.is_precert,
    }


def ingest(objects: Iterable, decade: tuple[int, int], host: str,
           config: CaConfig | None = None, stats: IngestStats | None = None) -> list[CtRecord]:
    """Filter one host's CT results.

    ``objects`` may hold dicts or JSON text lines. Pre-certificates,
    repeated sha256 values, certificates whose not_before year lies outside
    ``decade`` and certificates that do not name ``host`` are dropped.
    Malformed objects are skipped and counted in ``stats``.
    """
    lo, hi = decade
    if lo > hi:
        raise ValueError(f"empty decade {decade}")
    stats = stats if stats is not None else IngestStats()
    seen: set[str] = set()
    out = []
    for lineno, obj in enumerate(objects, 1):
        try:
            if isinstance(obj, (str, bytes)):
                if not obj.strip():
                    continue
                try:
                    obj = json.loads(obj)
                except ValueError as exc:
                    raise SchemaError(f"invalid JSON: {exc}") from exc
            cert = record_from_json(obj, config)
        except SchemaError as exc:
            stats.schema_errors += 1
            log.debug("%s line %d skipped: %s", host, lineno, exc)
            continue
        if cert.is_precert:
            stats.precerts += 1
            continue
        if cert.der_sha256 in seen:
            stats.duplicates += 1
            continue
        seen.add(cert.der_sha256)
        if not lo <= cert.not_before.year <= hi:
            stats.out_of_decade += 1
            continue
        kind = match_host(host, cert)
        if kind is None:
            stats.unmatched += 1
            continue
        stats.kept += 1
        out.append(CtRecord(host.lower().rstrip("."), cert, kind))
    return out


def load_ct_dir(directory: str | Path, decade: tuple[int, int],
                config: CaConfig | None = None) -> tuple[list[CtRecord], IngestStats]:
    """Ingest every ``<fqdn>.jsonl`` in ``directory`` (sorted by name)."""
    stats = IngestStats()
    records: list[CtRecord] = []
    for path in sorted(Path(directory).glob("*.jsonl")):
        host = path.name[:-len(".jsonl")]
        with path.open(encoding="utf-8") as fh:
            records.extend(ingest(fh, decade, host, config, stats))
    return records, stats


def write_ct_file(path: str | Path, certs: Iterable[CertRecord | dict]) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for cert in certs:
            obj = record_to_json(cert) if isinstance(cert, CertRecord) else cert
            fh.write(json.dumps(obj, sort_keys=True) + "\n")


def years_covered(cert: CertRecord, decade: tuple[int, int] | None = None) -> range:
    """Calendar years (UTC) the validity window touches, clipped to ``decade``."""
    first = cert.not_before.astimezone(UTC).year
    last = cert.not_after.astimezone(UTC).year
    if decade is not None:
        first, last = max(first, decade[0]), min(last, decade[1])
    return range(first, last + 1)


@dataclass
class CoverageTable:
    cells: dict[tuple[str, int], set[str]] = field(default_factory=dict)
    year_totals: dict[int, int] = field(default_factory=dict)

    def count(self, ca: str, year: int) -> int:
        return len(self.cells.get((ca, year), ()))

    @property
    def cas(self) -> list[str]:
        return sorted({ca for ca, _ in self.cells})

    @property
    def years(self) -> list[int]:
        return sorted(self.year_totals)


def coverage(records: Iterable[CtRecord], decade: tuple[int, int] | None = None) -> CoverageTable:
    """Which hosts each CA covered in each year; a host counts once per cell."""
    cells: dict[tuple[str, int], set[str]] = defaultdict(set)
    per_year: dict[int, set[str]] = defaultdict(set)
    for rec in records:
        ca = rec.cert.issuer_ca_label
        for year in years_covered(rec.cert, decade):
            cells[(ca, year)].add(rec.host)
            per_year[year].add(rec.host)
    return CoverageTable(dict(cells), {y: len(h) for y, h in sorted(per_year.items())})


def top_cas(table: CoverageTable, top_threshold: float = 20,
            decade: tuple[int, int] | None = None) -> list[str]:
    """CAs whose mean yearly host count over the decade reaches the threshold."""
    if decade is None:
        years = table.years
    else:
        years = list(range(decade[0], decade[1] + 1))
    if not years:
        return []
    return [ca for ca in table.cas
            if sum(table.count(ca, y) for y in years) / len(years) >= top_threshold]


def market_share(table: CoverageTable, top_threshold: float = 20,
                 decade: tuple[int, int] | None = None,
                 normalized: bool = False) -> dict[int, dict[str, float]]:
    """Per-year share of each top CA, with the rest pooled under ``"other"``.

    By default a CA's share is the fraction of that year's covered hosts it
    covered, and ``"other"`` is the fraction covered by no top CA. A host
    covered by two CAs counts for both, so those shares can add up to more
    than one. ``normalized=True`` divides by host-CA pairs instead, which
    always sums to one.
    """
    top = top_cas(table, top_threshold, decade)
    shares: dict[int, dict[str, float]] = {}
    for year, total in table.year_totals.items():
        if not total:
            continue
        row: dict[str, float] = {}
        if normalized:
            pairs = sum(table.count(ca, year) for ca in table.cas)
            for ca in top:
                row[ca] = table.count(ca, year) / pairs
            row[OTHER] = sum(table.count(ca, year) for ca in table.cas
                             if ca not in top) / pairs
        else:
            covered_by_top: set[str] = set()
            for ca in top:
                hosts = table.cells.get((ca, year), set())
                covered_by_top |= hosts
                row[ca] = len(hosts) / total
            row[OTHER] = (total - len(covered_by_top)) / total
        shares[year] = row
    return shares


def _by_host_year(records: Iterable[CtRecord], decade) -> dict[tuple[str, int], list[CertRecord]]:
    grouped: dict[tuple[str, int], list[CertRecord]] = defaultdict(list)
    for rec in records:
        for year in years_covered(rec.cert, decade):
            grouped[(rec.host, year)].append(rec.cert)
    return grouped


def san_sharing(records: Iterable[CtRecord], threshold: int = 10,
                decade: tuple[int, int] | None = None) -> dict[int, float]:
    """Per-year fraction of covered hosts behind a cert with more than ``threshold`` SANs."""
    covered: dict[int, set[str]] = defaultdict(set)
    shared: dict[int, set[str]] = defaultdict(set)
    for (host, year), certs in _by_host_year(records, decade).items():
        covered[year].add(host)
        if any(len(c.san_dns) > threshold for c in certs):
            shared[year].add(host)
    return {y: len(shared[y]) / len(covered[y]) for y in sorted(covered)}


@dataclass(frozen=True)
class ValiditySummary:
    count: int
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float


def validity_stats(records: Iterable[CtRecord]) -> dict[int, ValiditySummary]:
    """Five-number summary of validity days, bucketed by not_before year.

    Certificates shared by several hosts are counted once.
    """
    days: dict[int, list[int]] = defaultdict(list)
    seen: set[str] = set()
    for rec in records:
        if rec.cert.der_sha256 in seen:
            continue
        seen.add(rec.cert.der_sha256)
        days[rec.cert.not_before.astimezone(UTC).year].append(rec.cert.validity_days)
    out = {}
    for year in sorted(days):
        values = np.sort(np.asarray(days[year], dtype=float))
        q = np.percentile(values, [0, 25, 50, 75, 100])
        out[year] = ValiditySummary(len(values), *(float(v) for v in q))
    return out


_CLASS_ORDER = {ValidationClass.EV: 3, ValidationClass.OV: 2, ValidationClass.DV: 1,
                ValidationClass.UNCLASSIFIED: 1}


def best_class(certs: Iterable[CertRecord], config: CaConfig | None = None) -> ValidationClass | None:
    """Strongest validation type among ``certs``; unplaceable certs count as DV."""
    best = None
    for cert in certs:
        cls = classify_validation(cert, config)
        if cls is ValidationClass.UNCLASSIFIED:
            cls = ValidationClass.DV
        if best is None or _CLASS_ORDER[cls] > _CLASS_ORDER[best]:
            best = cls
    return best


def historic_cert_types(records: Iterable[CtRecord], decade: tuple[int, int] | None = None,
                        config: CaConfig | None = None) -> dict[int, Counter]:
    """Per-year count of hosts by their best validation type that year."""
    out: dict[int, Counter] = defaultdict(Counter)
    for (host, year), certs in sorted(_by_host_year(records, decade).items()):
        out[year][best_class(certs, config).value] += 1
    return dict(sorted(out.items()))


@dataclass
class HistoricProfiles:
    counts: dict[int, Counter]
    missing_flags: set[str]


def historic_profiles(records: Iterable[CtRecord], dnssec_now: dict[str, bool],
                      restricted: dict[str, bool], decade: tuple[int, int] | None = None,
                      config: CaConfig | None = None) -> HistoricProfiles:
    """Assurance profile per covered host-year with today's DNS flags.

    DNSSEC support in past years is taken to equal its current state. Hosts
    absent from either flag map count as Inadequate and are reported.
    """
    counts: dict[int, Counter] = defaultdict(Counter)
    missing: set[str] = set()
    for (host, year), certs in sorted(_by_host_year(records, decade).items()):
        if host not in dnssec_now or host not in restricted:
            missing.add(host)
            counts[year][Profile.INADEQUATE] += 1
            continue
        cls = best_class(certs, config)
        cert_class = CertClass.OVEV if cls in (ValidationClass.OV, ValidationClass.EV) \
            else CertClass.DV
        counts[year][profile(restricted[host], dnssec_now[host], cert_class).profile] += 1
    if missing:
        log.warning("%d hosts lack DNS flags and were counted Inadequate", len(missing))
    return HistoricProfiles(dict(sorted(counts.items())), missing)
