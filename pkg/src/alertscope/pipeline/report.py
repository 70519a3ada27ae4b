"""Report assembly: JSON, CSV tables, SVG charts and vantage diffs."""

from __future__ import annotations

import csv
import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from ..assurance import CERT_COLUMNS, AggregateReport, Profile
from ..ct_history import (CoverageTable, CtRecord, IngestStats, ValiditySummary, coverage,
                          historic_cert_types, historic_profiles, market_share, san_sharing,
                          top_cas, validity_stats)
from ..namespace.registry import TldCategory
from ..namespace.sectors import Sector
from .scan import HostRow, ScanResult
from .serialize import assessment_to_json, dnssec_to_json

SECTOR_ORDER = (Sector.PUBLIC_SAFETY, Sector.GOVERNMENTAL, Sector.LAW_ENFORCEMENT,
                Sector.MILITARY, Sector.EDUCATIONAL, Sector.OTHER)
CATEGORY_ORDER = (TldCategory.GTLD, TldCategory.CCTLD, TldCategory.CCSLD, TldCategory.STLD)
PROFILE_ORDER = (Profile.STRONG, Profile.WEAK, Profile.INADEQUATE)
CHARTS = ("market_share.svg", "san_sharing.svg", "validity.svg")

NOTES = [
    "OV and EV share one matrix column; domain validation is implied for them.",
    "Valid certificates that are revoked count as no certificate.",
    "DNSSEC verdicts other than Secure count as no DNSSEC.",
]


# ---------------------------------------------------------------- CT analytics

@dataclass
class CtSummary:
    decade: tuple[int, int]
    stats: IngestStats
    table: CoverageTable
    top: list[str]
    shares: dict
    shares_normalized: dict
    san: dict[int, float]
    validity: dict[int, ValiditySummary]
    cert_types: dict
    profiles: dict = field(default_factory=dict)
    missing_flags: set = field(default_factory=set)
    san_threshold: int = 10
    top_threshold: float = 20


def summarize_ct(records: list[CtRecord], decade: tuple[int, int], stats: IngestStats | None = None,
                 san_threshold: int = 10, top_threshold: float = 20,
                 flags: tuple[dict, dict] | None = None) -> CtSummary:
    """All CT analytics; ``flags`` is (dnssec_now, restricted) for profile trends."""
    table = coverage(records, decade)
    summary = CtSummary(
        decade, stats or IngestStats(), table, top_cas(table, top_threshold, decade),
        market_share(table, top_threshold, decade),
        market_share(table, top_threshold, decade, normalized=True),
        san_sharing(records, san_threshold, decade), validity_stats(records),
        historic_cert_types(records, decade), san_threshold=san_threshold,
        top_threshold=top_threshold)
    if flags is not None:
        hist = historic_profiles(records, flags[0], flags[1], decade)
        summary.profiles, summary.missing_flags = hist.counts, hist.missing_flags
    return summary


def ct_to_json(ct: CtSummary) -> dict:
    lo, hi = ct.decade
    return {
        "decade": [lo, hi],
        "ingest": vars(ct.stats),
        "top_ca_rule": (f"mean hosts per year over {lo}-{hi} >= {ct.top_threshold:g}"),
        "top_cas": ct.top,
        "coverage": {ca: {str(y): ct.table.count(ca, y) for y in ct.table.years}
                     for ca in ct.table.cas},
        "year_totals": {str(y): n for y, n in ct.table.year_totals.items()},
        "market_share": {str(y): row for y, row in ct.shares.items()},
        "market_share_normalized": {str(y): row for y, row in ct.shares_normalized.items()},
        "san_threshold": ct.san_threshold,
        "san_sharing": {str(y): v for y, v in ct.san.items()},
        "validity_days": {str(y): vars(s) for y, s in ct.validity.items()},
        "cert_types": {str(y): dict(sorted(c.items())) for y, c in ct.cert_types.items()},
        "profiles": {str(y): {p.value: c.get(p, 0) for p in PROFILE_ORDER}
                     for y, c in ct.profiles.items()},
        "hosts_missing_flags": sorted(ct.missing_flags),
    }


# ---------------------------------------------------------------- scan tables

def tld_key(row: HostRow) -> str:
    if row.domain.tld_category is TldCategory.CCSLD:
        return "<state>." + row.domain.public_suffix.split(".")[-1]
    return row.domain.public_suffix


def tld_table(rows: list[HostRow]) -> list[dict]:
    counts: Counter = Counter()
    signed: Counter = Counter()
    meta = {}
    for row in rows:
        key = tld_key(row)
        counts[key] += 1
        signed[key] += row.dnssec.enabled
        meta[key] = (row.domain.tld_category, row.domain.restricted)
    order = {c: i for i, c in enumerate(CATEGORY_ORDER)}
    keys = sorted(counts, key=lambda k: (order[meta[k][0]], k))
    return [{"tld": k, "category": meta[k][0].value, "restricted": meta[k][1],
             "hosts": counts[k], "dnssec_enabled": signed[k]} for k in keys]


def sector_table(report: AggregateReport) -> list[dict]:
    out = []
    for sector in SECTOR_ORDER:
        row = report.by_sector.get(sector)
        if row is None:
            continue
        entry = {"sector": sector.value}
        entry.update({c: row.cert_types.get(c, 0) for c in CERT_COLUMNS})
        entry.update({p.value: row.profiles.get(p, 0) for p in PROFILE_ORDER})
        entry["total"] = row.total
        out.append(entry)
    return out


def combo_table(report: AggregateReport) -> list[dict]:
    return [{"row_id": row, "restricted": r, "dnssec": d, "cert_class": c.value,
             "profile": p.value, "count": n}
            for row, r, d, c, p, n in report.combo_rows()]


def host_to_json(row: HostRow) -> dict:
    d = row.domain
    return {
        "fqdn": row.fqdn,
        "org_ids": list(row.org_ids),
        "domain": {"public_suffix": d.public_suffix, "effective_sld": d.effective_sld,
                   "tld_category": d.tld_category.value, "restricted": d.restricted,
                   "suffix_known": d.suffix_known, "annotation": d.annotation,
                   "dedicated": d.dedicated, "sector": d.sector.value if d.sector else None,
                   "us_locality": ([d.us_locality.prefix.value, d.us_locality.locality,
                                    d.us_locality.state] if d.us_locality else None)},
        "dnssec": dnssec_to_json(row.dnssec),
        "cert": assessment_to_json(row.cert),
        "outcome": {"row_id": row.outcome.row_id, "profile": row.outcome.profile.value},
    }


def build_report(result: ScanResult, report: AggregateReport,
                 ct: CtSummary | None = None) -> dict:
    total = report.total
    doc = {
        "metadata": result.metadata,
        "notes": NOTES,
        "summary": {
            "hosts": total,
            "profiles": {p.value: report.by_profile.get(p, 0) for p in PROFILE_ORDER},
            "percentages": {p.value: round(v, 2) for p, v in
                            sorted(report.percentages().items(),
                                   key=lambda kv: PROFILE_ORDER.index(kv[0]))},
            "indeterminate_dnssec": report.indeterminate_dnssec,
            "revoked_as_none": report.revoked_as_none,
        },
        "combos": combo_table(report),
        "sectors": sector_table(report),
        "tlds": tld_table(result.rows),
        "hosts": [host_to_json(r) for r in result.rows],
        "skipped": [list(s) for s in result.skipped],
    }
    if ct is not None:
        doc["ct"] = ct_to_json(ct)
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _write_csv(path: Path, rows: list[dict], header: list[str] | None = None) -> None:
    header = header or (list(rows[0]) if rows else [])
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=header, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def host_csv_rows(result: ScanResult) -> list[dict]:
    return [{"fqdn": r.fqdn, "org_ids": ";".join(r.org_ids),
             "public_suffix": r.domain.public_suffix,
             "tld_category": r.domain.tld_category.value, "restricted": r.domain.restricted,
             "sector": r.domain.sector.value if r.domain.sector else "",
             "dnssec": r.dnssec.verdict.value, "chain": r.cert.chain_verdict.value,
             "revocation": r.cert.revocation.value,
             "validation": r.cert.validation_class.value if r.cert.validation_class else "",
             "row_id": r.outcome.row_id, "profile": r.outcome.profile.value}
            for r in result.rows]


def emit_ct(ct: CtSummary, out: Path, formats=("json", "csv", "svg")) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if "csv" in formats:
        years = ct.table.years
        cov = [{"ca": ca, **{str(y): ct.table.count(ca, y) for y in years}}
               for ca in ct.table.cas]
        cov.append({"ca": "all", **{str(y): ct.table.year_totals[y] for y in years}})
        _write_csv(out / "coverage.csv", cov, ["ca"] + [str(y) for y in years])
        labels = ct.top + ["other"]
        shares = [{"year": y, **{ca: f"{row.get(ca, 0.0):.4f}" for ca in labels}}
                  for y, row in ct.shares.items()]
        _write_csv(out / "shares.csv", shares, ["year"] + labels)
        _write_csv(out / "san_sharing.csv",
                   [{"year": y, "fraction": f"{v:.4f}"} for y, v in ct.san.items()],
                   ["year", "fraction"])
        _write_csv(out / "validity.csv",
                   [{"year": y, **{k: (f"{v:g}" if isinstance(v, float) else v)
                                   for k, v in vars(s).items()}}
                    for y, s in ct.validity.items()],
                   ["year", "count", "minimum", "q1", "median", "q3", "maximum"])
        written += [out / n for n in ("coverage.csv", "shares.csv", "san_sharing.csv",
                                      "validity.csv")]
    if "svg" in formats:
        from .charts import write_charts
        written += write_charts(ct, out)
    return written


def emit_reports(result: ScanResult, report: AggregateReport, out: str | Path,
                 formats=("json", "csv", "svg"), ct: CtSummary | None = None) -> list[Path]:
    """Write the requested report files to ``out`` and return their paths."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if "json" in formats:
        path = out / "report.json"
        path.write_text(dumps(build_report(result, report, ct)), encoding="utf-8")
        written.append(path)
    if "csv" in formats:
        _write_csv(out / "combos.csv", combo_table(report))
        _write_csv(out / "sectors.csv", sector_table(report),
                   ["sector", *CERT_COLUMNS, *(p.value for p in PROFILE_ORDER), "total"])
        _write_csv(out / "tlds.csv", tld_table(result.rows),
                   ["tld", "category", "restricted", "hosts", "dnssec_enabled"])
        _write_csv(out / "hosts.csv", host_csv_rows(result),
                   ["fqdn", "org_ids", "public_suffix", "tld_category", "restricted", "sector",
                    "dnssec", "chain", "revocation", "validation", "row_id", "profile"])
        written += [out / n for n in ("combos.csv", "sectors.csv", "tlds.csv", "hosts.csv")]
    if ct is not None:
        written += emit_ct(ct, out, formats)
    return written


# ---------------------------------------------------------------- diffs

DIFF_FIELDS = (("dnssec", "verdict"), ("cert", "chain_verdict"), ("cert", "revocation"),
               ("cert", "validation_class"), ("outcome", "row_id"), ("outcome", "profile"))


@dataclass(frozen=True)
class RowDiff:
    fqdn: str
    field: str
    a: object
    b: object


def diff(a: dict, b: dict) -> list[RowDiff]:
    """Row-level differences between two reports, e.g. from two vantage points."""
    rows_a = {h["fqdn"]: h for h in a.get("hosts", [])}
    rows_b = {h["fqdn"]: h for h in b.get("hosts", [])}
    out = []
    for fqdn in sorted(rows_a.keys() | rows_b.keys()):
        if fqdn not in rows_b:
            out.append(RowDiff(fqdn, "presence", "present", "absent"))
            continue
        if fqdn not in rows_a:
            out.append(RowDiff(fqdn, "presence", "absent", "present"))
            continue
        for section, key in DIFF_FIELDS:
            va, vb = rows_a[fqdn][section].get(key), rows_b[fqdn][section].get(key)
            if va != vb:
                out.append(RowDiff(fqdn, f"{section}.{key}", va, vb))
    return out


def flags_from_report(doc: dict) -> tuple[dict, dict]:
    """(dnssec_now, restricted) maps from a scan report, for CT profile trends."""
    dnssec = {h["fqdn"]: h["dnssec"]["verdict"] == "Secure" for h in doc.get("hosts", [])}
    restricted = {h["fqdn"]: bool(h["domain"]["restricted"]) for h in doc.get("hosts", [])}
    return dnssec, restricted


def flags_from_rows(rows: list[HostRow]) -> tuple[dict, dict]:
    return ({r.fqdn: r.dnssec.enabled for r in rows},
            {r.fqdn: r.domain.restricted for r in rows})


