"""Signature chasing from a trust anchor down to a queried name."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from ..errors import IncompleteFixture, MalformedRdata, ResolverTimeout, UnsupportedAlgorithm
from .crypto import SUPPORTED_ALGORITHMS, rrsig_problem
from .records import (A, AAAA, CNAME, DIGEST_ALGORITHMS, DNSKEY, DS, NS, Dnskey, DsRecord,
                      name_labels, normalize_name)
from .sources import Answer, RecordSource

log = logging.getLogger(__name__)

UNAUTHENTICATED_DENIAL = "unauthenticated denial"


class DnssecVerdict(str, Enum):
    SECURE = "Secure"
    INSECURE = "Insecure"
    BOGUS = "Bogus"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class DnssecStatus:
    verdict: DnssecVerdict
    failing_link: tuple[str, str] | None = None
    caveat: str = ""

    @property
    def enabled(self) -> bool:
        """Binary view: only a fully validated chain counts as DNSSEC-enabled."""
        return self.verdict is DnssecVerdict.SECURE


@dataclass(frozen=True)
class TrustAnchor:
    zone: str
    key_digest: DsRecord

    @classmethod
    def from_text(cls, line: str) -> "TrustAnchor":
        tokens = line.split()
        zone = tokens[0] if tokens and not tokens[0].isdigit() else "."
        return cls(normalize_name(zone), DsRecord.from_text(line))

    @classmethod
    def from_file(cls, path: str | Path) -> "TrustAnchor":
        lines = [l for l in Path(path).read_text(encoding="utf-8").splitlines()
                 if l.strip() and not l.lstrip().startswith(";")]
        if len(lines) != 1:
            raise ValueError(f"{path}: expected exactly one DS line, found {len(lines)}")
        return cls.from_text(lines[0])


class _Broken(Exception):
    def __init__(self, where: str, reason: str):
        super().__init__(where, reason)
        self.where, self.reason = where, reason


def _check_signed(answer: Answer, keys: list[Dnskey], signer: str, now) -> str | None:
    """None if some RRSIG by ``signer`` over ``answer`` verifies with ``keys``."""
    if not answer.rrsigs:
        return "unsigned"
    problem, unsupported = "no matching key", None
    for sig in answer.rrsigs:
        if normalize_name(sig.signer) != signer:
            problem = "signer outside zone"
            continue
        for key in keys:
            if key.key_tag() != sig.key_tag or key.algorithm != sig.algorithm:
                continue
            try:
                found = rrsig_problem(answer.rrset, sig, key, now)
            except UnsupportedAlgorithm as exc:
                unsupported = exc
                continue
            if found is None:
                return None
            problem = found
    if unsupported is not None and problem == "no matching key":
        raise unsupported
    return problem


def _zone_keys(zone: str, source: RecordSource, ds_set: list[DsRecord], now) -> list[Dnskey]:
    answer = source.query(zone, DNSKEY)
    if not answer:
        raise _Broken(zone, "no DNSKEY")
    try:
        keys = [Dnskey.from_wire(r) for r in answer.rrset.rdata_list]
    except MalformedRdata as exc:
        raise _Broken(zone, f"malformed DNSKEY: {exc}") from exc
    entry = [k for k in keys if any(ds.matches(zone, k) for ds in ds_set)]
    if not entry:
        raise _Broken(zone, "no DNSKEY matches DS digest")
    if not any(k.algorithm in SUPPORTED_ALGORITHMS for k in entry):
        raise UnsupportedAlgorithm(f"{zone}: algorithms {sorted({k.algorithm for k in entry})}")
    problem = _check_signed(answer, entry, zone, now)
    if problem:
        raise _Broken(zone, f"DNSKEY set: {problem}")
    return [k for k in keys if k.is_zone_key]


def _cuts(name: str, anchor_zone: str) -> list[str]:
    labels = name_labels(name)
    top = len(name_labels(anchor_zone))
    return [".".join(labels[i:]) + "." for i in range(len(labels) - top - 1, -1, -1)]


def validate_chain(name: str, source: RecordSource, anchor: TrustAnchor,
                   now: float | None = None) -> DnssecStatus:
    """Chase signatures from ``anchor`` to the address records of ``name``."""
    name = normalize_name(name)
    if not name.endswith(anchor.zone) and anchor.zone != ".":
        return DnssecStatus(DnssecVerdict.INDETERMINATE, (name, "outside trust anchor"))
    zone = anchor.zone
    try:
        keys = _zone_keys(zone, source, [anchor.key_digest], now)
        for cut in _cuts(name, anchor.zone):
            if not source.query(cut, NS):
                continue
            ds = source.query(cut, DS)
            if not ds:
                caveat = "" if getattr(source, "trusted_absence", False) else UNAUTHENTICATED_DENIAL
                return DnssecStatus(DnssecVerdict.INSECURE, (cut, "no DS"), caveat)
            problem = _check_signed(ds, keys, zone, now)
            if problem:
                raise _Broken(cut, f"DS set: {problem}")
            records = [DsRecord.from_wire(r) for r in ds.rrset.rdata_list]
            usable = [d for d in records if d.algorithm in SUPPORTED_ALGORITHMS
                      and d.digest_type in DIGEST_ALGORITHMS]
            if not usable:
                raise UnsupportedAlgorithm(f"{cut}: no supported DS algorithm")
            keys = _zone_keys(cut, source, usable, now)
            zone = cut
        for rr_type in (A, AAAA, CNAME):
            answer = source.query(name, rr_type)
            if answer:
                break
        else:
            return DnssecStatus(DnssecVerdict.INDETERMINATE, (name, "no address records"))
        problem = _check_signed(answer, keys, zone, now)
        if problem:
            raise _Broken(name, problem)
    except _Broken as broken:
        return DnssecStatus(DnssecVerdict.BOGUS, (broken.where, broken.reason))
    except UnsupportedAlgorithm as exc:
        return DnssecStatus(DnssecVerdict.INDETERMINATE, (zone, f"unsupported: {exc}"))
    except (ResolverTimeout, IncompleteFixture) as exc:
        log.info("insufficient data for %s: %s", name, exc)
        return DnssecStatus(DnssecVerdict.INDETERMINATE, (zone, str(exc)))
    except MalformedRdata as exc:
        return DnssecStatus(DnssecVerdict.BOGUS, (zone, f"malformed: {exc}"))
    return DnssecStatus(DnssecVerdict.SECURE)


def tld_dnssec_support(public_suffix: str, source: RecordSource) -> bool | None:
    """Whether the parent publishes DS records for ``public_suffix``.

    None when the source could not answer.
    """
    try:
        return bool(source.query(public_suffix, DS))
    except (ResolverTimeout, IncompleteFixture):
        return None
