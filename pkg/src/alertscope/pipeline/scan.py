"""End-to-end scan over a roster."""

from __future__ import annotations

import datetime as dt
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .. import __version__
from ..assurance import AggregateReport, AssuranceOutcome, aggregate, cert_class_from, profile
from ..dnssec.chain import DnssecStatus, DnssecVerdict, TrustAnchor, validate_chain
from ..dnssec.sources import LiveSource, ZoneFixtureSource
from ..errors import ConfigError, MalformedUrl
from ..namespace.names import (DomainProfile, OrgRecord, load_overrides, load_roster,
                               parse_url, profile_record)
from ..namespace.registry import TldRegistry
from ..webpki.assess import CertAssessment, assess_host
from ..webpki.certs import default_config
from ..webpki.connectors import FixtureConnector, LiveConnector
from ..webpki.revocation import Revocation
from ..webpki.validation import ChainVerdict, TrustStore
from .cache import ProbeCache
from .config import ScanConfig, _content_digest
from .serialize import (assessment_from_json, assessment_to_json, dnssec_from_json,
                        dnssec_to_json, stamp)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HostRow:
    fqdn: str
    org_ids: tuple[str, ...]
    domain: DomainProfile
    dnssec: DnssecStatus
    cert: CertAssessment
    outcome: AssuranceOutcome


@dataclass
class ScanResult:
    rows: list[HostRow]
    metadata: dict
    skipped: list[tuple[str, str]] = field(default_factory=list)
    timing: dict = field(default_factory=dict)
    probes: int = 0

    @property
    def partial(self) -> bool:
        return any(r.dnssec.verdict is DnssecVerdict.INDETERMINATE for r in self.rows)


@dataclass
class _Context:
    """Immutable inputs shared by all workers."""
    config: ScanConfig
    registry: TldRegistry
    overrides: frozenset
    store: TrustStore
    anchor: TrustAnchor
    source: object
    connector: object
    cache: ProbeCache
    now: dt.datetime
    dns_identity: str
    cert_identity: str


def group_by_fqdn(records: list[OrgRecord]) -> tuple[dict[str, list[OrgRecord]], list]:
    """Unique fqdns in first-seen order with all orgs that point at them."""
    groups: dict[str, list[OrgRecord]] = {}
    skipped = []
    for rec in records:
        try:
            fqdn, _ = parse_url(rec.url)
        except MalformedUrl:
            skipped.append((rec.id, f"malformed url {rec.url!r}"))
            continue
        groups.setdefault(fqdn, []).append(rec)
    return groups, skipped


def _load_context(config: ScanConfig, now: dt.datetime) -> _Context:
    try:
        registry = TldRegistry.load(config.psl, config.overlay, loaded=now.date())
        store = TrustStore.from_pem(config.trust_store, loaded=now.date())
        anchor = TrustAnchor.from_file(config.anchor_path())
        overrides = load_overrides(config.overrides)
        default_config()
    except (OSError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    if config.zones is not None:
        try:
            source = ZoneFixtureSource.from_directory(config.zones)
        except Exception as exc:
            raise ConfigError(f"cannot load zone fixtures: {exc}") from exc
        dns_identity = "zones:" + _content_digest(config.zones)
    else:
        source = LiveSource(config.resolver, timeout=config.timeout)
        dns_identity = "resolver:" + config.resolver
    if config.chains is not None:
        connector = FixtureConnector(config.chains)
        cert_identity = "chains:" + _content_digest(config.chains)
    else:
        connector = LiveConnector(timeout=config.timeout)
        cert_identity = "live"
    cache = ProbeCache(config.cache_dir, config.cache_ttl)
    return _Context(config, registry, overrides, store, anchor, source, connector, cache,
                    now, dns_identity, cert_identity)


def _probe_dnssec(ctx: _Context, fqdn: str) -> DnssecStatus:
    def compute():
        try:
            status = validate_chain(fqdn, ctx.source, ctx.anchor, now=ctx.now.timestamp())
        except Exception as exc:  # one bad host must not sink the run
            log.warning("DNSSEC probe for %s failed: %s", fqdn, exc)
            status = DnssecStatus(DnssecVerdict.INDETERMINATE, (fqdn, f"error: {exc}"))
        return dnssec_to_json(status)
    context = [ctx.dns_identity, ctx.anchor.key_digest.to_wire().hex()]
    if ctx.config.now is not None:
        context.append(stamp(ctx.now))
    return dnssec_from_json(ctx.cache.probe("dnssec", fqdn, compute, *context))


def _probe_cert(ctx: _Context, fqdn: str) -> CertAssessment:
    def compute():
        try:
            result = assess_host(fqdn, ctx.connector, ctx.store, ctx.now)
        except Exception as exc:
            log.warning("certificate probe for %s failed: %s", fqdn, exc)
            result = CertAssessment(ChainVerdict.NO_TLS, Revocation.UNKNOWN, None, ctx.now,
                                    f"error: {exc}")
        return assessment_to_json(result)
    context = [ctx.cert_identity, ctx.store.source]
    if ctx.config.now is not None:
        context.append(stamp(ctx.now))
    return assessment_from_json(ctx.cache.probe("cert", fqdn, compute, *context))


def _scan_host(ctx: _Context, fqdn: str, orgs: list[OrgRecord]) -> HostRow:
    # the first roster entry decides sector and dedicated-domain flags
    domain = profile_record(orgs[0], ctx.registry, ctx.overrides)
    dnssec = _probe_dnssec(ctx, fqdn)
    cert = _probe_cert(ctx, fqdn)
    outcome = profile(domain.restricted, dnssec, cert_class_from(cert))
    return HostRow(fqdn, tuple(o.id for o in orgs), domain, dnssec, cert, outcome)


def run_scan(config: ScanConfig) -> tuple[ScanResult, AggregateReport]:
    """Probe every unique fqdn in the roster and aggregate the outcomes."""
    config.validate()
    started = time.time()
    now = config.now or dt.datetime.now(dt.timezone.utc)
    try:
        records = load_roster(config.roster)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"roster: {exc}") from exc
    ctx = _load_context(config, now)
    groups, skipped = group_by_fqdn(records)
    viable = {}
    for fqdn, orgs in groups.items():
        try:
            profile_record(orgs[0], ctx.registry, ctx.overrides)
        except ValueError as exc:
            skipped.extend((o.id, str(exc)) for o in orgs)
            continue
        viable[fqdn] = orgs

    with ThreadPoolExecutor(max_workers=config.parallel) as pool:
        futures = {fqdn: pool.submit(_scan_host, ctx, fqdn, orgs)
                   for fqdn, orgs in viable.items()}
        rows = [futures[fqdn].result() for fqdn in sorted(futures)]

    report = aggregate((r.domain, r.dnssec, r.cert) for r in rows)
    metadata = {
        "tool": f"alertscope {__version__}",
        "scan_time": stamp(now),
        "vantage": config.vantage,
        "config_digest": config.digest(),
        "suffix_snapshot": ctx.registry.source,
        "trust_store": ctx.store.source,
        "dns_mode": "zones" if config.zones is not None else "resolver",
        "cert_mode": "chains" if config.chains is not None else "live",
        "roster_entries": len(records),
    }
    timing = {"started": started, "finished": time.time()}
    result = ScanResult(rows, metadata, sorted(skipped), timing, ctx.cache.probes)
    return result, report
