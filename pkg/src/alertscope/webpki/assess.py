from __future__ import annotations

import datetime as dt
from dataclasses import dataclass

from cryptography import x509

from ..errors import TlsTimeout
from .certs import CaConfig, CertRecord, record_from_x509
from .classify import ValidationClass, classify_validation
from .connectors import Connector
from .revocation import Revocation, check_revocation
from .validation import ChainVerdict, TrustStore, assess_chain, issued_by


@dataclass(frozen=True)
class CertAssessment:
    chain_verdict: ChainVerdict
    revocation: Revocation
    validation_class: ValidationClass | None
    checked_at: dt.datetime
    detail: str = ""
    revocation_method: str = ""
    leaf: CertRecord | None = None

    @property
    def issuer_ca_label(self) -> str:
        return self.leaf.issuer_ca_label if self.leaf else ""


def _issuer_of(leaf: x509.Certificate, chain, store: TrustStore):
    for cand in list(chain[1:]) + store.issuers_of(leaf):
        if cand.subject == leaf.issuer and issued_by(leaf, cand):
            return cand
    return None


def assess_host(host: str, connector: Connector, store: TrustStore, now: dt.datetime,
                config: CaConfig | None = None, port: int = 443) -> CertAssessment:
    """Fetch, validate, check revocation and classify one host's certificate."""
    try:
        fetched = connector.fetch_chain(host, port)
    except TlsTimeout:
        return CertAssessment(ChainVerdict.NO_TLS, Revocation.UNKNOWN, None, now, "timeout")
    if fetched is None or not fetched.certs:
        return CertAssessment(ChainVerdict.NO_TLS, Revocation.UNKNOWN, None, now, "refused")
    report = assess_chain(fetched.certs, store, host, now)
    leaf = fetched.leaf
    issuer = report.path[1] if len(report.path) > 1 else _issuer_of(leaf, fetched.certs, store)
    revocation, method = check_revocation(leaf, issuer, fetched.staple,
                                          connector.fetcher_for(host))
    record = record_from_x509(leaf, config)
    return CertAssessment(report.verdict, revocation, classify_validation(record, config),
                          now, report.detail, method, record)
