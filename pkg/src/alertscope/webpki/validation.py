"""Path building and chain verdicts."""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from cryptography import x509
from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.serialization import Encoding


class ChainVerdict(str, Enum):
    VALID = "Valid"
    EXPIRED = "Expired"
    SELF_SIGNED = "SelfSigned"
    SELF_SIGNED_IN_CHAIN = "SelfSignedInChain"
    MISCONFIGURED = "Misconfigured"
    NO_TLS = "NoTls"


# most severe first; only the first applicable defect is reported
PRECEDENCE = (ChainVerdict.EXPIRED, ChainVerdict.SELF_SIGNED,
              ChainVerdict.SELF_SIGNED_IN_CHAIN, ChainVerdict.MISCONFIGURED)

MAX_DEPTH = 8


@dataclass
class TrustStore:
    roots: list[x509.Certificate]
    source: str = ""
    loaded: dt.date = field(default_factory=dt.date.today)

    def __post_init__(self):
        if not self.roots:
            raise ValueError("trust store is empty")
        for root in self.roots:
            if not is_self_signed(root):
                raise ValueError(f"trust store entry {root.subject.rfc4514_string()} "
                                 "is not self-signed")
        self._ders = {r.public_bytes(Encoding.DER) for r in self.roots}

    @classmethod
    def from_pem(cls, path: str | Path, loaded: dt.date | None = None) -> "TrustStore":
        path = Path(path)
        roots = x509.load_pem_x509_certificates(path.read_bytes())
        return cls(roots, source=path.name, loaded=loaded or dt.date.today())

    def contains(self, cert: x509.Certificate) -> bool:
        return cert.public_bytes(Encoding.DER) in self._ders

    def issuers_of(self, cert: x509.Certificate) -> list[x509.Certificate]:
        return [r for r in self.roots if r.subject == cert.issuer]


def issued_by(child: x509.Certificate, parent: x509.Certificate) -> bool:
    try:
        child.verify_directly_issued_by(parent)
    except (ValueError, TypeError, InvalidSignature):
        return False
    return True


def is_self_signed(cert: x509.Certificate) -> bool:
    return cert.subject == cert.issuer and issued_by(cert, cert)


def _is_ca(cert: x509.Certificate) -> bool:
    try:
        return cert.extensions.get_extension_for_class(x509.BasicConstraints).value.ca
    except x509.ExtensionNotFound:
        # v1 roots predate the extension
        return cert.version == x509.Version.v1


def hostname_matches(hostname: str, cert: x509.Certificate) -> bool:
    """Single-label leftmost wildcard matching against SAN, else CN."""
    hostname = hostname.lower().rstrip(".")
    try:
        san = cert.extensions.get_extension_for_class(x509.SubjectAlternativeName)
        names = san.value.get_values_for_type(x509.DNSName)
    except x509.ExtensionNotFound:
        names = []
    if not names:
        names = [a.value for a in cert.subject.get_attributes_for_oid(x509.NameOID.COMMON_NAME)]
    return any(name_covers(n, hostname) for n in names)


def name_covers(pattern: str, hostname: str) -> bool:
    pattern = pattern.lower().rstrip(".")
    hostname = hostname.lower().rstrip(".")
    if pattern == hostname:
        return True
    if not pattern.startswith("*.") or "*" in pattern[2:]:
        return False
    head, _, rest = hostname.partition(".")
    return bool(head) and rest == pattern[2:] and rest.count(".") >= 1


@dataclass(frozen=True)
class ChainReport:
    verdict: ChainVerdict
    detail: str = ""
    path: tuple = ()


def _build(cert, chain, store, seen, depth):
    """Depth-first path search; returns (outcome, path)."""
    if store.contains(cert):
        return "anchored", [cert]
    for root in store.issuers_of(cert):
        if issued_by(cert, root):
            return "anchored", [cert, root]
    if is_self_signed(cert):
        return "self-signed", [cert]
    if depth >= MAX_DEPTH:
        return "too long", [cert]
    failure = ("missing issuer", [cert])
    for candidate in chain:
        der = candidate.public_bytes(Encoding.DER)
        if der in seen or candidate.subject != cert.issuer:
            continue
        if not issued_by(cert, candidate):
            failure = ("bad signature", [cert])
            continue
        outcome, path = _build(candidate, chain, store, seen | {der}, depth + 1)
        if outcome == "anchored":
            return outcome, [cert] + path
        failure = (outcome, [cert] + path)
    return failure


def assess_chain(chain: list[x509.Certificate], store: TrustStore, hostname: str,
                 now: dt.datetime) -> ChainReport:
    if not chain:
        raise ValueError("empty chain")
    if now.tzinfo is None:
        now = now.replace(tzinfo=dt.timezone.utc)
    leaf = chain[0]
    defects: dict[ChainVerdict, str] = {}

    def note(verdict, detail):
        defects.setdefault(verdict, detail)

    leaf_der = leaf.public_bytes(Encoding.DER)
    outcome, path = _build(leaf, chain[1:], store, {leaf_der}, 0)
    if outcome == "anchored":
        pass
    elif outcome == "self-signed":
        if len(path) == 1:
            note(ChainVerdict.SELF_SIGNED, "leaf is self-signed")
        else:
            note(ChainVerdict.SELF_SIGNED_IN_CHAIN,
                 f"untrusted self-signed {path[-1].subject.rfc4514_string()}")
    else:
        note(ChainVerdict.MISCONFIGURED, outcome)

    for cert in path:
        if now > cert.not_valid_after_utc:
            note(ChainVerdict.EXPIRED, f"{cert.subject.rfc4514_string()} expired "
                                       f"{cert.not_valid_after_utc.isoformat()}")
        elif now < cert.not_valid_before_utc:
            note(ChainVerdict.MISCONFIGURED, "not yet valid")
    for cert in path[1:]:
        if not _is_ca(cert):
            note(ChainVerdict.MISCONFIGURED, "issuer is not a CA")
    if not hostname_matches(hostname, leaf):
        note(ChainVerdict.MISCONFIGURED, "hostname mismatch")

    for verdict in PRECEDENCE:
        if verdict in defects:
            return ChainReport(verdict, defects[verdict], tuple(path))
    return ChainReport(ChainVerdict.VALID, "", tuple(path))


def validate_chain(chain: list[x509.Certificate], store: TrustStore, hostname: str,
                   now: dt.datetime) -> ChainVerdict:
    return assess_chain(chain, store, hostname, now).verdict
