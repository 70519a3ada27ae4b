"""Certificate records and the CA/EV configuration tables."""

from __future__ import annotations

import configparser
import datetime as dt
import hashlib
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from cryptography import x509
from cryptography.hazmat.primitives.serialization import Encoding
from cryptography.x509.oid import ExtensionOID, NameOID

from .._data import data_path

_SHORT_NAMES = {
    NameOID.COMMON_NAME: "CN",
    NameOID.ORGANIZATION_NAME: "O",
    NameOID.ORGANIZATIONAL_UNIT_NAME: "OU",
    NameOID.COUNTRY_NAME: "C",
    NameOID.STATE_OR_PROVINCE_NAME: "ST",
    NameOID.LOCALITY_NAME: "L",
    NameOID.SERIAL_NUMBER: "serialNumber",
    NameOID.BUSINESS_CATEGORY: "businessCategory",
    NameOID.JURISDICTION_COUNTRY_NAME: "jurisdictionC",
    NameOID.EMAIL_ADDRESS: "emailAddress",
}

PRECERT_POISON = x509.ObjectIdentifier("1.3.6.1.4.1.11129.2.4.3")


@dataclass(frozen=True)
class CertRecord:
    der_sha256: str
    subject: dict = field(hash=False)
    issuer: dict = field(hash=False)
    san_dns: frozenset[str]
    not_before: dt.datetime
    not_after: dt.datetime
    policy_oids: tuple[str, ...] = ()
    is_precert: bool = False
    issuer_ca_label: str = ""

    def __post_init__(self):
        if not self.not_before < self.not_after:
            raise ValueError(f"{self.der_sha256}: not_before must precede not_after")
        object.__setattr__(self, "san_dns", frozenset(s.lower() for s in self.san_dns))

    @property
    def validity_days(self) -> int:
        return (self.not_after - self.not_before).days


def name_fields(name: x509.Name) -> dict:
    fields = {}
    for attr in name:
        key = _SHORT_NAMES.get(attr.oid, attr.oid.dotted_string)
        fields.setdefault(key, attr.value if isinstance(attr.value, str) else attr.value.hex())
    return fields


def record_from_x509(cert: x509.Certificate, config: "CaConfig | None" = None) -> CertRecord:
    try:
        san = cert.extensions.get_extension_for_oid(ExtensionOID.SUBJECT_ALTERNATIVE_NAME)
        sans = san.value.get_values_for_type(x509.DNSName)
    except x509.ExtensionNotFound:
        sans = []
    try:
        policies = cert.extensions.get_extension_for_oid(ExtensionOID.CERTIFICATE_POLICIES)
        oids = tuple(p.policy_identifier.dotted_string for p in policies.value)
    except x509.ExtensionNotFound:
        oids = ()
    precert = any(e.oid == PRECERT_POISON for e in cert.extensions)
    issuer = name_fields(cert.issuer)
    return CertRecord(
        der_sha256=hashlib.sha256(cert.public_bytes(Encoding.DER)).hexdigest(),
        subject=name_fields(cert.subject),
        issuer=issuer,
        san_dns=frozenset(sans),
        not_before=cert.not_valid_before_utc,
        not_after=cert.not_valid_after_utc,
        policy_oids=oids,
        is_precert=precert,
        issuer_ca_label=(config or default_config()).label(issuer),
    )


@dataclass(frozen=True)
class CaConfig:
    # ordered (lowercase substring, label) pairs
    labels: tuple[tuple[str, str], ...]
    ev_oids: frozenset[str]

    @classmethod
    def load(cls, path: str | Path | None = None) -> "CaConfig":
        parser = configparser.ConfigParser(delimiters=("=",), interpolation=None)
        parser.optionxform = str.lower
        parser.read(Path(path) if path else data_path("webpki.ini"), encoding="utf-8")
        labels = tuple(parser.items("ca_labels")) if parser.has_section("ca_labels") else ()
        ev = frozenset(parser.options("ev_oids")) if parser.has_section("ev_oids") else frozenset()
        return cls(labels, ev)

    def label(self, issuer: dict | str) -> str:
        org = issuer if isinstance(issuer, str) else (issuer.get("O") or issuer.get("CN") or "")
        lowered = org.lower()
        for needle, label in self.labels:
            if needle in lowered:
                return label
        return org


@lru_cache(maxsize=None)
def default_config() -> CaConfig:
    return CaConfig.load()


def normalize_issuer(leaf: CertRecord | dict | str, config: CaConfig | None = None) -> str:
    """Canonical CA brand for a certificate's issuer; unmapped names pass through."""
    issuer = leaf.issuer if isinstance(leaf, CertRecord) else leaf
    return (config or default_config()).label(issuer)
