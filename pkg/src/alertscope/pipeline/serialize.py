"""JSON round-trips for per-host probe results."""

from __future__ import annotations

import datetime as dt

from ..dnssec.chain import DnssecStatus, DnssecVerdict
from ..webpki.assess import CertAssessment
from ..webpki.certs import CertRecord
from ..webpki.classify import ValidationClass
from ..webpki.revocation import Revocation
from ..webpki.validation import ChainVerdict


def stamp(t: dt.datetime) -> str:
    return t.astimezone(dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_stamp(text: str) -> dt.datetime:
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    value = dt.datetime.fromisoformat(text)
    return value if value.tzinfo else value.replace(tzinfo=dt.timezone.utc)


def dnssec_to_json(status: DnssecStatus) -> dict:
    return {"verdict": status.verdict.value,
            "failing_link": list(status.failing_link) if status.failing_link else None,
            "caveat": status.caveat}


def dnssec_from_json(obj: dict) -> DnssecStatus:
    link = obj.get("failing_link")
    return DnssecStatus(DnssecVerdict(obj["verdict"]), tuple(link) if link else None,
                        obj.get("caveat", ""))


def leaf_to_json(cert: CertRecord) -> dict:
    return {"sha256": cert.der_sha256, "subject": cert.subject, "issuer": cert.issuer,
            "san_dns": sorted(cert.san_dns), "not_before": stamp(cert.not_before),
            "not_after": stamp(cert.not_after), "policy_oids": list(cert.policy_oids),
            "issuer_ca_label": cert.issuer_ca_label}


def leaf_from_json(obj: dict) -> CertRecord:
    return CertRecord(obj["sha256"], dict(obj["subject"]), dict(obj["issuer"]),
                      frozenset(obj["san_dns"]), parse_stamp(obj["not_before"]),
                      parse_stamp(obj["not_after"]), tuple(obj["policy_oids"]),
                      False, obj.get("issuer_ca_label", ""))


def assessment_to_json(a: CertAssessment) -> dict:
    return {"chain_verdict": a.chain_verdict.value, "revocation": a.revocation.value,
            "revocation_method": a.revocation_method,
            "validation_class": a.validation_class.value if a.validation_class else None,
            "checked_at": stamp(a.checked_at), "detail": a.detail,
            "leaf": leaf_to_json(a.leaf) if a.leaf else None}


def assessment_from_json(obj: dict) -> CertAssessment:
    cls = obj.get("validation_class")
    return CertAssessment(ChainVerdict(obj["chain_verdict"]), Revocation(obj["revocation"]),
                          ValidationClass(cls) if cls else None,
                          parse_stamp(obj["checked_at"]), obj.get("detail", ""),
                          obj.get("revocation_method", ""),
                          leaf_from_json(obj["leaf"]) if obj.get("leaf") else None)
