"""DNSSEC record handling and signature chasing."""

from .chain import (DnssecStatus, DnssecVerdict, TrustAnchor, tld_dnssec_support,
                    validate_chain)
from .crypto import SUPPORTED_ALGORITHMS, rrsig_problem, verify_rrsig
from .records import (Dnskey, DsRecord, RrSet, Rrsig, canonical_rrset_wire, ds_digest,
                      name_to_wire)
from .sources import Answer, LiveSource, RecordSource, SerializingSource, ZoneFixtureSource

__all__ = [
    "Answer", "Dnskey", "DnssecStatus", "DnssecVerdict", "DsRecord", "LiveSource",
    "RecordSource", "RrSet", "Rrsig", "SUPPORTED_ALGORITHMS", "SerializingSource",
    "TrustAnchor", "ZoneFixtureSource", "canonical_rrset_wire", "ds_digest", "name_to_wire",
    "rrsig_problem", "tld_dnssec_support", "validate_chain", "verify_rrsig",
]
