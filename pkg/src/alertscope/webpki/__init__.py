"""Certificate chains: fetching, validation, revocation and DV/OV/EV classes."""

from .assess import CertAssessment, assess_host
from .certs import CaConfig, CertRecord, default_config, normalize_issuer, record_from_x509
from .classify import ValidationClass, classify_validation
from .connectors import FetchedChain, FixtureConnector, LiveConnector, fetch_chain
from .revocation import HttpFetcher, NullFetcher, Revocation, check_revocation
from .validation import (ChainReport, ChainVerdict, TrustStore, assess_chain,
                         hostname_matches, name_covers, validate_chain)

__all__ = [
    "CaConfig", "CertAssessment", "CertRecord", "ChainReport", "ChainVerdict", "FetchedChain",
    "FixtureConnector", "HttpFetcher", "LiveConnector", "NullFetcher", "Revocation",
    "TrustStore", "ValidationClass", "assess_chain", "assess_host", "check_revocation",
    "classify_validation", "default_config", "fetch_chain", "hostname_matches", "name_covers",
    "normalize_issuer", "record_from_x509", "validate_chain",
]
