"""Loaders for the bundled reference data sets.

``synthetic_roster.csv`` holds 1327 fictional hosts with recorded DNSSEC and
certificate outcomes, built by ``tools/make_synthetic_roster.py``. It lets
the aggregation and reporting code run at full roster scale without probes.
"""

from __future__ import annotations

import csv
import datetime as dt
from pathlib import Path

from ._data import data_path
from .dnssec.chain import DnssecStatus, DnssecVerdict
from .namespace.names import DomainProfile, OrgRecord, profile_record
from .namespace.registry import TldRegistry
from .webpki.assess import CertAssessment
from .webpki.classify import ValidationClass
from .webpki.revocation import Revocation
from .webpki.validation import ChainVerdict

REFERENCE_TIME = dt.datetime(2020, 3, 1, tzinfo=dt.timezone.utc)


def demo_dir() -> Path:
    return data_path("demo")


def recorded_assessment(cert: str, when: dt.datetime = REFERENCE_TIME) -> CertAssessment:
    """Stand-in assessment for a recorded certificate type (N/A, DV, OV or EV)."""
    if cert == "N/A":
        return CertAssessment(ChainVerdict.NO_TLS, Revocation.UNKNOWN, None, when, "recorded")
    return CertAssessment(ChainVerdict.VALID, Revocation.GOOD, ValidationClass(cert), when,
                          "recorded")


def load_synthetic(path: str | Path | None = None, registry: TldRegistry | None = None
                   ) -> list[tuple[DomainProfile, DnssecStatus, CertAssessment]]:
    """(DomainProfile, DnssecStatus, CertAssessment) per synthetic host.

    Restriction and sector come from the namespace code, not from the file.
    """
    registry = registry or TldRegistry.load()
    path = Path(path) if path else data_path("synthetic_roster.csv")
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            record = OrgRecord(row["id"], row["name"], row["territory"], row["url"])
            verdict = DnssecVerdict.SECURE if row["dnssec"] == "yes" else DnssecVerdict.INSECURE
            out.append((profile_record(record, registry), DnssecStatus(verdict),
                        recorded_assessment(row["cert"])))
    return out
