"""Assurance profiles from TLD restriction, DNSSEC and certificate class."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

from .dnssec.chain import DnssecStatus, DnssecVerdict
from .namespace.sectors import Sector
from .webpki.assess import CertAssessment
from .webpki.classify import ValidationClass
from .webpki.revocation import Revocation
from .webpki.validation import ChainVerdict

log = logging.getLogger(__name__)


class CertClass(str, Enum):
    NONE = "None"
    DV = "DV"
    OVEV = "OVEV"


class Profile(str, Enum):
    INADEQUATE = "Inadequate"
    WEAK = "Weak"
    STRONG = "Strong"

    @property
    def rank(self) -> int:
        return _RANK[self]


_RANK = {Profile.INADEQUATE: 0, Profile.WEAK: 1, Profile.STRONG: 2}

# (restricted, dnssec, cert class) -> row id, in table order
MATRIX_ROWS: dict[tuple[bool, bool, CertClass], str] = {
    (True, True, CertClass.OVEV): "01",
    (True, True, CertClass.DV): "02",
    (False, True, CertClass.OVEV): "03",
    (True, False, CertClass.OVEV): "04",
    (False, False, CertClass.OVEV): "05",
    (True, False, CertClass.DV): "06",
    (False, False, CertClass.DV): "07",
    (False, True, CertClass.DV): "08",
    (True, True, CertClass.NONE): "09",
    (True, False, CertClass.NONE): "10",
    (False, True, CertClass.NONE): "11",
    (False, False, CertClass.NONE): "12",
}
ROW_INPUTS = {row: inputs for inputs, row in MATRIX_ROWS.items()}


@dataclass(frozen=True)
class AssuranceOutcome:
    row_id: str
    profile: Profile
    inputs: tuple[bool, bool, CertClass]


def _as_bool(dnssec: bool | DnssecStatus) -> bool:
    if isinstance(dnssec, DnssecStatus):
        return dnssec.enabled
    return bool(dnssec)


def profile(restricted: bool, dnssec: bool | DnssecStatus, cert_class: CertClass | str
            ) -> AssuranceOutcome:
    """Matrix row and profile for one host.

    Any DNSSEC status other than Secure counts as no DNSSEC.
    """
    cert_class = CertClass(cert_class)
    signed = _as_bool(dnssec)
    vetted_name = bool(restricted) and signed
    if cert_class is CertClass.OVEV:
        level = Profile.STRONG if vetted_name else Profile.WEAK
    elif cert_class is CertClass.DV:
        level = Profile.WEAK if vetted_name else Profile.INADEQUATE
    else:
        level = Profile.INADEQUATE
    inputs = (bool(restricted), signed, cert_class)
    return AssuranceOutcome(MATRIX_ROWS[inputs], level, inputs)


def cert_class_from(assessment: CertAssessment | None) -> CertClass:
    """Matrix input for an assessment; invalid or revoked certificates give None."""
    if assessment is None or assessment.chain_verdict is not ChainVerdict.VALID:
        return CertClass.NONE
    if assessment.revocation is Revocation.REVOKED:
        return CertClass.NONE
    if assessment.validation_class in (ValidationClass.OV, ValidationClass.EV):
        return CertClass.OVEV
    # a valid certificate we cannot place still proves domain control
    return CertClass.DV


def cert_type_column(assessment: CertAssessment | None) -> str:
    """Sector-table column: N/A, DV, OV or EV."""
    cls = cert_class_from(assessment)
    if cls is CertClass.NONE:
        return "N/A"
    if cls is CertClass.DV:
        return "DV"
    return assessment.validation_class.value


CERT_COLUMNS = ("N/A", "DV", "OV", "EV")


@dataclass
class SectorRow:
    cert_types: Counter = field(default_factory=Counter)
    profiles: Counter = field(default_factory=Counter)

    @property
    def total(self) -> int:
        return sum(self.profiles.values())


@dataclass
class AggregateReport:
    by_combo: Counter = field(default_factory=Counter)
    by_profile: Counter = field(default_factory=Counter)
    by_sector: dict[Sector, SectorRow] = field(default_factory=dict)
    indeterminate_dnssec: int = 0
    revoked_as_none: int = 0

    @property
    def total(self) -> int:
        return sum(self.by_profile.values())

    def combo_rows(self) -> list[tuple[str, bool, bool, CertClass, Profile, int]]:
        """All 12 matrix rows in table order, with zero counts included."""
        rows = []
        for inputs, row in MATRIX_ROWS.items():
            rows.append((row, *inputs, profile(*inputs).profile, self.by_combo.get(inputs, 0)))
        return rows

    def percentages(self) -> dict[Profile, float]:
        total = self.total
        if not total:
            return {p: 0.0 for p in Profile}
        return {p: 100.0 * self.by_profile.get(p, 0) / total for p in Profile}


def aggregate(outcomes) -> AggregateReport:
    """Fold (DomainProfile, DnssecStatus, CertAssessment) tuples into a report.

    Expects one tuple per unique fqdn. Hosts without a sector go to Other.
    """
    report = AggregateReport()
    for domain, dnssec, assessment in outcomes:
        if isinstance(dnssec, DnssecStatus) and dnssec.verdict is DnssecVerdict.INDETERMINATE:
            report.indeterminate_dnssec += 1
        if (assessment is not None and assessment.chain_verdict is ChainVerdict.VALID
                and assessment.revocation is Revocation.REVOKED):
            report.revoked_as_none += 1
        outcome = profile(domain.restricted, dnssec, cert_class_from(assessment))
        report.by_combo[outcome.inputs] += 1
        report.by_profile[outcome.profile] += 1
        sector = domain.sector or Sector.OTHER
        row = report.by_sector.setdefault(sector, SectorRow())
        row.cert_types[cert_type_column(assessment)] += 1
        row.profiles[outcome.profile] += 1
    if report.indeterminate_dnssec:
        log.warning("%d hosts with indeterminate DNSSEC counted as unsigned",
                    report.indeterminate_dnssec)
    return report
