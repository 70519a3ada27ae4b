from __future__ import annotations

from enum import Enum

from .certs import CaConfig, CertRecord, default_config

CABF_EV = "2.23.140.1.1"
CABF_DV = "2.23.140.1.2.1"
CABF_OV = "2.23.140.1.2.2"
CABF_PREFIX = "2.23.140.1."


class ValidationClass(str, Enum):
    DV = "DV"
    OV = "OV"
    EV = "EV"
    UNCLASSIFIED = "Unclassified"


def classify_validation(leaf: CertRecord, config: CaConfig | None = None) -> ValidationClass:
    """DV/OV/EV from policy OIDs, falling back to the subject O field.

    EV wins over OV, OV over DV. Without any CA/Browser Forum policy a
    populated organization name means OV; a CN-only subject means DV.
    """
    config = config or default_config()
    oids = set(leaf.policy_oids)
    if CABF_EV in oids or oids & config.ev_oids:
        return ValidationClass.EV
    has_cabf = any(o.startswith(CABF_PREFIX) for o in oids)
    if CABF_OV in oids or (not has_cabf and leaf.subject.get("O")):
        return ValidationClass.OV
    if CABF_DV in oids or set(leaf.subject) <= {"CN"}:
        return ValidationClass.DV
    return ValidationClass.UNCLASSIFIED
