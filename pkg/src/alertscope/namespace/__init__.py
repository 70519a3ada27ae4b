"""Domain namespace analysis: URL parsing, suffix split, TLD taxonomy, sectors."""

from .names import (DomainProfile, LocalityPrefix, OrgRecord, UsLocality, detect_dedicated,
                    load_overrides, load_roster, parse_url, parse_us_locality, profile_record,
                    split_domain)
from .registry import TldCategory, TldEntry, TldRegistry
from .sectors import Sector, classify_sector, load_patterns

__all__ = [
    "DomainProfile", "LocalityPrefix", "OrgRecord", "Sector", "TldCategory", "TldEntry",
    "TldRegistry", "UsLocality", "classify_sector", "detect_dedicated", "load_overrides",
    "load_patterns", "load_roster", "parse_url", "parse_us_locality", "profile_record",
    "split_domain",
]
