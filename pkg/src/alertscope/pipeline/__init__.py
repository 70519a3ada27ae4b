"""Scan orchestration, caching and report emission."""

from .cache import ProbeCache, cache_probe
from .config import ScanConfig
from .report import (CtSummary, build_report, diff, emit_ct, emit_reports, summarize_ct,
                     tld_table)
from .scan import HostRow, ScanResult, run_scan

__all__ = [
    "CtSummary", "HostRow", "ProbeCache", "ScanConfig", "ScanResult", "build_report",
    "cache_probe", "diff", "emit_ct", "emit_reports", "run_scan", "summarize_ct", "tld_table",
]
