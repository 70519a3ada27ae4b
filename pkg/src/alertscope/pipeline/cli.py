"""Command-line entry point: ``alertscope scan|ct-report|classify|diff``."""

from __future__ import annotations

import argparse
import datetime as dt
import json
import logging
import sys
from pathlib import Path

from ..assurance import CertClass, profile
from ..ct_history import load_ct_dir
from ..errors import ConfigError
from .config import FORMATS, ScanConfig
from .report import (ct_to_json, diff, dumps, emit_ct, emit_reports, flags_from_report,
                     flags_from_rows, summarize_ct)
from .scan import run_scan
from .serialize import parse_stamp

EXIT_OK, EXIT_CONFIG, EXIT_PARTIAL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # usage errors are configuration errors; exit code 2 means a partial scan
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "1", "y", "t"):
        return True
    if lowered in ("false", "no", "0", "n", "f"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text!r}")


def _decade(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(p) for p in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected YEAR:YEAR, got {text!r}") from exc
    return lo, hi


def _now(text: str) -> dt.datetime:
    try:
        return parse_stamp(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an RFC 3339 timestamp: {text!r}") from exc


def _formats(text: str) -> tuple[str, ...]:
    return tuple(f.strip() for f in text.split(",") if f.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="alertscope", description=__doc__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    scan = sub.add_parser("scan", help="probe a roster and write reports")
    scan.add_argument("--roster", required=True, type=Path)
    scan.add_argument("--psl", type=Path, help="public suffix snapshot (default: bundled)")
    scan.add_argument("--overlay", type=Path, help="registry overlay TSV (default: bundled)")
    scan.add_argument("--overrides", type=Path, help="fqdns known to be dedicated domains")
    scan.add_argument("--trust-store", required=True, type=Path)
    src = scan.add_mutually_exclusive_group(required=True)
    src.add_argument("--resolver", help="validating-capable resolver as ip[:port]")
    src.add_argument("--zones", type=Path, help="directory of signed zone fixtures")
    scan.add_argument("--anchor", type=Path, help="DS trust anchor file")
    scan.add_argument("--chains", type=Path, help="directory of chain fixtures")
    scan.add_argument("--ct-dir", type=Path)
    scan.add_argument("--decade", type=_decade, default=(2009, 2019))
    scan.add_argument("--san-threshold", type=int, default=10)
    scan.add_argument("--now", type=_now)
    scan.add_argument("--parallel", type=int, default=8)
    scan.add_argument("--vantage", default="")
    scan.add_argument("--formats", type=_formats, default=FORMATS)
    scan.add_argument("--cache-dir", type=Path)
    scan.add_argument("--cache-ttl", type=float, default=0.0)
    scan.add_argument("--timeout", type=float, default=10.0)
    scan.add_argument("--out", required=True, type=Path)

    ct = sub.add_parser("ct-report", help="historic analytics from CT result files")
    ct.add_argument("--ct-dir", required=True, type=Path)
    ct.add_argument("--decade", type=_decade, default=(2009, 2019))
    ct.add_argument("--san-threshold", type=int, default=10)
    ct.add_argument("--top-threshold", type=float, default=20)
    ct.add_argument("--scan-report", type=Path,
                    help="scan report.json supplying DNSSEC and restriction flags")
    ct.add_argument("--formats", type=_formats, default=FORMATS)
    ct.add_argument("--out", required=True, type=Path)

    cls = sub.add_parser("classify", help="matrix row and profile for one combination")
    cls.add_argument("--restricted", required=True, type=_bool)
    cls.add_argument("--dnssec", required=True, type=_bool)
    cls.add_argument("--cert", required=True, type=str.lower, choices=["none", "dv", "ovev"])

    dif = sub.add_parser("diff", help="compare two scan reports")
    dif.add_argument("a", type=Path)
    dif.add_argument("b", type=Path)
    return parser


def _cmd_scan(args) -> int:
    config = ScanConfig(
        roster=args.roster, trust_store=args.trust_store, out=args.out, psl=args.psl,
        overlay=args.overlay, overrides=args.overrides, resolver=args.resolver,
        zones=args.zones, anchor=args.anchor, chains=args.chains, ct_dir=args.ct_dir,
        decade=args.decade, san_threshold=args.san_threshold, parallel=args.parallel,
        formats=args.formats, now=args.now, vantage=args.vantage, cache_dir=args.cache_dir,
        cache_ttl=args.cache_ttl, timeout=args.timeout)
    result, report = run_scan(config)
    ct = None
    if config.ct_dir is not None:
        records, stats = load_ct_dir(config.ct_dir, config.decade)
        ct = summarize_ct(records, config.decade, stats, config.san_threshold,
                          config.top_threshold, flags_from_rows(result.rows))
    emit_reports(result, report, config.out, config.formats, ct)
    (config.out / "run.json").write_text(json.dumps(
        {"timing": result.timing, "probes": result.probes}, indent=2) + "\n")
    counts = ", ".join(f"{p.value} {report.by_profile.get(p, 0)}"
                       for p in sorted(report.by_profile, key=lambda p: -p.rank))
    print(f"{len(result.rows)} hosts scanned ({counts}); reports in {config.out}")
    if result.partial:
        print(f"{report.indeterminate_dnssec} hosts with indeterminate DNSSEC", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def _cmd_ct_report(args) -> int:
    lo, hi = args.decade
    if lo > hi:
        raise ConfigError(f"decade {lo}:{hi} is empty")
    if not args.ct_dir.is_dir():
        raise ConfigError(f"CT directory {args.ct_dir} does not exist")
    flags = None
    if args.scan_report:
        try:
            flags = flags_from_report(json.loads(args.scan_report.read_text()))
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError(f"scan report: {exc}") from exc
    records, stats = load_ct_dir(args.ct_dir, args.decade)
    ct = summarize_ct(records, args.decade, stats, args.san_threshold, args.top_threshold, flags)
    args.out.mkdir(parents=True, exist_ok=True)
    if "json" in args.formats:
        (args.out / "ct.json").write_text(dumps(ct_to_json(ct)), encoding="utf-8")
    emit_ct(ct, args.out, args.formats)
    print(f"{stats.kept} certificates for {len({r.host for r in records})} hosts "
          f"({stats.precerts} precerts, {stats.duplicates} duplicates, "
          f"{stats.out_of_decade} outside {lo}-{hi}, {stats.schema_errors} malformed)")
    return EXIT_OK


def _cmd_classify(args) -> int:
    cert = {"none": CertClass.NONE, "dv": CertClass.DV, "ovev": CertClass.OVEV}[args.cert]
    outcome = profile(args.restricted, args.dnssec, cert)
    print(f"{outcome.row_id} {outcome.profile.value}")
    return EXIT_OK


def _cmd_diff(args) -> int:
    try:
        a, b = (json.loads(p.read_text(encoding="utf-8")) for p in (args.a, args.b))
    except (OSError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    changes = diff(a, b)
    for change in changes:
        print(f"{change.fqdn}\t{change.field}\t{change.a}\t{change.b}")
    va = a.get("metadata", {}).get("vantage") or str(args.a)
    vb = b.get("metadata", {}).get("vantage") or str(args.b)
    print(f"{len(changes)} differences between {va} and {vb}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {"scan": _cmd_scan, "ct-report": _cmd_ct_report, "classify": _cmd_classify,
            "diff": _cmd_diff}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"alertscope: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
