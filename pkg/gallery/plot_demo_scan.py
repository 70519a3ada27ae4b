"""
An offline scan of the demo fixtures
====================================

Run the full pipeline against signed zone files and certificate chain
fixtures, one host per matrix row, and write the reports to ``demo-out/``.
"""

from pathlib import Path

from alertscope.pipeline import ScanConfig, emit_reports, run_scan
from alertscope.pipeline.serialize import parse_stamp
from alertscope.reference import demo_dir

demo = demo_dir()
config = ScanConfig(
    roster=demo / "roster.csv", trust_store=demo / "trust-store.pem",
    zones=demo / "zones", chains=demo / "chains", overrides=demo / "overrides.txt",
    now=parse_stamp((demo / "NOW").read_text().strip()), out=Path("demo-out"))
result, report = run_scan(config)

for row in result.rows:
    print(f"{row.outcome.row_id}  {row.fqdn:<26} {row.dnssec.verdict.value:<9} "
          f"{row.cert.chain_verdict.value:<18} {row.outcome.profile.value}")

written = emit_reports(result, report, config.out, ("json", "csv"))
print("\nwrote", ", ".join(p.name for p in written))
