"""
CA market share from CT records
===============================

Load the demo CT result files, then chart yearly coverage by issuing CA,
the share of hosts on large shared-SAN certificates and validity periods.
Charts land in ``ct-out/``.
"""

from pathlib import Path

from alertscope.ct_history import load_ct_dir
from alertscope.pipeline.charts import write_charts
from alertscope.pipeline.report import summarize_ct
from alertscope.reference import demo_dir

records, stats = load_ct_dir(demo_dir() / "ct", (2009, 2019))
print(f"kept {stats.kept}, dropped {stats.precerts} precerts and "
      f"{stats.out_of_decade} out-of-range certificates")

# a low threshold so that a dozen hosts still have "top" CAs
ct = summarize_ct(records, (2009, 2019), stats, top_threshold=1)
for year, row in ct.shares_normalized.items():
    leader = max(row, key=row.get)
    print(f"{year}: {ct.table.year_totals[year]:>2} hosts, most coverage from {leader} "
          f"({row[leader]:.0%})")

for year, s in ct.validity.items():
    print(f"{year}: median validity {s.median:g} days over {s.count} certificates")

out = Path("ct-out")
out.mkdir(exist_ok=True)
for path in write_charts(ct, out):
    print("chart:", path)
