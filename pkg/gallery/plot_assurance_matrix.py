"""
Assurance profiles at roster scale
==================================

Print the twelve-row matrix, then aggregate the bundled 1327-host synthetic
roster and break it down by sector.
"""

from alertscope.assurance import CertClass, aggregate, profile
from alertscope.reference import load_synthetic

print("row  restricted  dnssec  cert  profile")
for restricted in (True, False):
    for dnssec in (True, False):
        for cls in CertClass:
            o = profile(restricted, dnssec, cls)
            print(f"{o.row_id}   {restricted!s:<10}  {dnssec!s:<6}  {cls.value:<4}  "
                  f"{o.profile.value}")

report = aggregate(load_synthetic())
print()
for p, pct in sorted(report.percentages().items(), key=lambda kv: -kv[0].rank):
    print(f"{p.value:<11} {report.by_profile[p]:>5}  {pct:5.2f}%")

print()
for sector, row in sorted(report.by_sector.items(), key=lambda kv: -kv[1].total):
    strong = row.profiles.get("Strong", 0)
    print(f"{sector.value:<15} {row.total:>4} hosts, {strong:>3} strong, "
          f"{row.cert_types['N/A']:>3} without a usable certificate")
