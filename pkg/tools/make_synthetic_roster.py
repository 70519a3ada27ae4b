"""Build the 1327-host synthetic roster bundled as reference data.

Each host gets a TLD, a DNSSEC flag, a certificate type and a sector such
that three published tallies hold at once: hosts per matrix combination,
hosts and DNSSEC-enabled hosts per TLD, and certificate types and profiles
per sector. The joint assignment is found with an integer program; names
and domains are then generated so the bundled classifiers recover the
intended sector and TLD.

    python tools/make_synthetic_roster.py [--out FILE]
"""

from __future__ import annotations

import argparse
import csv
import itertools
import random
from pathlib import Path

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from alertscope.assurance import CertClass, profile
from alertscope.namespace.names import US_STATES
from alertscope.namespace.sectors import Sector, classify_sector

# tld: (hosts, dnssec-enabled, restricted)
TLDS = {
    "com": (258, 2, False), "org": (347, 5, False), "net": (58, 0, False),
    "info": (2, 0, False), "cc": (1, 0, False), "co": (1, 0, False), "us": (65, 0, False),
    "state.us": (235, 2, True), "edu": (6, 0, True), "gov": (344, 30, True),
    "mil": (10, 10, True),
}
# (restricted, dnssec, cert class) -> hosts
COMBOS = {
    (True, True, CertClass.OVEV): 29, (True, True, CertClass.DV): 11,
    (False, True, CertClass.OVEV): 2, (True, False, CertClass.OVEV): 132,
    (False, False, CertClass.OVEV): 117, (True, False, CertClass.DV): 354,
    (False, False, CertClass.DV): 482, (False, True, CertClass.DV): 3,
    (True, True, CertClass.NONE): 2, (True, False, CertClass.NONE): 67,
    (False, True, CertClass.NONE): 2, (False, False, CertClass.NONE): 126,
}
CERTS = ("N/A", "DV", "OV", "EV")
PROFILES = ("Strong", "Weak", "Inadequate")
SECTORS = (Sector.PUBLIC_SAFETY, Sector.GOVERNMENTAL, Sector.LAW_ENFORCEMENT,
           Sector.MILITARY, Sector.EDUCATIONAL, Sector.OTHER)
# sector: (N/A, DV, OV, EV, Strong, Weak, Inadequate)
SECTOR_TABLE = {
    Sector.PUBLIC_SAFETY: (102, 415, 119, 8, 10, 120, 514),
    Sector.GOVERNMENTAL: (73, 318, 102, 6, 7, 104, 388),
    Sector.LAW_ENFORCEMENT: (21, 110, 31, 0, 5, 28, 129),
    Sector.MILITARY: (1, 4, 5, 1, 6, 3, 2),
    Sector.EDUCATIONAL: (0, 0, 4, 0, 0, 4, 0),
    Sector.OTHER: (0, 3, 3, 1, 1, 3, 3),
}
# soft preferences that make the data look plausible, not required by any tally
PREFERRED = {Sector.MILITARY: {"mil", "gov"}, Sector.EDUCATIONAL: {"edu", "org"},
             Sector.GOVERNMENTAL: {"gov", "state.us", "us"}}

CERT_CLASS = {"N/A": CertClass.NONE, "DV": CertClass.DV, "OV": CertClass.OVEV,
              "EV": CertClass.OVEV}


def solve() -> dict[tuple[str, bool, str, Sector], int]:
    cells = list(itertools.product(TLDS, (True, False), CERTS, SECTORS))
    index = {c: i for i, c in enumerate(cells)}
    rows, lo_hi = [], []

    def equal(selector, value):
        row = np.zeros(len(cells))
        for c in cells:
            if selector(*c):
                row[index[c]] = 1
        rows.append(row)
        lo_hi.append(value)

    for tld, (hosts, signed, _) in TLDS.items():
        equal(lambda t, d, c, s, tld=tld: t == tld, hosts)
        equal(lambda t, d, c, s, tld=tld: t == tld and d, signed)
    for (r, d0, cls), n in COMBOS.items():
        equal(lambda t, d, c, s, r=r, d0=d0, cls=cls:
              TLDS[t][2] == r and d == d0 and CERT_CLASS[c] is cls, n)
    for sector, values in SECTOR_TABLE.items():
        for cert, n in zip(CERTS, values[:4]):
            equal(lambda t, d, c, s, sector=sector, cert=cert: s is sector and c == cert, n)
        for prof, n in zip(PROFILES, values[4:]):
            equal(lambda t, d, c, s, sector=sector, prof=prof:
                  s is sector and profile(TLDS[t][2], d, CERT_CLASS[c]).profile.value == prof, n)
    cost = np.array([0.0 if t in PREFERRED.get(s, {t}) else 1.0 for t, d, c, s in cells])
    A = np.vstack(rows)
    b = np.array(lo_hi, dtype=float)
    res = milp(cost, constraints=LinearConstraint(A, b, b), integrality=np.ones(len(cells)),
               bounds=Bounds(0, np.inf))
    if not res.success:
        raise SystemExit(f"no joint assignment: {res.message}")
    return {c: int(round(v)) for c, v in zip(cells, res.x) if round(v) > 0}


PLACES = [a + b for a in ("Alder", "Birch", "Cedar", "Maple", "Willow", "Aspen", "Juniper",
                          "Laurel", "Hickory", "Spruce", "Sycamore", "Poplar", "Redwood",
                          "Cypress", "Chestnut", "Linden", "Elm", "Oak", "Pine", "Holly")
          for b in (" Falls", " Creek", " Ridge", " Valley", " Springs", " Hollow", " Point",
                    " Harbor", " Grove", " Prairie", " Bluff", " Lake", " Hills", " Bay")]

TEMPLATES = {
    Sector.PUBLIC_SAFETY: ["{p} Fire Rescue", "{p} Emergency Management Agency",
                           "{p} 911 Dispatch", "{p} Office of Emergency Services",
                           "{p} Public Safety Communications"],
    Sector.GOVERNMENTAL: ["{p} County", "City of {p}", "{p} Borough Council",
                          "{p} Village Government", "{p} Port Authority"],
    Sector.LAW_ENFORCEMENT: ["{p} Police Department", "{p} Sheriff's Office",
                             "{p} Highway Patrol"],
    Sector.MILITARY: ["Fort {p}", "{p} Army Garrison", "{p} Missile Range"],
    Sector.EDUCATIONAL: ["{p} University", "{p} State University"],
    Sector.OTHER: ["{p} Amateur Radio Club", "{p} Weather Network", "{p} Red Cross Chapter"],
}
SLUG = {Sector.PUBLIC_SAFETY: "alerts", Sector.GOVERNMENTAL: "gov",
        Sector.LAW_ENFORCEMENT: "police", Sector.MILITARY: "garrison",
        Sector.EDUCATIONAL: "univ", Sector.OTHER: "net"}
STATES = sorted(US_STATES)


def build_rows(assignment, seed: int = 2020) -> list[dict]:
    rng = random.Random(seed)
    for place in PLACES:
        assert classify_sector(place) is Sector.OTHER, place
    hosts = []
    for (tld, signed, cert, sector), n in sorted(assignment.items(),
                                                 key=lambda kv: (kv[0][0], kv[0][1], kv[0][2],
                                                                 kv[0][3].value)):
        hosts += [(tld, signed, cert, sector)] * n
    rng.shuffle(hosts)
    rows = []
    for i, (tld, signed, cert, sector) in enumerate(hosts, 1):
        place = rng.choice(PLACES)
        name = rng.choice(TEMPLATES[sector]).format(p=place)
        assert classify_sector(name) is sector, (name, sector)
        state = rng.choice(STATES)
        slug = place.lower().replace(" ", "")
        if tld == "state.us":
            prefix = rng.choice(["ci.", "co.", ""])
            fqdn = f"www.{prefix}{slug}{i}.{state}.us"
        else:
            fqdn = f"www.{slug}-{SLUG[sector]}{i}.{tld}"
        rows.append({"id": f"S{i:04d}", "name": name, "territory": state.upper(),
                     "url": f"https://{fqdn}/", "dnssec": "yes" if signed else "no",
                     "cert": cert})
    return rows


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    default = (Path(__file__).resolve().parents[1] / "src" / "alertscope" / "data"
               / "synthetic_roster.csv")
    parser.add_argument("--out", type=Path, default=default)
    args = parser.parse_args(argv)
    rows = build_rows(solve())
    with args.out.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    print(f"{len(rows)} hosts written to {args.out}")


if __name__ == "__main__":
    main()
