"""Regenerate the bundled demo fixtures under src/alertscope/data/demo.

One host per assurance-matrix row, signed and unsigned zones, certificate
chains for every chain verdict, revocation artifacts and a small CT set.
Keys are fresh on every run, so the committed output changes wholesale
when this script is rerun.

    python tools/make_demo_fixtures.py [--out DIR]
"""

from __future__ import annotations

import argparse
import calendar
import csv
import datetime as dt
import hashlib
import json
import random
import shutil
from pathlib import Path

from cryptography.hazmat.primitives.serialization import Encoding

from alertscope.dnssec.signing import ZoneSpec, build_tree, write_tree
from alertscope.webpki.connectors import write_chain
from alertscope.webpki.testpki import make_ca, make_crl, make_leaf, make_ocsp_response

UTC = dt.timezone.utc
NOW = "2020-03-01T00:00:00Z"
INCEPTION = calendar.timegm((2019, 1, 1, 0, 0, 0))
EXPIRATION = calendar.timegm((2030, 1, 1, 0, 0, 0))

OV = ("2.23.140.1.2.2",)
DV = ("2.23.140.1.2.1",)
EV = ("2.23.140.1.1",)

# row, fqdn, org name, territory, certificate kind
HOSTS = [
    ("01", "www.coastal-oes.gov", "Coastal County Office of Emergency Services", "CA", "ov"),
    ("02", "www.ci.tracy.ca.us", "Tracy Fire Department", "CA", "dv"),
    ("03", "alerts.riverbend-ema.org", "Riverbend Emergency Management Agency", "OR", "ev"),
    ("04", "www.lakeshore.mi.us", "Lakeshore Police Department", "MI", "ov"),
    ("05", "www.harborfire.com", "Harbor Fire Rescue", "ME", "ov"),
    ("06", "www.ci.pineview.mi.us", "Pineview Village Council", "MI", "dv"),
    ("07", "www.valley-radio.org", "Valley Amateur Radio Club", "WA", "dv"),
    ("08", "www.centralalerts.us", "Central County Alerts", "TX", "dv"),
    ("09", "www.stormwatch.gov", "Fort Stormwatch Garrison", "KS", "notls"),
    ("10", "alerts.co.oakdale.mi.us", "Oakdale County Sheriff", "MI", "expired"),
    ("11", "alert.valleystate.org", "Valley State University Police", "ID", "selfsigned"),
    ("12", "www.metro911.com", "Metro 911 Communications", "NV", "selfsigned-in-chain"),
]
DUPLICATE = ("13", "https://www.coastal-oes.gov/health", "Coastal County Public Health", "CA")


def zone_specs() -> list[ZoneSpec]:
    a = "192.0.2.{}"
    return [
        ZoneSpec(".", algorithm=8),
        ZoneSpec("gov."), ZoneSpec("org."), ZoneSpec("com."), ZoneSpec("us."),
        ZoneSpec("ca.us.", records=[("www.ci.tracy.ca.us.", "A", a.format(2))]),
        ZoneSpec("mi.us.", signed=False, records=[
            ("www.lakeshore.mi.us.", "A", a.format(4)),
            ("www.ci.pineview.mi.us.", "A", a.format(6)),
            ("alerts.co.oakdale.mi.us.", "A", a.format(10))]),
        ZoneSpec("coastal-oes.gov.", records=[("www", "A", a.format(1))]),
        ZoneSpec("stormwatch.gov.", records=[("www", "A", a.format(9))]),
        ZoneSpec("riverbend-ema.org.", records=[("alerts", "A", a.format(3))]),
        ZoneSpec("valleystate.org.", records=[("alert", "A", a.format(11))]),
        ZoneSpec("valley-radio.org.", signed=False, records=[("www", "A", a.format(7))]),
        ZoneSpec("harborfire.com.", signed=False, records=[("www", "A", a.format(5))]),
        ZoneSpec("metro911.com.", signed=False, records=[("www", "A", a.format(12))]),
        ZoneSpec("centralalerts.us.", records=[("www", "A", a.format(8))]),
    ]


def write_chains(out: Path) -> None:
    chains = out / "chains"
    chains.mkdir(parents=True)
    root = make_ca("AlertScope Demo Root")
    inter = make_ca("AlertScope Demo Issuing CA", issuer=root)
    (out / "trust-store.pem").write_bytes(root.cert.public_bytes(Encoding.PEM))
    for row, fqdn, name, _, kind in HOSTS:
        org = name if kind in ("ov", "ev") else None
        policies = {"ov": OV, "ev": EV}.get(kind, DV)
        if kind == "notls":
            continue
        if kind == "selfsigned":
            leaf = make_leaf([fqdn], None)
            write_chain(chains / f"{fqdn}.chain.pem", [leaf.cert])
            continue
        if kind == "selfsigned-in-chain":
            private_root = make_ca("Metro Private Root", org="Metro 911 Communications")
            leaf = make_leaf([fqdn], private_root, policies=DV)
            write_chain(chains / f"{fqdn}.chain.pem", [leaf.cert, private_root.cert])
            continue
        not_after = dt.datetime(2020, 1, 15, tzinfo=UTC) if kind == "expired" else None
        leaf = make_leaf([fqdn], inter, org=org, policies=policies, not_after=not_after,
                         ocsp_url=f"http://ocsp.demo.invalid/{row}",
                         crl_url=f"http://crl.demo.invalid/{row}.crl")
        write_chain(chains / f"{fqdn}.chain.pem", [leaf.cert, inter.cert])
        if row == "01":
            (chains / f"{fqdn}.ocsp.der").write_bytes(make_ocsp_response(leaf.cert, inter))
        elif row == "03":
            (chains / f"{fqdn}.ocsp-response.der").write_bytes(
                make_ocsp_response(leaf.cert, inter))
        else:
            (chains / f"{fqdn}.crl.der").write_bytes(make_crl(inter, []))


def write_roster(out: Path) -> None:
    with (out / "roster.csv").open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "name", "territory", "url"])
        for row, fqdn, name, territory, _ in HOSTS:
            writer.writerow([row, name, territory, f"https://{fqdn}/"])
        writer.writerow([DUPLICATE[0], DUPLICATE[2], DUPLICATE[3], DUPLICATE[1]])
    (out / "overrides.txt").write_text("# fqdns confirmed dedicated despite a URL path\n"
                                       "www.coastal-oes.gov\n", encoding="utf-8")


CT_ISSUERS = ["DigiCert Inc", "GoDaddy.com, Inc.", "Let's Encrypt", "Sectigo Limited",
              "COMODO CA Limited", "Entrust, Inc."]


def write_ct(out: Path, seed: int = 7) -> None:
    rng = random.Random(seed)
    ct = out / "ct"
    ct.mkdir(parents=True)
    for row, fqdn, name, _, kind in HOSTS:
        lines = []
        for i in range(rng.randint(3, 8)):
            year = rng.randint(2008, 2019)
            start = dt.datetime(year, rng.randint(1, 12), rng.randint(1, 28), tzinfo=UTC)
            issuer = rng.choice(CT_ISSUERS)
            days = 90 if issuer == "Let's Encrypt" else rng.choice([365, 730, 1095])
            sans = [fqdn] + ([f"host{j}.shared-cdn.example" for j in range(12)]
                             if rng.random() < 0.2 else [])
            obj = {
                "sha256": hashlib.sha256(f"{fqdn}/{i}".encode()).hexdigest(),
                "issuer_o": issuer,
                "subject": {"CN": fqdn, **({"O": name} if kind in ("ov", "ev") else {})},
                "sans": sans,
                "not_before": start.strftime("%Y-%m-%dT%H:%M:%SZ"),
                "not_after": (start + dt.timedelta(days=days)).strftime("%Y-%m-%dT%H:%M:%SZ"),
                "policy_oids": list({"ov": OV, "ev": EV}.get(kind, DV)),
                "is_precert": False,
            }
            lines.append(obj)
            if rng.random() < 0.5:
                lines.append({**obj, "sha256": hashlib.sha256(obj["sha256"].encode()).hexdigest(),
                              "is_precert": True})
        with (ct / f"{fqdn}.jsonl").open("w", encoding="utf-8") as fh:
            for obj in lines:
                fh.write(json.dumps(obj, sort_keys=True) + "\n")


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    default = Path(__file__).resolve().parents[1] / "src" / "alertscope" / "data" / "demo"
    parser.add_argument("--out", type=Path, default=default)
    args = parser.parse_args(argv)
    if args.out.exists():
        shutil.rmtree(args.out)
    args.out.mkdir(parents=True)
    zones, anchor = build_tree(zone_specs(), INCEPTION, EXPIRATION)
    write_tree(zones, args.out / "zones", anchor)
    write_chains(args.out)
    write_roster(args.out)
    write_ct(args.out)
    (args.out / "NOW").write_text(NOW + "\n", encoding="utf-8")
    print(f"demo fixtures written to {args.out}")


if __name__ == "__main__":
    main()
