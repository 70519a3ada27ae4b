"""Build signed zone trees for fixtures and tests.

Signing goes through dnspython so that fixtures are produced by code
independent of this package's verifier.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import dns.dnssec
import dns.name
import dns.rdata
import dns.rdataclass
import dns.rdatatype
import dns.rdtypes.ANY.DNSKEY
import dns.rrset
import dns.zone
from cryptography.hazmat.primitives.asymmetric import ec, rsa

from .records import name_labels, normalize_name

ALGORITHMS = {8: "RSASHA256", 13: "ECDSAP256SHA256"}


@dataclass
class ZoneSpec:
    origin: str
    # (owner relative or absolute, type, rdata text)
    records: list[tuple[str, str, str]] = field(default_factory=list)
    signed: bool = True
    algorithm: int = 13
    # publish a DS for this zone in its parent (only meaningful when signed)
    delegate_ds: bool = True


def _new_key(algorithm: int):
    if algorithm == 8:
        return rsa.generate_private_key(public_exponent=65537, key_size=1024)
    if algorithm == 13:
        return ec.generate_private_key(ec.SECP256R1())
    raise ValueError(f"cannot generate keys for algorithm {algorithm}")


def build_tree(specs: list[ZoneSpec], inception: int, expiration: int):
    """Create and sign zones bottom-up.

    Returns ``(zones, anchor_ds_text)`` where ``zones`` maps origin to a
    :class:`dns.zone.Zone` and the anchor is the DS line for the topmost zone.
    """
    specs = sorted(specs, key=lambda s: -len(name_labels(s.origin)))
    origins = [normalize_name(s.origin) for s in specs]
    zones, dnskeys = {}, {}
    for spec in specs:
        origin = normalize_name(spec.origin)
        zname = dns.name.from_text(origin)
        apex = "" if origin == "." else origin
        lines = [f"@ 3600 IN SOA ns1.{apex} hostmaster.{apex} 1 7200 900 1209600 300",
                 f"@ 3600 IN NS ns1.{apex}"]
        for owner, rtype, text in spec.records:
            lines.append(f"{owner} 3600 IN {rtype} {text}")
        # delegations to children that are built as zones themselves
        for child in origins:
            cname = dns.name.from_text(child)
            if cname != zname and _closest_zone(cname, origins) == zname:
                lines.append(f"{child} 3600 IN NS ns1.{child}")
                if child in dnskeys and dnskeys[child][2]:
                    ds = dns.dnssec.make_ds(cname, dnskeys[child][1], "SHA256")
                    lines.append(f"{child} 3600 IN DS {ds.to_text()}")
        zone = dns.zone.from_text("\n".join(lines) + "\n", origin=zname, relativize=False,
                                  check_origin=False)
        if spec.signed:
            private = _new_key(spec.algorithm)
            dnskey = dns.dnssec.make_dnskey(private.public_key(), spec.algorithm, flags=257)
            dnskeys[origin] = (private, dnskey, spec.delegate_ds)
            with zone.writer() as txn:
                txn.add(zname, 3600, dnskey)
            _sign_zone(zone, private, dnskey, inception, expiration)
        zones[origin] = zone
    top = specs[-1]
    top_origin = normalize_name(top.origin)
    anchor = None
    if top_origin in dnskeys:
        ds = dns.dnssec.make_ds(dns.name.from_text(top_origin), dnskeys[top_origin][1], "SHA256")
        anchor = f"{top_origin} IN DS {ds.to_text()}"
    return zones, anchor


def _closest_zone(name: dns.name.Name, origins: list[str]) -> dns.name.Name | None:
    """Nearest proper ancestor of ``name`` among ``origins``."""
    parent = name
    while parent != dns.name.root:
        parent = parent.parent()
        if parent.to_text() in origins:
            return parent
    return None


def _sign_zone(zone, private, dnskey, inception, expiration):
    origin = zone.origin
    signatures = []
    for name, node in zone.nodes.items():
        for rdataset in node.rdatasets:
            if rdataset.rdtype == dns.rdatatype.RRSIG:
                continue
            # parent side of a delegation: only DS is authoritative
            if name != origin and rdataset.rdtype == dns.rdatatype.NS:
                continue
            rrset = dns.rrset.from_rdata_list(name, rdataset.ttl, list(rdataset))
            sig = dns.dnssec.sign(rrset, private, origin, dnskey, inception=inception,
                                  expiration=expiration, origin=origin)
            signatures.append((name, rdataset.ttl, sig))
    with zone.writer() as txn:
        for name, ttl, sig in signatures:
            txn.add(name, ttl, sig)


def write_tree(zones: dict, directory: str | Path, anchor: str | None = None) -> Path:
    """Write one ``<origin>zone`` file per zone plus ``manifest.txt``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = []
    for origin in sorted(zones, key=lambda o: (len(name_labels(o)), o)):
        filename = ("root" if origin == "." else origin.rstrip(".")) + ".zone"
        zones[origin].to_file(str(directory / filename), relativize=False, sorted=True)
        manifest.append(f"{origin} {filename}")
    (directory / "manifest.txt").write_text("\n".join(manifest) + "\n", encoding="utf-8")
    if anchor:
        (directory / "anchor.ds").write_text(anchor + "\n", encoding="utf-8")
    return directory
