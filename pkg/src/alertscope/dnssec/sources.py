"""Record sources: zone-file fixtures and a live recursive resolver."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import dns.exception
import dns.flags
import dns.message
import dns.name
import dns.query
import dns.rcode
import dns.rdataclass
import dns.rdatatype
import dns.zone

from ..errors import IncompleteFixture, ResolverTimeout
from .records import DS, NS, RRSIG, RrSet, Rrsig, normalize_name


@dataclass(frozen=True)
class Answer:
    rrset: RrSet | None
    rrsigs: tuple[Rrsig, ...] = ()

    def __bool__(self):
        return self.rrset is not None


class RecordSource(Protocol):
    def query(self, name: str, rr_type: int) -> Answer: ...


def _from_rdataset(owner: str, rdataset, sigset=None) -> Answer:
    if rdataset is None or not len(rdataset):
        return Answer(None)
    rrset = RrSet(owner, rdataset.rdtype, rdataset.ttl,
                  tuple(rd.to_wire() for rd in rdataset), rdataset.rdclass)
    sigs = ()
    if sigset is not None:
        sigs = tuple(Rrsig.from_wire(rd.to_wire()) for rd in sigset
                     if rd.type_covered == rdataset.rdtype)
    return Answer(rrset, sigs)


class ZoneFixtureSource:
    """Answers queries from a set of zone files, one per zone.

    Parent-side data (DS, delegation NS) is served from the parent zone; a
    query that falls below a delegation whose child zone is not loaded
    raises :class:`IncompleteFixture`.
    """

    # a DS missing from a fixture counts as proven absent
    trusted_absence = True

    def __init__(self, zones: dict[str, dns.zone.Zone]):
        self.zones = {normalize_name(k): v for k, v in zones.items()}

    @classmethod
    def from_directory(cls, directory: str | Path, manifest: str = "manifest.txt"):
        directory = Path(directory)
        zones = {}
        for raw in (directory / manifest).read_text(encoding="utf-8").splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            origin, filename = line.split()
            zones[origin] = dns.zone.from_file(str(directory / filename), origin=origin,
                                               relativize=False, check_origin=True)
        return cls(zones)

    def _enclosing(self, name: dns.name.Name, strict: bool):
        best = None
        for origin, zone in self.zones.items():
            zname = zone.origin
            if name.is_subdomain(zname) and not (strict and name == zname):
                if best is None or len(zname) > len(best.origin):
                    best = zone
        return best

    def query(self, name: str, rr_type: int) -> Answer:
        qname = dns.name.from_text(normalize_name(name))
        zone = self._enclosing(qname, strict=rr_type == DS)
        if zone is None:
            raise IncompleteFixture(f"no zone loaded for {qname} ({rr_type})")
        # find the topmost delegation between the zone apex and qname
        extra = len(qname) - len(zone.origin)
        for k in range(1, extra + 1):
            cut = dns.name.Name(qname.labels[extra - k:])
            node = zone.get_node(cut)
            if node is None or node.get_rdataset(dns.rdataclass.IN, NS) is None:
                continue
            if cut == qname and rr_type in (DS, NS):
                break
            raise IncompleteFixture(f"{qname} lies below unloaded zone {cut}")
        node = zone.get_node(qname)
        if node is None:
            return Answer(None)
        rdataset = node.get_rdataset(dns.rdataclass.IN, rr_type)
        sigset = node.get_rdataset(dns.rdataclass.IN, RRSIG, rr_type)
        return _from_rdataset(normalize_name(name), rdataset, sigset)


class LiveSource:
    """DNS over UDP (TCP on truncation) to a recursive resolver, DO+CD set."""

    trusted_absence = False

    def __init__(self, address: str, timeout: float = 5.0):
        host, _, port = address.rpartition(":")
        if not host:
            host, port = address, "53"
        self.host, self.port, self.timeout = host.strip("[]"), int(port), timeout

    def query(self, name: str, rr_type: int) -> Answer:
        qname = dns.name.from_text(normalize_name(name))
        msg = dns.message.make_query(qname, rr_type, want_dnssec=True)
        msg.flags |= dns.flags.CD
        try:
            resp, _ = dns.query.udp_with_fallback(msg, self.host, timeout=self.timeout,
                                                  port=self.port)
        except (dns.exception.Timeout, OSError) as exc:
            raise ResolverTimeout(f"{qname}/{rr_type}: {exc}") from exc
        if resp.rcode() not in (dns.rcode.NOERROR, dns.rcode.NXDOMAIN):
            raise ResolverTimeout(f"{qname}/{rr_type}: rcode {dns.rcode.to_text(resp.rcode())}")
        rrset = resp.get_rrset(resp.answer, qname, dns.rdataclass.IN, rr_type)
        sigs = resp.get_rrset(resp.answer, qname, dns.rdataclass.IN, RRSIG, rr_type)
        return _from_rdataset(normalize_name(name), rrset, sigs)


class SerializingSource:
    """Wraps a source that is not safe for concurrent queries."""

    def __init__(self, inner: RecordSource):
        self.inner = inner
        self.trusted_absence = getattr(inner, "trusted_absence", False)
        self._lock = threading.Lock()

    def query(self, name: str, rr_type: int) -> Answer:
        with self._lock:
            return self.inner.query(name, rr_type)
