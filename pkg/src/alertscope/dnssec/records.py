"""Record sets, DNSSEC rdata and the RFC 4034 canonical form."""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field

from ..errors import MalformedRdata

CLASS_IN = 1

A, NS, CNAME, SOA, PTR, MX, AAAA, SRV, DNAME, DS, RRSIG, DNSKEY = (
    1, 2, 5, 6, 12, 15, 28, 33, 39, 43, 46, 48)

# rdata layouts whose embedded names are lowercased in canonical form:
# (fixed prefix length, number of consecutive names), suffix copied verbatim
_NAME_LAYOUT = {
    NS: (0, 1), 3: (0, 1), 4: (0, 1), CNAME: (0, 1), 7: (0, 1), 8: (0, 1), 9: (0, 1),
    PTR: (0, 1), DNAME: (0, 1), SOA: (0, 2), 14: (0, 2), 17: (0, 2),
    MX: (2, 1), 18: (2, 1), 21: (2, 1), 36: (2, 1), SRV: (6, 1),
}

DIGEST_ALGORITHMS = {1: "sha1", 2: "sha256", 4: "sha384"}


def normalize_name(name: str) -> str:
    """Absolute, lowercase presentation form (``"www.example.net."``)."""
    name = name.strip().lower()
    if not name.endswith("."):
        name += "."
    return name


def name_labels(name: str) -> list[str]:
    return [l for l in normalize_name(name).split(".") if l]


def name_to_wire(name: str) -> bytes:
    out = bytearray()
    for label in name_labels(name):
        raw = label.encode("ascii")
        if not 0 < len(raw) < 64:
            raise MalformedRdata(f"bad label in {name!r}")
        out.append(len(raw))
        out += raw
    out.append(0)
    return bytes(out)


def read_name(buf: bytes, offset: int) -> tuple[bytes, int]:
    """Read one uncompressed wire name starting at ``offset``.

    Returns the name's wire bytes with ASCII letters lowercased and the
    offset just past it.
    """
    out = bytearray()
    while True:
        if offset >= len(buf):
            raise MalformedRdata("name runs past end of rdata")
        length = buf[offset]
        if length & 0xC0:
            raise MalformedRdata("compressed name in rdata")
        out += buf[offset:offset + length + 1].lower()
        offset += length + 1
        if length == 0:
            return bytes(out), offset


def wire_to_text(wire: bytes) -> str:
    labels, pos = [], 0
    while wire[pos]:
        labels.append(wire[pos + 1:pos + 1 + wire[pos]].decode("ascii"))
        pos += wire[pos] + 1
    return ".".join(labels) + "."


def canonical_rdata(rr_type: int, rdata: bytes) -> bytes:
    layout = _NAME_LAYOUT.get(rr_type)
    if layout is None:
        return bytes(rdata)
    fixed, count = layout
    if len(rdata) < fixed:
        raise MalformedRdata(f"type {rr_type} rdata too short")
    out, pos = bytearray(rdata[:fixed]), fixed
    for _ in range(count):
        wire, pos = read_name(rdata, pos)
        out += wire
    out += rdata[pos:]
    return bytes(out)


@dataclass(frozen=True)
class RrSet:
    owner: str
    rr_type: int
    ttl: int
    rdata_list: tuple[bytes, ...]
    rr_class: int = CLASS_IN

    def __post_init__(self):
        object.__setattr__(self, "owner", normalize_name(self.owner))
        object.__setattr__(self, "rdata_list", tuple(bytes(r) for r in self.rdata_list))
        if not self.rdata_list:
            raise MalformedRdata("empty record set")


def canonical_rrset_wire(rrset: RrSet, original_ttl: int, labels: int | None = None) -> bytes:
    """Canonical wire form of ``rrset`` as covered by an RRSIG.

    ``labels`` is the RRSIG label count; when it is smaller than the owner's
    label count the owner is rewritten to the matching wildcard name.
    """
    owner_labels = name_labels(rrset.owner)
    if labels is not None and labels < len(owner_labels):
        owner = "*." + ".".join(owner_labels[len(owner_labels) - labels:])
    else:
        owner = rrset.owner
    head = name_to_wire(owner) + struct.pack("!HHI", rrset.rr_type, rrset.rr_class, original_ttl)
    rdatas = sorted({canonical_rdata(rrset.rr_type, r) for r in rrset.rdata_list})
    return b"".join(head + struct.pack("!H", len(r)) + r for r in rdatas)


@dataclass(frozen=True)
class Rrsig:
    type_covered: int
    algorithm: int
    labels: int
    original_ttl: int
    expiration: int
    inception: int
    key_tag: int
    signer: str
    signature: bytes = field(repr=False)

    @classmethod
    def from_wire(cls, rdata: bytes) -> "Rrsig":
        if len(rdata) < 19:
            raise MalformedRdata("RRSIG rdata too short")
        fields = struct.unpack("!HBBIIIH", rdata[:18])
        signer, pos = read_name(rdata, 18)
        return cls(*fields, wire_to_text(signer), bytes(rdata[pos:]))

    def signed_prefix(self) -> bytes:
        """RRSIG rdata without the signature, signer name in canonical form."""
        return struct.pack("!HBBIIIH", self.type_covered, self.algorithm, self.labels,
                           self.original_ttl, self.expiration, self.inception,
                           self.key_tag) + name_to_wire(self.signer)

    def to_wire(self) -> bytes:
        return self.signed_prefix() + self.signature


@dataclass(frozen=True)
class Dnskey:
    flags: int
    protocol: int
    algorithm: int
    public_key: bytes = field(repr=False)

    ZONE = 0x0100
    SEP = 0x0001

    @classmethod
    def from_wire(cls, rdata: bytes) -> "Dnskey":
        if len(rdata) < 5:
            raise MalformedRdata("DNSKEY rdata too short")
        flags, protocol, algorithm = struct.unpack("!HBB", rdata[:4])
        return cls(flags, protocol, algorithm, bytes(rdata[4:]))

    def to_wire(self) -> bytes:
        return struct.pack("!HBB", self.flags, self.protocol, self.algorithm) + self.public_key

    @property
    def is_zone_key(self) -> bool:
        return bool(self.flags & self.ZONE)

    def key_tag(self) -> int:
        # RFC 4034 Appendix B; algorithm 1 is not supported here
        acc = 0
        for i, byte in enumerate(self.to_wire()):
            acc += byte if i & 1 else byte << 8
        acc += (acc >> 16) & 0xFFFF
        return acc & 0xFFFF


@dataclass(frozen=True)
class DsRecord:
    key_tag: int
    algorithm: int
    digest_type: int
    digest: bytes

    @classmethod
    def from_wire(cls, rdata: bytes) -> "DsRecord":
        if len(rdata) < 5:
            raise MalformedRdata("DS rdata too short")
        key_tag, algorithm, digest_type = struct.unpack("!HBB", rdata[:4])
        return cls(key_tag, algorithm, digest_type, bytes(rdata[4:]))

    @classmethod
    def from_text(cls, text: str) -> "DsRecord":
        """Parse DS presentation rdata, optionally preceded by owner/class/type."""
        tokens = text.split()
        if "DS" in (t.upper() for t in tokens):
            idx = [t.upper() for t in tokens].index("DS")
            tokens = tokens[idx + 1:]
        if len(tokens) < 4:
            raise MalformedRdata(f"bad DS text {text!r}")
        return cls(int(tokens[0]), int(tokens[1]), int(tokens[2]),
                   bytes.fromhex("".join(tokens[3:])))

    def to_wire(self) -> bytes:
        return struct.pack("!HBB", self.key_tag, self.algorithm, self.digest_type) + self.digest

    def matches(self, owner: str, key: Dnskey) -> bool:
        if key.algorithm != self.algorithm or key.key_tag() != self.key_tag:
            return False
        algo = DIGEST_ALGORITHMS.get(self.digest_type)
        if algo is None:
            return False
        return ds_digest(owner, key, self.digest_type) == self.digest


def ds_digest(owner: str, key: Dnskey, digest_type: int = 2) -> bytes:
    algo = DIGEST_ALGORITHMS[digest_type]
    return hashlib.new(algo, name_to_wire(owner) + key.to_wire()).digest()
