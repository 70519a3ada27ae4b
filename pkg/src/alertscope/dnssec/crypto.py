"""RRSIG verification for RSA/SHA-256 (8) and ECDSA P-256/SHA-256 (13)."""

from __future__ import annotations

import time

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.asymmetric import ec, padding, rsa
from cryptography.hazmat.primitives.asymmetric.utils import encode_dss_signature

from ..errors import MalformedRdata, UnsupportedAlgorithm
from .records import Dnskey, RrSet, Rrsig, canonical_rrset_wire

RSASHA256 = 8
ECDSAP256SHA256 = 13
SUPPORTED_ALGORITHMS = frozenset({RSASHA256, ECDSAP256SHA256})

EXPIRED = "expired"
NOT_YET_VALID = "not yet valid"
TYPE_MISMATCH = "type mismatch"
KEY_MISMATCH = "key mismatch"
BAD_SIGNATURE = "bad signature"


def _rsa_key(raw: bytes) -> rsa.RSAPublicKey:
    # RFC 3110 layout: exponent length, exponent, modulus
    if not raw:
        raise MalformedRdata("empty RSA key")
    if raw[0]:
        elen, pos = raw[0], 1
    else:
        elen, pos = int.from_bytes(raw[1:3], "big"), 3
    exponent = int.from_bytes(raw[pos:pos + elen], "big")
    modulus = int.from_bytes(raw[pos + elen:], "big")
    if not exponent or not modulus:
        raise MalformedRdata("truncated RSA key")
    return rsa.RSAPublicNumbers(exponent, modulus).public_key()


def _verify(key: Dnskey, signature: bytes, data: bytes) -> bool:
    if key.algorithm == RSASHA256:
        try:
            public = _rsa_key(key.public_key)
        except ValueError:
            return False
        try:
            public.verify(signature, data, padding.PKCS1v15(), hashes.SHA256())
        except InvalidSignature:
            return False
        return True
    if key.algorithm == ECDSAP256SHA256:
        if len(key.public_key) != 64 or len(signature) != 64:
            return False
        try:
            public = ec.EllipticCurvePublicKey.from_encoded_point(
                ec.SECP256R1(), b"\x04" + key.public_key)
        except ValueError:
            return False
        der = encode_dss_signature(int.from_bytes(signature[:32], "big"),
                                   int.from_bytes(signature[32:], "big"))
        try:
            public.verify(der, data, ec.ECDSA(hashes.SHA256()))
        except InvalidSignature:
            return False
        return True
    raise UnsupportedAlgorithm(f"DNSSEC algorithm {key.algorithm}")


def rrsig_problem(rrset: RrSet, sig: Rrsig, key: Dnskey, now: float | None = None) -> str | None:
    """Why ``sig`` fails to authenticate ``rrset`` under ``key``, or None if it does."""
    if key.algorithm not in SUPPORTED_ALGORITHMS:
        raise UnsupportedAlgorithm(f"DNSSEC algorithm {key.algorithm}")
    if sig.type_covered != rrset.rr_type:
        return TYPE_MISMATCH
    if (sig.algorithm != key.algorithm or sig.key_tag != key.key_tag()
            or key.protocol != 3 or not key.is_zone_key):
        return KEY_MISMATCH
    now = int(time.time() if now is None else now)
    if now > sig.expiration:
        return EXPIRED
    if now < sig.inception:
        return NOT_YET_VALID
    data = sig.signed_prefix() + canonical_rrset_wire(rrset, sig.original_ttl, sig.labels)
    return None if _verify(key, sig.signature, data) else BAD_SIGNATURE


def verify_rrsig(rrset: RrSet, sig: Rrsig, key: Dnskey, now: float | None = None) -> bool:
    return rrsig_problem(rrset, sig, key, now) is None
