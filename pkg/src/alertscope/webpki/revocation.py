"""Revocation status: stapled OCSP, then OCSP responder, then CRL."""

from __future__ import annotations

import logging
import urllib.request
from enum import Enum
from typing import Protocol

from cryptography import x509
from cryptography.exceptions import InvalidSignature, UnsupportedAlgorithm
from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.asymmetric import ec, ed448, ed25519, padding, rsa
from cryptography.hazmat.primitives.serialization import Encoding, PublicFormat
from cryptography.x509 import ocsp
from cryptography.x509.oid import AuthorityInformationAccessOID

from ..errors import FetchFailure

log = logging.getLogger(__name__)


class Revocation(str, Enum):
    GOOD = "Good"
    REVOKED = "Revoked"
    UNKNOWN = "Unknown"


class Fetcher(Protocol):
    def ocsp(self, url: str, request: bytes) -> bytes: ...
    def crl(self, url: str) -> bytes: ...


class HttpFetcher:
    def __init__(self, timeout: float = 10.0):
        self.timeout = timeout

    def _open(self, req):
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                return resp.read()
        except OSError as exc:
            raise FetchFailure(str(exc)) from exc

    def ocsp(self, url: str, request: bytes) -> bytes:
        req = urllib.request.Request(url, data=request,
                                     headers={"Content-Type": "application/ocsp-request"})
        return self._open(req)

    def crl(self, url: str) -> bytes:
        return self._open(url)


class NullFetcher:
    def ocsp(self, url, request):
        raise FetchFailure("network fetching disabled")

    def crl(self, url):
        raise FetchFailure("network fetching disabled")


def _signature_ok(public_key, signature: bytes, data: bytes, hash_alg) -> bool:
    try:
        if isinstance(public_key, rsa.RSAPublicKey):
            public_key.verify(signature, data, padding.PKCS1v15(), hash_alg)
        elif isinstance(public_key, ec.EllipticCurvePublicKey):
            public_key.verify(signature, data, ec.ECDSA(hash_alg))
        elif isinstance(public_key, (ed25519.Ed25519PublicKey, ed448.Ed448PublicKey)):
            public_key.verify(signature, data)
        else:
            return False
    except (InvalidSignature, UnsupportedAlgorithm, ValueError, TypeError):
        return False
    return True


def _key_hash(cert: x509.Certificate, algorithm) -> bytes:
    spki = x509.SubjectKeyIdentifier.from_public_key(cert.public_key())
    if isinstance(algorithm, hashes.SHA1):
        return spki.digest
    # key hash is over the subjectPublicKey BIT STRING contents
    raw = cert.public_key().public_bytes(Encoding.DER, PublicFormat.SubjectPublicKeyInfo)
    digest = hashes.Hash(algorithm)
    digest.update(_bitstring_payload(raw))
    return digest.finalize()


def _bitstring_payload(spki_der: bytes) -> bytes:
    # SubjectPublicKeyInfo ::= SEQUENCE { algorithm, BIT STRING }
    def header(buf, pos):
        length = buf[pos + 1]
        pos += 2
        if length & 0x80:
            n = length & 0x7F
            length = int.from_bytes(buf[pos:pos + n], "big")
            pos += n
        return pos, length
    pos, _ = header(spki_der, 0)
    alg_start, alg_len = header(spki_der, pos)
    pos = alg_start + alg_len
    bits_start, bits_len = header(spki_der, pos)
    return spki_der[bits_start + 1:bits_start + bits_len]


def ocsp_status(response_der: bytes, leaf: x509.Certificate,
                issuer: x509.Certificate) -> Revocation | None:
    """Conclusive status from an OCSP response, or None if it settles nothing."""
    try:
        resp = ocsp.load_der_ocsp_response(response_der)
    except ValueError:
        return None
    if resp.response_status != ocsp.OCSPResponseStatus.SUCCESSFUL:
        return None
    responder = None
    if resp.responder_name is not None and resp.responder_name == issuer.subject:
        responder = issuer
    elif resp.responder_key_hash is not None and \
            resp.responder_key_hash == _key_hash(issuer, hashes.SHA1()):
        responder = issuer
    else:
        for cert in resp.certificates:
            # delegated responder must be issued by the same CA
            try:
                cert.verify_directly_issued_by(issuer)
            except (ValueError, TypeError, InvalidSignature):
                continue
            responder = cert
            break
    if responder is None or not _signature_ok(responder.public_key(), resp.signature,
                                              resp.tbs_response_bytes,
                                              resp.signature_hash_algorithm):
        return None
    for single in resp.responses:
        if single.serial_number != leaf.serial_number:
            continue
        if single.issuer_key_hash != _key_hash(issuer, single.hash_algorithm):
            continue
        if single.certificate_status == ocsp.OCSPCertStatus.GOOD:
            return Revocation.GOOD
        if single.certificate_status == ocsp.OCSPCertStatus.REVOKED:
            return Revocation.REVOKED
    return None


def crl_status(crl_bytes: bytes, leaf: x509.Certificate,
               issuer: x509.Certificate) -> Revocation | None:
    try:
        crl = x509.load_der_x509_crl(crl_bytes)
    except ValueError:
        try:
            crl = x509.load_pem_x509_crl(crl_bytes)
        except ValueError:
            return None
    if crl.issuer != issuer.subject or not crl.is_signature_valid(issuer.public_key()):
        return None
    if crl.get_revoked_certificate_by_serial_number(leaf.serial_number) is not None:
        return Revocation.REVOKED
    return Revocation.GOOD


def ocsp_urls(cert: x509.Certificate) -> list[str]:
    try:
        aia = cert.extensions.get_extension_for_class(x509.AuthorityInformationAccess)
    except x509.ExtensionNotFound:
        return []
    return [d.access_location.value for d in aia.value
            if d.access_method == AuthorityInformationAccessOID.OCSP
            and isinstance(d.access_location, x509.UniformResourceIdentifier)]


def crl_urls(cert: x509.Certificate) -> list[str]:
    try:
        cdp = cert.extensions.get_extension_for_class(x509.CRLDistributionPoints)
    except x509.ExtensionNotFound:
        return []
    urls = []
    for point in cdp.value:
        for name in point.full_name or ():
            if isinstance(name, x509.UniformResourceIdentifier):
                urls.append(name.value)
    return urls


def check_revocation(leaf: x509.Certificate, issuer: x509.Certificate | None,
                     staple: bytes | None, fetcher: Fetcher) -> tuple[Revocation, str]:
    """Revocation status and the method that settled it.

    Methods run in order staple, OCSP responder, CRL; the first conclusive
    answer wins and failures fall through to the next method.
    """
    if issuer is None:
        return Revocation.UNKNOWN, ""
    if staple:
        status = ocsp_status(staple, leaf, issuer)
        if status is not None:
            return status, "staple"
    urls = ocsp_urls(leaf)
    if urls:
        request = (ocsp.OCSPRequestBuilder()
                   .add_certificate(leaf, issuer, hashes.SHA1()).build()
                   .public_bytes(Encoding.DER))
        for url in urls:
            try:
                status = ocsp_status(fetcher.ocsp(url, request), leaf, issuer)
            except FetchFailure as exc:
                log.debug("OCSP fetch %s failed: %s", url, exc)
                continue
            if status is not None:
                return status, "ocsp"
    for url in crl_urls(leaf):
        try:
            status = crl_status(fetcher.crl(url), leaf, issuer)
        except FetchFailure as exc:
            log.debug("CRL fetch %s failed: %s", url, exc)
            continue
        if status is not None:
            return status, "crl"
    return Revocation.UNKNOWN, ""
