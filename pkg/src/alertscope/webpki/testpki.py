"""A throwaway CA for fixtures: roots, intermediates, leaves, OCSP and CRLs."""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass

from cryptography import x509
from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.asymmetric import ec
from cryptography.hazmat.primitives.serialization import Encoding
from cryptography.x509 import ocsp
from cryptography.x509.oid import AuthorityInformationAccessOID, ExtendedKeyUsageOID, NameOID

UTC = dt.timezone.utc


def _name(cn: str, org: str | None = None, country: str | None = None) -> x509.Name:
    attrs = []
    if country:
        attrs.append(x509.NameAttribute(NameOID.COUNTRY_NAME, country))
    if org:
        attrs.append(x509.NameAttribute(NameOID.ORGANIZATION_NAME, org))
    attrs.append(x509.NameAttribute(NameOID.COMMON_NAME, cn))
    return x509.Name(attrs)


@dataclass
class Issued:
    cert: x509.Certificate
    key: ec.EllipticCurvePrivateKey


def make_ca(cn: str, org: str = "AlertScope Test PKI", issuer: Issued | None = None,
            not_before: dt.datetime | None = None, not_after: dt.datetime | None = None,
            serial: int | None = None) -> Issued:
    key = ec.generate_private_key(ec.SECP256R1())
    subject = _name(cn, org, "US")
    not_before = not_before or dt.datetime(2015, 1, 1, tzinfo=UTC)
    not_after = not_after or dt.datetime(2035, 1, 1, tzinfo=UTC)
    builder = (x509.CertificateBuilder()
               .subject_name(subject)
               .issuer_name(issuer.cert.subject if issuer else subject)
               .public_key(key.public_key())
               .serial_number(serial or x509.random_serial_number())
               .not_valid_before(not_before).not_valid_after(not_after)
               .add_extension(x509.BasicConstraints(ca=True, path_length=None), critical=True)
               .add_extension(x509.KeyUsage(False, False, False, False, False, True, True,
                                            False, False), critical=True)
               .add_extension(x509.SubjectKeyIdentifier.from_public_key(key.public_key()),
                              critical=False))
    if issuer:
        builder = builder.add_extension(_aki(issuer), critical=False)
    cert = builder.sign(issuer.key if issuer else key, hashes.SHA256())
    return Issued(cert, key)


def _aki(issuer: Issued) -> x509.AuthorityKeyIdentifier:
    return x509.AuthorityKeyIdentifier.from_issuer_public_key(issuer.key.public_key())


def make_leaf(hostnames: list[str], issuer: Issued | None, *, org: str | None = None,
              policies: tuple[str, ...] = (), not_before: dt.datetime | None = None,
              not_after: dt.datetime | None = None, ocsp_url: str | None = None,
              crl_url: str | None = None, serial: int | None = None,
              cn: str | None = None) -> Issued:
    """Leaf for ``hostnames``; ``issuer=None`` makes it self-signed."""
    key = ec.generate_private_key(ec.SECP256R1())
    subject = _name(cn or hostnames[0], org, "US" if org else None)
    not_before = not_before or dt.datetime(2019, 6, 1, tzinfo=UTC)
    not_after = not_after or dt.datetime(2021, 6, 1, tzinfo=UTC)
    builder = (x509.CertificateBuilder()
               .subject_name(subject)
               .issuer_name(issuer.cert.subject if issuer else subject)
               .public_key(key.public_key())
               .serial_number(serial or x509.random_serial_number())
               .not_valid_before(not_before).not_valid_after(not_after)
               .add_extension(x509.BasicConstraints(ca=False, path_length=None), critical=True)
               .add_extension(x509.SubjectAlternativeName([x509.DNSName(h) for h in hostnames]),
                              critical=False)
               .add_extension(x509.ExtendedKeyUsage([ExtendedKeyUsageOID.SERVER_AUTH]),
                              critical=False))
    if issuer:
        builder = builder.add_extension(_aki(issuer), critical=False)
    if policies:
        builder = builder.add_extension(x509.CertificatePolicies(
            [x509.PolicyInformation(x509.ObjectIdentifier(p), None) for p in policies]),
            critical=False)
    if ocsp_url:
        builder = builder.add_extension(x509.AuthorityInformationAccess([
            x509.AccessDescription(AuthorityInformationAccessOID.OCSP,
                                   x509.UniformResourceIdentifier(ocsp_url))]), critical=False)
    if crl_url:
        builder = builder.add_extension(x509.CRLDistributionPoints([
            x509.DistributionPoint([x509.UniformResourceIdentifier(crl_url)], None, None, None)]),
            critical=False)
    cert = builder.sign(issuer.key if issuer else key, hashes.SHA256())
    return Issued(cert, key)


def make_ocsp_response(leaf: x509.Certificate, issuer: Issued, revoked: bool = False,
                       this_update: dt.datetime | None = None) -> bytes:
    this_update = this_update or dt.datetime(2020, 2, 28, tzinfo=UTC)
    status = ocsp.OCSPCertStatus.REVOKED if revoked else ocsp.OCSPCertStatus.GOOD
    builder = ocsp.OCSPResponseBuilder().add_response(
        cert=leaf, issuer=issuer.cert, algorithm=hashes.SHA1(), cert_status=status,
        this_update=this_update, next_update=this_update + dt.timedelta(days=7),
        revocation_time=this_update - dt.timedelta(days=1) if revoked else None,
        revocation_reason=x509.ReasonFlags.key_compromise if revoked else None,
    ).responder_id(ocsp.OCSPResponderEncoding.HASH, issuer.cert)
    return builder.sign(issuer.key, hashes.SHA256()).public_bytes(Encoding.DER)


def make_crl(issuer: Issued, revoked_serials: list[int] = (),
             last_update: dt.datetime | None = None) -> bytes:
    last_update = last_update or dt.datetime(2020, 2, 1, tzinfo=UTC)
    builder = (x509.CertificateRevocationListBuilder()
               .issuer_name(issuer.cert.subject)
               .last_update(last_update)
               .next_update(last_update + dt.timedelta(days=30)))
    for serial in revoked_serials:
        builder = builder.add_revoked_certificate(
            x509.RevokedCertificateBuilder().serial_number(serial)
            .revocation_date(last_update - dt.timedelta(days=1)).build())
    return builder.sign(issuer.key, hashes.SHA256()).public_bytes(Encoding.DER)
