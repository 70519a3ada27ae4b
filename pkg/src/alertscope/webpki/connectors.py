"""Obtaining certificate chains: chain fixtures or live TLS."""

from __future__ import annotations

import socket
import ssl
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

from cryptography import x509
from cryptography.hazmat.primitives.serialization import Encoding

from ..errors import FetchFailure, TlsTimeout
from .revocation import Fetcher, HttpFetcher


@dataclass
class FetchedChain:
    certs: list[x509.Certificate]
    staple: bytes | None = None
    extras: dict = field(default_factory=dict)

    @property
    def leaf(self) -> x509.Certificate:
        return self.certs[0]

    def records(self, config=None):
        from .certs import record_from_x509
        return [record_from_x509(c, config) for c in self.certs]


class Connector(Protocol):
    def fetch_chain(self, host: str, port: int = 443) -> FetchedChain | None: ...
    def fetcher_for(self, host: str) -> Fetcher: ...


def fetch_chain(host: str, port: int, connector: Connector) -> FetchedChain | None:
    """Leaf-first chain for ``host``; None when the host offers no TLS."""
    return connector.fetch_chain(host, port)


class _FixtureFetcher:
    def __init__(self, directory: Path, host: str):
        self.directory, self.host = directory, host

    def ocsp(self, url, request):
        path = self.directory / f"{self.host}.ocsp-response.der"
        if not path.exists():
            raise FetchFailure(f"no OCSP responder fixture for {self.host}")
        return path.read_bytes()

    def crl(self, url):
        path = self.directory / f"{self.host}.crl.der"
        if not path.exists():
            raise FetchFailure(f"no CRL fixture for {self.host}")
        return path.read_bytes()


class FixtureConnector:
    """Reads ``<fqdn>.chain.pem`` (+ ``.ocsp.der`` staple, ``.crl.der``).

    A ``<fqdn>.timeout`` marker simulates a handshake timeout. Hosts without
    a chain file are treated as not offering TLS.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def fetch_chain(self, host: str, port: int = 443) -> FetchedChain | None:
        if (self.directory / f"{host}.timeout").exists():
            raise TlsTimeout(host)
        chain = self.directory / f"{host}.chain.pem"
        if not chain.exists():
            return None
        certs = x509.load_pem_x509_certificates(chain.read_bytes())
        staple_path = self.directory / f"{host}.ocsp.der"
        staple = staple_path.read_bytes() if staple_path.exists() else None
        return FetchedChain(certs, staple)

    def fetcher_for(self, host: str) -> Fetcher:
        return _FixtureFetcher(self.directory, host)


class LiveConnector:
    """TLS handshake with SNI; certificates are not verified at this stage.

    The stdlib cannot request OCSP stapling, so ``staple`` is always None
    and revocation falls back to the responder and CRL.
    """

    def __init__(self, timeout: float = 10.0, fetcher: Fetcher | None = None):
        self.timeout = timeout
        self.fetcher = fetcher or HttpFetcher(timeout)

    def fetch_chain(self, host: str, port: int = 443) -> FetchedChain | None:
        ctx = ssl.SSLContext(ssl.PROTOCOL_TLS_CLIENT)
        ctx.check_hostname = False
        ctx.verify_mode = ssl.CERT_NONE
        try:
            with socket.create_connection((host, port), timeout=self.timeout) as sock:
                with ctx.wrap_socket(sock, server_hostname=host) as tls:
                    ders = self._chain_ders(tls)
        except socket.timeout as exc:
            raise TlsTimeout(host) from exc
        except (OSError, ssl.SSLError):
            return None
        if not ders:
            return None
        return FetchedChain([x509.load_der_x509_certificate(d) for d in ders])

    @staticmethod
    def _chain_ders(tls: ssl.SSLSocket) -> list[bytes]:
        sslobj = getattr(tls, "_sslobj", None)
        getter = getattr(sslobj, "get_unverified_chain", None)
        if getter is not None:
            chain = getter() or []
            return [c if isinstance(c, bytes) else c.public_bytes(ssl._ssl.ENCODING_DER)
                    for c in chain]
        leaf = tls.getpeercert(binary_form=True)
        return [leaf] if leaf else []

    def fetcher_for(self, host: str) -> Fetcher:
        return self.fetcher


def write_chain(path: str | Path, certs: list[x509.Certificate]) -> None:
    Path(path).write_bytes(b"".join(c.public_bytes(Encoding.PEM) for c in certs))
