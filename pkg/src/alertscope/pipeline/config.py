"""Scan configuration and its reproducible digest."""

from __future__ import annotations

import datetime as dt
import hashlib
import json
from dataclasses import dataclass, field, fields
from pathlib import Path

from ..errors import ConfigError

FORMATS = ("json", "csv", "svg")
# settings that change where or how fast a scan runs, not what it finds
_NOT_DIGESTED = {"out", "cache_dir", "parallel", "formats", "vantage"}


@dataclass
class ScanConfig:
    roster: Path
    trust_store: Path
    out: Path
    psl: Path | None = None
    overlay: Path | None = None
    overrides: Path | None = None
    resolver: str | None = None
    zones: Path | None = None
    anchor: Path | None = None
    chains: Path | None = None
    ct_dir: Path | None = None
    decade: tuple[int, int] = (2009, 2019)
    san_threshold: int = 10
    top_threshold: float = 20
    parallel: int = 8
    formats: tuple[str, ...] = FORMATS
    now: dt.datetime | None = None
    vantage: str = ""
    cache_dir: Path | None = None
    cache_ttl: float = 0.0
    timeout: float = 10.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, str) and f.name not in ("resolver", "vantage"):
                setattr(self, f.name, Path(value))
        if self.now is not None and self.now.tzinfo is None:
            self.now = self.now.replace(tzinfo=dt.timezone.utc)

    @property
    def fixture_dns(self) -> bool:
        return self.zones is not None

    @property
    def fixture_certs(self) -> bool:
        return self.chains is not None

    def anchor_path(self) -> Path:
        from .._data import data_path
        if self.anchor is not None:
            return self.anchor
        if self.zones is not None:
            return self.zones / "anchor.ds"
        return data_path("root-anchor.ds")

    def validate(self) -> None:
        """Fail fast on anything that would stop the scan before probing."""
        if (self.resolver is None) == (self.zones is None):
            raise ConfigError("choose exactly one record source: --resolver or --zones")
        lo, hi = self.decade
        if lo > hi:
            raise ConfigError(f"decade {lo}:{hi} is empty")
        if self.parallel < 1:
            raise ConfigError("--parallel must be at least 1")
        unknown = set(self.formats) - set(FORMATS)
        if unknown:
            raise ConfigError(f"unknown output formats {sorted(unknown)}")
        files = {"roster": self.roster, "trust store": self.trust_store,
                 "suffix list": self.psl, "registry overlay": self.overlay,
                 "overrides": self.overrides, "trust anchor": self.anchor_path()}
        for label, path in files.items():
            if path is not None and not Path(path).is_file():
                raise ConfigError(f"{label} {path} is not a readable file")
        for label, path in {"zones": self.zones, "chains": self.chains,
                            "CT directory": self.ct_dir}.items():
            if path is not None and not Path(path).is_dir():
                raise ConfigError(f"{label} {path} is not a directory")

    def digest(self) -> str:
        """SHA-256 over settings and input contents; paths themselves do not count."""
        h = hashlib.sha256()
        for f in fields(self):
            if f.name in _NOT_DIGESTED:
                continue
            value = getattr(self, f.name)
            h.update(f.name.encode() + b"\0")
            if isinstance(value, Path):
                h.update(_content_digest(value).encode())
            else:
                h.update(json.dumps(value, default=str).encode())
            h.update(b"\0")
        return h.hexdigest()


def _content_digest(path: Path) -> str:
    h = hashlib.sha256()
    if path.is_dir():
        for child in sorted(p for p in path.rglob("*") if p.is_file()):
            h.update(child.relative_to(path).as_posix().encode() + b"\0")
            h.update(child.read_bytes())
    elif path.is_file():
        h.update(path.read_bytes())
    else:
        h.update(b"missing:" + str(path).encode())
    return h.hexdigest()
