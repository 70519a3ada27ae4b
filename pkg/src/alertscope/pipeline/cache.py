"""On-disk cache for per-host probe results."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import threading
import time
from pathlib import Path
from typing import Callable

log = logging.getLogger(__name__)


class ProbeCache:
    """JSON entries keyed by probe kind, fqdn and whatever else shapes the answer.

    Entries older than ``ttl`` seconds are refreshed; ``ttl=0`` disables
    reuse. Unreadable entries count as misses. ``probes`` counts how many
    times a probe function actually ran.
    """

    def __init__(self, directory: str | Path | None, ttl: float = 0.0,
                 clock: Callable[[], float] = time.time):
        self.directory = Path(directory) if directory else None
        self.ttl = ttl
        self.clock = clock
        self.probes = 0
        self.hits = 0
        self._lock = threading.Lock()
        if self.directory:
            self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, key: list) -> Path:
        digest = hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()
        return self.directory / f"{digest}.json"

    def _load(self, path: Path, key: list):
        try:
            entry = json.loads(path.read_text(encoding="utf-8"))
            if entry["key"] != key:
                return None
            if self.clock() - float(entry["stored_at"]) > self.ttl:
                return None
            return entry["value"]
        except FileNotFoundError:
            return None
        except (ValueError, KeyError, TypeError) as exc:
            log.info("ignoring corrupt cache entry %s: %s", path.name, exc)
            return None

    def probe(self, kind: str, fqdn: str, compute: Callable[[], dict], *context) -> dict:
        """Cached ``compute()`` result; ``compute`` must return JSON-ready data."""
        key = [kind, fqdn, *context]
        if self.directory and self.ttl > 0:
            value = self._load(self._path(key), key)
            if value is not None:
                with self._lock:
                    self.hits += 1
                return value
        with self._lock:
            self.probes += 1
        value = compute()
        if self.directory:
            self._store(self._path(key), key, value)
        return value

    def _store(self, path: Path, key: list, value) -> None:
        payload = json.dumps({"key": key, "stored_at": self.clock(), "value": value},
                             sort_keys=True)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(payload)
        os.replace(tmp, path)


def cache_probe(cache: ProbeCache, fqdn: str, kind: str, compute: Callable[[], dict],
                *context) -> dict:
    return cache.probe(kind, fqdn, compute, *context)
