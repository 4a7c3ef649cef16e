"""Concern-result cache, persisted per ontology content hash.

The cache lives in one JSON file per ontology hash under a configurable
directory; entries are only trusted while the stored hash matches the
loaded ontology.  A corrupt or mismatched file is deleted and rebuilt,
never trusted.  Without a directory the cache is memory-only.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from .errors import KbError
from .jsonio import table_from_json, table_to_json
from .sparql import ResultTable


def default_cache_dir() -> Path:
    base = os.environ.get("XDG_CACHE_HOME", "~/.cache")
    return Path(base).expanduser() / "agilekb"


class ResultCache:
    """Maps cache keys (concern id, optionally with a practice IRI) to tables."""

    def __init__(self, ontology_hash: str, directory: Optional[Path] = None):
        self.ontology_hash = ontology_hash
        self._directory = Path(directory) if directory is not None else None
        self._entries: dict[str, ResultTable] = {}
        self._lock = threading.Lock()
        self.created_at = datetime.now(timezone.utc).isoformat()
        self.hits = 0
        self.misses = 0
        self._load()

    @property
    def path(self) -> Optional[Path]:
        if self._directory is None:
            return None
        return self._directory / f"{self.ontology_hash}.json"

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)

    def lookup(self, key: str) -> Optional[ResultTable]:
        with self._lock:
            table = self._entries.get(key)
            if table is None:
                self.misses += 1
            else:
                self.hits += 1
            return table

    def put(self, key: str, table: ResultTable) -> None:
        with self._lock:
            self._entries[key] = table
            self._persist()

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()
            path = self.path
            if path is not None and path.exists():
                path.unlink()

    def _load(self) -> None:
        path = self.path
        if path is None or not path.exists():
            return
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
            if payload["ontology_hash"] != self.ontology_hash:
                raise ValueError("ontology hash mismatch")
            entries = {
                key: table_from_json(obj) for key, obj in payload["entries"].items()
            }
            self.created_at = payload["created_at"]
        except (OSError, ValueError, KeyError, TypeError, KbError):
            try:
                path.unlink()
            except OSError:
                pass
            return
        self._entries = entries

    def _persist(self) -> None:
        # Caller holds the lock; writes go through a temp file then a rename
        # so readers never observe a half-written cache.
        path = self.path
        if path is None:
            return
        payload = {
            "ontology_hash": self.ontology_hash,
            "created_at": self.created_at,
            "entries": {key: table_to_json(t) for key, t in sorted(self._entries.items())},
        }
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                json.dump(payload, handle)
            os.replace(tmp_name, path)
        except OSError:
            try:
                os.unlink(tmp_name)
            except OSError:
                pass
            raise
