"""File-per-pathway persistence with atomic writes and optimistic versioning.

Each pathway lives in its own ``<subject>.session`` document under the data
directory; there is no database, so custody of the data stays with whoever
owns the directory. Writes go through a temp-file-then-rename seam so a
crash at any point leaves either the old or the new document on disk, never
a torn one. Files that fail to deserialize at startup are quarantined
(renamed ``*.session.bad``) and reported, never silently dropped.
"""

from __future__ import annotations

import datetime as dt
import os
import tempfile
import threading
import urllib.parse
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from .codec import (
    CodecError,
    InvalidPathway,
    deserialize_session,
    serialize_session,
)
from .model import PathwayRecord, validate


class StoreError(Exception):
    pass


class DataDirMissing(StoreError):
    pass


class NotWritable(StoreError):
    pass


class ReadOnlyStore(StoreError):
    pass


class VersionConflict(StoreError):
    def __init__(self, expected: Optional[int], current: Optional[int]):
        super().__init__(
            f"expected version {expected}, store has {current}"
        )
        self.expected = expected
        self.current = current


class NotFound(StoreError):
    pass


@dataclass(frozen=True)
class StoreConfig:
    data_dir: Path
    bind_address: str = "127.0.0.1:7423"
    read_only: bool = False


@dataclass(frozen=True)
class StoredPathway:
    record: PathwayRecord
    last_modified: str  # ISO-8601 UTC, from the file's mtime


@dataclass(frozen=True)
class PathwaySummary:
    subject_id: str
    version: int
    event_count: int
    onset: dt.date
    consent: dt.date
    admission: dt.date
    last_modified: str


@dataclass(frozen=True)
class QuarantineReport:
    path: Path
    renamed_to: Optional[Path]
    error: str


def session_filename(subject_id: str) -> str:
    """Percent-encode the subject id into a safe, collision-free filename."""
    name = urllib.parse.quote(subject_id, safe="")
    if name.startswith("."):
        # don't create dotfiles; operators should see every record in ls
        name = "%2E" + name[1:]
    return name + ".session"


def _mtime_iso(path: Path) -> str:
    stamp = dt.datetime.fromtimestamp(path.stat().st_mtime, tz=dt.timezone.utc)
    return stamp.isoformat(timespec="seconds")


class Store:
    """Handle over one data directory; safe for concurrent use.

    Reads are served from an in-memory cache that mirrors disk; writes are
    serialized per subject id, and snapshots for cohort work are taken under
    the cache lock so they are consistent.
    """

    def __init__(self, config: StoreConfig):
        self.config = config
        self.quarantined: list[QuarantineReport] = []
        self._cache: dict[str, StoredPathway] = {}
        self._lock = threading.Lock()
        self._subject_locks: dict[str, threading.Lock] = {}

    # -- loading ---------------------------------------------------------

    def _quarantine(self, path: Path, error: str) -> None:
        renamed: Optional[Path] = None
        if not self.config.read_only:
            renamed = Path(str(path) + ".bad")
            os.replace(path, renamed)
        self.quarantined.append(QuarantineReport(path, renamed, error))

    def _scan(self) -> None:
        for path in sorted(self.config.data_dir.glob("*.session")):
            try:
                record = deserialize_session(path.read_text(encoding="utf-8"))
            except (CodecError, OSError, UnicodeDecodeError) as exc:
                self._quarantine(path, str(exc))
                continue
            if record.subject_id in self._cache:
                self.quarantined.append(
                    QuarantineReport(
                        path, None, f"duplicate subject_id {record.subject_id!r}; ignored"
                    )
                )
                continue
            self._cache[record.subject_id] = StoredPathway(record, _mtime_iso(path))

    # -- locking ---------------------------------------------------------

    def _subject_lock(self, subject_id: str) -> threading.Lock:
        with self._lock:
            lock = self._subject_locks.get(subject_id)
            if lock is None:
                lock = threading.Lock()
                self._subject_locks[subject_id] = lock
            return lock

    # -- operations ------------------------------------------------------

    def put_pathway(self, p: PathwayRecord, expected_version: Optional[int] = None) -> int:
        """Persist atomically; returns the stored version (current + 1)."""
        if self.config.read_only:
            raise ReadOnlyStore("store opened read-only")
        violations = validate(p)
        if violations:
            raise InvalidPathway(violations)

        with self._subject_lock(p.subject_id):
            with self._lock:
                current = self._cache.get(p.subject_id)
            current_version = current.record.version if current else None
            if expected_version is not None and expected_version != current_version:
                raise VersionConflict(expected_version, current_version)
            new_version = (current_version or 0) + 1
            record = replace(p, version=new_version)
            text = serialize_session(record)

            path = self.config.data_dir / session_filename(p.subject_id)
            fd, tmp_name = tempfile.mkstemp(
                dir=self.config.data_dir, prefix=".put-", suffix=".tmp"
            )
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as handle:
                    handle.write(text)
                    handle.flush()
                    os.fsync(handle.fileno())
                os.replace(tmp_name, path)
            except BaseException:
                try:
                    os.unlink(tmp_name)
                except OSError:
                    pass
                raise
            stored = StoredPathway(record, _mtime_iso(path))
            with self._lock:
                self._cache[p.subject_id] = stored
            return new_version

    def get_pathway(self, subject_id: str) -> StoredPathway:
        with self._lock:
            stored = self._cache.get(subject_id)
        if stored is None:
            raise NotFound(f"no pathway for subject {subject_id!r}")
        return stored

    def list_pathways(self) -> list[PathwaySummary]:
        with self._lock:
            entries = list(self._cache.values())
        summaries = [
            PathwaySummary(
                subject_id=s.record.subject_id,
                version=s.record.version,
                event_count=len(s.record.events),
                onset=s.record.onset,
                consent=s.record.consent,
                admission=s.record.admission,
                last_modified=s.last_modified,
            )
            for s in entries
        ]
        return sorted(summaries, key=lambda s: s.subject_id)

    def snapshot(self) -> list[PathwayRecord]:
        """Consistent view of all records, sorted by subject id."""
        with self._lock:
            records = [s.record for s in self._cache.values()]
        return sorted(records, key=lambda r: r.subject_id)


def open_store(config: StoreConfig) -> Store:
    """Open (and scan) a data directory; quarantine reports end up on the store."""
    data_dir = Path(config.data_dir)
    if not data_dir.is_dir():
        raise DataDirMissing(f"data directory does not exist: {data_dir}")
    if not config.read_only and not os.access(data_dir, os.W_OK):
        raise NotWritable(f"data directory is not writable: {data_dir}")
    store = Store(StoreConfig(data_dir, config.bind_address, config.read_only))
    store._scan()
    return store
