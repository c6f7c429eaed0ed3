"""Append-only scan store.

The store is a UTF-8 JSON Lines file. The first line is a header::

    {"format": "tubescan-store", "format_version": 1}

and every following line is one :class:`ScanRecord`. Lines are only ever
appended; a trailing line without a newline is an interrupted write and is
ignored by readers.
"""

from __future__ import annotations

import fcntl
import json
import os
import threading
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterable, Mapping

from .detector import ScanVerdict, Verdict
from .errors import DuplicateRecord, StorageFailure, UnknownScanId
from .links import LinkChain, TerminalChange, terminal_changes
from .model import VideoMetadata, format_timestamp, parse_timestamp

STORE_FORMAT = "tubescan-store"
STORE_FORMAT_VERSION = 1


@dataclass(frozen=True)
class ScanRecord:
    scan_id: int
    scanned_at: datetime
    verdict: ScanVerdict
    metadata_snapshot: VideoMetadata
    chains: tuple[LinkChain, ...] = ()

    def __post_init__(self) -> None:
        if self.scan_id < 1:
            raise ValueError("scan_id must be positive")
        if self.verdict.video_id != self.metadata_snapshot.video_id:
            raise ValueError("verdict and snapshot disagree on video_id")
        object.__setattr__(self, "chains", tuple(self.chains))

    @property
    def video_id(self) -> str:
        return self.metadata_snapshot.video_id

    def to_dict(self) -> dict:
        return {
            "scan_id": self.scan_id,
            "scanned_at": format_timestamp(self.scanned_at),
            "verdict": self.verdict.to_dict(),
            "metadata": self.metadata_snapshot.to_dict(),
            "chains": [c.to_dict() for c in self.chains],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> ScanRecord:
        return cls(
            data["scan_id"],
            parse_timestamp(data["scanned_at"]),
            ScanVerdict.from_dict(data["verdict"]),
            VideoMetadata.from_dict(data["metadata"]),
            tuple(LinkChain.from_dict(c) for c in data.get("chains", ())),
        )


def _dumps(record: ScanRecord) -> str:
    return json.dumps(record.to_dict(), sort_keys=True, ensure_ascii=False, separators=(",", ":"))


@dataclass(frozen=True)
class RunDiff:
    earlier_scan_id: int
    later_scan_id: int
    terminal_changes: tuple[TerminalChange, ...] = ()
    verdict_changes: tuple[tuple[str, Verdict, Verdict], ...] = ()
    missing: tuple[str, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not (self.terminal_changes or self.verdict_changes or self.missing)

    def to_dict(self) -> dict:
        return {
            "earlier_scan_id": self.earlier_scan_id,
            "later_scan_id": self.later_scan_id,
            "terminal_changes": [c.to_dict() for c in self.terminal_changes],
            "verdict_changes": [
                {"video_id": v, "before": a.value, "after": b.value} for v, a, b in self.verdict_changes
            ],
            "missing": list(self.missing),
        }


class ScanStore:
    """Single-writer, multi-reader append-only record file."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._keys: set[tuple[str, int]] = set()
        self._records: list[ScanRecord] = []
        self._offset = 0

    # reading
    def _refresh(self) -> None:
        try:
            size = self.path.stat().st_size
        except FileNotFoundError:
            self._records, self._keys, self._offset = [], set(), 0
            return
        if size == self._offset:
            return
        if size < self._offset:
            self._records, self._keys, self._offset = [], set(), 0
        try:
            with open(self.path, "rb") as fh:
                fh.seek(self._offset)
                chunk = fh.read()
        except OSError as exc:
            raise StorageFailure(f"cannot read store {self.path}: {exc}") from exc
        end = chunk.rfind(b"\n") + 1
        for lineno, raw in enumerate(chunk[:end].splitlines()):
            if not raw.strip():
                continue
            try:
                data = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise StorageFailure(f"corrupt store line in {self.path}: {exc}") from exc
            if self._offset == 0 and lineno == 0:
                if data.get("format") != STORE_FORMAT or data.get("format_version") != STORE_FORMAT_VERSION:
                    raise StorageFailure(f"{self.path} is not a version {STORE_FORMAT_VERSION} store")
                continue
            rec = ScanRecord.from_dict(data)
            self._records.append(rec)
            self._keys.add((rec.video_id, rec.scan_id))
        self._offset += end

    def records(self) -> list[ScanRecord]:
        with self._lock:
            self._refresh()
            return list(self._records)

    def __len__(self) -> int:
        return len(self.records())

    @property
    def count(self) -> int:
        return len(self)

    def scan_ids(self) -> list[int]:
        return sorted({r.scan_id for r in self.records()})

    def next_scan_id(self) -> int:
        ids = self.scan_ids()
        return ids[-1] + 1 if ids else 1

    def records_for(self, scan_id: int) -> list[ScanRecord]:
        recs = [r for r in self.records() if r.scan_id == scan_id]
        if not recs and scan_id not in self.scan_ids():
            raise UnknownScanId(f"scan {scan_id} not in {self.path}")
        return recs

    # writing
    def persist(self, record: ScanRecord) -> int:
        """Append ``record``; returns its 0-based position in the store."""
        line = (_dumps(record) + "\n").encode("utf-8")
        with self._lock:
            try:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                fh = open(self.path, "ab")
            except OSError as exc:
                raise StorageFailure(f"cannot open store {self.path}: {exc}") from exc
            with fh:
                fcntl.flock(fh, fcntl.LOCK_EX)
                try:
                    self._refresh()
                    key = (record.video_id, record.scan_id)
                    if key in self._keys:
                        raise DuplicateRecord(f"video {key[0]} already recorded in scan {key[1]}")
                    start = fh.seek(0, os.SEEK_END)
                    payload = line
                    if start == 0:
                        header = {"format": STORE_FORMAT, "format_version": STORE_FORMAT_VERSION}
                        payload = (json.dumps(header) + "\n").encode("utf-8") + line
                    try:
                        fh.write(payload)
                        fh.flush()
                        os.fsync(fh.fileno())
                    except OSError as exc:
                        fh.truncate(start)
                        raise StorageFailure(f"write to {self.path} failed: {exc}") from exc
                finally:
                    fcntl.flock(fh, fcntl.LOCK_UN)
            self._refresh()
            return len(self._records) - 1

    def persist_all(self, records: Iterable[ScanRecord]) -> list[int]:
        return [self.persist(r) for r in records]

    # comparisons
    def diff_runs(self, earlier_scan_id: int, later_scan_id: int) -> RunDiff:
        known = set(self.scan_ids())
        for sid in (earlier_scan_id, later_scan_id):
            if sid not in known:
                raise UnknownScanId(f"scan {sid} not in {self.path}")
        a = {r.video_id: r for r in self.records_for(earlier_scan_id)}
        b = {r.video_id: r for r in self.records_for(later_scan_id)}
        changes: list[TerminalChange] = []
        verdicts = []
        for vid in sorted(a.keys() & b.keys()):
            changes.extend(terminal_changes(a[vid].chains, b[vid].chains))
            if a[vid].verdict.verdict != b[vid].verdict.verdict:
                verdicts.append((vid, a[vid].verdict.verdict, b[vid].verdict.verdict))
        return RunDiff(
            earlier_scan_id,
            later_scan_id,
            tuple(changes),
            tuple(verdicts),
            tuple(sorted(a.keys() - b.keys())),
        )


def diff_runs(store: ScanStore, earlier_scan_id: int, later_scan_id: int) -> RunDiff:
    return store.diff_runs(earlier_scan_id, later_scan_id)
