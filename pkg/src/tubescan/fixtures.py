"""Record/replay store for HTTP exchanges.

A fixture file holds an ordered list of recorded exchanges::

    {
      "format": "tubescan-fixtures",
      "format_version": 1,
      "records": [
        {"key": "GET youtube/v3/videos?id=...&part=...", "status": 200, "json": {...}},
        {"key": "GET https://bit.ly/x", "status": 301, "headers": {"location": "..."}, "body": ""}
      ]
    }

A record carries either ``json`` (a JSON value, replayed as its canonical
serialization) or ``body`` (a verbatim string). API keys are never part of a
request key.
"""

from __future__ import annotations

import enum
import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping
from urllib.parse import urlencode

from .errors import FixtureMiss, StorageFailure

FIXTURE_FORMAT = "tubescan-fixtures"
FIXTURE_FORMAT_VERSION = 1

SECRET_PARAMS = frozenset({"key", "api_key", "access_token"})


class Mode(str, enum.Enum):
    RECORD = "record"
    REPLAY = "replay"
    LIVE = "live"


def canonical_json(value) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def request_key(method: str, path: str, params: Mapping[str, str] | None = None) -> str:
    """Canonical lookup key; parameters are sorted and secrets are dropped."""
    items = sorted((k, str(v)) for k, v in (params or {}).items() if k not in SECRET_PARAMS)
    query = urlencode(items)
    return f"{method.upper()} {path}" + (f"?{query}" if query else "")


@dataclass(frozen=True)
class RecordedResponse:
    status: int
    body: str = ""
    headers: Mapping[str, str] = field(default_factory=dict)
    is_json: bool = False

    def json(self):
        return json.loads(self.body) if self.body else None


class FixtureStore:
    """Request-key -> response map with a record/replay/live mode."""

    def __init__(self, mode: Mode | str = Mode.REPLAY, entries: Mapping[str, RecordedResponse] | None = None):
        self.mode = Mode(mode)
        self._entries: dict[str, RecordedResponse] = dict(entries or {})
        self._lock = threading.Lock()
        self.lookups = 0

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, key: str) -> bool:
        return key in self._entries

    def keys(self) -> list[str]:
        return list(self._entries)

    def lookup(self, key: str) -> RecordedResponse:
        self.lookups += 1
        try:
            return self._entries[key]
        except KeyError:
            raise FixtureMiss(key) from None

    def get(self, key: str) -> RecordedResponse | None:
        return self._entries.get(key)

    def record(self, key: str, response: RecordedResponse) -> None:
        if self.mode is not Mode.RECORD:
            raise RuntimeError(f"cannot record in {self.mode.value} mode")
        with self._lock:
            self._entries[key] = response

    def add(self, key: str, response: RecordedResponse) -> None:
        """Insert an entry regardless of mode (fixture authoring helper)."""
        with self._lock:
            self._entries[key] = response

    def to_dict(self) -> dict:
        records = []
        for key, resp in self._entries.items():
            rec: dict = {"key": key, "status": resp.status}
            if resp.headers:
                rec["headers"] = dict(sorted(resp.headers.items()))
            if resp.is_json:
                rec["json"] = json.loads(resp.body) if resp.body else None
            else:
                rec["body"] = resp.body
            records.append(rec)
        return {"format": FIXTURE_FORMAT, "format_version": FIXTURE_FORMAT_VERSION, "records": records}

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, ensure_ascii=False) + "\n"

    def save(self, path: str | Path) -> None:
        try:
            Path(path).write_text(self.dumps(), encoding="utf-8")
        except OSError as exc:
            raise StorageFailure(f"cannot write fixture file {path}: {exc}") from exc

    @classmethod
    def from_dict(cls, data: Mapping, mode: Mode | str = Mode.REPLAY) -> FixtureStore:
        if data.get("format") != FIXTURE_FORMAT:
            raise ValueError("not a fixture file")
        if data.get("format_version") != FIXTURE_FORMAT_VERSION:
            raise ValueError(f"unsupported fixture format_version {data.get('format_version')}")
        entries = {}
        for rec in data["records"]:
            headers = {k.lower(): v for k, v in rec.get("headers", {}).items()}
            if "json" in rec:
                resp = RecordedResponse(rec["status"], canonical_json(rec["json"]), headers, True)
            else:
                resp = RecordedResponse(rec["status"], rec.get("body", ""), headers, False)
            entries[rec["key"]] = resp
        return cls(mode, entries)

    @classmethod
    def load(cls, path: str | Path, mode: Mode | str = Mode.REPLAY) -> FixtureStore:
        """Load a fixture file; in record mode a missing file starts empty."""
        p = Path(path)
        if not p.exists():
            if Mode(mode) is Mode.RECORD:
                return cls(mode)
            raise StorageFailure(f"fixture file {path} does not exist")
        try:
            data = json.loads(p.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise StorageFailure(f"cannot read fixture file {path}: {exc}") from exc
        return cls.from_dict(data, mode)
