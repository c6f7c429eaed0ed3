"""YouTube Data API v3 client with quota budgeting and fixture replay."""

from __future__ import annotations

import enum
import logging
import os
import re
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime
from typing import Any, Callable, Iterable, Mapping, NamedTuple, Sequence

from .errors import ApiRejection, MissingApiKey, QuotaExhausted, TransportError
from .fixtures import FixtureStore, Mode, RecordedResponse, canonical_json, request_key
from .model import (
    UNDETERMINED_LANGUAGE,
    ChannelRecord,
    LocalizedText,
    VideoMetadata,
    ViewStats,
    format_timestamp,
    parse_timestamp,
)

logger = logging.getLogger(__name__)

API_KEY_ENV = "TUBESCAN_API_KEY"
API_ROOT = "https://www.googleapis.com/"
API_PATH = "youtube/v3/"
PAGE_SIZE = 50
DEFAULT_PROBE_LANGUAGES = ("en", "es", "pt", "ru", "hi", "ar", "fr", "de")

VIDEO_ID_RE = re.compile(r"^[A-Za-z0-9_-]{11}$")
CHANNEL_ID_RE = re.compile(r"^UC[A-Za-z0-9_-]{22}$")


class Endpoint(str, enum.Enum):
    SEARCH = "search"
    VIDEOS = "videos"
    CHANNELS = "channels"
    PLAYLIST_ITEMS = "playlistItems"
    COMMENT_THREADS = "commentThreads"


DEFAULT_COSTS = {
    Endpoint.SEARCH: 100,
    Endpoint.VIDEOS: 1,
    Endpoint.CHANNELS: 1,
    Endpoint.PLAYLIST_ITEMS: 1,
    Endpoint.COMMENT_THREADS: 1,
}


@dataclass(frozen=True)
class ApiRequest:
    endpoint: Endpoint
    params: Mapping[str, str]
    quota_cost: int

    def __post_init__(self) -> None:
        if self.quota_cost <= 0:
            raise ValueError("quota_cost must be positive")
        object.__setattr__(self, "params", dict(sorted((k, str(v)) for k, v in self.params.items())))

    @property
    def key(self) -> str:
        return request_key("GET", API_PATH + self.endpoint.value, self.params)


class QuotaBudget:
    """Thread-safe unit budget; ``spent_units`` never exceeds ``total_units``."""

    def __init__(self, total_units: int, spent_units: int = 0):
        if total_units < 0 or spent_units < 0 or spent_units > total_units:
            raise ValueError("invalid quota budget")
        self.total_units = total_units
        self._spent = spent_units
        self._lock = threading.Lock()

    @property
    def spent_units(self) -> int:
        return self._spent

    @property
    def remaining(self) -> int:
        return self.total_units - self._spent

    def charge(self, units: int) -> None:
        with self._lock:
            if self._spent + units > self.total_units:
                raise QuotaExhausted(
                    f"need {units} units, {self.total_units - self._spent} of {self.total_units} left"
                )
            self._spent += units

    def try_charge(self, units: int) -> bool:
        try:
            self.charge(units)
        except QuotaExhausted:
            return False
        return True

    def __repr__(self) -> str:
        return f"QuotaBudget(total_units={self.total_units}, spent_units={self._spent})"


class Fetched(NamedTuple):
    items: list
    missing: list[str]


def _int_or_none(value) -> int | None:
    return None if value is None else int(value)


def parse_video(item: Mapping[str, Any], extra_localizations: Mapping[str, LocalizedText] | None = None) -> VideoMetadata:
    """Build a VideoMetadata from one ``videos.list`` item."""
    snippet = item.get("snippet", {})
    default_language = snippet.get("defaultLanguage")
    tag = default_language or UNDETERMINED_LANGUAGE
    default = LocalizedText(tag, snippet.get("title", ""), snippet.get("description", ""))
    localizations = {
        lang: LocalizedText(lang, loc.get("title", ""), loc.get("description", ""))
        for lang, loc in (item.get("localizations") or {}).items()
    }
    for lang, text in (extra_localizations or {}).items():
        localizations.setdefault(lang, text)
    stats = item.get("statistics", {})
    return VideoMetadata(
        video_id=item["id"],
        channel_id=snippet.get("channelId", ""),
        published_at=parse_timestamp(snippet["publishedAt"]),
        default_snippet=default,
        default_language=default_language,
        localizations=localizations,
        statistics=ViewStats(
            int(stats.get("viewCount", 0)),
            _int_or_none(stats.get("likeCount")),
            _int_or_none(stats.get("commentCount")),
        ),
    )


def _batches(seq: Sequence[str], size: int = PAGE_SIZE) -> list[list[str]]:
    return [list(seq[i : i + size]) for i in range(0, len(seq), size)]


class YouTubeClient:
    """Data API client whose transport is selected by the fixture store mode.

    In replay mode every request is answered from ``fixtures`` and a miss
    raises :class:`FixtureMiss`; record mode performs the live call and
    stores the answer under its key-stripped canonical request key.
    """

    def __init__(
        self,
        fixtures: FixtureStore | None = None,
        *,
        api_key: str | None = None,
        costs: Mapping[Endpoint | str, int] | None = None,
        parallelism: int = 4,
        probe_languages: Iterable[str] | None = None,
        session=None,
        timeout: float = 20.0,
    ):
        self.fixtures = fixtures if fixtures is not None else FixtureStore(Mode.LIVE)
        self.costs = dict(DEFAULT_COSTS)
        for name, cost in (costs or {}).items():
            self.costs[Endpoint(name)] = int(cost)
        if parallelism < 1:
            raise ValueError("parallelism must be positive")
        self.parallelism = parallelism
        self.probe_languages = tuple(probe_languages) if probe_languages else ()
        self.timeout = timeout
        self._api_key = api_key
        self._session = session
        self.live_calls = 0

    @property
    def mode(self) -> Mode:
        return self.fixtures.mode

    def _key(self) -> str:
        key = self._api_key or os.environ.get(API_KEY_ENV)
        if not key:
            raise MissingApiKey(f"set {API_KEY_ENV} for {self.mode.value} mode")
        return key

    def _http(self, req: ApiRequest) -> RecordedResponse:
        import requests

        if self._session is None:
            self._session = requests.Session()
        self.live_calls += 1
        params = dict(req.params, key=self._key())
        try:
            resp = self._session.get(API_ROOT + API_PATH + req.endpoint.value, params=params, timeout=self.timeout)
        except requests.RequestException as exc:
            raise TransportError(f"{req.endpoint.value}: {exc}") from exc
        try:
            body = canonical_json(resp.json())
            is_json = True
        except ValueError:
            body, is_json = resp.text, False
        return RecordedResponse(resp.status_code, body, {}, is_json)

    def request(self, req: ApiRequest, budget: QuotaBudget) -> dict:
        budget.charge(req.quota_cost)
        if self.mode is Mode.REPLAY:
            resp = self.fixtures.lookup(req.key)
        else:
            resp = self._http(req)
            if self.mode is Mode.RECORD:
                self.fixtures.record(req.key, resp)
        return self._decode(resp, req)

    @staticmethod
    def _decode(resp: RecordedResponse, req: ApiRequest) -> dict:
        try:
            payload = resp.json() or {}
        except ValueError:
            payload = None
        if 200 <= resp.status < 300:
            if payload is None:
                raise TransportError(f"{req.endpoint.value}: undecodable response body")
            return payload
        error = (payload or {}).get("error") if isinstance(payload, dict) else None
        if isinstance(error, dict):
            errors = error.get("errors") or [{}]
            reason = errors[0].get("reason") or error.get("status") or "unknown"
            raise ApiRejection(resp.status, reason, error.get("message", ""))
        raise TransportError(f"{req.endpoint.value}: HTTP {resp.status}")

    def _make(self, endpoint: Endpoint, **params) -> ApiRequest:
        return ApiRequest(endpoint, {k: v for k, v in params.items() if v is not None}, self.costs[endpoint])

    def search_videos(
        self,
        query: str,
        published_after: datetime,
        relevance_language: str,
        budget: QuotaBudget,
        *,
        max_pages: int | None = None,
    ) -> list[str]:
        cost = self.costs[Endpoint.SEARCH]
        if budget.remaining < cost:
            raise QuotaExhausted(f"search needs {cost} units, {budget.remaining} left")
        ids: list[str] = []
        seen = set()
        token = None
        pages = 0
        while True:
            req = self._make(
                Endpoint.SEARCH,
                part="snippet",
                type="video",
                q=query,
                maxResults=PAGE_SIZE,
                publishedAfter=format_timestamp(published_after).replace("+00:00", "Z"),
                relevanceLanguage=relevance_language,
                pageToken=token,
            )
            page = self.request(req, budget)
            pages += 1
            for item in page.get("items", []):
                vid = (item.get("id") or {}).get("videoId")
                if vid and vid not in seen:
                    seen.add(vid)
                    ids.append(vid)
            token = page.get("nextPageToken")
            if not token or (max_pages and pages >= max_pages):
                break
            if budget.remaining < cost:
                logger.info("quota budget reached after %d search pages for %r", pages, query)
                break
        return ids

    def _parallel(self, fn: Callable, jobs: list) -> list:
        if self.parallelism == 1 or len(jobs) <= 1:
            return [fn(j) for j in jobs]
        with ThreadPoolExecutor(max_workers=self.parallelism) as pool:
            return list(pool.map(fn, jobs))

    def fetch_video_metadata(self, ids: Sequence[str], budget: QuotaBudget) -> Fetched:
        if not ids:
            raise ValueError("ids must be non-empty")
        for vid in ids:
            if not VIDEO_ID_RE.match(vid):
                raise ValueError(f"malformed video id {vid!r}")
        batches = _batches(list(dict.fromkeys(ids)))
        if budget.remaining < self.costs[Endpoint.VIDEOS]:
            raise QuotaExhausted("no quota left for videos.list")

        def one(batch: list[str]) -> dict[str, VideoMetadata]:
            req = self._make(Endpoint.VIDEOS, part="snippet,localizations,statistics", id=",".join(batch), maxResults=PAGE_SIZE)
            page = self.request(req, budget)
            items = page.get("items", [])
            probed = self._probe(batch, items, budget) if self.probe_languages else {}
            return {it["id"]: parse_video(it, probed.get(it["id"])) for it in items}

        found: dict[str, VideoMetadata] = {}
        for part in self._parallel(one, batches):
            found.update(part)
        return Fetched([found[v] for v in ids if v in found], [v for v in ids if v not in found])

    def _probe(self, batch: list[str], items: list[dict], budget: QuotaBudget) -> dict[str, dict[str, LocalizedText]]:
        """Per-language display queries for videos whose localizations part is empty."""
        need = [it["id"] for it in items if not it.get("localizations")]
        if not need:
            return {}
        defaults = {it["id"]: it.get("snippet", {}) for it in items}
        out: dict[str, dict[str, LocalizedText]] = {}
        for lang in self.probe_languages:
            req = self._make(Endpoint.VIDEOS, part="snippet", id=",".join(need), hl=lang, maxResults=PAGE_SIZE)
            for it in self.request(req, budget).get("items", []):
                loc = it.get("snippet", {}).get("localized") or {}
                base = defaults.get(it["id"], {})
                title, desc = loc.get("title", ""), loc.get("description", "")
                # identical text means the API fell back to the default language
                if (title, desc) != (base.get("title", ""), base.get("description", "")):
                    out.setdefault(it["id"], {})[lang] = LocalizedText(lang, title, desc)
        return out

    def fetch_channels(self, channel_ids: Sequence[str], budget: QuotaBudget, *, uploads: bool = True) -> Fetched:
        if not channel_ids:
            raise ValueError("channel_ids must be non-empty")
        for cid in channel_ids:
            if not CHANNEL_ID_RE.match(cid):
                raise ValueError(f"malformed channel id {cid!r}")
        found: dict[str, ChannelRecord] = {}
        for batch in _batches(list(dict.fromkeys(channel_ids))):
            req = self._make(Endpoint.CHANNELS, part="snippet,statistics,contentDetails", id=",".join(batch), maxResults=PAGE_SIZE)
            items = self.request(req, budget).get("items", [])
            playlists = {
                it["id"]: (it.get("contentDetails") or {}).get("relatedPlaylists", {}).get("uploads")
                for it in items
            }
            upload_lists = self._parallel(
                lambda cid: self._recent_uploads(playlists[cid], budget) if uploads and playlists[cid] else (),
                [it["id"] for it in items],
            )
            for it, recent in zip(items, upload_lists):
                stats = it.get("statistics", {})
                subs = None if stats.get("hiddenSubscriberCount") else _int_or_none(stats.get("subscriberCount"))
                found[it["id"]] = ChannelRecord(
                    it["id"],
                    parse_timestamp(it["snippet"]["publishedAt"]),
                    subs,
                    tuple(recent),
                )
        return Fetched([found[c] for c in channel_ids if c in found], [c for c in channel_ids if c not in found])

    def fetch_channel(self, channel_id: str, budget: QuotaBudget) -> Fetched:
        return self.fetch_channels([channel_id], budget)

    def _recent_uploads(self, playlist_id: str, budget: QuotaBudget) -> list[datetime]:
        req = self._make(Endpoint.PLAYLIST_ITEMS, part="contentDetails", playlistId=playlist_id, maxResults=PAGE_SIZE)
        try:
            page = self.request(req, budget)
        except ApiRejection as exc:
            if exc.status == 404:
                return []
            raise
        out = []
        for it in page.get("items", []):
            ts = (it.get("contentDetails") or {}).get("videoPublishedAt")
            if ts:
                out.append(parse_timestamp(ts))
        return out

    def fetch_comments(self, video_id: str, budget: QuotaBudget) -> list[str]:
        """Single best-effort page of top-level comment texts."""
        req = self._make(
            Endpoint.COMMENT_THREADS, part="snippet", videoId=video_id, maxResults=100, textFormat="plainText"
        )
        try:
            page = self.request(req, budget)
        except ApiRejection as exc:
            if exc.reason in ("commentsDisabled", "videoNotFound"):
                return []
            raise
        texts = []
        for it in page.get("items", []):
            top = ((it.get("snippet") or {}).get("topLevelComment") or {}).get("snippet") or {}
            text = top.get("textOriginal") or top.get("textDisplay")
            if text:
                texts.append(text)
        return texts
