"""URL extraction, redirect-chain resolution, host classification and hub detection.

Resolution never downloads payloads: every fetch reads headers plus at most
``prefix_limit`` bytes of body, and archive-like content types are not read
at all.
"""

from __future__ import annotations

import enum
import html
import json
import logging
import re
import socket
from collections import defaultdict
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from functools import lru_cache
from html.parser import HTMLParser
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Protocol, Sequence
from urllib.parse import urljoin, urlsplit, urlunsplit

from .errors import FetcherUnavailable, FixtureMiss
from .fixtures import FixtureStore, Mode, RecordedResponse, request_key
from .model import format_timestamp, parse_timestamp

logger = logging.getLogger(__name__)

USER_AGENT = "tubescan/0.1 (link-chain resolver; metadata only)"
DEFAULT_PREFIX_LIMIT = 64 * 1024
DEFAULT_MAX_HOPS = 10
ROTATION_WINDOW = timedelta(hours=48)

_BINARY_TYPES = ("application/zip", "application/x-rar", "application/vnd.rar", "application/x-7z",
                 "application/octet-stream", "application/x-msdownload")


class UrlOrigin(str, enum.Enum):
    DESCRIPTION = "Description"
    COMMENT = "Comment"
    COMMUNITY_POST = "CommunityPost"


class Resolution(str, enum.Enum):
    HTTP_REDIRECT = "HttpRedirect"
    HTML_META_REFRESH = "HtmlMetaRefresh"
    POST_EMBEDDED = "PostEmbedded"
    TERMINAL = "Terminal"
    UNRESOLVED = "Unresolved"


class HostKind(str, enum.Enum):
    FILE_SHARING = "FileSharing"
    SHORTENER = "Shortener"
    COMMUNITY_POST = "CommunityPost"
    CLOUDFLARE_FRONTED = "CloudflareFronted"
    CUSTOM_SITE = "CustomSite"
    UNKNOWN = "Unknown"


class WhoisPrivacy(str, enum.Enum):
    REDACTED = "Redacted"
    PUBLIC = "Public"
    UNKNOWN = "Unknown"


# -- host tables -------------------------------------------------------------

@dataclass(frozen=True)
class HostTables:
    """Editable domain tables; an entry matches the host itself and its subdomains."""

    file_sharing: frozenset[str]
    shorteners: frozenset[str]
    platform: frozenset[str] = frozenset({"youtube.com", "youtu.be"})

    @property
    def known_hosts(self) -> frozenset[str]:
        return self.file_sharing | self.shorteners | self.platform

    @staticmethod
    def _in(host: str, table: frozenset[str]) -> bool:
        host = host.lower().rstrip(".")
        labels = host.split(".")
        return any(".".join(labels[i:]) in table for i in range(len(labels)))

    def is_file_sharing(self, host: str) -> bool:
        return self._in(host, self.file_sharing)

    def is_shortener(self, host: str) -> bool:
        return self._in(host, self.shorteners)

    def is_platform(self, host: str) -> bool:
        return self._in(host, self.platform)

    def is_known(self, host: str) -> bool:
        return self._in(host, self.known_hosts)

    @classmethod
    def from_dict(cls, data: Mapping) -> HostTables:
        return cls(
            frozenset(h.lower() for h in data.get("file_sharing", ())),
            frozenset(h.lower() for h in data.get("shorteners", ())),
            frozenset(h.lower() for h in data.get("platform", ("youtube.com", "youtu.be"))),
        )

    @classmethod
    def load(cls, path: str | Path) -> HostTables:
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@lru_cache(maxsize=1)
def default_tables() -> HostTables:
    text = resources.files("tubescan.data").joinpath("hosts.json").read_text(encoding="utf-8")
    return HostTables.from_dict(json.loads(text))


@lru_cache(maxsize=1)
def _tld_extractor():
    import tldextract

    # bundled public suffix snapshot only; never fetch the list
    return tldextract.TLDExtract(suffix_list_urls=(), cache_dir=None)


def registrable_domain(host: str) -> str:
    host = host.lower().rstrip(".")
    parts = _tld_extractor()(host)
    if not parts.suffix:
        return host
    return f"{parts.domain}.{parts.suffix}" if parts.domain else host


def host_of(url: str) -> str:
    return (urlsplit(url).hostname or "").lower()


_POST_PATTERNS = (
    re.compile(r"^/post/(?P<id>[A-Za-z0-9_-]+)/?$"),
    re.compile(r"^/(?:channel/[A-Za-z0-9_-]+|@[\w.-]+|c/[\w.-]+|user/[\w.-]+)/community/?$"),
)


def community_post_id(url: str) -> str | None:
    parts = urlsplit(url)
    host = (parts.hostname or "").lower()
    if host not in ("youtube.com", "www.youtube.com", "m.youtube.com"):
        return None
    m = _POST_PATTERNS[0].match(parts.path)
    if m:
        return m.group("id")
    if _POST_PATTERNS[1].match(parts.path):
        lb = re.search(r"(?:^|&)lb=([A-Za-z0-9_-]+)", parts.query)
        if lb:
            return lb.group(1)
    return None


def canonical_post_url(url: str) -> str:
    post_id = community_post_id(url)
    return f"https://www.youtube.com/post/{post_id}" if post_id else url


# -- extraction ---------------------------------------------------------------

@dataclass(frozen=True)
class ExtractedUrl:
    url: str
    origin: UrlOrigin
    origin_id: str
    language_tag: str | None = None
    video_id: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "origin", UrlOrigin(self.origin))
        parts = urlsplit(self.url)
        if parts.scheme not in ("http", "https") or not parts.hostname:
            raise ValueError(f"not an absolute http(s) URL: {self.url!r}")

    @property
    def owner_video(self) -> str:
        return self.video_id or self.origin_id

    def to_dict(self) -> dict:
        return {
            "url": self.url,
            "origin": self.origin.value,
            "origin_id": self.origin_id,
            "language_tag": self.language_tag,
            "video_id": self.video_id,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> ExtractedUrl:
        return cls(data["url"], UrlOrigin(data["origin"]), data["origin_id"], data.get("language_tag"), data.get("video_id"))


_SCHEME_URL = re.compile(r"(?i)\bhttps?://[^\s<>\"'`{}|\\^\[\]]+")
_BARE_DOMAIN = re.compile(
    r"(?i)(?<![\w@./:-])((?:[a-z0-9](?:[a-z0-9-]*[a-z0-9])?\.)+[a-z]{2,63})(:\d{1,5})?(/[^\s<>\"'`{}|\\^\[\]]*)?"
)
_TRAILING = ".,;:!?'\")]}>*"


def _trim(token: str) -> str:
    while token and token[-1] in _TRAILING:
        if token[-1] == ")" and token.count("(") >= token.count(")"):
            break
        token = token[:-1]
    return token


def _normalize_url(url: str) -> str | None:
    try:
        parts = urlsplit(url)
        if parts.scheme.lower() not in ("http", "https") or not parts.hostname:
            return None
        parts.port  # noqa: B018 - raises ValueError on a malformed port
    except ValueError:
        return None
    netloc = parts.netloc.lower() if "@" not in parts.netloc else parts.netloc
    return urlunsplit((parts.scheme.lower(), netloc, parts.path, parts.query, parts.fragment))


def extract_urls(
    text: str,
    origin: UrlOrigin | str = UrlOrigin.DESCRIPTION,
    origin_id: str = "",
    language_tag: str | None = None,
    *,
    video_id: str | None = None,
    known_hosts: Iterable[str] | None = None,
) -> list[ExtractedUrl]:
    """Every maximal URL token in document order.

    Scheme-ful tokens always count; bare ``domain.tld/path`` tokens only when
    the domain (or a parent domain) is in ``known_hosts``.
    """
    if known_hosts is None:
        known = default_tables().known_hosts
    else:
        known = frozenset(h.lower() for h in known_hosts)
    found: list[tuple[int, str]] = []
    taken: list[tuple[int, int]] = []
    for m in _SCHEME_URL.finditer(text):
        token = _trim(m.group(0))
        url = _normalize_url(token)
        if url:
            found.append((m.start(), url))
            taken.append((m.start(), m.start() + len(token)))
    for m in _BARE_DOMAIN.finditer(text):
        start = m.start()
        if any(a <= start < b for a, b in taken):
            continue
        host = m.group(1).lower()
        if not HostTables._in(host, known):
            continue
        url = _normalize_url("https://" + _trim(m.group(0)))
        if url:
            found.append((start, url))
    found.sort(key=lambda t: t[0])
    return [ExtractedUrl(url, origin, origin_id, language_tag, video_id) for _, url in found]


# -- classification -----------------------------------------------------------

@dataclass(frozen=True)
class HostClass:
    kind: HostKind
    host: str
    whois_privacy: WhoisPrivacy = WhoisPrivacy.UNKNOWN

    def to_dict(self) -> dict:
        return {"class": self.kind.value, "host": self.host, "whois_privacy": self.whois_privacy.value}

    @classmethod
    def from_dict(cls, data: Mapping) -> HostClass:
        return cls(HostKind(data["class"]), data["host"], WhoisPrivacy(data["whois_privacy"]))


class WhoisResolver(Protocol):
    def lookup(self, domain: str) -> str | None: ...


class StoreWhois:
    """WHOIS answers kept in a fixture file under ``WHOIS <domain>`` keys."""

    def __init__(self, store: FixtureStore, live: WhoisResolver | None = None):
        self.store = store
        self.live = live

    def lookup(self, domain: str) -> str | None:
        key = f"WHOIS {domain}"
        if self.store.mode is Mode.REPLAY:
            resp = self.store.get(key)
            return resp.body if resp is not None else None
        text = self.live.lookup(domain) if self.live else None
        if self.store.mode is Mode.RECORD and text is not None:
            self.store.record(key, RecordedResponse(200, text))
        return text


class SocketWhois:
    """Plain port-43 WHOIS: ask IANA for the registry, then follow one referral."""

    def __init__(self, timeout: float = 10.0):
        self.timeout = timeout

    def _query(self, server: str, domain: str) -> str:
        with socket.create_connection((server, 43), timeout=self.timeout) as sock:
            sock.sendall(domain.encode("idna") + b"\r\n")
            chunks = []
            while True:
                data = sock.recv(4096)
                if not data:
                    break
                chunks.append(data)
        return b"".join(chunks).decode("utf-8", "replace")

    def lookup(self, domain: str) -> str | None:
        try:
            iana = self._query("whois.iana.org", domain)
            refer = re.search(r"(?im)^(?:refer|whois):\s*(\S+)", iana)
            text = self._query(refer.group(1), domain) if refer else iana
            registrar = re.search(r"(?im)^\s*registrar whois server:\s*(\S+)", text)
            if registrar and registrar.group(1).lower() != (refer.group(1).lower() if refer else ""):
                text = self._query(registrar.group(1), domain)
            return text
        except OSError as exc:
            logger.warning("whois lookup for %s failed: %s", domain, exc)
            return None


_MASK_MARKERS = (
    "redacted", "privacy", "withheld", "not disclosed", "data protected", "gdpr masked",
    "proxy", "whoisguard", "statutory masking", "non-public data",
)
_REGISTRANT_LINE = re.compile(r"(?im)^\s*registrant[ \w-]*?:\s*(.*)$")


def whois_privacy(text: str | None) -> WhoisPrivacy:
    if text is None:
        return WhoisPrivacy.UNKNOWN
    values = [v.strip().lower() for v in _REGISTRANT_LINE.findall(text)]
    values = [v for v in values if v]
    if values:
        if all(any(m in v for m in _MASK_MARKERS) for v in values):
            return WhoisPrivacy.REDACTED
        return WhoisPrivacy.PUBLIC
    if "redacted for privacy" in text.lower():
        return WhoisPrivacy.REDACTED
    return WhoisPrivacy.UNKNOWN


def is_cloudflare(headers: Mapping[str, str]) -> bool:
    lowered = {k.lower(): str(v) for k, v in headers.items()}
    return "cf-ray" in lowered or "cloudflare" in lowered.get("server", "").lower()


def classify_host(
    url: str,
    probe_headers: Mapping[str, str] | None = None,
    whois: WhoisResolver | None = None,
    tables: HostTables | None = None,
) -> HostClass:
    """Ordered rules: file sharing, shortener, community post, Cloudflare, custom site, unknown.

    WHOIS is only consulted for hosts outside the platform tables.
    """
    tables = tables or default_tables()
    host = host_of(url)
    domain = registrable_domain(host) if host else ""
    if tables.is_file_sharing(host):
        return HostClass(HostKind.FILE_SHARING, domain)
    if tables.is_shortener(host):
        return HostClass(HostKind.SHORTENER, domain)
    if community_post_id(url):
        return HostClass(HostKind.COMMUNITY_POST, domain)
    privacy = WhoisPrivacy.UNKNOWN
    if whois is not None and domain and not tables.is_platform(host):
        try:
            privacy = whois_privacy(whois.lookup(domain))
        except Exception as exc:  # resolver failures degrade to Unknown
            logger.warning("whois resolver failed for %s: %s", domain, exc)
    if probe_headers is not None and is_cloudflare(probe_headers):
        return HostClass(HostKind.CLOUDFLARE_FRONTED, domain, privacy)
    if probe_headers:
        return HostClass(HostKind.CUSTOM_SITE, domain, privacy)
    return HostClass(HostKind.UNKNOWN, domain, privacy)


# -- fetching -----------------------------------------------------------------

@dataclass(frozen=True)
class FetchResponse:
    status: int
    headers: Mapping[str, str] = field(default_factory=dict)
    body: str = ""


class FetchFailed(Exception):
    """Network-level failure; the hop becomes Unresolved."""


class Fetcher(Protocol):
    def fetch(self, url: str) -> FetchResponse: ...


class LiveFetcher:
    """Single GET per hop without following redirects, reading a bounded body prefix."""

    def __init__(self, prefix_limit: int = DEFAULT_PREFIX_LIMIT, timeout: float = 15.0, session=None):
        self.prefix_limit = prefix_limit
        self.timeout = timeout
        self._session = session
        self.calls = 0

    def fetch(self, url: str) -> FetchResponse:
        import requests

        if self._session is None:
            self._session = requests.Session()
            self._session.headers["User-Agent"] = USER_AGENT
        self.calls += 1
        try:
            resp = self._session.get(url, allow_redirects=False, stream=True, timeout=self.timeout)
        except requests.RequestException as exc:
            raise FetchFailed(str(exc)) from exc
        try:
            headers = {k.lower(): v for k, v in resp.headers.items()}
            ctype = headers.get("content-type", "").lower()
            body = b""
            if not any(ctype.startswith(t) for t in _BINARY_TYPES) and not (300 <= resp.status_code < 400):
                for chunk in resp.iter_content(8192):
                    body += chunk
                    if len(body) >= self.prefix_limit:
                        break
            text = body[: self.prefix_limit].decode(resp.encoding or "utf-8", "replace")
        except requests.RequestException as exc:
            raise FetchFailed(str(exc)) from exc
        finally:
            resp.close()
        return FetchResponse(resp.status_code, headers, text)


class FixtureFetcher:
    """Fetcher bound to a fixture store; replay misses raise :class:`FetcherUnavailable`."""

    _KEEP_HEADERS = ("location", "refresh", "server", "cf-ray", "content-type")

    def __init__(self, store: FixtureStore, live: Fetcher | None = None, prefix_limit: int = DEFAULT_PREFIX_LIMIT):
        self.store = store
        self.live = live
        self.prefix_limit = prefix_limit
        self.calls = 0

    def fetch(self, url: str) -> FetchResponse:
        self.calls += 1
        key = request_key("GET", url)
        if self.store.mode is Mode.REPLAY:
            try:
                rec = self.store.lookup(key)
            except FixtureMiss as exc:
                raise FetcherUnavailable(f"live fetch of {url} attempted in replay mode") from exc
            if rec.status == 0:
                raise FetchFailed(rec.body or "recorded network failure")
            return FetchResponse(rec.status, dict(rec.headers), rec.body[: self.prefix_limit])
        if self.live is None:
            self.live = LiveFetcher(self.prefix_limit)
        try:
            resp = self.live.fetch(url)
        except FetchFailed as exc:
            if self.store.mode is Mode.RECORD:
                self.store.record(key, RecordedResponse(0, str(exc)))
            raise
        if self.store.mode is Mode.RECORD:
            kept = {k: v for k, v in resp.headers.items() if k in self._KEEP_HEADERS}
            self.store.record(key, RecordedResponse(resp.status, resp.body, kept))
        return resp


# -- resolution ---------------------------------------------------------------

@dataclass(frozen=True)
class Hop:
    url: str
    resolution: Resolution
    status: int | None = None
    embedded: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        out = {"url": self.url, "resolution": self.resolution.value, "status": self.status}
        if self.embedded:
            out["embedded"] = list(self.embedded)
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> Hop:
        return cls(data["url"], Resolution(data["resolution"]), data.get("status"), tuple(data.get("embedded", ())))


@dataclass(frozen=True)
class LinkChain:
    origin: ExtractedUrl
    hops: tuple[Hop, ...]
    terminal_class: HostClass
    resolved_at: datetime

    def __post_init__(self) -> None:
        if not self.hops:
            raise ValueError("a chain has at least one hop")
        last = self.hops[-1].resolution
        if last not in (Resolution.TERMINAL, Resolution.UNRESOLVED):
            raise ValueError("last hop must be Terminal or Unresolved")
        if any(h.resolution in (Resolution.TERMINAL, Resolution.UNRESOLVED) for h in self.hops[:-1]):
            raise ValueError("only the last hop may be Terminal or Unresolved")

    @property
    def terminal_url(self) -> str:
        return self.hops[-1].url

    @property
    def video_id(self) -> str:
        return self.origin.owner_video

    def post_urls(self) -> list[str]:
        return [canonical_post_url(h.url) for h in self.hops if community_post_id(h.url)]

    def to_dict(self) -> dict:
        return {
            "origin": self.origin.to_dict(),
            "hops": [h.to_dict() for h in self.hops],
            "terminal_class": self.terminal_class.to_dict(),
            "resolved_at": format_timestamp(self.resolved_at),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> LinkChain:
        return cls(
            ExtractedUrl.from_dict(data["origin"]),
            tuple(Hop.from_dict(h) for h in data["hops"]),
            HostClass.from_dict(data["terminal_class"]),
            parse_timestamp(data["resolved_at"]),
        )


class _MetaRefresh(HTMLParser):
    def __init__(self):
        super().__init__()
        self.target: str | None = None

    def handle_starttag(self, tag, attrs):
        if tag != "meta" or self.target is not None:
            return
        attrs = {k.lower(): (v or "") for k, v in attrs}
        if attrs.get("http-equiv", "").lower() != "refresh":
            return
        m = re.search(r"(?i)url\s*=\s*['\"]?([^'\"\s>]+)", attrs.get("content", ""))
        if m:
            self.target = m.group(1)


def meta_refresh_target(body: str) -> str | None:
    parser = _MetaRefresh()
    try:
        parser.feed(body)
    except Exception:  # malformed markup: no refresh
        return None
    return parser.target


def _post_links(body: str, post_url: str, tables: HostTables) -> list[str]:
    own = canonical_post_url(post_url)
    out = []
    for ex in extract_urls(html.unescape(body), UrlOrigin.COMMUNITY_POST, own, known_hosts=tables.known_hosts):
        if tables.is_platform(host_of(ex.url)) and not community_post_id(ex.url):
            continue
        if canonical_post_url(ex.url) == own or ex.url in out:
            continue
        out.append(ex.url)
    return out


def resolve_chain(
    start: ExtractedUrl,
    max_hops: int = DEFAULT_MAX_HOPS,
    fetcher: Fetcher | None = None,
    *,
    whois: WhoisResolver | None = None,
    tables: HostTables | None = None,
    now: datetime | None = None,
) -> LinkChain:
    """Follow 3xx, meta refresh and community-post links from ``start``.

    Performs at most ``max_hops`` fetches. When the cap is hit the last hop
    is Unresolved.
    """
    if max_hops < 1:
        raise ValueError("max_hops must be >= 1")
    if fetcher is None:
        raise ValueError("a fetcher is required")
    tables = tables or default_tables()
    hops: list[Hop] = []
    url = start.url
    visited = set()
    last_headers: Mapping[str, str] | None = None
    for i in range(max_hops):
        visited.add(url)
        try:
            resp = fetcher.fetch(url)
        except FetchFailed as exc:
            logger.info("fetch failed for %s: %s", url, exc)
            hops.append(Hop(url, Resolution.UNRESOLVED))
            last_headers = None
            break
        last_headers = resp.headers
        headers = {k.lower(): v for k, v in resp.headers.items()}
        nxt = None
        embedded: tuple[str, ...] = ()
        if 300 <= resp.status < 400 and headers.get("location"):
            kind, nxt = Resolution.HTTP_REDIRECT, urljoin(url, headers["location"])
        elif 200 <= resp.status < 300:
            refresh = meta_refresh_target(resp.body) if resp.body else None
            if refresh is None and headers.get("refresh"):
                m = re.search(r"(?i)url\s*=\s*(\S+)", headers["refresh"])
                refresh = m.group(1) if m else None
            if refresh:
                kind, nxt = Resolution.HTML_META_REFRESH, urljoin(url, refresh)
            elif community_post_id(url):
                embedded = tuple(_post_links(resp.body, url, tables))
                kind = Resolution.POST_EMBEDDED if embedded else Resolution.TERMINAL
                nxt = embedded[0] if embedded else None
            else:
                kind = Resolution.TERMINAL
        else:
            hops.append(Hop(url, Resolution.UNRESOLVED, resp.status))
            break
        if nxt is None:
            hops.append(Hop(url, Resolution.TERMINAL, resp.status, embedded))
            break
        nxt = _normalize_url(nxt) or nxt
        if i == max_hops - 1 or nxt in visited:
            hops.append(Hop(url, Resolution.UNRESOLVED, resp.status, embedded))
            break
        hops.append(Hop(url, kind, resp.status, embedded))
        url = nxt
    terminal = hops[-1]
    probe = last_headers if terminal.resolution is Resolution.TERMINAL else None
    host_class = classify_host(terminal.url, probe, whois, tables)
    return LinkChain(start, tuple(hops), host_class, now or datetime.now(timezone.utc))


# -- campaign graph -----------------------------------------------------------

@dataclass(frozen=True)
class Hub:
    hub_url: str
    inbound_video_ids: tuple[str, ...]

    @property
    def inbound(self) -> int:
        return len(self.inbound_video_ids)

    def to_dict(self) -> dict:
        return {"hub_url": self.hub_url, "inbound_video_ids": list(self.inbound_video_ids)}


def detect_hubs(chains: Sequence[LinkChain], min_inbound: int) -> list[Hub]:
    """Community posts reached by at least ``min_inbound`` distinct videos."""
    if min_inbound < 1:
        raise ValueError("min_inbound must be positive")
    inbound: dict[str, set[str]] = defaultdict(set)
    for chain in chains:
        for post in chain.post_urls():
            inbound[post].add(chain.video_id)
    hubs = [Hub(url, tuple(sorted(ids))) for url, ids in inbound.items() if len(ids) >= min_inbound]
    hubs.sort(key=lambda h: (-h.inbound, h.hub_url))
    return hubs


@dataclass(frozen=True)
class TerminalChange:
    video_id: str
    origin_url: str
    before: str
    after: str
    elapsed: timedelta

    @property
    def rotating(self) -> bool:
        return abs(self.elapsed) <= ROTATION_WINDOW

    def to_dict(self) -> dict:
        return {
            "video_id": self.video_id,
            "origin_url": self.origin_url,
            "before": self.before,
            "after": self.after,
            "elapsed_hours": round(self.elapsed.total_seconds() / 3600, 3),
            "rotating": self.rotating,
        }


def terminal_changes(earlier: Iterable[LinkChain], later: Iterable[LinkChain]) -> list[TerminalChange]:
    """Chains whose terminal URL moved between two resolutions of the same origin link."""
    before = {(c.video_id, c.origin.url): c for c in earlier}
    out = []
    for chain in later:
        prev = before.get((chain.video_id, chain.origin.url))
        if prev is not None and prev.terminal_url != chain.terminal_url:
            out.append(TerminalChange(chain.video_id, chain.origin.url, prev.terminal_url,
                                      chain.terminal_url, chain.resolved_at - prev.resolved_at))
    out.sort(key=lambda c: (c.video_id, c.origin_url))
    return out
