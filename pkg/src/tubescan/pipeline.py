"""Scan orchestration: search, fetch, detect, resolve, score, persist."""

from __future__ import annotations

import itertools
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable, Iterable, Sequence, TextIO

from .api import QuotaBudget, YouTubeClient
from .detector import ScanVerdict, ScoringConfig, Verdict, detect_misrepresentation, score_video
from .lexicon import KeywordLexicon
from .links import (
    DEFAULT_MAX_HOPS,
    ExtractedUrl,
    Fetcher,
    HostTables,
    LinkChain,
    UrlOrigin,
    WhoisResolver,
    default_tables,
    extract_urls,
    resolve_chain,
)
from .model import ChannelRecord, VideoMetadata
from .report import MALICIOUS_VERDICTS
from .store import ScanRecord, ScanStore

logger = logging.getLogger(__name__)


def build_queries(lexicon: KeywordLexicon, categories: Iterable[str] | None = None) -> list[str]:
    """Product name x bait term, one product name (the most specific variant) per category."""
    labels = list(categories) if categories else lexicon.categories
    products = []
    for label in labels:
        variants = sorted(lexicon.product_names[label], key=lambda v: (-len(v), v))
        products.append(variants[0])
    return [f"{p} {b}" for p, b in itertools.product(products, sorted(lexicon.bait_terms))]


@dataclass
class ScanSettings:
    published_after: datetime
    relevance_language: str = "en"
    max_hops: int = DEFAULT_MAX_HOPS
    max_pages: int | None = None
    comments: bool = True
    channels: bool = True
    links: bool = True
    parallelism: int = 4
    verdict_filter: frozenset[Verdict] = MALICIOUS_VERDICTS


@dataclass
class ScanOutcome:
    scan_id: int
    records: list[ScanRecord] = field(default_factory=list)
    flagged: list[ScanRecord] = field(default_factory=list)
    error: Exception | None = None


def video_urls(meta: VideoMetadata, comments: Sequence[str], tables: HostTables) -> list[ExtractedUrl]:
    """URLs from every language's title/description and from comments, first occurrence wins."""
    seen = set()
    out = []
    sources = [
        (text.title + "\n" + text.description, UrlOrigin.DESCRIPTION, meta.video_id, text.language_tag)
        for text in meta.all_texts()
    ]
    sources += [(c, UrlOrigin.COMMENT, f"{meta.video_id}#c{i}", None) for i, c in enumerate(comments)]
    for text, origin, origin_id, lang in sources:
        for ex in extract_urls(text, origin, origin_id, lang, video_id=meta.video_id, known_hosts=tables.known_hosts):
            if ex.url not in seen:
                seen.add(ex.url)
                out.append(ex)
    return out


def summary_line(record: ScanRecord) -> str:
    v = record.verdict
    finding = v.finding
    langs = ",".join(finding.flagged_languages) if finding else "-"
    kinds = ",".join(e.kind for e in v.evidence) or "-"
    return (
        f"{v.verdict.value}\t{record.video_id}\tscore={float(v.score):.2f}"
        f"\tdefault={record.metadata_snapshot.default_tag}\tflagged_langs={langs}\tevidence={kinds}"
    )


class Scanner:
    def __init__(
        self,
        client: YouTubeClient,
        lexicon: KeywordLexicon,
        scoring: ScoringConfig,
        store: ScanStore | None,
        settings: ScanSettings,
        *,
        fetcher: Fetcher | None = None,
        whois: WhoisResolver | None = None,
        tables: HostTables | None = None,
        clock: Callable[[], datetime] | None = None,
    ):
        self.client = client
        self.lexicon = lexicon
        self.scoring = scoring
        self.store = store
        self.settings = settings
        self.fetcher = fetcher
        self.whois = whois
        self.tables = tables or default_tables()
        self.clock = clock or (lambda: datetime.now(timezone.utc))
        self._out_lock = threading.Lock()

    def _channels(self, metas: Sequence[VideoMetadata], budget: QuotaBudget) -> dict[str, ChannelRecord]:
        if not self.settings.channels:
            return {}
        ids = sorted({m.channel_id for m in metas if m.channel_id})
        if not ids:
            return {}
        found = self.client.fetch_channels(ids, budget)
        return {c.channel_id: c for c in found.items}

    def _chains(self, meta: VideoMetadata, comments: Sequence[str]) -> list[LinkChain]:
        if not self.settings.links or self.fetcher is None:
            return []
        now = self.clock()
        return [
            resolve_chain(u, self.settings.max_hops, self.fetcher, whois=self.whois, tables=self.tables, now=now)
            for u in video_urls(meta, comments, self.tables)
        ]

    def evaluate(
        self, meta: VideoMetadata, channel: ChannelRecord | None, budget: QuotaBudget
    ) -> tuple[ScanVerdict, list[LinkChain]]:
        finding = detect_misrepresentation(meta, self.lexicon)
        comments = self.client.fetch_comments(meta.video_id, budget) if self.settings.comments else []
        chains = self._chains(meta, comments)
        verdict = score_video(meta, finding, comments, channel, chains, self.lexicon, self.scoring)
        return verdict, chains

    def run(self, queries: Sequence[str], budget: QuotaBudget, out: TextIO | None = None) -> ScanOutcome:
        """Scan every query; records already processed are persisted even if a later step fails."""
        scan_id = self.store.next_scan_id() if self.store is not None else 1
        outcome = ScanOutcome(scan_id)
        seen: set[str] = set()
        try:
            for query in queries:
                ids = self.client.search_videos(
                    query,
                    self.settings.published_after,
                    self.settings.relevance_language,
                    budget,
                    max_pages=self.settings.max_pages,
                )
                fresh = [v for v in ids if v not in seen]
                seen.update(fresh)
                if not fresh:
                    continue
                metas = self.client.fetch_video_metadata(fresh, budget).items
                channels = self._channels(metas, budget)

                def job(meta: VideoMetadata):
                    return self.evaluate(meta, channels.get(meta.channel_id), budget)

                workers = max(1, self.settings.parallelism)
                with ThreadPoolExecutor(max_workers=workers) as pool:
                    results = list(pool.map(job, metas))
                for meta, (verdict, chains) in zip(metas, results):
                    record = ScanRecord(scan_id, self.clock(), verdict, meta, tuple(chains))
                    if self.store is not None:
                        self.store.persist(record)
                    outcome.records.append(record)
                    if verdict.verdict in self.settings.verdict_filter:
                        outcome.flagged.append(record)
                        self._emit(out, summary_line(record))
        except Exception as exc:
            outcome.error = exc
        return outcome

    def _emit(self, out: TextIO | None, line: str) -> None:
        if out is None:
            return
        with self._out_lock:
            out.write(line + "\n")
