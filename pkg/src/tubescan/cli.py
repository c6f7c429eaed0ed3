"""Command line entry point.

Exit codes:

  0  success
  2  usage error
  3  quota exhausted
  4  fixture miss (replay mode request or fetch that was never recorded)
  5  storage failure
  6  unknown scan id
  7  API rejection or transport failure
  8  configuration error (bad paths, lexicon, weights, missing API key)
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field, fields
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

from . import __version__
from .api import API_KEY_ENV, DEFAULT_PROBE_LANGUAGES, QuotaBudget, YouTubeClient
from .detector import ScoringConfig, Verdict
from .errors import (
    ApiRejection,
    DuplicateRecord,
    FetcherUnavailable,
    FixtureMiss,
    InvalidWeights,
    LexiconError,
    MissingApiKey,
    QuotaExhausted,
    StorageFailure,
    TransportError,
    UnknownScanId,
)
from .fixtures import FixtureStore, Mode
from .lexicon import KeywordLexicon, default_lexicon, match_keywords
from .links import FixtureFetcher, HostTables, SocketWhois, StoreWhois, default_tables, detect_hubs
from .model import parse_timestamp
from .pipeline import Scanner, ScanSettings, build_queries
from .report import MALICIOUS_VERDICTS, RENDERERS, aggregate_report
from .store import ScanStore

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_QUOTA = 3
EXIT_FIXTURE_MISS = 4
EXIT_STORAGE = 5
EXIT_UNKNOWN_SCAN = 6
EXIT_API = 7
EXIT_CONFIG = 8

UNLIMITED_QUOTA = 10**12

logger = logging.getLogger("tubescan")


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    lexicon: str | None = None
    weights: str | None = None
    hosts: str | None = None
    fixtures: str | None = None
    mode: str = "replay"
    quota: int = 10_000
    respect_quota: bool = True
    probe: bool = False
    probe_languages: list[str] = field(default_factory=lambda: list(DEFAULT_PROBE_LANGUAGES))
    max_hops: int = 10
    parallelism: int = 4
    store: str = "tubescan-store.jsonl"
    published_after: str | None = None
    relevance_language: str = "en"
    suspicious_threshold: str | None = None
    malicious_threshold: str | None = None
    verdicts: list[str] = field(default_factory=lambda: sorted(v.value for v in MALICIOUS_VERDICTS))
    min_inbound: int = 3
    comments: bool = True
    channels: bool = True
    links: bool = True
    max_pages: int | None = None
    now: str | None = None

    @classmethod
    def from_sources(cls, config_path: str | None, overrides: dict) -> RunConfig:
        values: dict = {}
        if config_path:
            try:
                values.update(json.loads(Path(config_path).read_text(encoding="utf-8")))
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read config {config_path}: {exc}") from exc
            if "api_key" in values:
                raise ConfigError(f"API keys are read from ${API_KEY_ENV} only, never from config files")
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        values.update({k: v for k, v in overrides.items() if k in known and v is not None})
        cfg = cls(**values)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        for name in ("lexicon", "weights", "hosts"):
            path = getattr(self, name)
            if path and not Path(path).is_file():
                raise ConfigError(f"{name} file {path} does not exist")
        try:
            Mode(self.mode)
        except ValueError:
            raise ConfigError(f"unknown mode {self.mode!r}") from None
        for name in ("quota", "max_hops", "parallelism", "min_inbound"):
            if int(getattr(self, name)) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.max_pages is not None and self.max_pages <= 0:
            raise ConfigError("max_pages must be positive")
        try:
            [Verdict(v) for v in self.verdicts]
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def require_fixtures(self) -> None:
        mode = Mode(self.mode)
        if mode is Mode.REPLAY and not (self.fixtures and Path(self.fixtures).is_file()):
            raise ConfigError("replay mode needs an existing --fixtures file")
        if mode is Mode.RECORD and not self.fixtures:
            raise ConfigError("record mode needs a --fixtures output path")

    def load_lexicon(self) -> KeywordLexicon:
        return KeywordLexicon.load(self.lexicon) if self.lexicon else default_lexicon()

    def load_tables(self) -> HostTables:
        return HostTables.load(self.hosts) if self.hosts else default_tables()

    def load_scoring(self) -> ScoringConfig:
        base = ScoringConfig.load(self.weights).to_dict() if self.weights else ScoringConfig().to_dict()
        if self.suspicious_threshold is not None:
            base["thresholds"]["suspicious"] = self.suspicious_threshold
        if self.malicious_threshold is not None:
            base["thresholds"]["malicious"] = self.malicious_threshold
        return ScoringConfig.from_dict(base)

    def published_after_ts(self) -> datetime:
        if self.published_after:
            return parse_timestamp(self.published_after if "T" in self.published_after else self.published_after + "T00:00:00Z")
        now = self.clock_start()
        return datetime(now.year, 1, 1, tzinfo=timezone.utc)

    def clock_start(self) -> datetime:
        return parse_timestamp(self.now) if self.now else datetime.now(timezone.utc)

    def budget(self) -> QuotaBudget:
        return QuotaBudget(self.quota if self.respect_quota else UNLIMITED_QUOTA)

    def verdict_set(self) -> frozenset[Verdict]:
        return frozenset(Verdict(v) for v in self.verdicts)


def _add_common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("run configuration")
    g.add_argument("--config", help="JSON config file; flags override its values")
    g.add_argument("--lexicon", help="lexicon JSON file (default: bundled)")
    g.add_argument("--weights", help="weight/threshold JSON file (default: bundled)")
    g.add_argument("--hosts", help="host table JSON file (default: bundled)")
    g.add_argument("--fixtures", help="fixture file for replay/record")
    g.add_argument("--mode", choices=[m.value for m in Mode])
    g.add_argument("--quota", type=int, help="daily quota budget in API units (default 10000)")
    g.add_argument("--respect-quota", dest="respect_quota", action="store_true", default=None)
    g.add_argument("--no-respect-quota", dest="respect_quota", action="store_false")
    g.add_argument("--probe", action="store_true", default=None,
                   help="fall back to per-language display queries when localizations are withheld")
    g.add_argument("--probe-languages", type=lambda s: [x for x in s.split(",") if x])
    g.add_argument("--max-hops", type=int)
    g.add_argument("--parallelism", type=int)
    g.add_argument("--store", help="scan store file (created on demand)")
    g.add_argument("--published-after", help="ISO date or timestamp (default: Jan 1 of this year)")
    g.add_argument("--relevance-language")
    g.add_argument("--suspicious-threshold")
    g.add_argument("--malicious-threshold")
    g.add_argument("--verdicts", type=lambda s: [x for x in s.split(",") if x],
                   help="comma-separated verdicts counted as flagged")
    g.add_argument("--min-inbound", type=int, help="hub threshold for campaign graph output")
    g.add_argument("--no-comments", dest="comments", action="store_false", default=None)
    g.add_argument("--no-channels", dest="channels", action="store_false", default=None)
    g.add_argument("--no-links", dest="links", action="store_false", default=None)
    g.add_argument("--max-pages", type=int, help="search pages per query")
    g.add_argument("--now", help="fixed clock (ISO timestamp) for reproducible stores")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tubescan", description="Scan YouTube metadata for malware lures.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="search, detect, resolve links, score and persist")
    _add_common(p)
    p.add_argument("queries", nargs="*", help="search queries (default: product x bait terms)")

    p = sub.add_parser("record-fixture", help="run a live scan and record every exchange")
    _add_common(p)
    p.add_argument("queries", nargs="*")

    p = sub.add_parser("report", help="aggregate stored verdicts per product category")
    _add_common(p)
    p.add_argument("--scan-id", type=int, action="append", dest="scan_ids")
    p.add_argument("--format", choices=sorted(RENDERERS), default="table")
    p.add_argument("--output", "-o", help="write to this file instead of stdout")

    p = sub.add_parser("diff", help="compare two scans for link rotation, verdict changes and takedowns")
    _add_common(p)
    p.add_argument("scan_id_a", type=int)
    p.add_argument("scan_id_b", type=int)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("lexicon-check", help="validate a lexicon file and optionally match sample text")
    _add_common(p)
    p.add_argument("--text", action="append", default=[], help="sample text to match")
    p.add_argument("--write-normalized", help="write the canonical serialization to this path")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig.from_sources(args.config, vars(args))


def _scan(args: argparse.Namespace, record: bool, out, err) -> int:
    if record:
        args.mode = "record"
    cfg = _config(args)
    cfg.require_fixtures()
    mode = Mode(cfg.mode)
    lexicon = cfg.load_lexicon()
    scoring = cfg.load_scoring()
    tables = cfg.load_tables()
    fixtures = FixtureStore.load(cfg.fixtures, mode) if cfg.fixtures else FixtureStore(Mode.LIVE)
    if mode is not Mode.REPLAY:
        if not os.environ.get(API_KEY_ENV):
            raise MissingApiKey(f"set {API_KEY_ENV} for {mode.value} mode")
    client = YouTubeClient(
        fixtures,
        parallelism=cfg.parallelism,
        probe_languages=cfg.probe_languages if cfg.probe else None,
    )
    fetcher = FixtureFetcher(fixtures)
    whois = StoreWhois(fixtures, None if mode is Mode.REPLAY else SocketWhois())
    store = ScanStore(cfg.store) if (cfg.store and not (record and args.store is None)) else None
    settings = ScanSettings(
        published_after=cfg.published_after_ts(),
        relevance_language=cfg.relevance_language,
        max_hops=cfg.max_hops,
        max_pages=cfg.max_pages,
        comments=cfg.comments,
        channels=cfg.channels,
        links=cfg.links,
        parallelism=cfg.parallelism,
        verdict_filter=cfg.verdict_set(),
    )
    fixed = parse_timestamp(cfg.now) if cfg.now else None
    scanner = Scanner(
        client, lexicon, scoring, store, settings,
        fetcher=fetcher, whois=whois, tables=tables,
        clock=(lambda: fixed) if fixed else None,
    )
    queries = args.queries or build_queries(lexicon)
    budget = cfg.budget()
    outcome = scanner.run(queries, budget, out)
    out.write(
        f"{len(outcome.flagged)} flagged ({len(outcome.records)} videos, scan {outcome.scan_id}, "
        f"quota {budget.spent_units}/{budget.total_units if cfg.respect_quota else 'unlimited'})\n"
    )
    if record:
        fixtures.save(cfg.fixtures)
        err.write(f"recorded {len(fixtures)} exchanges to {cfg.fixtures}\n")
    if outcome.error is not None:
        raise outcome.error
    return EXIT_OK


def _report(args: argparse.Namespace, out, err) -> int:
    cfg = _config(args)
    store = ScanStore(cfg.store)
    records = store.records()
    if args.scan_ids:
        known = {r.scan_id for r in records}
        for sid in args.scan_ids:
            if sid not in known:
                raise UnknownScanId(f"scan {sid} not in {cfg.store}")
        records = [r for r in records if r.scan_id in set(args.scan_ids)]
    lexicon = cfg.load_lexicon()
    report = aggregate_report(records, lexicon, cfg.verdict_set())
    text = RENDERERS[args.format](report)
    if args.format == "json":
        payload = json.loads(text)
        chains = [c for rec, _ in report.assignments for c in rec.chains]
        payload["hubs"] = [h.to_dict() for h in detect_hubs(chains, cfg.min_inbound)]
        text = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    if args.output:
        try:
            Path(args.output).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise StorageFailure(f"cannot write {args.output}: {exc}") from exc
    else:
        out.write(text)
    return EXIT_OK


def _diff(args: argparse.Namespace, out, err) -> int:
    cfg = _config(args)
    diff = ScanStore(cfg.store).diff_runs(args.scan_id_a, args.scan_id_b)
    if args.format == "json":
        out.write(json.dumps(diff.to_dict(), indent=2) + "\n")
        return EXIT_OK
    out.write(f"diff scan {diff.earlier_scan_id} -> {diff.later_scan_id}\n")
    if diff.is_empty:
        out.write("no changes\n")
    for c in diff.terminal_changes:
        tag = "ROTATING" if c.rotating else "changed"
        hours = c.elapsed.total_seconds() / 3600
        out.write(f"{tag}\t{c.video_id}\t{c.before} -> {c.after}\t({hours:.1f}h)\n")
    for vid, before, after in diff.verdict_changes:
        out.write(f"verdict\t{vid}\t{before.value} -> {after.value}\n")
    for vid in diff.missing:
        out.write(f"missing\t{vid}\n")
    return EXIT_OK


def _lexicon_check(args: argparse.Namespace, out, err) -> int:
    cfg = _config(args)
    lexicon = cfg.load_lexicon()
    round_trip = KeywordLexicon.from_dict(json.loads(lexicon.dumps()))
    if round_trip != lexicon:
        raise LexiconError("lexicon does not survive a serialization round trip")
    n_variants = sum(len(v) for v in lexicon.product_names.values())
    out.write(
        f"ok: {len(lexicon.bait_terms)} bait terms, {len(lexicon.product_names)} categories "
        f"({n_variants} variants), {len(lexicon.testimonial_phrases)} testimonials, "
        f"{len(lexicon.archive_password_markers)} password markers\n"
    )
    overlap: dict[str, list[str]] = {}
    for label, variants in lexicon.product_names.items():
        for v in variants:
            overlap.setdefault(v, []).append(label)
    for variant, labels in sorted(overlap.items()):
        if len(labels) > 1:
            out.write(f"note: variant {variant!r} shared by {', '.join(labels)}\n")
    for text in args.text:
        out.write(json.dumps({"text": text, **match_keywords(text, lexicon).to_dict()}, ensure_ascii=False) + "\n")
    if args.write_normalized:
        lexicon.save(args.write_normalized)
    return EXIT_OK


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) if exc.code != 2 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=err,
                        format="%(levelname)s %(name)s: %(message)s")
    handlers = {
        "scan": lambda: _scan(args, False, out, err),
        "record-fixture": lambda: _scan(args, True, out, err),
        "report": lambda: _report(args, out, err),
        "diff": lambda: _diff(args, out, err),
        "lexicon-check": lambda: _lexicon_check(args, out, err),
    }
    try:
        return handlers[args.command]()
    except QuotaExhausted as exc:
        err.write(f"error: quota exhausted: {exc}\n")
        return EXIT_QUOTA
    except (FixtureMiss, FetcherUnavailable) as exc:
        err.write(f"error: fixture miss: {exc}\n")
        return EXIT_FIXTURE_MISS
    except (StorageFailure, DuplicateRecord) as exc:
        err.write(f"error: storage: {exc}\n")
        return EXIT_STORAGE
    except UnknownScanId as exc:
        err.write(f"error: {exc}\n")
        return EXIT_UNKNOWN_SCAN
    except (ApiRejection, TransportError) as exc:
        err.write(f"error: api: {exc}\n")
        return EXIT_API
    except (ConfigError, LexiconError, InvalidWeights, MissingApiKey) as exc:
        err.write(f"error: config: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
