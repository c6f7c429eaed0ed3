import io
import subprocess
import sys
from datetime import datetime, timezone

from conftest import FIXTURES, ROOT, make_video
from tubescan.api import QuotaBudget, YouTubeClient
from tubescan.detector import ScoringConfig, Verdict
from tubescan.errors import FixtureMiss
from tubescan.fixtures import FixtureStore
from tubescan.lexicon import KeywordLexicon
from tubescan.links import FixtureFetcher, UrlOrigin, default_tables
from tubescan.pipeline import Scanner, ScanSettings, build_queries, summary_line, video_urls
from tubescan.store import ScanStore

NOW = datetime(2025, 7, 18, 12, tzinfo=timezone.utc)
AFTER = datetime(2025, 1, 1, tzinfo=timezone.utc)


def test_build_queries():
    lex = KeywordLexicon.build(bait_terms={"free", "crack"}, product_names={"ps": {"photoshop", "adobe photoshop"}, "r": {"roblox"}})
    assert build_queries(lex) == [
        "adobe photoshop crack", "adobe photoshop free", "roblox crack", "roblox free",
    ]
    assert build_queries(lex, ["r"]) == ["roblox crack", "roblox free"]


def test_video_urls_all_languages_and_comments():
    meta = make_video(default=("zu", "umculo", "https://a.test/x"),
                      localizations={"en": ("t", "see bit.ly/abc and https://a.test/x")})
    urls = video_urls(meta, ["mirror: mega.nz/file/q"], default_tables())
    assert [(u.url, u.origin, u.language_tag) for u in urls] == [
        ("https://a.test/x", UrlOrigin.DESCRIPTION, "zu"),
        ("https://bit.ly/abc", UrlOrigin.DESCRIPTION, "en"),
        ("https://mega.nz/file/q", UrlOrigin.COMMENT, None),
    ]
    assert all(u.owner_video == meta.video_id for u in urls)


def scanner(store_path, fixtures=None, parallelism=4):
    fixtures = fixtures or FixtureStore.load(FIXTURES / "demo_corpus.json")
    client = YouTubeClient(fixtures, parallelism=parallelism)
    from tubescan.lexicon import default_lexicon

    return Scanner(
        client, default_lexicon(), ScoringConfig(), ScanStore(store_path) if store_path else None,
        ScanSettings(AFTER, parallelism=parallelism), fetcher=FixtureFetcher(fixtures), clock=lambda: NOW,
    ), client


def test_scanner_run(tmp_path):
    sc, client = scanner(tmp_path / "s.jsonl")
    out = io.StringIO()
    outcome = sc.run(["photoshop free crack download"], QuotaBudget(10000), out)
    assert outcome.error is None
    assert len(outcome.records) == 26
    verdicts = sorted(r.verdict.verdict.value for r in outcome.flagged)
    assert verdicts == ["MaliciousMultilingual"] * 5 + ["MaliciousPlain"]
    assert out.getvalue().splitlines() == [summary_line(r) for r in outcome.flagged]
    assert ScanStore(tmp_path / "s.jsonl").count == 26
    assert client.live_calls == 0


def test_repeated_query_ids_scanned_once(tmp_path):
    sc, _ = scanner(tmp_path / "s.jsonl")
    outcome = sc.run(["photoshop free crack download", "relaxing piano music"], QuotaBudget(10000))
    assert outcome.error is None and len(outcome.records) == 26


def test_error_keeps_completed_work(tmp_path):
    sc, _ = scanner(tmp_path / "s.jsonl")
    outcome = sc.run(["relaxing piano music", "not recorded"], QuotaBudget(10000))
    assert isinstance(outcome.error, FixtureMiss)
    assert len(outcome.records) == 20
    assert ScanStore(tmp_path / "s.jsonl").count == 20
    assert all(r.verdict.verdict is Verdict.BENIGN for r in outcome.records)


def test_fixture_files_reproducible():
    proc = subprocess.run([sys.executable, str(ROOT / "scripts" / "build_fixtures.py"), "--check"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stdout + proc.stderr
