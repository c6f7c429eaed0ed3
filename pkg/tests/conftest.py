from __future__ import annotations

import sys
from datetime import datetime, timezone
from pathlib import Path

import pytest

from tubescan.fixtures import FixtureStore
from tubescan.lexicon import KeywordLexicon, default_lexicon
from tubescan.model import LocalizedText, VideoMetadata, ViewStats

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
sys.path.insert(0, str(Path(__file__).resolve().parent))

T0 = datetime(2025, 6, 1, tzinfo=timezone.utc)


@pytest.fixture
def lexicon() -> KeywordLexicon:
    return default_lexicon()


@pytest.fixture
def small_lexicon() -> KeywordLexicon:
    return KeywordLexicon.build(
        bait_terms={"free", "download", "crack"},
        product_names={"adobe_photoshop": {"photoshop"}},
        testimonial_phrases={"It worked! Thanks!"},
        archive_password_markers={"pass:"},
    )


@pytest.fixture
def demo_store() -> FixtureStore:
    return FixtureStore.load(FIXTURES / "demo_corpus.json")


@pytest.fixture
def api_store() -> FixtureStore:
    return FixtureStore.load(FIXTURES / "api_cases.json")


def make_video(
    video_id="vid00000001",
    default=("en", "", ""),
    localizations=None,
    views=100,
    likes=None,
    comments=None,
    default_language="__from_default__",
):
    lang, title, desc = default
    dl = lang if default_language == "__from_default__" else default_language
    return VideoMetadata(
        video_id=video_id,
        channel_id="UC" + "a" * 22,
        published_at=T0,
        default_snippet=LocalizedText(lang, title, desc),
        default_language=dl,
        localizations={k: LocalizedText(k, t, d) for k, (t, d) in (localizations or {}).items()},
        statistics=ViewStats(views, likes, comments),
    )


def make_record(video_id="vid00000001", scan_id=1, verdict="MaliciousMultilingual", views=100,
                title="Photoshop free crack download", scanned_at=T0, chains=()):
    from fractions import Fraction

    from tubescan.detector import ScanVerdict, Verdict
    from tubescan.store import ScanRecord

    meta = make_video(video_id=video_id, default=("zu", "umculo", ""), localizations={"en": (title, "")}, views=views)
    return ScanRecord(scan_id, scanned_at, ScanVerdict(video_id, Verdict(verdict), Fraction(7, 10)), meta, tuple(chains))


# Per-category rows as published (videos, total views), keyed by lexicon label.
PUBLISHED_ROWS = {
    "adobe_photoshop": (17, 202076),
    "adobe_illustrator": (17, 98957),
    "adobe_premiere_pro": (8, 363328),
    "adobe_after_effects": (9, 22368),
    "adobe_indesign": (12, 16204),
    "adobe_acrobat_pro": (7, 63274),
    "vegas_pro": (9, 21318),
    "camtasia_studio": (3, 2164),
    "coreldraw_graphics_suite": (8, 88330),
    "filmora": (7, 73810),
    "fl_studio": (16, 603559),
    "ableton_live": (5, 13022),
    "davinci_resolve_studio": (2, 7334),
    "autocad": (6, 21932),
    "fortnite": (7, 7258),
    "valorant": (13, 13583),
    "roblox": (35, 1913491),
}
# Stated grand totals; these differ from the sum of the rows above.
PUBLISHED_TOTALS = (175, 3531008)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance.RESULTS:
        terminalreporter.write_line(line)
