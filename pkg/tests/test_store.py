from datetime import datetime, timedelta, timezone
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from conftest import T0, make_record
from tubescan.detector import Evidence, ScanVerdict, Verdict
from tubescan.errors import DuplicateRecord, StorageFailure, UnknownScanId
from tubescan.links import ExtractedUrl, HostClass, HostKind, Hop, LinkChain, Resolution, UrlOrigin, WhoisPrivacy
from tubescan.model import LocalizedText, VideoMetadata, ViewStats
from tubescan.store import STORE_FORMAT, ScanRecord, ScanStore, diff_runs


def chain(video_id, terminal, at):
    origin = ExtractedUrl("https://bit.ly/a", UrlOrigin.DESCRIPTION, video_id, "en", video_id)
    hops = (Hop("https://bit.ly/a", Resolution.HTTP_REDIRECT, 301), Hop(terminal, Resolution.TERMINAL, 200))
    return LinkChain(origin, hops, HostClass(HostKind.FILE_SHARING, "mediafire.com"), at)


def test_round_trip(tmp_path):
    store = ScanStore(tmp_path / "s.jsonl")
    rec = make_record(chains=[chain("vid00000001", "https://www.mediafire.com/file/a", T0)])
    assert store.persist(rec) == 0
    assert ScanStore(store.path).records() == [rec]
    first = store.path.read_text(encoding="utf-8").splitlines()[0]
    assert STORE_FORMAT in first


def test_duplicate_rejected(tmp_path):
    store = ScanStore(tmp_path / "s.jsonl")
    store.persist(make_record())
    size = store.path.stat().st_size
    with pytest.raises(DuplicateRecord):
        store.persist(make_record())
    with pytest.raises(DuplicateRecord):
        ScanStore(store.path).persist(make_record(views=5))
    assert store.path.stat().st_size == size
    store.persist(make_record(scan_id=2))
    assert store.count == 2


def test_count_175(tmp_path):
    store = ScanStore(tmp_path / "s.jsonl")
    records = [make_record(f"v{i:010d}", views=i) for i in range(175)]
    store.persist_all(records)
    assert store.count == len(records) == 175
    assert len(ScanStore(store.path)) == 175


def test_partial_trailing_line_ignored(tmp_path):
    store = ScanStore(tmp_path / "s.jsonl")
    store.persist(make_record())
    with open(store.path, "ab") as fh:
        fh.write(b'{"scan_id": 1, "trunc')
    assert ScanStore(store.path).count == 1


def test_corrupt_and_foreign_files(tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"format": "other"}\n', encoding="utf-8")
    with pytest.raises(StorageFailure):
        ScanStore(bad).records()
    bad.write_text('{"format": "tubescan-store", "format_version": 1}\nnot json\n', encoding="utf-8")
    with pytest.raises(StorageFailure):
        ScanStore(bad).records()


def test_store_path_is_directory(tmp_path):
    with pytest.raises(StorageFailure):
        ScanStore(tmp_path).persist(make_record())


def test_empty_store(tmp_path):
    store = ScanStore(tmp_path / "none.jsonl")
    assert store.records() == [] and store.next_scan_id() == 1
    with pytest.raises(UnknownScanId):
        store.records_for(1)


def test_scan_id_mismatch_rejected():
    rec = make_record()
    with pytest.raises(ValueError):
        ScanRecord(1, T0, ScanVerdict("other", Verdict.BENIGN, Fraction(0)), rec.metadata_snapshot)
    with pytest.raises(ValueError):
        ScanRecord(0, T0, rec.verdict, rec.metadata_snapshot)


# -- diff_runs ------------------------------------------------------------------


def two_runs(tmp_path, later_terminal, hours=24, drop=False, later_verdict="MaliciousMultilingual"):
    store = ScanStore(tmp_path / "s.jsonl")
    t1, t2 = T0, T0 + timedelta(hours=hours)
    store.persist(make_record("v1", 1, chains=[chain("v1", "https://www.mediafire.com/file/a", t1)], scanned_at=t1))
    store.persist(make_record("v2", 1, scanned_at=t1))
    store.persist(make_record("v1", 2, verdict=later_verdict, chains=[chain("v1", later_terminal, t2)], scanned_at=t2))
    if not drop:
        store.persist(make_record("v2", 2, scanned_at=t2))
    return store


def test_rotation_within_48h(tmp_path):
    diff = diff_runs(two_runs(tmp_path, "https://www.mediafire.com/file/b"), 1, 2)
    (change,) = diff.terminal_changes
    assert change.rotating and change.video_id == "v1"
    assert change.before.endswith("/a") and change.after.endswith("/b")


def test_rotation_outside_window(tmp_path):
    diff = two_runs(tmp_path, "https://www.mediafire.com/file/b", hours=72).diff_runs(1, 2)
    assert not diff.terminal_changes[0].rotating


def test_identical_runs_empty(tmp_path):
    diff = two_runs(tmp_path, "https://www.mediafire.com/file/a").diff_runs(1, 2)
    assert diff.is_empty


def test_missing_and_verdict_change(tmp_path):
    diff = two_runs(tmp_path, "https://www.mediafire.com/file/a", drop=True, later_verdict="Benign").diff_runs(1, 2)
    assert diff.missing == ("v2",)
    assert diff.verdict_changes == (("v1", Verdict.MALICIOUS_MULTILINGUAL, Verdict.BENIGN),)


def test_diff_unknown_scan(tmp_path):
    store = two_runs(tmp_path, "https://www.mediafire.com/file/a")
    with pytest.raises(UnknownScanId):
        store.diff_runs(1, 9)


# -- round-trip property --------------------------------------------------------

safe_text = st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=20)
stamps = st.datetimes(min_value=datetime(2000, 1, 1), max_value=datetime(2100, 1, 1), timezones=st.just(timezone.utc))
tags = st.sampled_from(["en", "zu", "pt-BR", "zh-Hant-TW", "und"])
counts = st.one_of(st.none(), st.integers(min_value=0, max_value=10**12))


@st.composite
def records(draw):
    vid = draw(st.text(alphabet="abcXYZ019_-", min_size=11, max_size=11))
    tag = draw(tags)
    locs = draw(st.dictionaries(tags, st.tuples(safe_text, safe_text), max_size=3))
    meta = VideoMetadata(
        vid, "UC" + "q" * 22, draw(stamps), LocalizedText(tag, draw(safe_text), draw(safe_text)),
        draw(st.sampled_from([tag, None])) if tag != "und" else None,
        {k: LocalizedText(k, t, d) for k, (t, d) in locs.items()},
        ViewStats(draw(st.integers(min_value=0, max_value=10**12)), draw(counts), draw(counts)),
    )
    evidence = tuple(Evidence(k, tuple(draw(st.lists(safe_text, max_size=2)))) for k in
                     draw(st.lists(st.sampled_from(["testimonial", "engagement", "risky_link"]), unique=True)))
    verdict = ScanVerdict(vid, draw(st.sampled_from(list(Verdict))),
                          draw(st.fractions(min_value=0, max_value=1, max_denominator=1000)), evidence)
    at = draw(stamps)
    origin = ExtractedUrl("https://bit.ly/" + draw(st.text(alphabet="abc", min_size=1, max_size=5)),
                          UrlOrigin.COMMENT, vid + "#c0", None, vid)
    chains = tuple(
        LinkChain(origin, (Hop(origin.url, Resolution.UNRESOLVED, draw(st.sampled_from([None, 404]))),),
                  HostClass(HostKind.UNKNOWN, "bit.ly", draw(st.sampled_from(list(WhoisPrivacy)))), at)
        for _ in range(draw(st.integers(0, 2)))
    )
    return ScanRecord(draw(st.integers(min_value=1, max_value=10**6)), at, verdict, meta, chains)


@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.lists(records(), max_size=5, unique_by=lambda r: (r.video_id, r.scan_id)))
def test_round_trip_property(tmp_path_factory, recs):
    path = tmp_path_factory.mktemp("rt") / "s.jsonl"
    store = ScanStore(path)
    store.persist_all(recs)
    back = ScanStore(path).records()
    assert back == recs
    assert [r.to_dict() for r in back] == [r.to_dict() for r in recs]
    copy = path.with_name("copy.jsonl")
    ScanStore(copy).persist_all(back)
    assert copy.exists() == path.exists()
    if recs:
        assert copy.read_bytes() == path.read_bytes()
