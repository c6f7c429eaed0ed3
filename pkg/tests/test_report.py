import csv
import io
import json
import random

from hypothesis import given, settings, strategies as st

from conftest import FIXTURES, PUBLISHED_ROWS, make_record
from tubescan.detector import Verdict
from tubescan.lexicon import KeywordLexicon
from tubescan.report import (
    UNCATEGORIZED,
    aggregate_report,
    assign_category,
    render_csv,
    render_json,
    render_table,
)
from tubescan.store import ScanStore


def test_published_rows(lexicon):
    report = aggregate_report(ScanStore(FIXTURES / "category_store.jsonl").records(), lexicon)
    rows = {r.category_label: (r.video_count, r.total_views) for r in report.rows}
    assert rows == PUBLISHED_ROWS
    assert [r.category_label for r in report.rows] == lexicon.categories
    assert rows["roblox"] == (35, 1913491) and rows["fl_studio"] == (16, 603559)
    assert report.totals == (sum(n for n, _ in rows.values()), sum(v for _, v in rows.values()))


def test_empty(lexicon):
    report = aggregate_report([], lexicon)
    assert report.rows == () and report.totals == (0, 0)
    assert render_csv(report) == "category,video_count,total_views\n"


def test_two_videos_sum(lexicon):
    recs = [make_record("v1", views=10), make_record("v2", views=20)]
    (row,) = aggregate_report(recs, lexicon).rows
    assert (row.category_label, row.video_count, row.total_views) == ("adobe_photoshop", 2, 30)


def test_verdict_filter(lexicon):
    recs = [make_record("v1", views=10), make_record("v2", verdict="Benign", views=20)]
    assert aggregate_report(recs, lexicon).totals == (1, 10)
    assert aggregate_report(recs, lexicon, {Verdict.BENIGN}).totals == (1, 20)
    assert aggregate_report(recs, lexicon, {"Benign", "MaliciousMultilingual"}).totals == (2, 30)


def test_latest_snapshot_counted_once(lexicon):
    recs = [make_record("v1", 1, views=10), make_record("v1", 2, views=15)]
    assert aggregate_report(recs, lexicon).totals == (1, 15)


def test_category_assignment_tie_breaks():
    lex = KeywordLexicon.build(product_names={"first": {"alpha"}, "second": {"beta", "gamma"}})
    meta = make_record(title="alpha beta").metadata_snapshot
    assert assign_category(meta, lex) == "first"
    meta = make_record(title="alpha beta gamma").metadata_snapshot
    assert assign_category(meta, lex) == "second"
    meta = make_record(title="nothing").metadata_snapshot
    assert assign_category(meta, lex) is None


def test_uncategorized_row_last(lexicon):
    recs = [make_record("v1", title="mystery tool free crack"), make_record("v2", views=3)]
    report = aggregate_report(recs, lexicon)
    assert [r.category_label for r in report.rows] == ["adobe_photoshop", UNCATEGORIZED]


def test_renderers(lexicon):
    recs = ScanStore(FIXTURES / "category_store.jsonl").records()
    report = aggregate_report(recs, lexicon)
    text = render_csv(report)
    parsed = list(csv.reader(io.StringIO(text)))
    assert parsed[0] == ["category", "video_count", "total_views"]
    assert parsed[-1][0] == "TOTAL" and len(parsed) == 19
    payload = json.loads(render_json(report))
    assert payload["totals"]["video_count"] == report.total_videos
    assert len(payload["videos"]) == report.total_videos
    table = render_table(report)
    assert "roblox" in table and "1,913,491" in table


def test_report_determinism(lexicon):
    a = render_json(aggregate_report(ScanStore(FIXTURES / "category_store.jsonl").records(), lexicon))
    recs = ScanStore(FIXTURES / "category_store.jsonl").records()
    random.Random(5).shuffle(recs)
    b = render_json(aggregate_report(recs, lexicon))
    assert a == b


TITLES = ["Photoshop free crack", "Roblox hack free", "FL Studio crack", "unknown thing free", "Filmora keygen"]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(TITLES), st.integers(0, 10**6)), max_size=20), st.randoms())
def test_linearity(items, rnd):
    from tubescan.lexicon import default_lexicon

    lex = default_lexicon()
    recs = [make_record(f"v{i:010d}", views=v, title=t) for i, (t, v) in enumerate(items)]
    cut = rnd.randint(0, len(recs))
    a, b = aggregate_report(recs[:cut], lex), aggregate_report(recs[cut:], lex)
    whole = aggregate_report(recs, lex)
    assert whole.totals == (a.total_videos + b.total_videos, a.total_views + b.total_views)
    assert whole.totals == (len(recs), sum(v for _, v in items))
