import io
import json

import pytest

from conftest import FIXTURES
from tubescan.api import API_KEY_ENV
from tubescan.cli import (
    EXIT_CONFIG,
    EXIT_FIXTURE_MISS,
    EXIT_OK,
    EXIT_QUOTA,
    EXIT_UNKNOWN_SCAN,
    EXIT_USAGE,
    main,
)

DEMO = str(FIXTURES / "demo_corpus.json")
DAY2 = str(FIXTURES / "demo_corpus_day2.json")
QUERY = "photoshop free crack download"
NOW1 = "2025-07-18T12:00:00+00:00"
NOW2 = "2025-07-19T12:00:00+00:00"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def scan(store, fixtures=DEMO, now=NOW1, *extra):
    return run("scan", "--fixtures", fixtures, "--store", str(store), "--now", now,
               "--published-after", "2025-01-01", *extra, QUERY)


def test_scan_demo(tmp_path):
    code, out, err = scan(tmp_path / "s.jsonl")
    assert code == EXIT_OK, err
    lines = out.splitlines()
    multi = [ln for ln in lines if ln.startswith("MaliciousMultilingual\t")]
    assert len(multi) == 5
    assert any("default=zu" in ln and "flagged_langs=en" in ln for ln in multi)
    assert lines[-1] == "6 flagged (26 videos, scan 1, quota 132/10000)"


def test_scan_empty_fixture(tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text('{"format": "tubescan-fixtures", "format_version": 1, "records": []}', encoding="utf-8")
    code, out, err = scan(tmp_path / "s.jsonl", str(empty))
    assert code == EXIT_FIXTURE_MISS
    assert "fixture miss" in err


def test_scan_filter_matches_nothing(tmp_path):
    code, out, _ = run("scan", "--fixtures", DEMO, "--store", str(tmp_path / "s.jsonl"), "--now", NOW1,
                       "--published-after", "2025-01-01", "--verdicts", "MaliciousPlain",
                       "relaxing piano music")
    assert code == EXIT_OK
    assert out.startswith("0 flagged")


def test_scan_quota(tmp_path):
    code, _, err = scan(tmp_path / "s.jsonl", DEMO, NOW1, "--quota", "50")
    assert code == EXIT_QUOTA and "quota" in err


def test_scan_output_deterministic(tmp_path):
    a = scan(tmp_path / "a.jsonl", DEMO, NOW1, "--parallelism", "8")
    b = scan(tmp_path / "b.jsonl", DEMO, NOW1, "--parallelism", "1")
    assert a == b
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()


def test_report_category_csv():
    code, out, _ = run("report", "--store", str(FIXTURES / "category_store.jsonl"), "--format", "csv")
    assert code == EXIT_OK
    rows = out.splitlines()
    assert rows[0] == "category,video_count,total_views"
    assert "roblox,35,1913491" in rows
    assert rows[-1].startswith("TOTAL,")


def test_report_empty_store(tmp_path):
    code, out, _ = run("report", "--store", str(tmp_path / "none.jsonl"), "--format", "csv")
    assert code == EXIT_OK and out == "category,video_count,total_views\n"


def test_report_json_and_hubs(tmp_path):
    store = tmp_path / "s.jsonl"
    scan(store)
    code, out, _ = run("report", "--store", str(store), "--format", "json")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["totals"]["video_count"] == 6
    (hub,) = payload["hubs"]
    assert hub["hub_url"] == "https://www.youtube.com/post/UgkxHubPost7Qm2rD1cVxA"
    assert len(hub["inbound_video_ids"]) == 5
    out_file = tmp_path / "r.json"
    assert run("report", "--store", str(store), "--format", "json", "-o", str(out_file))[0] == EXIT_OK
    assert out_file.read_text(encoding="utf-8") == out


def test_report_unknown_scan_id(tmp_path):
    store = tmp_path / "s.jsonl"
    scan(store)
    code, _, err = run("report", "--store", str(store), "--scan-id", "7")
    assert code == EXIT_UNKNOWN_SCAN


def test_diff_rotation_and_takedown(tmp_path):
    store = tmp_path / "s.jsonl"
    assert scan(store)[0] == EXIT_OK
    code, out, err = scan(store, DAY2, NOW2)
    assert code == EXIT_OK, err
    assert "scan 2" in out.splitlines()[-1]
    code, out, _ = run("diff", "--store", str(store), "1", "2", "--format", "json")
    assert code == EXIT_OK
    diff = json.loads(out)
    assert len(diff["terminal_changes"]) == 4
    assert all(c["rotating"] and c["elapsed_hours"] == 24 for c in diff["terminal_changes"])
    assert len(diff["missing"]) == 1
    code, text, _ = run("diff", "--store", str(store), "1", "2")
    assert text.count("ROTATING") == 4 and text.count("missing\t") == 1
    code, text, _ = run("diff", "--store", str(store), "1", "1")
    assert "no changes" in text
    assert run("diff", "--store", str(store), "1", "3")[0] == EXIT_UNKNOWN_SCAN


def test_lexicon_check(tmp_path):
    target = tmp_path / "lex.json"
    code, out, _ = run("lexicon-check", "--text", "Roblox FREE hack", "--write-normalized", str(target))
    assert code == EXIT_OK
    assert out.startswith("ok: ")
    match = json.loads(out.splitlines()[-1])
    assert match["bait"] == ["free", "hack"] and "roblox" in match["products"]
    code, out2, _ = run("lexicon-check", "--lexicon", str(target))
    assert code == EXIT_OK and out2.splitlines()[0] == out.splitlines()[0]


def test_bad_lexicon(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"bait_terms": ["FREE"], "product_names": {}, "testimonial_phrases": [], '
                   '"archive_password_markers": []}', encoding="utf-8")
    assert run("lexicon-check", "--lexicon", str(bad))[0] == EXIT_CONFIG


def test_config_file_and_overrides(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"fixtures": DEMO, "store": str(tmp_path / "s.jsonl"), "quota": 50,
                               "published_after": "2025-01-01", "now": NOW1}), encoding="utf-8")
    assert run("scan", "--config", str(cfg), QUERY)[0] == EXIT_QUOTA
    assert run("scan", "--config", str(cfg), "--quota", "10000", QUERY)[0] == EXIT_OK


def test_config_rejects_api_key(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"api_key": "abc"}), encoding="utf-8")
    code, _, err = run("report", "--config", str(cfg))
    assert code == EXIT_CONFIG and API_KEY_ENV in err


def test_config_errors(tmp_path):
    assert run("scan", "--store", str(tmp_path / "s.jsonl"), QUERY)[0] == EXIT_CONFIG
    assert run("scan", "--fixtures", DEMO, "--parallelism", "0", QUERY)[0] == EXIT_CONFIG
    assert run("scan", "--fixtures", DEMO, "--weights", str(tmp_path / "none.json"), QUERY)[0] == EXIT_CONFIG
    assert run("bogus")[0] == EXIT_USAGE


def test_live_mode_requires_key(tmp_path, monkeypatch):
    monkeypatch.delenv(API_KEY_ENV, raising=False)
    code, _, err = run("record-fixture", "--fixtures", str(tmp_path / "rec.json"), "q")
    assert code == EXIT_CONFIG and API_KEY_ENV in err


def test_weights_file(tmp_path):
    w = tmp_path / "w.json"
    w.write_text(json.dumps({"weights": {"testimonial": -1}}), encoding="utf-8")
    code, _, err = scan(tmp_path / "s.jsonl", DEMO, NOW1, "--weights", str(w))
    assert code == EXIT_CONFIG


@pytest.mark.parametrize("flag", ["--no-links", "--no-comments", "--no-channels"])
def test_feature_flags(tmp_path, flag):
    code, out, _ = scan(tmp_path / "s.jsonl", DEMO, NOW1, flag)
    assert code == EXIT_OK
    assert "MaliciousMultilingual" in out
