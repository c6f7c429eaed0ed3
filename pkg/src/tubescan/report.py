"""Per-category aggregate reports over stored scan records."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .detector import Verdict
from .lexicon import KeywordLexicon, MatchResult, match_fields
from .model import VideoMetadata, format_timestamp
from .store import ScanRecord

UNCATEGORIZED = "uncategorized"
MALICIOUS_VERDICTS = frozenset({Verdict.MALICIOUS_MULTILINGUAL, Verdict.MALICIOUS_PLAIN})
CSV_HEADER = ("category", "video_count", "total_views")


@dataclass(frozen=True)
class AggregateRow:
    category_label: str
    video_count: int
    total_views: int


@dataclass(frozen=True)
class AggregateReport:
    rows: tuple[AggregateRow, ...]
    assignments: tuple[tuple[ScanRecord, str], ...] = ()

    @property
    def total_videos(self) -> int:
        return sum(r.video_count for r in self.rows)

    @property
    def total_views(self) -> int:
        return sum(r.total_views for r in self.rows)

    @property
    def totals(self) -> tuple[int, int]:
        return self.total_videos, self.total_views


def assign_category(meta: VideoMetadata, lexicon: KeywordLexicon) -> str | None:
    """Category with the most matched variants across all languages; ties go to declaration order."""
    merged = MatchResult()
    for text in meta.all_texts():
        merged = merged.union(match_fields((text.title, text.description), lexicon))
    best, best_n = None, 0
    for label in lexicon.categories:
        n = len(merged.matched_products.get(label, ()))
        if n > best_n:
            best, best_n = label, n
    return best


def _latest_per_video(records: Iterable[ScanRecord]) -> list[ScanRecord]:
    latest: dict[str, ScanRecord] = {}
    for rec in records:
        cur = latest.get(rec.video_id)
        if cur is None or (rec.scan_id, rec.scanned_at) > (cur.scan_id, cur.scanned_at):
            latest[rec.video_id] = rec
    return [latest[v] for v in sorted(latest)]


def aggregate_report(
    records: Iterable[ScanRecord],
    lexicon: KeywordLexicon,
    verdict_filter: Iterable[Verdict | str] | None = None,
) -> AggregateReport:
    """Group the filtered videos by product category, counting each video once.

    When a video was scanned several times its latest snapshot is used.
    """
    wanted = MALICIOUS_VERDICTS if verdict_filter is None else frozenset(Verdict(v) for v in verdict_filter)
    chosen = _latest_per_video(r for r in records if r.verdict.verdict in wanted)
    counts: dict[str, list[int]] = {}
    assignments = []
    for rec in chosen:
        label = assign_category(rec.metadata_snapshot, lexicon) or UNCATEGORIZED
        slot = counts.setdefault(label, [0, 0])
        slot[0] += 1
        slot[1] += rec.metadata_snapshot.statistics.view_count
        assignments.append((rec, label))
    order = [c for c in lexicon.categories if c in counts]
    if UNCATEGORIZED in counts and UNCATEGORIZED not in lexicon.product_names:
        order.append(UNCATEGORIZED)
    rows = tuple(AggregateRow(label, *counts[label]) for label in order)
    return AggregateReport(rows, tuple(assignments))


def render_csv(report: AggregateReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in report.rows:
        writer.writerow((row.category_label, row.video_count, row.total_views))
    if report.rows:
        writer.writerow(("TOTAL", report.total_videos, report.total_views))
    return buf.getvalue()


def render_table(report: AggregateReport) -> str:
    lines = [(label, str(n), f"{v:,}") for label, n, v in
             ((r.category_label, r.video_count, r.total_views) for r in report.rows)]
    lines.append(("TOTAL", str(report.total_videos), f"{report.total_views:,}"))
    header = ("Category", "Videos", "Total views")
    widths = [max(len(x[i]) for x in [header, *lines]) for i in range(3)]

    def fmt(cols: Sequence[str]) -> str:
        return f"{cols[0]:<{widths[0]}}  {cols[1]:>{widths[1]}}  {cols[2]:>{widths[2]}}"

    rule = "-" * len(fmt(header))
    out = [fmt(header), rule, *(fmt(x) for x in lines[:-1]), rule, fmt(lines[-1])]
    return "\n".join(out) + "\n"


def evidence_export(report: AggregateReport) -> list[dict]:
    out = []
    for rec, label in report.assignments:
        out.append({
            "video_id": rec.video_id,
            "url": f"https://www.youtube.com/watch?v={rec.video_id}",
            "category": label,
            "scan_id": rec.scan_id,
            "scanned_at": format_timestamp(rec.scanned_at),
            "view_count": rec.metadata_snapshot.statistics.view_count,
            "default_language": rec.metadata_snapshot.default_tag,
            "verdict": rec.verdict.to_dict(),
            "chains": [c.to_dict() for c in rec.chains],
        })
    return out


def render_json(report: AggregateReport) -> str:
    payload = {
        "format": "tubescan-report",
        "format_version": 1,
        "rows": [
            {"category": r.category_label, "video_count": r.video_count, "total_views": r.total_views}
            for r in report.rows
        ],
        "totals": {"video_count": report.total_videos, "total_views": report.total_views},
        "videos": evidence_export(report),
    }
    return json.dumps(payload, indent=2, ensure_ascii=False, sort_keys=False) + "\n"


RENDERERS = {"csv": render_csv, "table": render_table, "json": render_json}
