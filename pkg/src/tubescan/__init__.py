"""Scanner for YouTube videos that hide malware lures behind localized metadata."""

from .detector import (
    MisrepresentationFinding,
    ScanVerdict,
    ScoringConfig,
    Verdict,
    detect_misrepresentation,
    score_video,
)
from .lexicon import KeywordLexicon, MatchResult, default_lexicon, match_keywords, normalize_text
from .links import (
    ExtractedUrl,
    HostClass,
    HostKind,
    LinkChain,
    classify_host,
    detect_hubs,
    extract_urls,
    resolve_chain,
)
from .model import ChannelRecord, LocalizedText, VideoMetadata, ViewStats
from .report import AggregateRow, aggregate_report
from .store import ScanRecord, ScanStore, diff_runs

__version__ = "0.1.0"

__all__ = [
    "AggregateRow",
    "ChannelRecord",
    "ExtractedUrl",
    "HostClass",
    "HostKind",
    "KeywordLexicon",
    "LinkChain",
    "LocalizedText",
    "MatchResult",
    "MisrepresentationFinding",
    "ScanRecord",
    "ScanStore",
    "ScanVerdict",
    "ScoringConfig",
    "Verdict",
    "VideoMetadata",
    "ViewStats",
    "aggregate_report",
    "classify_host",
    "default_lexicon",
    "detect_hubs",
    "detect_misrepresentation",
    "diff_runs",
    "extract_urls",
    "match_keywords",
    "normalize_text",
    "resolve_chain",
    "score_video",
]
