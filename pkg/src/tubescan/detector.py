"""Multilingual misrepresentation detection and evidence scoring.

A video is *misrepresented* when its default-language title and description
carry no bait term and no product name while at least one localization
carries both. ``score_video`` fuses that finding with the weaker signals
(testimonial comments, engagement ratios, dormant-then-bursting channels,
archive password hints, risky link terminals) into a verdict.

Scores are exact fractions: the sum of the weights of the evidence kinds
present, clamped to [0, 1]. Each kind counts once however many items it has.

=================  =======
evidence kind      default
=================  =======
misrepresentation  0.6
testimonial        0.1
engagement         0.05
channel            0.1
password_marker    0.05
risky_link         0.1
=================  =======

Verdicts, given the suspicious (0.1) and malicious (0.6) thresholds:

* ``MaliciousMultilingual``: a finding exists and score >= malicious.
* ``MaliciousPlain``: the default language itself has bait and product
  matches, there is at least one non-engagement evidence item, and
  score >= suspicious.
* ``Suspicious``: score >= suspicious.
* ``Benign``: otherwise.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from datetime import timedelta
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import InvalidWeights
from .lexicon import KeywordLexicon, MatchResult, match_fields, match_keywords
from .links import HostKind, LinkChain
from .model import ChannelRecord, VideoMetadata


class Verdict(str, enum.Enum):
    BENIGN = "Benign"
    SUSPICIOUS = "Suspicious"
    MALICIOUS_MULTILINGUAL = "MaliciousMultilingual"
    MALICIOUS_PLAIN = "MaliciousPlain"


EVIDENCE_KINDS = ("misrepresentation", "testimonial", "engagement", "channel", "password_marker", "risky_link")

DEFAULT_WEIGHTS = {
    "misrepresentation": Fraction("0.6"),
    "testimonial": Fraction("0.1"),
    "engagement": Fraction("0.05"),
    "channel": Fraction("0.1"),
    "password_marker": Fraction("0.05"),
    "risky_link": Fraction("0.1"),
}


def _fraction(name: str, value) -> Fraction:
    if isinstance(value, float) and not math.isfinite(value):
        raise InvalidWeights(f"{name} is not finite")
    try:
        frac = Fraction(str(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidWeights(f"{name}: {value!r} is not a finite number") from exc
    if frac < 0:
        raise InvalidWeights(f"{name} must be non-negative")
    return frac


@dataclass(frozen=True)
class ScoringConfig:
    weights: Mapping[str, Fraction] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    suspicious_threshold: Fraction = Fraction("0.1")
    malicious_threshold: Fraction = Fraction("0.6")
    max_like_ratio: Fraction = Fraction("0.5")
    max_comment_ratio: Fraction = Fraction("0.2")
    dormancy_days: int = 365
    burst_count: int = 5
    burst_window_days: int = 7
    risky_host_classes: frozenset[HostKind] = frozenset({HostKind.FILE_SHARING, HostKind.CLOUDFLARE_FRONTED})

    def __post_init__(self) -> None:
        unknown = set(self.weights) - set(EVIDENCE_KINDS)
        if unknown:
            raise InvalidWeights(f"unknown evidence kinds: {', '.join(sorted(unknown))}")
        weights = dict(DEFAULT_WEIGHTS)
        weights.update({k: _fraction(k, v) for k, v in self.weights.items()})
        object.__setattr__(self, "weights", weights)
        for name in ("suspicious_threshold", "malicious_threshold", "max_like_ratio", "max_comment_ratio"):
            object.__setattr__(self, name, _fraction(name, getattr(self, name)))
        if self.suspicious_threshold <= 0:
            raise InvalidWeights("suspicious_threshold must be positive")
        if self.malicious_threshold < self.suspicious_threshold:
            raise InvalidWeights("malicious_threshold must be >= suspicious_threshold")
        for name in ("dormancy_days", "burst_count", "burst_window_days"):
            if int(getattr(self, name)) <= 0:
                raise InvalidWeights(f"{name} must be positive")
        object.__setattr__(self, "risky_host_classes", frozenset(HostKind(c) for c in self.risky_host_classes))

    @classmethod
    def from_dict(cls, data: Mapping) -> ScoringConfig:
        thresholds = data.get("thresholds", {})
        engagement = data.get("engagement", {})
        channel = data.get("channel", {})
        kwargs = {"weights": data.get("weights", {})}
        if "suspicious" in thresholds:
            kwargs["suspicious_threshold"] = thresholds["suspicious"]
        if "malicious" in thresholds:
            kwargs["malicious_threshold"] = thresholds["malicious"]
        if "max_like_ratio" in engagement:
            kwargs["max_like_ratio"] = engagement["max_like_ratio"]
        if "max_comment_ratio" in engagement:
            kwargs["max_comment_ratio"] = engagement["max_comment_ratio"]
        for key in ("dormancy_days", "burst_count", "burst_window_days"):
            if key in channel:
                kwargs[key] = int(channel[key])
        if "risky_host_classes" in data:
            kwargs["risky_host_classes"] = frozenset(data["risky_host_classes"])
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return {
            "format_version": 1,
            "weights": {k: str(self.weights[k]) for k in EVIDENCE_KINDS},
            "thresholds": {"suspicious": str(self.suspicious_threshold), "malicious": str(self.malicious_threshold)},
            "engagement": {"max_like_ratio": str(self.max_like_ratio), "max_comment_ratio": str(self.max_comment_ratio)},
            "channel": {
                "dormancy_days": self.dormancy_days,
                "burst_count": self.burst_count,
                "burst_window_days": self.burst_window_days,
            },
            "risky_host_classes": sorted(c.value for c in self.risky_host_classes),
        }

    @classmethod
    def load(cls, path: str | Path) -> ScoringConfig:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidWeights(f"cannot read weights file {path}: {exc}") from exc
        return cls.from_dict(data)


@dataclass(frozen=True)
class MisrepresentationFinding:
    video_id: str
    benign_languages: frozenset[str]
    flagged_languages: Mapping[str, MatchResult]
    default_is_benign: bool = True

    def __post_init__(self) -> None:
        if not self.flagged_languages:
            raise ValueError("a finding needs at least one flagged language")
        if not self.default_is_benign:
            raise ValueError("a finding requires a benign default language")
        if set(self.benign_languages) & set(self.flagged_languages):
            raise ValueError("language both benign and flagged")
        object.__setattr__(self, "flagged_languages", dict(sorted(self.flagged_languages.items())))

    def to_dict(self) -> dict:
        return {
            "video_id": self.video_id,
            "benign_languages": sorted(self.benign_languages),
            "flagged_languages": {k: v.to_dict() for k, v in self.flagged_languages.items()},
            "default_is_benign": self.default_is_benign,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> MisrepresentationFinding:
        return cls(
            data["video_id"],
            frozenset(data["benign_languages"]),
            {k: MatchResult.from_dict(v) for k, v in data["flagged_languages"].items()},
            data.get("default_is_benign", True),
        )


def default_matches(meta: VideoMetadata, lexicon: KeywordLexicon) -> MatchResult:
    snippet = meta.default_snippet
    return match_fields((snippet.title, snippet.description), lexicon)


def language_matches(meta: VideoMetadata, lexicon: KeywordLexicon) -> dict[str, MatchResult]:
    """Per-language matches; a localization sharing the default tag is merged into it."""
    out = {meta.default_tag: default_matches(meta, lexicon)}
    for tag, text in meta.localizations.items():
        m = match_fields((text.title, text.description), lexicon)
        out[tag] = out[tag].union(m) if tag in out else m
    return out


def detect_misrepresentation(meta: VideoMetadata, lexicon: KeywordLexicon) -> MisrepresentationFinding | None:
    if not meta.localizations:
        return None
    if not default_matches(meta, lexicon).is_clean:
        return None
    per_lang = language_matches(meta, lexicon)
    localized = [tag for tag in meta.localizations]
    if not any(per_lang[tag].is_bait_product for tag in localized):
        return None
    benign = frozenset(tag for tag, m in per_lang.items() if m.is_clean)
    flagged = {tag: m for tag, m in per_lang.items() if not m.is_clean}
    return MisrepresentationFinding(meta.video_id, benign, flagged, True)


@dataclass(frozen=True)
class Evidence:
    """One tagged piece of evidence; ``items`` are sorted human-readable details."""

    kind: str
    items: tuple[str, ...] = ()
    finding: MisrepresentationFinding | None = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "items": list(self.items)}
        if self.finding is not None:
            out["finding"] = self.finding.to_dict()
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> Evidence:
        finding = data.get("finding")
        return cls(
            data["kind"],
            tuple(data.get("items", ())),
            MisrepresentationFinding.from_dict(finding) if finding else None,
        )


@dataclass(frozen=True)
class ScanVerdict:
    video_id: str
    verdict: Verdict
    score: Fraction
    evidence: tuple[Evidence, ...] = ()

    @property
    def finding(self) -> MisrepresentationFinding | None:
        for ev in self.evidence:
            if ev.finding is not None:
                return ev.finding
        return None

    def to_dict(self) -> dict:
        return {
            "video_id": self.video_id,
            "verdict": self.verdict.value,
            "score": str(self.score),
            "evidence": [e.to_dict() for e in self.evidence],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> ScanVerdict:
        return cls(
            data["video_id"],
            Verdict(data["verdict"]),
            Fraction(data["score"]),
            tuple(Evidence.from_dict(e) for e in data.get("evidence", ())),
        )


def engagement_anomaly(meta: VideoMetadata, config: ScoringConfig) -> list[str]:
    stats = meta.statistics
    hits = []
    for name, count, bound in (
        ("like/view", stats.like_count, config.max_like_ratio),
        ("comment/view", stats.comment_count, config.max_comment_ratio),
    ):
        if count is None or count == 0:
            continue
        if stats.view_count == 0 or Fraction(count, stats.view_count) > bound:
            hits.append(f"{name}={count}/{stats.view_count}")
    return hits


def channel_anomaly(channel: ChannelRecord, config: ScoringConfig) -> list[str]:
    """Dormancy-then-burst: a gap of at least ``dormancy_days`` followed by a burst of uploads."""
    dormancy = timedelta(days=config.dormancy_days)
    window = timedelta(days=config.burst_window_days)
    uploads = list(channel.recent_uploads)
    previous = channel.created_at
    for i, ts in enumerate(uploads):
        if ts - previous >= dormancy:
            burst = [u for u in uploads[i:] if u - ts <= window]
            if len(burst) >= config.burst_count:
                return [f"dormant {(ts - previous).days}d then {len(burst)} uploads in {config.burst_window_days}d"]
        previous = max(previous, ts)
    return []


def _chain_items(link_evidence: Iterable[LinkChain], risky: frozenset[HostKind]) -> list[str]:
    items = set()
    for chain in link_evidence:
        if chain.terminal_class.kind in risky:
            items.add(f"{chain.terminal_class.kind.value} {chain.terminal_url}")
    return sorted(items)


def classify(
    score: Fraction,
    has_finding: bool,
    default_match: MatchResult,
    kinds: Iterable[str],
    config: ScoringConfig,
) -> Verdict:
    kinds = set(kinds)
    if has_finding and score >= config.malicious_threshold:
        return Verdict.MALICIOUS_MULTILINGUAL
    if score >= config.suspicious_threshold:
        # engagement alone never justifies a malicious verdict
        if default_match.is_bait_product and kinds - {"engagement", "misrepresentation"}:
            return Verdict.MALICIOUS_PLAIN
        return Verdict.SUSPICIOUS
    return Verdict.BENIGN


def score_video(
    meta: VideoMetadata,
    finding: MisrepresentationFinding | None,
    comment_texts: Sequence[str],
    channel: ChannelRecord | None,
    link_evidence: Sequence[LinkChain],
    lexicon: KeywordLexicon,
    weights: ScoringConfig | None = None,
) -> ScanVerdict:
    config = weights if weights is not None else ScoringConfig()
    evidence: list[Evidence] = []
    if finding is not None:
        evidence.append(Evidence("misrepresentation", tuple(sorted(finding.flagged_languages)), finding))
    testimonials = set()
    for text in comment_texts:
        testimonials |= match_keywords(text, lexicon).matched_testimonials
    if testimonials:
        evidence.append(Evidence("testimonial", tuple(sorted(testimonials))))
    engagement = engagement_anomaly(meta, config)
    if engagement:
        evidence.append(Evidence("engagement", tuple(engagement)))
    if channel is not None:
        burst = channel_anomaly(channel, config)
        if burst:
            evidence.append(Evidence("channel", tuple(burst)))
    markers = set()
    for text in meta.all_texts():
        markers |= match_fields((text.title, text.description), lexicon).matched_password_markers
    if markers:
        evidence.append(Evidence("password_marker", tuple(sorted(markers))))
    links = _chain_items(link_evidence, config.risky_host_classes)
    if links:
        evidence.append(Evidence("risky_link", tuple(links)))

    kinds = [e.kind for e in evidence]
    score = min(Fraction(1), sum((config.weights[k] for k in kinds), Fraction(0)))
    verdict = classify(score, finding is not None, default_matches(meta, lexicon), kinds, config)
    return ScanVerdict(meta.video_id, verdict, score, tuple(evidence))
