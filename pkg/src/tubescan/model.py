"""Immutable video and channel records as returned by the Data API."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterator, Mapping

UNDETERMINED_LANGUAGE = "und"


def normalize_language_tag(tag: str) -> str:
    """Case-normalize a BCP-47 tag: ``en-us`` -> ``en-US``, ``zh_hant_tw`` -> ``zh-Hant-TW``."""
    parts = [p for p in tag.strip().replace("_", "-").split("-") if p]
    if not parts:
        raise ValueError("language tag must be non-empty")
    out = [parts[0].lower()]
    for part in parts[1:]:
        if len(part) == 2 and part.isalpha():
            out.append(part.upper())
        elif len(part) == 4 and part.isalpha():
            out.append(part.title())
        else:
            out.append(part.lower())
    return "-".join(out)


def parse_timestamp(value: str) -> datetime:
    """Parse an RFC 3339 timestamp (``Z`` suffix allowed) into an aware UTC datetime."""
    if value.endswith("Z") or value.endswith("z"):
        value = value[:-1] + "+00:00"
    ts = datetime.fromisoformat(value)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).isoformat()


@dataclass(frozen=True)
class LocalizedText:
    language_tag: str
    title: str = ""
    description: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "language_tag", normalize_language_tag(self.language_tag))
        if self.title is None or self.description is None:
            raise ValueError("title and description must be strings")

    def to_dict(self) -> dict:
        return {"language_tag": self.language_tag, "title": self.title, "description": self.description}

    @classmethod
    def from_dict(cls, data: Mapping) -> LocalizedText:
        return cls(data["language_tag"], data.get("title", ""), data.get("description", ""))


@dataclass(frozen=True)
class ViewStats:
    view_count: int = 0
    like_count: int | None = None
    comment_count: int | None = None

    def __post_init__(self) -> None:
        for name in ("view_count", "like_count", "comment_count"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValueError(f"{name} must be non-negative")

    def to_dict(self) -> dict:
        return {"view_count": self.view_count, "like_count": self.like_count, "comment_count": self.comment_count}

    @classmethod
    def from_dict(cls, data: Mapping) -> ViewStats:
        return cls(data.get("view_count", 0), data.get("like_count"), data.get("comment_count"))


@dataclass(frozen=True)
class VideoMetadata:
    video_id: str
    channel_id: str
    published_at: datetime
    default_snippet: LocalizedText
    default_language: str | None = None
    localizations: Mapping[str, LocalizedText] = field(default_factory=dict)
    statistics: ViewStats = field(default_factory=ViewStats)

    def __post_init__(self) -> None:
        if self.default_language is not None:
            lang = normalize_language_tag(self.default_language)
            object.__setattr__(self, "default_language", lang)
            if self.default_snippet.language_tag != lang:
                raise ValueError(
                    f"default snippet tagged {self.default_snippet.language_tag!r}, "
                    f"default language is {lang!r}"
                )
        normalized: dict[str, LocalizedText] = {}
        for key, text in self.localizations.items():
            tag = normalize_language_tag(key)
            if tag in normalized:
                raise ValueError(f"duplicate localization {tag!r} for {self.video_id}")
            if text.language_tag != tag:
                text = LocalizedText(tag, text.title, text.description)
            normalized[tag] = text
        object.__setattr__(self, "localizations", dict(sorted(normalized.items())))

    @property
    def default_tag(self) -> str:
        return self.default_language or self.default_snippet.language_tag

    def to_dict(self) -> dict:
        return {
            "video_id": self.video_id,
            "channel_id": self.channel_id,
            "published_at": format_timestamp(self.published_at),
            "default_language": self.default_language,
            "default_snippet": self.default_snippet.to_dict(),
            "localizations": {k: v.to_dict() for k, v in self.localizations.items()},
            "statistics": self.statistics.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> VideoMetadata:
        return cls(
            video_id=data["video_id"],
            channel_id=data["channel_id"],
            published_at=parse_timestamp(data["published_at"]),
            default_snippet=LocalizedText.from_dict(data["default_snippet"]),
            default_language=data.get("default_language"),
            localizations={k: LocalizedText.from_dict(v) for k, v in data.get("localizations", {}).items()},
            statistics=ViewStats.from_dict(data.get("statistics", {})),
        )

    def all_texts(self) -> Iterator[LocalizedText]:
        """Default snippet first, then localizations in tag order."""
        yield self.default_snippet
        yield from self.localizations.values()


@dataclass(frozen=True)
class ChannelRecord:
    channel_id: str
    created_at: datetime
    subscriber_count: int | None = None
    recent_uploads: tuple[datetime, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "recent_uploads", tuple(sorted(self.recent_uploads)))

    def to_dict(self) -> dict:
        return {
            "channel_id": self.channel_id,
            "created_at": format_timestamp(self.created_at),
            "subscriber_count": self.subscriber_count,
            "recent_uploads": [format_timestamp(t) for t in self.recent_uploads],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> ChannelRecord:
        return cls(
            data["channel_id"],
            parse_timestamp(data["created_at"]),
            data.get("subscriber_count"),
            tuple(parse_timestamp(t) for t in data.get("recent_uploads", ())),
        )
