"""Keyword lexicon and word-boundary matching.

Lexicon files are UTF-8 JSON with a ``format_version`` field and four
sections::

    {
      "format_version": 1,
      "bait_terms": ["crack", "download", ...],
      "product_names": {"adobe_photoshop": ["adobe photoshop", "photoshop"], ...},
      "testimonial_phrases": ["it worked! thanks!", ...],
      "archive_password_markers": ["pass:", "password", ...]
    }

Set-valued sections are written sorted; ``product_names`` keeps declaration
order, which is also the row order of aggregate reports.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .errors import LexiconError

LEXICON_FORMAT_VERSION = 1


def normalize_text(raw: str) -> str:
    """Lowercase, NFC-normalize and collapse whitespace runs to one space."""
    text = unicodedata.normalize("NFC", raw)
    text = unicodedata.normalize("NFC", text.lower())
    return " ".join(text.split())


def _entry_pattern(entry: str) -> re.Pattern[str]:
    # Boundaries are only enforced on edges that are word characters, so
    # "pass:" still matches "pass:1234".
    body = re.escape(entry)
    if re.match(r"\w", entry[0]):
        body = r"(?<!\w)" + body
    if re.match(r"\w", entry[-1]):
        body = body + r"(?!\w)"
    return re.compile(body)


@dataclass(frozen=True)
class MatchResult:
    matched_bait: frozenset[str] = frozenset()
    matched_products: Mapping[str, frozenset[str]] = field(default_factory=dict)
    matched_testimonials: frozenset[str] = frozenset()
    matched_password_markers: frozenset[str] = frozenset()

    @property
    def has_bait(self) -> bool:
        return bool(self.matched_bait)

    @property
    def has_product(self) -> bool:
        return any(self.matched_products.values())

    @property
    def is_bait_product(self) -> bool:
        """Bait term and product name both present."""
        return self.has_bait and self.has_product

    @property
    def is_clean(self) -> bool:
        """No bait terms and no product names."""
        return not self.has_bait and not self.has_product

    def union(self, other: MatchResult) -> MatchResult:
        products = {k: set(v) for k, v in self.matched_products.items()}
        for k, v in other.matched_products.items():
            products.setdefault(k, set()).update(v)
        return MatchResult(
            self.matched_bait | other.matched_bait,
            {k: frozenset(v) for k, v in sorted(products.items())},
            self.matched_testimonials | other.matched_testimonials,
            self.matched_password_markers | other.matched_password_markers,
        )

    def to_dict(self) -> dict:
        return {
            "bait": sorted(self.matched_bait),
            "products": {k: sorted(v) for k, v in sorted(self.matched_products.items())},
            "testimonials": sorted(self.matched_testimonials),
            "password_markers": sorted(self.matched_password_markers),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> MatchResult:
        return cls(
            frozenset(data.get("bait", ())),
            {k: frozenset(v) for k, v in data.get("products", {}).items()},
            frozenset(data.get("testimonials", ())),
            frozenset(data.get("password_markers", ())),
        )


def _check_entries(section: str, entries: Iterable[str]) -> frozenset[str]:
    out = set()
    for entry in entries:
        if not isinstance(entry, str) or not entry:
            raise LexiconError(f"{section}: entries must be non-empty strings")
        if normalize_text(entry) != entry:
            raise LexiconError(f"{section}: entry {entry!r} is not normalized")
        out.add(entry)
    return frozenset(out)


@dataclass(frozen=True)
class KeywordLexicon:
    bait_terms: frozenset[str]
    product_names: Mapping[str, frozenset[str]]
    testimonial_phrases: frozenset[str] = frozenset()
    archive_password_markers: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "bait_terms", _check_entries("bait_terms", self.bait_terms))
        products = {}
        for label, variants in self.product_names.items():
            if not label:
                raise LexiconError("product_names: empty category label")
            products[label] = _check_entries(f"product_names[{label}]", variants)
        object.__setattr__(self, "product_names", products)
        object.__setattr__(
            self, "testimonial_phrases",
            _check_entries("testimonial_phrases", self.testimonial_phrases),
        )
        object.__setattr__(
            self, "archive_password_markers",
            _check_entries("archive_password_markers", self.archive_password_markers),
        )

    @classmethod
    def build(
        cls,
        bait_terms: Iterable[str] = (),
        product_names: Mapping[str, Iterable[str]] | None = None,
        testimonial_phrases: Iterable[str] = (),
        archive_password_markers: Iterable[str] = (),
    ) -> KeywordLexicon:
        """Construct from raw strings, normalizing every entry first."""
        norm = lambda xs: frozenset(normalize_text(x) for x in xs)  # noqa: E731
        return cls(
            norm(bait_terms),
            {label: norm(v) for label, v in (product_names or {}).items()},
            norm(testimonial_phrases),
            norm(archive_password_markers),
        )

    @property
    def categories(self) -> list[str]:
        return list(self.product_names)

    @cached_property
    def _compiled(self) -> tuple:
        def comp(entries: Iterable[str]) -> list[tuple[str, re.Pattern[str]]]:
            return [(e, _entry_pattern(e)) for e in sorted(entries)]

        return (
            comp(self.bait_terms),
            [(label, comp(v)) for label, v in self.product_names.items()],
            comp(self.testimonial_phrases),
            comp(self.archive_password_markers),
        )

    def to_dict(self) -> dict:
        return {
            "format_version": LEXICON_FORMAT_VERSION,
            "bait_terms": sorted(self.bait_terms),
            "product_names": {k: sorted(v) for k, v in self.product_names.items()},
            "testimonial_phrases": sorted(self.testimonial_phrases),
            "archive_password_markers": sorted(self.archive_password_markers),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> KeywordLexicon:
        version = data.get("format_version", LEXICON_FORMAT_VERSION)
        if version != LEXICON_FORMAT_VERSION:
            raise LexiconError(f"unsupported lexicon format_version {version}")
        missing = {
            "bait_terms", "product_names", "testimonial_phrases", "archive_password_markers"
        } - set(data)
        if missing:
            raise LexiconError(f"lexicon missing sections: {', '.join(sorted(missing))}")
        if not isinstance(data["product_names"], Mapping):
            raise LexiconError("product_names must be an object of label -> list")
        return cls(
            frozenset(data["bait_terms"]),
            {k: frozenset(v) for k, v in data["product_names"].items()},
            frozenset(data["testimonial_phrases"]),
            frozenset(data["archive_password_markers"]),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def load(cls, path: str | Path) -> KeywordLexicon:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise LexiconError(f"cannot read lexicon {path}: {exc}") from exc
        return cls.from_dict(data)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")


def default_lexicon() -> KeywordLexicon:
    """The bundled lexicon (a reconstruction of the published search terms)."""
    text = resources.files("tubescan.data").joinpath("lexicon.json").read_text(encoding="utf-8")
    return KeywordLexicon.from_dict(json.loads(text))


def _scan(text: str, compiled: list[tuple[str, re.Pattern[str]]]) -> frozenset[str]:
    return frozenset(entry for entry, pat in compiled if pat.search(text))


def match_normalized(text: str, lexicon: KeywordLexicon) -> MatchResult:
    """Like :func:`match_keywords` but ``text`` must already be normalized."""
    bait, products, testimonials, markers = lexicon._compiled
    matched_products = {}
    for label, compiled in products:
        hits = _scan(text, compiled)
        if hits:
            matched_products[label] = hits
    return MatchResult(
        _scan(text, bait),
        matched_products,
        _scan(text, testimonials),
        _scan(text, markers),
    )


def match_keywords(text: str, lexicon: KeywordLexicon) -> MatchResult:
    return match_normalized(normalize_text(text), lexicon)


def match_fields(texts: Iterable[str], lexicon: KeywordLexicon) -> MatchResult:
    """Match several fields without letting a phrase span two of them."""
    result = MatchResult()
    for text in texts:
        result = result.union(match_keywords(text, lexicon))
    return result
