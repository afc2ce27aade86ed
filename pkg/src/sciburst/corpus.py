"""Corpus ingest: articles, mentions, cleaning, dedup, daily count series.

Input files are line-delimited JSON. Invalid lines are skipped and
counted, never fatal; an unreadable stream is. After :func:`ingest`
returns, the store is treated as immutable and is safe to read from any
number of threads.
"""

from __future__ import annotations

import datetime as dt
import json
import logging
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, TextIO

from .stopwords import ENGLISH_STOPWORDS

logger = logging.getLogger(__name__)

URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
# C0/C1 controls that are not whitespace, plus zero-width/format characters.
CONTROL_RE = re.compile(r"[\x00-\x08\x0e-\x1f\x7f-\x9f​-‏  ﻿]")
WHITESPACE_RE = re.compile(r"\s+")


def clean_text(raw: str) -> str:
    """Strip URLs and control characters, collapse whitespace runs."""
    text = URL_RE.sub(" ", raw)
    text = CONTROL_RE.sub("", text)
    return WHITESPACE_RE.sub(" ", text).strip()


@dataclass(frozen=True, order=True)
class Platform:
    """A mention platform: one of the five known ones, or any other name."""

    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("platform name must be non-empty")

    def __str__(self) -> str:
        return self.name

    @property
    def is_known(self) -> bool:
        return self in KNOWN_PLATFORMS


BLOG = Platform("blog")
FACEBOOK = Platform("facebook")
NEWS = Platform("news")
TWITTER = Platform("twitter")
WIKIPEDIA = Platform("wikipedia")

KNOWN_PLATFORMS = (BLOG, FACEBOOK, NEWS, TWITTER, WIKIPEDIA)

_PLATFORM_ALIASES = {
    "blog": BLOG,
    "blogs": BLOG,
    "facebook": FACEBOOK,
    "news": NEWS,
    "twitter": TWITTER,
    "wikipedia": WIKIPEDIA,
}


def parse_platform(raw: str) -> Platform:
    """Case-insensitive match against the known set, Other otherwise."""
    name = raw.strip().lower()
    if not name:
        raise ValueError("platform name must be non-empty")
    return _PLATFORM_ALIASES.get(name, Platform(name))


@dataclass(frozen=True)
class ArticleRecord:
    article_id: str
    abstract: str
    title: str | None = None
    published: dt.date | None = None
    discipline: str | None = None


@dataclass(frozen=True)
class MentionRecord:
    mention_id: str
    article_id: str
    platform: Platform
    timestamp: dt.datetime
    source_id: str
    text: str | None = None
    lang: str | None = None

    @property
    def day(self) -> dt.date:
        return self.timestamp.date()


@dataclass
class DailySeries:
    """Mention counts per calendar day for one (article, platform)."""

    article_id: str
    platform: Platform
    counts: dict[dt.date, int] = field(default_factory=dict)

    def count(self, day: dt.date) -> int:
        return self.counts.get(day, 0)

    def total(self) -> int:
        return sum(self.counts.values())


def dedup_key(mention: MentionRecord) -> tuple:
    """(platform, source, cleaned text, day): the unit treated as one post.

    Identical text from different sources never collides, so retweets and
    cross-outlet syndication are kept.
    """
    text = clean_text(mention.text) if mention.text else ""
    return (mention.platform.name, mention.source_id, text, mention.day)


def stopword_ratio_heuristic(text: str) -> bool:
    """Default no-tag language check: stopword share of tokens >= 0.05.

    Texts with fewer than 10 tokens pass, there is too little signal to
    reject them.
    """
    words = [w.lower() for w in re.findall(r"[A-Za-z']+", text)]
    if len(words) < 10:
        return True
    hits = sum(1 for w in words if w in ENGLISH_STOPWORDS)
    return hits / len(words) >= 0.05


def filter_language(
    mention: MentionRecord,
    heuristic: Callable[[str], bool] = stopword_ratio_heuristic,
) -> bool:
    """True iff the mention looks English.

    A lang tag decides when present (primary subtag "en"); otherwise the
    injectable heuristic runs on the text. Mentions with neither tag nor
    text pass — they never reach scoring anyway.
    """
    if mention.lang:
        return mention.lang.split("-")[0].lower() == "en"
    if mention.text is None:
        return True
    return heuristic(mention.text)


@dataclass
class IngestConfig:
    min_abstract_chars: int = 500
    window_start: dt.date | None = None
    window_end: dt.date | None = None


@dataclass
class IngestStats:
    articles_kept: int = 0
    articles_invalid: int = 0
    articles_short_abstract: int = 0
    articles_duplicate_id: int = 0
    mentions_kept: int = 0
    mentions_invalid: int = 0
    mentions_unknown_article: int = 0
    mentions_outside_window: int = 0
    mentions_duplicate: int = 0
    mentions_with_text: int = 0

    def as_dict(self) -> dict:
        return dict(vars(self))


@dataclass
class CorpusStore:
    """Immutable-after-ingest view of a corpus.

    Equality ignores ingest counters so that re-ingesting the same data
    (with extra duplicates skipped) compares equal.
    """

    articles: dict[str, ArticleRecord]
    mentions: dict[str, MentionRecord]
    stats: IngestStats = field(compare=False, default_factory=IngestStats)
    _series: dict[tuple[str, Platform], DailySeries] = field(
        default_factory=dict, repr=False
    )
    _ids_by_day: dict[tuple[str, Platform], dict[dt.date, list[str]]] = field(
        default_factory=dict, repr=False, compare=False
    )

    def article(self, article_id: str) -> ArticleRecord:
        return self.articles[article_id]

    def mentions_of(self, article_id: str) -> list[MentionRecord]:
        return [m for m in self.mentions.values() if m.article_id == article_id]

    def platforms_of(self, article_id: str) -> list[Platform]:
        return sorted({p for (a, p) in self._series if a == article_id})

    def daily_series(self, article_id: str, platform: Platform) -> DailySeries:
        return self._series.get(
            (article_id, platform), DailySeries(article_id, platform)
        )

    def mention_ids_by_day(
        self, article_id: str, platform: Platform
    ) -> dict[dt.date, list[str]]:
        return self._ids_by_day.get((article_id, platform), {})

    def iter_series(self) -> Iterator[DailySeries]:
        for key in sorted(self._series, key=lambda k: (k[0], k[1].name)):
            yield self._series[key]

    def mentions_by_platform(self) -> dict[Platform, int]:
        out: dict[Platform, int] = {}
        for m in self.mentions.values():
            out[m.platform] = out.get(m.platform, 0) + 1
        return out

    def _add_mention(self, mention: MentionRecord) -> None:
        self.mentions[mention.mention_id] = mention
        key = (mention.article_id, mention.platform)
        series = self._series.setdefault(
            key, DailySeries(mention.article_id, mention.platform)
        )
        series.counts[mention.day] = series.counts.get(mention.day, 0) + 1
        self._ids_by_day.setdefault(key, {}).setdefault(mention.day, []).append(
            mention.mention_id
        )


class IngestError(Exception):
    """The input stream itself could not be read."""


def parse_timestamp(raw: str) -> dt.datetime:
    """ISO-8601 date or datetime; 'Z' suffix accepted."""
    text = raw.strip().replace("Z", "+00:00")
    if "T" not in text and " " not in text:
        day = dt.date.fromisoformat(text)
        return dt.datetime(day.year, day.month, day.day, tzinfo=dt.timezone.utc)
    stamp = dt.datetime.fromisoformat(text)
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=dt.timezone.utc)
    return stamp


def _parse_article(obj: dict) -> ArticleRecord:
    article_id = str(obj["article_id"]).strip()
    abstract = clean_text(str(obj["abstract"]))
    if not article_id:
        raise ValueError("empty article_id")
    published = None
    if obj.get("published"):
        published = dt.date.fromisoformat(str(obj["published"]))
    return ArticleRecord(
        article_id=article_id,
        abstract=abstract,
        title=obj.get("title"),
        published=published,
        discipline=obj.get("discipline"),
    )


def _parse_mention(obj: dict) -> MentionRecord:
    mention_id = str(obj["mention_id"]).strip()
    article_id = str(obj["article_id"]).strip()
    if not mention_id or not article_id:
        raise ValueError("empty mention_id or article_id")
    text = obj.get("text")
    return MentionRecord(
        mention_id=mention_id,
        article_id=article_id,
        platform=parse_platform(str(obj["platform"])),
        timestamp=parse_timestamp(str(obj["timestamp"])),
        source_id=str(obj["source_id"]),
        text=clean_text(str(text)) if text is not None else None,
        lang=obj.get("lang"),
    )


def _iter_json_lines(stream: Iterable[str], label: str) -> Iterator[dict | None]:
    try:
        for line in stream:
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                if not isinstance(obj, dict):
                    raise ValueError("record is not an object")
                yield obj
            except ValueError as exc:
                logger.warning("%s: skipping bad line: %s", label, exc)
                yield None
    except OSError as exc:
        raise IngestError(f"cannot read {label} stream: {exc}") from exc


def ingest(
    articles: Iterable[str] | TextIO,
    mentions: Iterable[str] | TextIO,
    config: IngestConfig | None = None,
) -> CorpusStore:
    """Build a CorpusStore from line-delimited article and mention records.

    Articles with short abstracts, duplicate ids, or schema violations are
    skipped with counters, as are mentions that reference unknown articles,
    fall outside the configured window, or collide under
    :func:`dedup_key`. Mentions without text still count toward the daily
    series; text availability is tracked separately.
    """
    config = config or IngestConfig()
    store = CorpusStore(articles={}, mentions={})
    stats = store.stats

    for obj in _iter_json_lines(articles, "articles"):
        if obj is None:
            stats.articles_invalid += 1
            continue
        try:
            record = _parse_article(obj)
        except (KeyError, ValueError) as exc:
            logger.warning("articles: skipping record: %s", exc)
            stats.articles_invalid += 1
            continue
        if len(record.abstract) < config.min_abstract_chars:
            stats.articles_short_abstract += 1
            continue
        if record.article_id in store.articles:
            stats.articles_duplicate_id += 1
            continue
        store.articles[record.article_id] = record
        stats.articles_kept += 1

    seen_keys: set[tuple] = set()
    for obj in _iter_json_lines(mentions, "mentions"):
        if obj is None:
            stats.mentions_invalid += 1
            continue
        try:
            record = _parse_mention(obj)
        except (KeyError, ValueError) as exc:
            logger.warning("mentions: skipping record: %s", exc)
            stats.mentions_invalid += 1
            continue
        if record.article_id not in store.articles:
            stats.mentions_unknown_article += 1
            continue
        day = record.day
        if (config.window_start and day < config.window_start) or (
            config.window_end and day > config.window_end
        ):
            stats.mentions_outside_window += 1
            continue
        key = dedup_key(record)
        if key in seen_keys or record.mention_id in store.mentions:
            stats.mentions_duplicate += 1
            continue
        seen_keys.add(key)
        store._add_mention(record)
        stats.mentions_kept += 1
        if record.text:
            stats.mentions_with_text += 1

    return store


def ingest_files(
    articles_path, mentions_path, config: IngestConfig | None = None
) -> CorpusStore:
    try:
        with open(articles_path, encoding="utf-8") as fa, open(
            mentions_path, encoding="utf-8"
        ) as fm:
            return ingest(fa, fm, config)
    except OSError as exc:
        raise IngestError(str(exc)) from exc
