import datetime as dt
import random

import pytest

from conftest import article_line, make_store, mention_line
from sciburst.corpus import (
    BLOG,
    TWITTER,
    IngestConfig,
    IngestError,
    MentionRecord,
    clean_text,
    dedup_key,
    filter_language,
    ingest,
    parse_platform,
    parse_timestamp,
)


def mention(**kw):
    base = dict(
        mention_id="m1",
        article_id="a1",
        platform=TWITTER,
        timestamp=dt.datetime(2016, 3, 5, 10, tzinfo=dt.timezone.utc),
        source_id="s1",
        text="hello world",
    )
    base.update(kw)
    return MentionRecord(**base)


class TestCleanText:
    def test_empty(self):
        assert clean_text("") == ""

    def test_url_stripped_and_collapsed(self):
        # hand-applied rules: drop the URL token, collapse the double space
        assert clean_text("see https://x.org/a now") == "see now"

    def test_plain_text_fixed_point(self):
        assert clean_text("plain text") == "plain text"

    def test_www_and_control_chars(self):
        assert clean_text("go to www.example.com\x00 now\t ok") == "go to now ok"

    def test_idempotent(self):
        rng = random.Random(7)
        corpus = [
            "a  b\tc https://x.y/z w",
            "www.a.b c\x07d",
            " padded  text ",
            "​zero width",
        ]
        for _ in range(50):
            raw = "".join(
                rng.choice("ab c.:/wht\x00\x07\nxyz") for _ in range(rng.randint(0, 40))
            )
            corpus.append(raw)
        for raw in corpus:
            once = clean_text(raw)
            assert clean_text(once) == once


class TestDedupKey:
    def test_same_everything_collides(self):
        assert dedup_key(mention()) == dedup_key(mention())

    def test_different_source_never_collides(self):
        assert dedup_key(mention(source_id="s1")) != dedup_key(mention(source_id="s2"))

    def test_different_day_no_collision(self):
        other = mention(
            timestamp=dt.datetime(2016, 3, 6, 10, tzinfo=dt.timezone.utc)
        )
        assert dedup_key(mention()) != dedup_key(other)

    def test_same_day_different_time_collides(self):
        other = mention(
            timestamp=dt.datetime(2016, 3, 5, 23, tzinfo=dt.timezone.utc)
        )
        assert dedup_key(mention()) == dedup_key(other)


class TestFilterLanguage:
    def test_en_tag(self):
        assert filter_language(mention(lang="en")) is True
        assert filter_language(mention(lang="en-GB")) is True

    def test_de_tag(self):
        assert filter_language(mention(lang="de")) is False

    def test_no_tag_stopword_ratio(self):
        # 8 tokens, below the 10-token floor: passes outright
        assert filter_language(mention(text="the study shows that the results are robust"))

    def test_no_tag_long_english(self):
        text = "the results of the study show that the effect is large and robust"
        assert filter_language(mention(text=text)) is True

    def test_no_tag_long_non_english(self):
        text = "zanimivo raziskovanje kaze velike ucinke brez pomembnih odstopanj " \
               "pri vseh skupinah bolnikov tudi kontrolnih"
        assert filter_language(mention(text=text)) is False

    def test_injectable_heuristic(self):
        assert filter_language(mention(text="whatever"), heuristic=lambda t: False) is False


class TestPlatform:
    def test_case_insensitive_known(self):
        assert parse_platform("Twitter") == TWITTER
        assert parse_platform("BLOGS") == BLOG

    def test_other_escape(self):
        p = parse_platform("Reddit")
        assert p.name == "reddit" and not p.is_known

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            parse_platform("  ")


class TestIngest:
    def test_empty_mentions(self):
        store = make_store([article_line()], [])
        assert store.mentions == {}
        assert list(store.iter_series()) == []

    def test_three_mentions_one_day(self):
        mentions = [
            mention_line("m1", source_id="s1"),
            mention_line("m2", source_id="s2"),
            mention_line("m3", source_id="s3"),
        ]
        store = make_store([article_line(article_id="10.1/x")], mentions)
        series = store.daily_series("10.1/x", TWITTER)
        assert series.counts == {dt.date(2016, 3, 5): 3}

    def test_duplicate_counted_once(self):
        mentions = [mention_line("m1"), mention_line("m2")]  # same source/text/day
        store = make_store([article_line()], mentions)
        assert len(store.mentions) == 1
        assert store.stats.mentions_duplicate == 1

    def test_unknown_article_skipped(self):
        store = make_store([article_line()], [mention_line("m1", article_id="nope")])
        assert store.stats.mentions_unknown_article == 1
        assert store.mentions == {}

    def test_short_abstract_skipped(self):
        store = make_store([article_line(abstract="too short")], [])
        assert store.stats.articles_short_abstract == 1
        assert store.articles == {}

    def test_bad_lines_counted_not_fatal(self):
        store = make_store(
            [article_line(), "{not json"], [mention_line("m1"), "[]", ""]
        )
        assert store.stats.articles_invalid == 1
        assert store.stats.mentions_invalid == 1
        assert store.stats.mentions_kept == 1

    def test_window_enforced(self):
        config = IngestConfig(
            window_start=dt.date(2016, 1, 1), window_end=dt.date(2016, 12, 31)
        )
        mentions = [
            mention_line("m1", timestamp="2015-12-31T23:00:00Z"),
            mention_line("m2", timestamp="2016-03-05T10:00:00Z"),
        ]
        store = make_store([article_line()], mentions, config)
        assert store.stats.mentions_outside_window == 1
        assert store.stats.mentions_kept == 1

    def test_textless_mentions_count_in_series(self):
        line = mention_line("m1")
        record = __import__("json").loads(line)
        del record["text"]
        store = make_store([article_line()], [__import__("json").dumps(record)])
        assert store.stats.mentions_with_text == 0
        assert store.daily_series("10.1/x", TWITTER).total() == 1

    def test_distinct_sources_both_kept(self):
        # identical text, same platform and day, different accounts
        mentions = [
            mention_line("m1", source_id="s1", text="same words"),
            mention_line("m2", source_id="s2", text="same words"),
        ]
        store = make_store([article_line()], mentions)
        assert len(store.mentions) == 2
        assert store.stats.mentions_duplicate == 0

    def test_idempotent_reingest(self):
        articles = [article_line()]
        mentions = [
            mention_line("m1", source_id="s1"),
            mention_line("m2", source_id="s2", text="other words entirely"),
        ]
        once = make_store(articles, mentions)
        twice = make_store(articles * 2, mentions * 2)
        assert once == twice

    def test_series_sum_equals_retained_mentions(self):
        mentions = [
            mention_line(f"m{i}", source_id=f"s{i}", platform=p, timestamp=ts)
            for i, (p, ts) in enumerate(
                [
                    ("twitter", "2016-03-05T10:00:00Z"),
                    ("twitter", "2016-03-06T10:00:00Z"),
                    ("news", "2016-03-05T10:00:00Z"),
                    ("blog", "2016-04-01T10:00:00Z"),
                ]
            )
        ]
        store = make_store([article_line()], mentions)
        total = sum(s.total() for s in store.iter_series())
        assert total == store.stats.mentions_kept == 4

    def test_unreadable_stream_fatal(self):
        class Boom:
            def __iter__(self):
                raise OSError("disk gone")

        with pytest.raises(IngestError):
            ingest(Boom(), [])


def test_parse_timestamp_variants():
    day = parse_timestamp("2016-03-05")
    assert day.date() == dt.date(2016, 3, 5)
    stamp = parse_timestamp("2016-03-05T23:59:00Z")
    assert stamp.tzinfo is not None
