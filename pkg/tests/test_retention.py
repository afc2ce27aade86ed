import random

import pytest

from sciburst.keyphrase import (
    Keyphrase,
    KeyphraseSet,
    rake_keyphrases,
    textrank_keyphrases,
)
from sciburst.retention import (
    RetentionScore,
    UnscorableBurstError,
    match_phrase,
    score_burst,
    score_burst_concat,
    score_mention,
)
from sciburst.tagging import document_lemmas


def make_set(ranks, method="textrank"):
    phrases = [
        Keyphrase(lemma, lemma, rank) for lemma, rank in ranks.items()
    ]
    return KeyphraseSet("a1", method, phrases)


class TestMatchPhrase:
    def test_contiguous_match(self):
        phrase = Keyphrase("control group", "control group", 1.0)
        assert match_phrase(phrase, ["the", "control", "group", "was"]) is True

    def test_order_matters(self):
        phrase = Keyphrase("control group", "control group", 1.0)
        assert match_phrase(phrase, ["group", "control"]) is False

    def test_lemma_level_match(self):
        # "trials" lemmatizes to "trial"; so does "a trial" in the mention
        phrase = Keyphrase("trial", "trials", 1.0)
        lemmas = [l.lower() for l in document_lemmas("a trial")]
        assert match_phrase(phrase, lemmas) is True

    def test_gap_breaks_match(self):
        phrase = Keyphrase("control group", "control group", 1.0)
        assert match_phrase(phrase, ["control", "of", "group"]) is False


class TestScoreMention:
    def test_all_phrases_matched(self):
        ks = make_set({"cancer": 0.5, "therapy": 0.5})
        score = score_mention(ks, "New cancer therapy works")
        assert score.value == pytest.approx(1.0)
        assert score.matched == score.total == 2

    def test_no_phrase_matched(self):
        ks = make_set({"cancer": 0.5, "therapy": 0.5})
        assert score_mention(ks, "totally unrelated words").value == 0.0

    def test_partial_rank_sum(self):
        ks = make_set({"alpha": 0.5, "beta": 0.3, "gamma": 0.2})
        score = score_mention(ks, "alpha and gamma only")
        assert score.value == pytest.approx(0.7, abs=1e-12)
        assert score.matched == 2

    def test_empty_text_scores_zero(self):
        ks = make_set({"cancer": 1.0})
        assert score_mention(ks, "").value == 0.0

    def test_zero_total_rank_rejected(self):
        ks = make_set({"cancer": 0.0})
        with pytest.raises(ValueError):
            score_mention(ks, "cancer")

    def test_abstract_scores_one_against_itself(self, fixture_abstract):
        for extractor in (textrank_keyphrases, rake_keyphrases):
            ks = extractor(fixture_abstract)
            score = score_mention(ks, fixture_abstract)
            assert score.value == pytest.approx(1.0, abs=1e-9)
            assert score.matched == score.total

    def test_monotone_under_phrase_append(self, fixture_abstract):
        ks = textrank_keyphrases(fixture_abstract)
        rng = random.Random(5)
        base_texts = [
            "short note",
            "the control group said nothing relevant",
            "",
            "cancer trials improved outcomes somewhat",
        ]
        for text in base_texts:
            before = score_mention(ks, text).value
            for _ in range(5):
                phrase = rng.choice(ks.phrases)
                text = text + " " + phrase.surface_form
                after = score_mention(ks, text).value
                assert after >= before - 1e-12
                before = after

    def test_bounds(self, fixture_abstract):
        ks = rake_keyphrases(fixture_abstract)
        rng = random.Random(9)
        words = fixture_abstract.split()
        for _ in range(25):
            sample = " ".join(rng.choice(words) for _ in range(rng.randint(0, 30)))
            value = score_mention(ks, sample).value
            assert 0.0 <= value <= 1.0

    def test_scale_free_within_article(self):
        ks = make_set({"alpha": 0.5, "beta": 0.3, "gamma": 0.2})
        scaled = make_set({"alpha": 5.0, "beta": 3.0, "gamma": 2.0})
        for text in ("alpha beta", "gamma", "nothing", "alpha beta gamma"):
            assert score_mention(ks, text).value == pytest.approx(
                score_mention(scaled, text).value, abs=1e-12
            )


class TestScoreBurst:
    def test_odd_median(self):
        scores = [RetentionScore(v, "textrank", 0, 0) for v in (0.1, 0.2, 0.3)]
        assert score_burst(scores) == pytest.approx(0.2)

    def test_even_mean_of_middles(self):
        scores = [RetentionScore(v, "textrank", 0, 0) for v in (0.1, 0.3)]
        assert score_burst(scores) == pytest.approx(0.2)

    def test_median_resists_outlier(self):
        scores = [RetentionScore(v, "textrank", 0, 0) for v in (0.0, 0.0, 0.9)]
        assert score_burst(scores) == pytest.approx(0.0)

    def test_empty_is_unscorable(self):
        with pytest.raises(UnscorableBurstError):
            score_burst([])


class TestScoreBurstConcat:
    def test_single_mention_equals_score_mention(self):
        ks = make_set({"alpha": 0.6, "beta": 0.4})
        text = "alpha talk"
        assert score_burst_concat(ks, [text]) == pytest.approx(
            score_mention(ks, text).value
        )

    def test_disjoint_coverage_inflates(self):
        # mentions covering {alpha} and {gamma}: concat 0.7 vs median 0.35
        ks = make_set({"alpha": 0.5, "beta": 0.3, "gamma": 0.2})
        texts = ["alpha here", "gamma there"]
        concat = score_burst_concat(ks, texts)
        per_mention = [score_mention(ks, t) for t in texts]
        median = score_burst(per_mention)
        assert concat == pytest.approx(0.7, abs=1e-12)
        assert median == pytest.approx(0.35, abs=1e-12)
        assert concat >= median

    def test_zero_match(self):
        ks = make_set({"alpha": 1.0})
        assert score_burst_concat(ks, ["nothing", "here"]) == 0.0

    def test_empty_list_unscorable(self):
        with pytest.raises(UnscorableBurstError):
            score_burst_concat(make_set({"alpha": 1.0}), [])

    def test_concat_never_below_median(self, fixture_abstract):
        ks = textrank_keyphrases(fixture_abstract)
        rng = random.Random(13)
        surfaces = [p.surface_form for p in ks.phrases]
        for _ in range(20):
            texts = []
            for _ in range(rng.randint(1, 5)):
                chosen = rng.sample(surfaces, rng.randint(0, 4))
                texts.append("They mention " + " and ".join(chosen) if chosen else "nothing")
            concat = score_burst_concat(ks, texts)
            median = score_burst([score_mention(ks, t) for t in texts])
            assert concat >= median - 1e-12
