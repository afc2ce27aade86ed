"""Information retention scores: rank share of abstract keyphrases found in a mention.

score = sum(ranks of abstract keyphrases found in the text) /
        sum(ranks of all abstract keyphrases)

1 means every keyphrase was found, 0 means none. Matching is a
case-insensitive, lemma-level, contiguous exact match; synonym handling
is deliberately out of scope.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass

from .keyphrase import Keyphrase, KeyphraseSet
from .tagging import Tagger, document_lemmas


class UnscorableBurstError(ValueError):
    """No scored mention is available to aggregate."""


@dataclass(frozen=True)
class RetentionScore:
    value: float
    method: str
    matched: int
    total: int


def match_phrase(phrase: Keyphrase, mention_lemmas: list[str]) -> bool:
    """True iff the phrase's lemmas occur contiguously in the mention."""
    needle = phrase.lemma_form.lower().split()
    if not needle:
        return False
    n, m = len(mention_lemmas), len(needle)
    for i in range(n - m + 1):
        if mention_lemmas[i:i + m] == needle:
            return True
    return False


def score_lemmas(keyphrases: KeyphraseSet, lemmas: list[str]) -> RetentionScore:
    """Score an already-lemmatized mention against a keyphrase set."""
    total_rank = keyphrases.total_rank
    if total_rank <= 0.0:
        raise ValueError("keyphrase set has zero total rank")
    matched_rank = 0.0
    matched = 0
    for phrase in keyphrases.phrases:
        if lemmas and match_phrase(phrase, lemmas):
            matched_rank += phrase.rank
            matched += 1
    return RetentionScore(
        value=matched_rank / total_rank,
        method=keyphrases.method,
        matched=matched,
        total=len(keyphrases.phrases),
    )


def score_mention(
    keyphrases: KeyphraseSet,
    mention_text: str,
    tagger: Tagger | None = None,
) -> RetentionScore:
    """Score one mention against an article's keyphrase set.

    The mention is run through the same tokenize/lemmatize pipeline as
    the abstract, so "trials" in the abstract matches "a trial" in the
    mention. Empty text scores 0; a zero total rank is a contract
    violation on the caller's side.
    """
    lemmas = [l.lower() for l in document_lemmas(mention_text, tagger)]
    return score_lemmas(keyphrases, lemmas)


def score_burst(scores: list[RetentionScore]) -> float:
    """Burst-level score: the median of the member mention scores.

    The median deliberately resists a single high-scoring mention pulling
    up an otherwise low-retention burst.
    """
    if not scores:
        raise UnscorableBurstError("burst has no scored mentions")
    return statistics.median(s.value for s in scores)


def score_burst_concat(
    keyphrases: KeyphraseSet,
    mention_texts: list[str],
    tagger: Tagger | None = None,
) -> float:
    """Alternative burst score: all mention texts scored as one document.

    Diagnostic only. A phrase found in any single mention counts for the
    whole burst, so this never falls below the median-based score.
    """
    if not mention_texts:
        raise UnscorableBurstError("burst has no mention texts")
    joined = ". ".join(t.strip() for t in mention_texts)
    return score_mention(keyphrases, joined, tagger).value
