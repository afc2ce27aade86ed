"""Sentence splitting, tokenization, POS tagging, and lemmatization.

Everything here is deterministic and rule based: a closed-class word list,
a handful of suffix heuristics, and a capitalization rule for proper nouns.
The tagger is injectable — any object satisfying the small ``Tagger``
contract (``tag_sentence`` + ``lemmatize``) can replace :class:`RuleTagger`
without touching the keyphrase or scoring code.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Protocol, Sequence

from .stopwords import ENGLISH_STOPWORDS

# Coarse POS tags.
NOUN = "NOUN"
PROPN = "PROPN"
ADJ = "ADJ"
VERB = "VERB"
NUM = "NUM"
OTHER = "OTHER"

CONTENT_POS = frozenset({NOUN, PROPN, ADJ, NUM})

# Numbers first so "95%CI" and "0.03" survive as single tokens; words keep
# hyphenated compounds and apostrophes.
TOKEN_RE = re.compile(
    r"\d+(?:[.,]\d+)*%?[A-Za-z]*"
    r"|[A-Za-z]+(?:[-'][A-Za-z0-9]+)*"
)

_SENT_BOUNDARY_RE = re.compile(r"[.!?]+(?=\s)")

# Lowercased, period stripped. Guard against splitting after these.
ABBREVIATIONS = frozenset(
    "e.g i.e etc vs al fig figs eq eqs ref refs dr mr mrs ms prof st no cf"
    " ca approx dept univ inc ltd co jr sr resp sec min max".split()
)

# Closed-class words: articles, prepositions, conjunctions, pronouns,
# auxiliaries, common adverbs. Everything here tags as OTHER.
FUNCTION_WORDS = frozenset(ENGLISH_STOPWORDS) | frozenset(
    "near amid out up down off well just still already never always often"
    " sometimes usually again then there here when where why how almost"
    " even much many rather quite really perhaps maybe ought need dare"
    " less least onto unto".split()
)

# Adjectives the suffix rules miss (mostly -ant/-ent/-er forms and
# quantifier-like modifiers that should stay inside noun chunks).
ADJ_WORDS = frozenset(
    "different significant important novel recent current various several"
    " numerous multiple high higher highest low lower lowest large larger"
    " largest small smaller smallest new newer old older early earlier late"
    " later long longer short shorter good better best bad worse worst great"
    " greater key main major minor common rare similar overall total strong"
    " stronger weak weaker robust broad wide narrow deep likely unlikely"
    " frequent prevalent prior previous further additional moderate severe"
    " mild acute chronic primary secondary preliminary randomised randomized"
    " consistent relevant apparent".split()
)

# Nouns that the -al/-ive suffix rules would otherwise misread.
NOUN_WORDS = frozenset(
    "trial animal hospital journal goal material interval signal protocol"
    " survival proposal approval removal arrival metal crystal individual"
    " professional capital mammal incentive objective alternative".split()
)

# Unambiguous verb forms (inflected forms only; base forms like "show" are
# too often nouns to be safe).
VERB_WORDS = frozenset(
    "says said goes went gone takes took taken makes made gets got gotten"
    " knows knew known sees saw seen comes came gives gave given tells told"
    " becomes became seems seemed keeps kept begins began begun brings"
    " brought finds found shows showed shown suggests suggested indicates"
    " indicated demonstrates demonstrated reveals revealed conducted"
    " performed remains remained leads led occurs occurred ran".split()
)

_ADJ_SUFFIXES = ("al", "ous", "ive", "ful", "less", "ish", "able", "ible")

# Irregular plurals and invariant forms for the suffix-stripping lemmatizer.
LEMMA_EXCEPTIONS = {
    "children": "child",
    "men": "man",
    "women": "woman",
    "mice": "mouse",
    "feet": "foot",
    "teeth": "tooth",
    "people": "person",
    "analyses": "analysis",
    "hypotheses": "hypothesis",
    "diagnoses": "diagnosis",
    "theses": "thesis",
    "crises": "crisis",
    "criteria": "criterion",
    "phenomena": "phenomenon",
    "bacteria": "bacterium",
    "data": "data",
    "media": "media",
    "species": "species",
    "series": "series",
    "news": "news",
    "diabetes": "diabetes",
    "this": "this",
    "is": "is",
    "was": "was",
    "has": "has",
    "its": "its",
    "as": "as",
    "does": "does",
    "yes": "yes",
    "thus": "thus",
    "us": "us",
    "versus": "versus",
}


@dataclass(frozen=True)
class Token:
    """One token of a tagged document."""

    surface: str
    lemma: str
    pos: str
    sentence_index: int
    token_index: int

    @property
    def is_content(self) -> bool:
        return self.pos in CONTENT_POS


class Tagger(Protocol):
    """Contract for pluggable taggers.

    Implementations must be safe to share across threads or cheap to
    clone per thread; :class:`RuleTagger` is stateless after
    construction.
    """

    def tag_sentence(self, words: Sequence[str]) -> list[str]:
        """Return one coarse POS tag per word."""
        ...

    def lemmatize(self, word: str) -> str:
        """Return the lowercase lemma of one word."""
        ...


def lemmatize(word: str) -> str:
    """Suffix-stripping lemmatizer: plural -s/-es, -ies -> y, exceptions."""
    lower = word.lower()
    if lower in LEMMA_EXCEPTIONS:
        return LEMMA_EXCEPTIONS[lower]
    if len(lower) > 4 and lower.endswith("ies"):
        return lower[:-3] + "y"
    if len(lower) > 4 and lower.endswith(("sses", "xes", "zes", "ches", "shes")):
        return lower[:-2]
    if len(lower) > 3 and lower.endswith("s") and not lower.endswith(("ss", "us", "is")):
        return lower[:-1]
    return lower


def _has_internal_capital(word: str) -> bool:
    return any(c.isupper() for c in word[1:])


class RuleTagger:
    """Default lexicon-plus-suffix tagger.

    Resolution order per token: closed-class lexicon -> digit-leading NUM
    -> internal capitals PROPN ("QoL", "PubMed") -> capitalized
    mid-sentence PROPN -> noun/adjective/verb lexicons -> adjective
    suffixes -> NOUN. A second right-to-left pass retags default-NOUN
    words ending in -ed as ADJ when they directly precede another content
    token ("randomised controlled trials").
    """

    def tag_sentence(self, words: Sequence[str]) -> list[str]:
        tags = [self._tag_word(w, first=i == 0) for i, w in enumerate(words)]
        for i in range(len(words) - 2, -1, -1):
            if (
                tags[i] == NOUN
                and words[i].lower().endswith("ed")
                and tags[i + 1] in (NOUN, PROPN, ADJ, NUM)
                and words[i].lower() not in NOUN_WORDS
            ):
                tags[i] = ADJ
        return tags

    def lemmatize(self, word: str) -> str:
        return lemmatize(word)

    def _tag_word(self, word: str, first: bool) -> str:
        lower = word.lower()
        if lower in FUNCTION_WORDS:
            return OTHER
        if word[0].isdigit():
            return NUM
        if _has_internal_capital(word):
            return PROPN
        if word[0].isupper() and not first:
            return PROPN
        if lower in NOUN_WORDS:
            return NOUN
        if lower in ADJ_WORDS:
            return ADJ
        if lower in VERB_WORDS:
            return VERB
        if lower.endswith(_ADJ_SUFFIXES):
            return ADJ
        return NOUN


DEFAULT_TAGGER = RuleTagger()


def split_sentences(text: str) -> list[str]:
    """Split on terminal punctuation, guarding common abbreviations.

    A boundary is kept only when the next non-space character is an
    uppercase letter, a digit, or an opening quote, and the word before
    the period is not on the abbreviation guard list.
    """
    if not text:
        return []
    sentences = []
    start = 0
    for match in _SENT_BOUNDARY_RE.finditer(text):
        end = match.end()
        before = text[start:match.start()]
        word = re.findall(r"[A-Za-z.]+$", before)
        if word and word[0].rstrip(".").lower() in ABBREVIATIONS:
            continue
        rest = text[end:].lstrip()
        if rest and not (rest[0].isupper() or rest[0].isdigit() or rest[0] in "\"'("):
            continue
        chunk = text[start:end].strip()
        if chunk:
            sentences.append(chunk)
        start = end
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def tokenize(sentence: str) -> list[str]:
    """Extract word/number tokens; punctuation is dropped."""
    return TOKEN_RE.findall(sentence)


def tag(document: str, tagger: Tagger | None = None) -> list[Token]:
    """Segment, tokenize, and tag a cleaned document.

    Token indices run over the whole document so distances between
    tokens of one sentence can be read off directly.
    """
    tagger = tagger or DEFAULT_TAGGER
    tokens: list[Token] = []
    index = 0
    for s_idx, sentence in enumerate(split_sentences(document)):
        words = tokenize(sentence)
        if not words:
            continue
        tags = tagger.tag_sentence(words)
        for word, pos in zip(words, tags):
            tokens.append(
                Token(
                    surface=word,
                    lemma=tagger.lemmatize(word),
                    pos=pos,
                    sentence_index=s_idx,
                    token_index=index,
                )
            )
            index += 1
    return tokens


def document_lemmas(document: str, tagger: Tagger | None = None) -> list[str]:
    """Lemma sequence of a document, function words included."""
    return [t.lemma for t in tag(document, tagger)]
