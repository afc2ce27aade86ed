"""Ranked keyphrase extraction from abstracts.

Two methods share one output contract: a graph-ranking extractor (noun
chunks ranked by PageRank over a lemma co-occurrence graph) and RAKE
(stopword-delimited runs scored by word degree/frequency) as the
robustness alternative. Scores downstream only ever compare phrases of
one article against each other, so the two methods' rank scales need not
agree.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .stopwords import ENGLISH_STOPWORDS
from .tagging import (
    ADJ,
    NOUN,
    NUM,
    PROPN,
    Tagger,
    Token,
    split_sentences,
    tag,
    tokenize,
)

TEXTRANK = "textrank"
RAKE = "rake"
METHODS = (TEXTRANK, RAKE)

# A candidate ends in a noun-like token; adjectives may only lead or sit
# inside the span.
_HEAD_POS = frozenset({NOUN, PROPN, NUM})
_SPAN_POS = frozenset({ADJ, NOUN, PROPN, NUM})

MAX_SPAN_TOKENS = 6

Node = tuple[str, str]  # (lemma, pos)


class NoKeyphrasesError(ValueError):
    """The abstract yields no candidate phrases; exclude it from scoring."""


@dataclass
class LemmaGraph:
    """Undirected co-occurrence graph over (lemma, pos) content nodes."""

    nodes: set[Node] = field(default_factory=set)
    edges: dict[tuple[Node, Node], int] = field(default_factory=dict)

    def add_edge(self, u: Node, v: Node) -> None:
        if u == v:
            return
        key = (u, v) if u <= v else (v, u)
        self.edges[key] = self.edges.get(key, 0) + 1

    def weight(self, u: Node, v: Node) -> int:
        key = (u, v) if u <= v else (v, u)
        return self.edges.get(key, 0)


@dataclass(frozen=True)
class Keyphrase:
    lemma_form: str
    surface_form: str
    rank: float


@dataclass
class KeyphraseSet:
    article_id: str
    method: str
    phrases: list[Keyphrase]

    @property
    def total_rank(self) -> float:
        return sum(p.rank for p in self.phrases)

    def lemma_forms(self) -> set[str]:
        return {p.lemma_form for p in self.phrases}


@dataclass(frozen=True)
class Candidate:
    tokens: tuple[Token, ...]

    @property
    def lemma_form(self) -> str:
        return " ".join(t.lemma for t in self.tokens)

    @property
    def surface_form(self) -> str:
        return " ".join(t.surface for t in self.tokens)


def _split_long_span(tokens: list[Token]) -> list[list[Token]]:
    """Split spans longer than MAX_SPAN_TOKENS before their rightmost ADJ."""
    if len(tokens) <= MAX_SPAN_TOKENS:
        return [tokens]
    for i in range(len(tokens) - 1, 0, -1):
        if tokens[i].pos == ADJ:
            return _split_long_span(tokens[:i]) + _split_long_span(tokens[i:])
    return [tokens]


def extract_candidates(tokens: list[Token]) -> list[Candidate]:
    """Maximal (ADJ|NOUN|PROPN|NUM)*(NOUN|PROPN|NUM) spans per sentence.

    Over-long spans split at the rightmost adjective; duplicate lemma
    forms merge keeping the first surface form.
    """
    spans: list[list[Token]] = []
    run: list[Token] = []
    prev_sentence = None
    for token in tokens + [None]:  # sentinel flushes the last run
        same_sentence = token is not None and token.sentence_index == prev_sentence
        if token is not None and token.pos in _SPAN_POS:
            if run and not same_sentence:
                spans.append(run)
                run = []
            run.append(token)
            prev_sentence = token.sentence_index
        else:
            if run:
                spans.append(run)
                run = []
            prev_sentence = token.sentence_index if token is not None else None

    candidates: list[Candidate] = []
    seen: set[str] = set()
    for span in spans:
        while span and span[-1].pos not in _HEAD_POS:
            span = span[:-1]
        if not span:
            continue
        for part in _split_long_span(span):
            while part and part[-1].pos not in _HEAD_POS:
                part = part[:-1]
            if not part:
                continue
            cand = Candidate(tuple(part))
            if cand.lemma_form not in seen:
                seen.add(cand.lemma_form)
                candidates.append(cand)
    return candidates


def build_lemma_graph(tokens: list[Token], window: int = 3) -> LemmaGraph:
    """Connect content tokens co-occurring within `window` positions.

    Distance is measured on raw token positions (function words count),
    within one sentence; each co-occurrence adds 1 to the edge weight.
    """
    if window < 2:
        raise ValueError("window must be >= 2")
    graph = LemmaGraph()
    content = [t for t in tokens if t.is_content]
    for token in content:
        graph.nodes.add((token.lemma, token.pos))
    for i, left in enumerate(content):
        for right in content[i + 1:]:
            if right.sentence_index != left.sentence_index:
                break
            if right.token_index - left.token_index >= window:
                break
            graph.add_edge((left.lemma, left.pos), (right.lemma, right.pos))
    return graph


def pagerank(
    graph: LemmaGraph,
    damping: float = 0.85,
    eps: float = 1e-6,
    max_iter: int = 100,
) -> dict[Node, float]:
    """Weighted PageRank with uniform teleport.

    Power iteration stops when the L1 change drops below `eps`. Nodes
    without edges receive only teleport mass plus the uniform share of
    dangling mass; ranks sum to 1.
    """
    if not 0 < damping < 1:
        raise ValueError("damping must be in (0, 1)")
    nodes = sorted(graph.nodes)
    n = len(nodes)
    if n == 0:
        return {}
    strength: dict[Node, float] = {u: 0.0 for u in nodes}
    neighbors: dict[Node, list[tuple[Node, int]]] = {u: [] for u in nodes}
    for (u, v), w in graph.edges.items():
        strength[u] += w
        strength[v] += w
        neighbors[u].append((v, w))
        neighbors[v].append((u, w))

    ranks = {u: 1.0 / n for u in nodes}
    teleport = (1.0 - damping) / n
    for _ in range(max_iter):
        dangling = sum(ranks[u] for u in nodes if strength[u] == 0.0)
        new = {u: teleport + damping * dangling / n for u in nodes}
        for u in nodes:
            if strength[u] == 0.0:
                continue
            share = damping * ranks[u] / strength[u]
            for v, w in neighbors[u]:
                new[v] += share * w
        delta = sum(abs(new[u] - ranks[u]) for u in nodes)
        ranks = new
        if delta < eps:
            break
    return ranks


def _phrase_rank(candidate: Candidate, node_ranks: dict[Node, float]) -> float:
    total = sum(node_ranks.get((t.lemma, t.pos), 0.0) for t in candidate.tokens)
    return total / (1.0 + math.log(1.0 + len(candidate.tokens)))


def textrank_keyphrases(
    abstract: str,
    article_id: str = "",
    window: int = 3,
    damping: float = 0.85,
    eps: float = 1e-6,
    max_iter: int = 100,
    tagger: Tagger | None = None,
) -> KeyphraseSet:
    """Full graph-ranking pipeline: tag -> candidates -> graph -> ranks.

    A candidate's rank is the sum of its member node ranks discounted by
    1 + ln(1 + span length); longer phrases gain without length
    dominating. All candidates are kept — the retention score denominator
    is the whole set.
    """
    tokens = tag(abstract, tagger)
    candidates = extract_candidates(tokens)
    if not candidates:
        raise NoKeyphrasesError("no keyphrases")
    graph = build_lemma_graph(tokens, window=window)
    node_ranks = pagerank(graph, damping=damping, eps=eps, max_iter=max_iter)
    phrases = [
        Keyphrase(c.lemma_form, c.surface_form, _phrase_rank(c, node_ranks))
        for c in candidates
    ]
    phrases.sort(key=lambda p: (-p.rank, p.lemma_form))
    return KeyphraseSet(article_id=article_id, method=TEXTRANK, phrases=phrases)


_RAKE_SPLIT_RE = re.compile(r"[,;:()\[\]{}\"“”‘’/|&—–]|\s-\s|\.\.\.|…")


def _rake_candidate_runs(
    abstract: str,
    stopwords: frozenset[str] | set[str],
    tagger: Tagger | None,
) -> list[list[tuple[str, str]]]:
    """Runs of (lemma, surface) pairs delimited by punctuation/stopwords."""
    from .tagging import DEFAULT_TAGGER

    tagger = tagger or DEFAULT_TAGGER
    runs: list[list[tuple[str, str]]] = []
    for sentence in split_sentences(abstract):
        for chunk in _RAKE_SPLIT_RE.split(sentence):
            run: list[tuple[str, str]] = []
            for word in tokenize(chunk):
                if word.lower() in stopwords:
                    if run:
                        runs.append(run)
                    run = []
                else:
                    run.append((tagger.lemmatize(word), word))
            if run:
                runs.append(run)
    return runs


def rake_keyphrases(
    abstract: str,
    stopwords: frozenset[str] | set[str] = ENGLISH_STOPWORDS,
    article_id: str = "",
    tagger: Tagger | None = None,
) -> KeyphraseSet:
    """RAKE: degree/frequency word scores summed over candidate runs.

    A word's degree counts co-occurrences within candidates including
    itself, so an isolated two-word candidate scores 2 + 2 = 4.
    """
    if not stopwords:
        raise ValueError("stopword list must be non-empty")
    runs = _rake_candidate_runs(abstract, stopwords, tagger)
    if not runs:
        raise NoKeyphrasesError("no keyphrases")

    freq: dict[str, int] = {}
    degree: dict[str, int] = {}
    for run in runs:
        size = len(run)
        for lemma, _ in run:
            freq[lemma] = freq.get(lemma, 0) + 1
            degree[lemma] = degree.get(lemma, 0) + size
    word_score = {w: degree[w] / freq[w] for w in freq}

    phrases: list[Keyphrase] = []
    seen: set[str] = set()
    for run in runs:
        lemma_form = " ".join(lemma for lemma, _ in run)
        if lemma_form in seen:
            continue
        seen.add(lemma_form)
        surface_form = " ".join(surface for _, surface in run)
        rank = sum(word_score[lemma] for lemma, _ in run)
        phrases.append(Keyphrase(lemma_form, surface_form, rank))
    phrases.sort(key=lambda p: (-p.rank, p.lemma_form))
    return KeyphraseSet(article_id=article_id, method=RAKE, phrases=phrases)


def extract_keyphrases(
    abstract: str,
    method: str,
    article_id: str = "",
    tagger: Tagger | None = None,
) -> KeyphraseSet:
    """Dispatch by method name ("textrank" or "rake")."""
    if method == TEXTRANK:
        return textrank_keyphrases(abstract, article_id=article_id, tagger=tagger)
    if method == RAKE:
        return rake_keyphrases(abstract, article_id=article_id, tagger=tagger)
    raise ValueError(f"unknown method: {method!r}")
