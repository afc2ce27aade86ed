"""sciburst: burst-based measurement of information retention in science mentions.

The library ingests articles and their timestamped online mentions,
extracts ranked keyphrases from each abstract (graph ranking or RAKE),
scores every mention by the rank share of keyphrases it retains, detects
per-platform bursts of attention, assembles multi-platform burst
sequences, and reproduces the trajectory / platform / co-occurrence
analyses on any conforming corpus.
"""

from .analytics import (
    bootstrap_median_ci,
    cooccurrence_comparison,
    first_burst_distribution,
    group_median_by,
    heterogeneity_analysis,
    score_distribution,
    stratify_by_first_platform,
    trajectory_medians,
)
from .bursts import (
    Burst,
    BurstGroup,
    BurstParams,
    BurstSequence,
    build_sequence,
    detect_bursts,
    group_cooccurring,
    platform_threshold,
)
from .corpus import (
    BLOG,
    FACEBOOK,
    NEWS,
    TWITTER,
    WIKIPEDIA,
    ArticleRecord,
    CorpusStore,
    DailySeries,
    IngestConfig,
    MentionRecord,
    Platform,
    clean_text,
    dedup_key,
    filter_language,
    ingest,
    ingest_files,
    parse_platform,
)
from .keyphrase import (
    Keyphrase,
    KeyphraseSet,
    LemmaGraph,
    NoKeyphrasesError,
    build_lemma_graph,
    extract_candidates,
    extract_keyphrases,
    pagerank,
    rake_keyphrases,
    textrank_keyphrases,
)
from .pipeline import RunConfig, run_pipeline
from .retention import (
    RetentionScore,
    UnscorableBurstError,
    match_phrase,
    score_burst,
    score_burst_concat,
    score_mention,
)
from .synth import ArticlePlan, PlannedBurst, SynthSpec, generate_synthetic, uniform_spec
from .tagging import RuleTagger, Token, tag

__version__ = "0.1.0"
