"""End-to-end pipeline: ingest -> keyphrases -> scores -> bursts -> reports.

Stages persist their results as line-delimited dumps next to a sidecar
digest of the inputs and parameters that produced them, so a rerun with
unchanged inputs reuses the cache. All outputs are written atomically
and deterministically: identical (inputs, config, seed) produce
byte-identical files regardless of worker count.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import analytics
from .bursts import (
    THRESHOLD_NOTE,
    Burst,
    BurstParams,
    BurstSequence,
    build_sequence,
    detect_bursts,
    group_cooccurring,
)
from .corpus import (
    CorpusStore,
    IngestConfig,
    Platform,
    filter_language,
    ingest_files,
)
from .keyphrase import (
    METHODS,
    Keyphrase,
    KeyphraseSet,
    NoKeyphrasesError,
    extract_keyphrases,
)
from .retention import RetentionScore, UnscorableBurstError, score_burst, score_lemmas
from .tagging import document_lemmas

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
REPORTS_DIR = "reports"


class ConfigError(ValueError):
    """The run configuration is unusable."""


class EmptyCorpusError(RuntimeError):
    """Ingest produced no usable articles or mentions."""


@dataclass
class RunConfig:
    articles_path: Path
    mentions_path: Path
    out_dir: Path
    method: str = "both"  # textrank | rake | both
    burst_params: BurstParams = field(default_factory=BurstParams)
    ingest: IngestConfig = field(default_factory=IngestConfig)
    min_cases: int = 200
    resamples: int = 1000
    level: float = 0.95
    seed: int = 0
    workers: int = 1
    english_only: bool = True
    grouping_mode: str = "overlap"
    per_group_trajectories: bool = False
    max_trajectory_length: int = 10
    bin_width: float = 0.01

    def methods(self) -> tuple[str, ...]:
        if self.method == "both":
            return METHODS
        if self.method in METHODS:
            return (self.method,)
        raise ConfigError(f"unknown method {self.method!r}")

    def validate(self) -> None:
        self.methods()
        for path in (self.articles_path, self.mentions_path):
            if not Path(path).is_file():
                raise ConfigError(f"input file not found: {path}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.seed is None:
            raise ConfigError("a seed is required when bootstrap analyses run")
        if not 0 < self.level < 1:
            raise ConfigError("level must be in (0, 1)")
        if self.min_cases < 1:
            raise ConfigError("min_cases must be >= 1")


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8", newline="")
    os.replace(tmp, path)


def _write_jsonl(path: Path, rows: list[dict]) -> None:
    _atomic_write(path, "".join(json.dumps(r) + "\n" for r in rows))


def _read_jsonl(path: Path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def _file_digest(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def corpus_digest(config: RunConfig) -> str:
    return hashlib.sha256(
        (
            _file_digest(config.articles_path) + _file_digest(config.mentions_path)
        ).encode()
    ).hexdigest()


def _stage_digest(config: RunConfig, stage: str, extra: dict) -> str:
    payload = {"stage": stage, "corpus": corpus_digest(config), **extra}
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


def _cache_fresh(path: Path, meta_path: Path, digest: str) -> bool:
    if not path.is_file() or not meta_path.is_file():
        return False
    try:
        return json.loads(meta_path.read_text())["digest"] == digest
    except (ValueError, KeyError):
        return False


def _write_meta(meta_path: Path, digest: str) -> None:
    _atomic_write(meta_path, json.dumps({"digest": digest}) + "\n")


# ---------------------------------------------------------------------------
# keyphrase and mention-score stages (parallel per article)

def _parallel_by_article(worker, payloads: list[tuple], workers: int) -> list:
    """Map over articles and merge in article_id order.

    Payloads must start with the article_id; output order is therefore
    independent of the worker count.
    """
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(worker, payloads, chunksize=8))
    else:
        results = [worker(p) for p in payloads]
    results.sort(key=lambda r: r[0])
    return results


def _extract_article(payload: tuple) -> tuple[str, list[dict]]:
    """Worker: keyphrase rows for one article's abstract."""
    article_id, abstract, methods = payload
    rows: list[dict] = []
    for method in methods:
        try:
            kps = extract_keyphrases(abstract, method, article_id=article_id)
        except NoKeyphrasesError:
            logger.warning("%s: no %s keyphrases; excluded from scoring",
                           article_id, method)
            continue
        for p in kps.phrases:
            rows.append(
                {
                    "article_id": article_id,
                    "method": method,
                    "lemma_form": p.lemma_form,
                    "surface_form": p.surface_form,
                    "rank": p.rank,
                }
            )
    return (article_id, rows)


def stage_keyphrases(config: RunConfig, store: CorpusStore) -> list[dict]:
    """Extract keyphrases per article, reusing the dump when fresh."""
    out = Path(config.out_dir)
    path, meta = out / "keyphrases.jsonl", out / "keyphrases.meta.json"
    digest = _stage_digest(
        config,
        "keyphrases",
        {
            "methods": list(config.methods()),
            "min_abstract_chars": config.ingest.min_abstract_chars,
        },
    )
    if _cache_fresh(path, meta, digest):
        logger.info("keyphrases: reusing cached dump")
        return _read_jsonl(path)
    payloads = [
        (aid, store.article(aid).abstract, config.methods())
        for aid in sorted(store.articles)
    ]
    results = _parallel_by_article(_extract_article, payloads, config.workers)
    rows = [row for _, chunk in results for row in chunk]
    _write_jsonl(path, rows)
    _write_meta(meta, digest)
    return rows


def _score_article(payload: tuple) -> tuple[str, list[dict]]:
    """Worker: score rows for one article's text-bearing mentions."""
    article_id, mentions, phrase_rows = payload
    sets = load_keyphrase_sets(phrase_rows)
    rows: list[dict] = []
    for mention_id, platform, text in mentions:
        lemmas = [l.lower() for l in document_lemmas(text)]
        for (_, method), kps in sorted(sets.items()):
            result = score_lemmas(kps, lemmas)
            rows.append(
                {
                    "mention_id": mention_id,
                    "article_id": article_id,
                    "platform": platform,
                    "method": method,
                    "value": result.value,
                }
            )
    return (article_id, rows)


def stage_scores(
    config: RunConfig, store: CorpusStore, phrase_rows: list[dict]
) -> list[dict]:
    """Score every text-bearing (and, by default, English) mention.

    Mentions without text never reach this stage: missing text is a
    coverage fact, not information loss.
    """
    out = Path(config.out_dir)
    path, meta = out / "mention_scores.jsonl", out / "mention_scores.meta.json"
    digest = _stage_digest(
        config,
        "scores",
        {
            "methods": list(config.methods()),
            "english_only": config.english_only,
            "min_abstract_chars": config.ingest.min_abstract_chars,
        },
    )
    if _cache_fresh(path, meta, digest):
        logger.info("scores: reusing cached dump")
        return _read_jsonl(path)
    phrases_by_article: dict[str, list[dict]] = {}
    for row in phrase_rows:
        phrases_by_article.setdefault(row["article_id"], []).append(row)
    payloads = []
    for article_id in sorted(store.articles):
        if article_id not in phrases_by_article:
            continue
        mentions = []
        for m in sorted(store.mentions_of(article_id), key=lambda m: m.mention_id):
            if not m.text:
                continue
            if config.english_only and not filter_language(m):
                continue
            mentions.append((m.mention_id, m.platform.name, m.text))
        payloads.append((article_id, mentions, phrases_by_article[article_id]))
    results = _parallel_by_article(_score_article, payloads, config.workers)
    rows = [row for _, chunk in results for row in chunk]
    _write_jsonl(path, rows)
    _write_meta(meta, digest)
    return rows


def load_keyphrase_sets(rows: list[dict]) -> dict[tuple[str, str], KeyphraseSet]:
    """Rebuild KeyphraseSets from dump rows keyed by (article, method)."""
    sets: dict[tuple[str, str], KeyphraseSet] = {}
    for row in rows:
        key = (row["article_id"], row["method"])
        kps = sets.setdefault(
            key, KeyphraseSet(article_id=key[0], method=key[1], phrases=[])
        )
        kps.phrases.append(
            Keyphrase(row["lemma_form"], row["surface_form"], float(row["rank"]))
        )
    return sets


# ---------------------------------------------------------------------------
# burst stage

def assemble_sequences(
    store: CorpusStore,
    config: RunConfig,
    mention_scores: dict[str, float],
) -> dict[str, BurstSequence]:
    """Detect bursts, attach burst scores for one method, group, sequence."""
    sequences: dict[str, BurstSequence] = {}
    for article_id in sorted(store.articles):
        bursts: list[Burst] = []
        for platform in store.platforms_of(article_id):
            series = store.daily_series(article_id, platform)
            ids_by_day = store.mention_ids_by_day(article_id, platform)
            bursts.extend(detect_bursts(series, config.burst_params, ids_by_day))
        if not bursts:
            continue
        for burst in bursts:
            values = [
                RetentionScore(mention_scores[mid], "", 0, 0)
                for mid in burst.mention_ids
                if mid in mention_scores
            ]
            try:
                burst.score = score_burst(values)
            except UnscorableBurstError:
                burst.score = None
        groups = group_cooccurring(bursts, mode=config.grouping_mode)
        sequences[article_id] = build_sequence(groups)
    return sequences


def burst_dump_rows(sequences: dict[str, BurstSequence]) -> list[dict]:
    rows = []
    for article_id in sorted(sequences):
        seq = sequences[article_id]
        for group_id, group in enumerate(seq.groups, start=1):
            for burst in sorted(group.bursts, key=Burst.sort_key):
                rows.append(
                    {
                        "article_id": burst.article_id,
                        "platform": burst.platform.name,
                        "start_day": burst.start_day.isoformat(),
                        "end_day": burst.end_day.isoformat(),
                        "peak_day": burst.peak_day.isoformat(),
                        "size": burst.size,
                        "score": burst.score,
                        "sequence_position": burst.position,
                        "group_id": group_id,
                        "cooccurring": group.cooccurring,
                    }
                )
    return rows


def sequence_dump_rows(sequences: dict[str, BurstSequence]) -> list[dict]:
    rows = []
    for article_id in sorted(sequences):
        seq = sequences[article_id]
        rows.append(
            {
                "article_id": article_id,
                "length": seq.length,
                "platform_count": seq.platform_count,
                "n_bursts": len(seq.bursts()),
                "first_platforms": sorted(
                    p.name for p in seq.groups[0].platforms
                ),
            }
        )
    return rows


def stage_bursts(
    config: RunConfig,
    store: CorpusStore,
    score_rows: list[dict],
) -> dict[str, dict[str, BurstSequence]]:
    """Per-method burst sequences, dumped to bursts_/sequences_<method>.jsonl."""
    out = Path(config.out_dir)
    by_method: dict[str, dict[str, BurstSequence]] = {}
    for method in config.methods():
        scores = {
            r["mention_id"]: float(r["value"])
            for r in score_rows
            if r["method"] == method
        }
        sequences = assemble_sequences(store, config, scores)
        by_method[method] = sequences
        _write_jsonl(out / f"bursts_{method}.jsonl", burst_dump_rows(sequences))
        _write_jsonl(out / f"sequences_{method}.jsonl", sequence_dump_rows(sequences))
    return by_method


# ---------------------------------------------------------------------------
# report stage

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def write_reports(
    config: RunConfig,
    store: CorpusStore,
    by_method: dict[str, dict[str, BurstSequence]],
) -> dict:
    """Emit every report table; returns summary counts for the manifest.

    Column orders are fixed:
      trajectories.csv: method,length,position,n_bursts,median,ci_low,ci_high,valid
      trajectories_by_first_platform.csv: method,first_platform,length,position,
          n_bursts,median,ci_low,ci_high,valid
      platforms.csv: method,platform,n_bursts,median_score,pct_mentions_in_bursts,
          n_first,pct_first,expected_pct_first,n_cooccurring,median_cooccurring,
          median_solo
      heterogeneity.csv: method,length,platform_count,n_bursts,median
      score_summary.csv: method,n_scored,zero_fraction,max_score
      score_histogram.csv: method,bin_low,bin_high,count
      disciplines.csv: method,label,n_bursts,median
    """
    reports = Path(config.out_dir) / REPORTS_DIR
    reports.mkdir(parents=True, exist_ok=True)
    counts: dict = {}

    traj_rows, strat_rows, platform_rows = [], [], []
    het_rows, hist_rows, summary_rows, disc_rows = [], [], [], []

    for method in config.methods():
        sequences = list(by_method[method].values())
        all_groups = [g for s in sequences for g in s.groups]
        all_bursts = [b for s in sequences for b in s.bursts()]
        counts[method] = {
            "sequences": len(sequences),
            "bursts": len(all_bursts),
            "scored_bursts": sum(1 for b in all_bursts if b.score is not None),
        }

        for length in range(2, config.max_trajectory_length + 1):
            report = analytics.trajectory_medians(
                sequences,
                length,
                min_cases=config.min_cases,
                resamples=config.resamples,
                level=config.level,
                seed=config.seed,
                per_group=config.per_group_trajectories,
                method=method,
            )
            for stat in report.positions:
                traj_rows.append(
                    [method, length, stat.position, stat.n_bursts, stat.median,
                     stat.ci_low, stat.ci_high, report.valid]
                )
            strata = analytics.stratify_by_first_platform(
                sequences,
                length,
                min_cases=config.min_cases,
                resamples=config.resamples,
                level=config.level,
                seed=config.seed,
                per_group=config.per_group_trajectories,
                method=method,
            )
            for platform in sorted(strata):
                srep = strata[platform]
                for stat in srep.positions:
                    strat_rows.append(
                        [method, platform.name, length, stat.position,
                         stat.n_bursts, stat.median, stat.ci_low, stat.ci_high,
                         srep.valid]
                    )

        first = {s.platform: s for s in analytics.first_burst_distribution(sequences)}
        cooc = {s.platform: s for s in analytics.cooccurrence_comparison(all_groups)}
        mentions_by_platform = store.mentions_by_platform()
        burst_mentions: dict[Platform, int] = {}
        scores_by_platform: dict[Platform, list[float]] = {}
        burst_counts: dict[Platform, int] = {}
        for burst in all_bursts:
            burst_counts[burst.platform] = burst_counts.get(burst.platform, 0) + 1
            burst_mentions[burst.platform] = (
                burst_mentions.get(burst.platform, 0) + burst.size
            )
            if burst.score is not None:
                scores_by_platform.setdefault(burst.platform, []).append(burst.score)
        for platform in sorted(burst_counts):
            scores = scores_by_platform.get(platform, [])
            fstat = first.get(platform)
            cstat = cooc.get(platform)
            total_mentions = mentions_by_platform.get(platform, 0)
            platform_rows.append(
                [
                    method,
                    platform.name,
                    burst_counts[platform],
                    statistics.median(scores) if scores else None,
                    (100.0 * burst_mentions[platform] / total_mentions)
                    if total_mentions
                    else 0.0,
                    fstat.n_first if fstat else 0,
                    fstat.observed_pct if fstat else 0.0,
                    fstat.expected_pct if fstat else 0.0,
                    cstat.n_cooccurring if cstat else 0,
                    cstat.median_cooccurring if cstat else None,
                    cstat.median_solo if cstat else None,
                ]
            )

        for cell in analytics.heterogeneity_analysis(sequences).values():
            het_rows.append(
                [method, cell.length, cell.platform_count, cell.n_bursts, cell.median]
            )

        dist = analytics.score_distribution(all_bursts, bin_width=config.bin_width)
        summary_rows.append(
            [method, dist.n_scored, dist.zero_fraction, dist.max_score]
        )
        for i, count in enumerate(dist.bin_counts):
            hist_rows.append(
                [method, dist.bin_edges[i], dist.bin_edges[i + 1], count]
            )

        for label, (n, median) in analytics.group_median_by(
            all_bursts, store.articles
        ).items():
            disc_rows.append([method, label, n, median])

    _write_csv(
        reports / "trajectories.csv",
        ["method", "length", "position", "n_bursts", "median", "ci_low",
         "ci_high", "valid"],
        traj_rows,
    )
    _write_csv(
        reports / "trajectories_by_first_platform.csv",
        ["method", "first_platform", "length", "position", "n_bursts", "median",
         "ci_low", "ci_high", "valid"],
        strat_rows,
    )
    _write_csv(
        reports / "platforms.csv",
        ["method", "platform", "n_bursts", "median_score",
         "pct_mentions_in_bursts", "n_first", "pct_first", "expected_pct_first",
         "n_cooccurring", "median_cooccurring", "median_solo"],
        platform_rows,
    )
    _write_csv(
        reports / "heterogeneity.csv",
        ["method", "length", "platform_count", "n_bursts", "median"],
        het_rows,
    )
    _write_csv(
        reports / "score_summary.csv",
        ["method", "n_scored", "zero_fraction", "max_score"],
        summary_rows,
    )
    _write_csv(
        reports / "score_histogram.csv",
        ["method", "bin_low", "bin_high", "count"],
        hist_rows,
    )
    _write_csv(
        reports / "disciplines.csv",
        ["method", "label", "n_bursts", "median"],
        disc_rows,
    )
    return counts


def _manifest_params(config: RunConfig) -> dict:
    # Worker count is an execution detail, deliberately left out so runs
    # with different parallelism produce identical manifests.
    params = {
        "method": config.method,
        "min_cases": config.min_cases,
        "resamples": config.resamples,
        "level": config.level,
        "seed": config.seed,
        "english_only": config.english_only,
        "grouping_mode": config.grouping_mode,
        "per_group_trajectories": config.per_group_trajectories,
        "bin_width": config.bin_width,
        "min_abstract_chars": config.ingest.min_abstract_chars,
        "burst_params": {
            "base_threshold": config.burst_params.base_threshold,
            "min_daily": {
                p.name: v for p, v in sorted(config.burst_params.min_daily.items())
            },
            "elevation_ratio": config.burst_params.elevation_ratio,
            "window": config.burst_params.window,
            "min_burst_mentions": config.burst_params.min_burst_mentions,
            "surrounding_stat": config.burst_params.surrounding_stat,
        },
    }
    return params


def write_manifest(
    config: RunConfig,
    store: CorpusStore,
    report_counts: dict,
    status: str = "complete",
) -> Path:
    manifest = {
        "status": status,
        "corpus_digest": corpus_digest(config),
        "parameters": _manifest_params(config),
        "counts": {"ingest": store.stats.as_dict(), "reports": report_counts},
        "notes": [THRESHOLD_NOTE],
    }
    path = Path(config.out_dir) / MANIFEST_NAME
    _atomic_write(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def run_pipeline(config: RunConfig) -> Path:
    """Execute every stage; returns the manifest path.

    Raises ConfigError / IngestError / EmptyCorpusError for the failure
    classes the CLI maps to distinct exit codes.
    """
    config.validate()
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    store = ingest_corpus(config)
    # a failed run leaves the manifest at "running", marking any files on
    # disk as incomplete; the final write below replaces it atomically
    write_manifest(config, store, {}, status="running")
    phrase_rows = stage_keyphrases(config, store)
    score_rows = stage_scores(config, store, phrase_rows)
    by_method = stage_bursts(config, store, score_rows)
    report_counts = write_reports(config, store, by_method)
    return write_manifest(config, store, report_counts)


def ingest_corpus(config: RunConfig) -> CorpusStore:
    """Ingest and insist on a non-empty corpus."""
    store = ingest_files(config.articles_path, config.mentions_path, config.ingest)
    if not store.articles or not store.mentions:
        raise EmptyCorpusError(
            f"no usable corpus: {store.stats.articles_kept} articles, "
            f"{store.stats.mentions_kept} mentions"
        )
    return store
