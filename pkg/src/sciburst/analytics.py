"""Aggregate analyses over scored, grouped bursts.

All functions here are read-only over their inputs and deterministic
given (data, params, seed): every bootstrap call derives its RNG stream
from the base seed plus stable coordinates (length, position, stratum),
so serial and parallel runs agree.
"""

from __future__ import annotations

import statistics
import zlib
from dataclasses import dataclass, field

import numpy as np

from .bursts import Burst, BurstGroup, BurstSequence
from .corpus import ArticleRecord, Platform

UNCATEGORIZED = "Uncategorized"


def bootstrap_median_ci(
    values: list[float],
    resamples: int = 1000,
    level: float = 0.95,
    seed: int | tuple = 0,
) -> tuple[float, float]:
    """Seeded percentile bootstrap of the median.

    Returns the (1-level)/2 and 1-(1-level)/2 empirical quantiles of the
    resampled medians. Constant input collapses to a degenerate interval.
    """
    if not values:
        raise ValueError("cannot bootstrap an empty sample")
    if not 0 < level < 1:
        raise ValueError("level must be in (0, 1)")
    data = np.asarray(values, dtype=float)
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, len(data), size=(resamples, len(data)))
    medians = np.median(data[idx], axis=1)
    alpha = (1.0 - level) / 2.0
    low, high = np.quantile(medians, [alpha, 1.0 - alpha])
    return float(low), float(high)


def _substream(seed: int, *coords) -> tuple:
    """Stable per-analysis RNG key; strings hash via crc32."""
    parts = [seed]
    for c in coords:
        parts.append(zlib.crc32(c.encode()) if isinstance(c, str) else int(c))
    return tuple(parts)


@dataclass
class PositionStat:
    position: int
    n_bursts: int
    median: float
    ci_low: float
    ci_high: float


@dataclass
class TrajectoryReport:
    """Per-position medians with bootstrap CIs for one sequence length."""

    length: int
    min_cases: int
    positions: list[PositionStat] = field(default_factory=list)
    valid: bool = True
    invalid_reason: str = ""
    method: str | None = None
    stratum: Platform | None = None
    per_group: bool = False


def _group_score(group: BurstGroup) -> float | None:
    values = [b.score for b in group.bursts if b.score is not None]
    if not values:
        return None
    return statistics.median(values)


def _position_scores(
    sequences: list[BurstSequence], length: int, per_group: bool
) -> dict[int, list[float]]:
    by_position: dict[int, list[float]] = {p: [] for p in range(1, length + 1)}
    for seq in sequences:
        if seq.length != length:
            continue
        for position, group in enumerate(seq.groups, start=1):
            if per_group:
                value = _group_score(group)
                if value is not None:
                    by_position[position].append(value)
            else:
                by_position[position].extend(
                    b.score for b in group.bursts if b.score is not None
                )
    return by_position


def trajectory_medians(
    sequences: list[BurstSequence],
    length: int,
    min_cases: int = 200,
    resamples: int = 1000,
    level: float = 0.95,
    seed: int = 0,
    per_group: bool = False,
    method: str | None = None,
    stratum: Platform | None = None,
) -> TrajectoryReport:
    """Median score per sequence position over sequences of one length.

    Any position with fewer than `min_cases` contributing scores
    invalidates the whole report for that length, mirroring the
    upper-length cutoff used when trajectories are plotted. Scores
    contribute per burst by default; `per_group` collapses each group to
    a single (median) value first.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    report = TrajectoryReport(
        length=length,
        min_cases=min_cases,
        method=method,
        stratum=stratum,
        per_group=per_group,
    )
    n_sequences = sum(1 for s in sequences if s.length == length)
    by_position = _position_scores(sequences, length, per_group)
    if all(not v for v in by_position.values()):
        report.valid = False
        report.invalid_reason = (
            "no sequences of this length"
            if n_sequences == 0
            else "no scored bursts at this length"
        )
        return report
    stratum_key = stratum.name if stratum else ""
    for position in range(1, length + 1):
        values = by_position[position]
        if not values:
            report.valid = False
            report.invalid_reason = f"no scores at position {position}"
            continue
        low, high = bootstrap_median_ci(
            values,
            resamples=resamples,
            level=level,
            seed=_substream(seed, method or "", stratum_key, length, position),
        )
        report.positions.append(
            PositionStat(
                position=position,
                n_bursts=len(values),
                median=float(statistics.median(values)),
                ci_low=low,
                ci_high=high,
            )
        )
        if len(values) < min_cases:
            report.valid = False
            report.invalid_reason = (
                f"position {position} has {len(values)} cases < {min_cases}"
            )
    return report


def stratify_by_first_platform(
    sequences: list[BurstSequence],
    length: int,
    **kwargs,
) -> dict[Platform, TrajectoryReport]:
    """Trajectories keyed by the platform(s) of the first burst group.

    A sequence whose first group spans several platforms contributes to
    each of those strata.
    """
    strata: dict[Platform, list[BurstSequence]] = {}
    for seq in sequences:
        if seq.length != length or not seq.groups:
            continue
        for platform in seq.groups[0].platforms:
            strata.setdefault(platform, []).append(seq)
    return {
        platform: trajectory_medians(
            strata[platform], length, stratum=platform, **kwargs
        )
        for platform in sorted(strata)
    }


@dataclass
class FirstBurstStat:
    platform: Platform
    n_first: int
    observed_pct: float
    expected_pct: float


def first_burst_distribution(
    sequences: list[BurstSequence],
) -> list[FirstBurstStat]:
    """Observed vs expected share of first bursts per platform.

    Expected share is the platform's share of all bursts: the null model
    in which any burst is equally likely to come first.
    """
    first_counts: dict[Platform, int] = {}
    all_counts: dict[Platform, int] = {}
    for seq in sequences:
        for group in seq.groups:
            for burst in group.bursts:
                all_counts[burst.platform] = all_counts.get(burst.platform, 0) + 1
        if seq.groups:
            for burst in seq.groups[0].bursts:
                first_counts[burst.platform] = first_counts.get(burst.platform, 0) + 1
    total_first = sum(first_counts.values())
    total_all = sum(all_counts.values())
    stats = []
    for platform in sorted(all_counts):
        n_first = first_counts.get(platform, 0)
        stats.append(
            FirstBurstStat(
                platform=platform,
                n_first=n_first,
                observed_pct=100.0 * n_first / total_first if total_first else 0.0,
                expected_pct=100.0 * all_counts[platform] / total_all,
            )
        )
    return stats


@dataclass
class CooccurrenceStat:
    platform: Platform
    n_cooccurring: int
    n_solo: int
    median_cooccurring: float | None
    median_solo: float | None


def cooccurrence_comparison(groups: list[BurstGroup]) -> list[CooccurrenceStat]:
    """Median scores of co-occurring vs solo bursts, per platform.

    A burst co-occurs when its group holds at least two bursts. Unscored
    bursts count toward neither median.
    """
    co: dict[Platform, list[float]] = {}
    solo: dict[Platform, list[float]] = {}
    platforms: set[Platform] = set()
    for group in groups:
        target = co if group.cooccurring else solo
        for burst in group.bursts:
            platforms.add(burst.platform)
            if burst.score is not None:
                target.setdefault(burst.platform, []).append(burst.score)
    stats = []
    for platform in sorted(platforms):
        co_scores = co.get(platform, [])
        solo_scores = solo.get(platform, [])
        stats.append(
            CooccurrenceStat(
                platform=platform,
                n_cooccurring=len(co_scores),
                n_solo=len(solo_scores),
                median_cooccurring=(
                    float(statistics.median(co_scores)) if co_scores else None
                ),
                median_solo=(
                    float(statistics.median(solo_scores)) if solo_scores else None
                ),
            )
        )
    return stats


@dataclass
class HeterogeneityCell:
    length: int
    platform_count: int
    n_bursts: int
    median: float


def heterogeneity_analysis(
    sequences: list[BurstSequence],
) -> dict[tuple[int, int], HeterogeneityCell]:
    """Median burst score per (sequence length, unique platform count).

    Co-occurring bursts can put more platforms than groups into a
    sequence, so platform_count may exceed length.
    """
    cells: dict[tuple[int, int], list[float]] = {}
    for seq in sequences:
        key = (seq.length, seq.platform_count)
        scores = [b.score for b in seq.bursts() if b.score is not None]
        if scores:
            cells.setdefault(key, []).extend(scores)
    return {
        key: HeterogeneityCell(
            length=key[0],
            platform_count=key[1],
            n_bursts=len(values),
            median=float(statistics.median(values)),
        )
        for key, values in sorted(cells.items())
    }


@dataclass
class ScoreDistribution:
    n_scored: int
    zero_fraction: float
    max_score: float | None
    bin_width: float
    bin_edges: list[float]
    bin_counts: list[int]


def score_distribution(bursts: list[Burst], bin_width: float = 0.01) -> ScoreDistribution:
    """Zero share plus a histogram of the non-zero burst scores."""
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    scores = [b.score for b in bursts if b.score is not None]
    zero = sum(1 for s in scores if s == 0.0)
    nonzero = [s for s in scores if s > 0.0]
    if nonzero:
        n_bins = max(1, int(np.ceil(max(nonzero) / bin_width)))
        counts, edges = np.histogram(
            nonzero, bins=n_bins, range=(0.0, n_bins * bin_width)
        )
        bin_edges = [float(e) for e in edges]
        bin_counts = [int(c) for c in counts]
    else:
        bin_edges, bin_counts = [], []
    return ScoreDistribution(
        n_scored=len(scores),
        zero_fraction=zero / len(scores) if scores else 0.0,
        max_score=max(scores) if scores else None,
        bin_width=bin_width,
        bin_edges=bin_edges,
        bin_counts=bin_counts,
    )


def group_median_by(
    bursts: list[Burst],
    articles: dict[str, ArticleRecord],
    fieldname: str = "discipline",
) -> dict[str, tuple[int, float]]:
    """Median burst score per article metadata label.

    Bursts whose article lacks the field fall into "Uncategorized".
    Returns label -> (n_bursts, median).
    """
    buckets: dict[str, list[float]] = {}
    for burst in bursts:
        if burst.score is None:
            continue
        article = articles.get(burst.article_id)
        label = getattr(article, fieldname, None) if article else None
        buckets.setdefault(label or UNCATEGORIZED, []).append(burst.score)
    return {
        label: (len(values), float(statistics.median(values)))
        for label, values in sorted(buckets.items())
    }
