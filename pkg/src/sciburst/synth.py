"""Seeded synthetic corpora with known keyphrase sets and planted bursts.

Abstracts are assembled from a phrase bank so the extracted keyphrase
set is known by construction; mention texts include each phrase
independently with a per-position probability, which makes the expected
retention trajectory a direct function of the plan. Burst plans place
all mentions of a planned burst on one day, sized and spaced so that
detection under default parameters recovers the plan exactly.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass, field

import numpy as np

from .bursts import BurstParams
from .corpus import BLOG, FACEBOOK, NEWS, TWITTER, Platform

BASE_DAY = dt.date(2016, 1, 1)

# Two-word phrases whose words the rule tagger reads as content and the
# lemmatizer maps onto themselves; joined only by function words below.
PHRASE_BANK = (
    "gene therapy", "tumor growth", "protein folding", "immune response",
    "cohort study", "risk factor", "cell membrane", "drug dosage",
    "neural pathway", "bone density", "blood pressure", "insulin resistance",
    "carbon cycle", "ocean current", "quantum sensor", "magnetic field",
    "particle beam", "climate model", "habitat loss", "enzyme activity",
    "vaccine efficacy", "sleep duration", "memory recall", "stress hormone",
    "gut microbiome", "liver enzyme", "muscle mass", "heart rhythm",
    "galaxy cluster", "neutron star", "soil moisture", "glacier retreat",
    "virus strain", "antibody titer", "plasma density", "laser pulse",
    "polymer chain", "crystal lattice", "fuel efficiency", "noise exposure",
)

SENTENCE_TEMPLATES = (
    "The {0} was seen with the {1} during the {2}.",
    "The {0} and the {1} were seen throughout the {2}.",
    "The {0} was found with the {1} and the {2}.",
)

DISCIPLINES = ("Biomedical", "Social", "Physical", "General")


class SynthSpecError(ValueError):
    """The synthetic plan cannot produce recoverable bursts."""


@dataclass(frozen=True)
class PlannedBurst:
    """One single-day burst: all `size` mentions land on `day_offset`."""

    position: int
    platform: Platform
    day_offset: int
    size: int


@dataclass
class ArticlePlan:
    article_id: str
    bursts: list[PlannedBurst]
    inclusion: tuple[float, ...]  # phrase-inclusion probability per position
    n_phrases: int = 10
    discipline: str | None = None


@dataclass
class SynthSpec:
    plans: list[ArticlePlan]
    seed: int = 0
    params: BurstParams = field(default_factory=BurstParams)

    def validate(self) -> None:
        for plan in self.plans:
            if not 1 <= plan.n_phrases <= len(PHRASE_BANK):
                raise SynthSpecError(
                    f"{plan.article_id}: n_phrases must be in 1..{len(PHRASE_BANK)}"
                )
            if any(not 0.0 <= p <= 1.0 for p in plan.inclusion):
                raise SynthSpecError(
                    f"{plan.article_id}: inclusion probabilities must be in [0,1]"
                )
            positions = sorted({b.position for b in plan.bursts})
            if positions != list(range(1, len(positions) + 1)):
                raise SynthSpecError(
                    f"{plan.article_id}: burst positions must be 1..k"
                )
            if len(plan.inclusion) < len(positions):
                raise SynthSpecError(
                    f"{plan.article_id}: inclusion profile shorter than plan"
                )
            per_platform: dict[Platform, list[PlannedBurst]] = {}
            offsets_by_position: dict[int, set[int]] = {}
            for burst in plan.bursts:
                if burst.size < 1:
                    raise SynthSpecError(f"{plan.article_id}: burst size must be >= 1")
                minimum = self.params.min_daily_for(burst.platform)
                if burst.size < minimum:
                    raise SynthSpecError(
                        f"{plan.article_id}: burst size {burst.size} below "
                        f"{burst.platform} daily minimum {minimum}"
                    )
                per_platform.setdefault(burst.platform, []).append(burst)
                offsets_by_position.setdefault(burst.position, set()).add(
                    burst.day_offset
                )
            for offsets in offsets_by_position.values():
                if len(offsets) > 1:
                    raise SynthSpecError(
                        f"{plan.article_id}: co-occurring bursts must share a day"
                    )
            position_days = [
                min(offsets_by_position[p]) for p in sorted(offsets_by_position)
            ]
            if position_days != sorted(set(position_days)):
                raise SynthSpecError(
                    f"{plan.article_id}: burst days must strictly increase "
                    "with sequence position"
                )
            for platform, planned in per_platform.items():
                days = sorted(b.day_offset for b in planned)
                if len(set(days)) != len(days):
                    raise SynthSpecError(
                        f"{plan.article_id}: two {platform} bursts on one day"
                    )
                for a, b in zip(days, days[1:]):
                    if b - a <= self.params.window:
                        raise SynthSpecError(
                            f"{plan.article_id}: {platform} bursts {b - a} days "
                            f"apart; need > window ({self.params.window}) for "
                            "clean recovery"
                        )


def uniform_spec(
    n_articles: int,
    inclusion: tuple[float, ...],
    platforms: tuple[Platform, ...] = (TWITTER, NEWS, BLOG, FACEBOOK),
    burst_size: int = 12,
    day_gap: int = 10,
    seed: int = 0,
    n_phrases: int = 10,
) -> SynthSpec:
    """One burst per position per article, platforms assigned round-robin."""
    plans = []
    for idx in range(n_articles):
        bursts = [
            PlannedBurst(
                position=pos,
                platform=platforms[(idx + pos - 1) % len(platforms)],
                day_offset=(pos - 1) * day_gap,
                size=burst_size,
            )
            for pos in range(1, len(inclusion) + 1)
        ]
        plans.append(
            ArticlePlan(
                article_id=f"10.9999/synth.{idx:04d}",
                bursts=bursts,
                inclusion=inclusion,
                n_phrases=n_phrases,
                discipline=DISCIPLINES[idx % len(DISCIPLINES)],
            )
        )
    return SynthSpec(plans=plans, seed=seed)


def _build_abstract(phrases: list[str]) -> str:
    """Cycle phrases through fixed templates until the length floor is met."""
    sentences = []
    order = list(phrases)
    i = 0
    while len(" ".join(sentences)) < 520 or i < len(order):
        chosen = [order[(i + k) % len(order)] for k in range(3)]
        template = SENTENCE_TEMPLATES[i % len(SENTENCE_TEMPLATES)]
        sentences.append(template.format(*chosen))
        i += 3
    return " ".join(sentences)


def _mention_text(included: list[str]) -> str:
    if not included:
        return "No details were given at the time."
    body = ", the ".join(included)
    return f"They discussed the {body}."


def generate_synthetic(spec: SynthSpec) -> tuple[list[str], list[str]]:
    """Render a spec into article and mention JSONL lines.

    Fully deterministic given the seed: every article derives its own RNG
    substream, so plan order does not matter.
    """
    spec.validate()
    article_lines = []
    mention_lines = []
    for idx, plan in enumerate(spec.plans):
        rng = np.random.default_rng([spec.seed, idx])
        phrase_idx = rng.choice(len(PHRASE_BANK), size=plan.n_phrases, replace=False)
        phrases = [PHRASE_BANK[i] for i in sorted(phrase_idx)]
        abstract = _build_abstract(phrases)
        article = {
            "article_id": plan.article_id,
            "abstract": abstract,
            "title": f"Synthetic article {idx}",
            "published": BASE_DAY.isoformat(),
        }
        if plan.discipline:
            article["discipline"] = plan.discipline
        article_lines.append(json.dumps(article))

        counter = 0
        for burst in sorted(plan.bursts, key=lambda b: (b.position, b.platform)):
            day = BASE_DAY + dt.timedelta(days=burst.day_offset)
            prob = plan.inclusion[burst.position - 1]
            for _ in range(burst.size):
                included = [p for p in phrases if rng.random() < prob]
                mention_lines.append(
                    json.dumps(
                        {
                            "mention_id": f"{plan.article_id}#m{counter:05d}",
                            "article_id": plan.article_id,
                            "platform": burst.platform.name,
                            "timestamp": f"{day.isoformat()}T12:00:00Z",
                            "source_id": f"src-{idx:04d}-{counter:05d}",
                            "text": _mention_text(included),
                            "lang": "en",
                        }
                    )
                )
                counter += 1
    return article_lines, mention_lines


def write_synthetic(spec: SynthSpec, articles_path, mentions_path) -> tuple[int, int]:
    articles, mentions = generate_synthetic(spec)
    with open(articles_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(articles) + ("\n" if articles else ""))
    with open(mentions_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(mentions) + ("\n" if mentions else ""))
    return len(articles), len(mentions)
