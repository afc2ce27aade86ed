"""Command-line entry point.

Subcommands mirror the pipeline stages; `run` chains them all. Any flag
can also come from a flat key=value config file (--config), with the
command line winning. SCIBURST_OUTPUT_DIR sets the default output
directory.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .bursts import BurstParams
from .corpus import IngestConfig, IngestError, parse_platform
from .pipeline import (
    ConfigError,
    EmptyCorpusError,
    REPORTS_DIR,
    RunConfig,
    ingest_corpus,
    run_pipeline,
    stage_bursts,
    stage_keyphrases,
    stage_scores,
    write_manifest,
    write_reports,
)
from .synth import SynthSpecError, uniform_spec, write_synthetic

EXIT_OK = 0
EXIT_STAGE_FAILURE = 1
EXIT_INVALID_CONFIG = 2
EXIT_INGEST_FAILURE = 3
EXIT_EMPTY_CORPUS = 4

OUTPUT_DIR_ENV = "SCIBURST_OUTPUT_DIR"

logger = logging.getLogger(__name__)


def _read_config_file(path: str) -> dict[str, str]:
    values = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _add_io_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--articles", help="articles JSONL file")
    parser.add_argument("--mentions", help="mentions JSONL file")
    parser.add_argument(
        "--out-dir",
        default=os.environ.get(OUTPUT_DIR_ENV, "out"),
        help=f"output directory (or ${OUTPUT_DIR_ENV})",
    )
    parser.add_argument("--config", help="flat key=value config file")


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--method", choices=["textrank", "rake", "both"],
                        default=None)
    parser.add_argument("--min-cases", type=int, default=None)
    parser.add_argument("--resamples", type=int, default=None)
    parser.add_argument("--level", type=float, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--min-abstract-chars", type=int, default=None)
    parser.add_argument("--base-threshold", type=int, default=None)
    parser.add_argument("--elevation-ratio", type=float, default=None)
    parser.add_argument("--window", type=int, default=None)
    parser.add_argument(
        "--min-daily",
        default=None,
        help="per-platform minimums, e.g. 'twitter:9,news:8'",
    )
    parser.add_argument("--grouping-mode", choices=["overlap", "same_day"],
                        default=None)
    parser.add_argument("--no-english-filter", action="store_true")
    parser.add_argument("--per-group-trajectories", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sciburst",
        description="Burst-based information-retention analysis of science mentions",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in [
        ("ingest", "validate inputs and report corpus counts"),
        ("keyphrases", "extract keyphrases per article"),
        ("score", "score mention texts against article keyphrases"),
        ("bursts", "detect bursts and write the burst dump"),
        ("sequences", "assemble per-article burst sequences"),
        ("analyze", "compute report tables from the dumps"),
        ("run", "run every stage"),
    ]:
        p = sub.add_parser(name, help=help_text)
        _add_io_flags(p)
        _add_run_flags(p)

    p = sub.add_parser("report", help="print a summary of computed reports")
    p.add_argument(
        "--out-dir",
        default=os.environ.get(OUTPUT_DIR_ENV, "out"),
        help=f"output directory (or ${OUTPUT_DIR_ENV})",
    )

    p = sub.add_parser("simulate", help="generate a seeded synthetic corpus")
    p.add_argument("--out-dir", default=os.environ.get(OUTPUT_DIR_ENV, "out"))
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--articles-out", default=None,
                   help="articles file (default <out-dir>/articles.jsonl)")
    p.add_argument("--mentions-out", default=None,
                   help="mentions file (default <out-dir>/mentions.jsonl)")
    p.add_argument("--n-articles", type=int, default=50)
    p.add_argument("--decay", default="0.8,0.5,0.3,0.2",
                   help="per-position phrase-inclusion probabilities")
    p.add_argument("--platforms", default="twitter,news,blog,facebook")
    p.add_argument("--burst-size", type=int, default=12)
    p.add_argument("--day-gap", type=int, default=10)
    p.add_argument("--n-phrases", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _merge_config_file(args: argparse.Namespace) -> None:
    """Config-file values fill any flag left at its parser default."""
    if not getattr(args, "config", None):
        return
    file_values = _read_config_file(args.config)
    parser_defaults = {
        "out_dir": os.environ.get(OUTPUT_DIR_ENV, "out"),
        "decay": "0.8,0.5,0.3,0.2",
        "platforms": "twitter,news,blog,facebook",
        "n_articles": 50, "burst_size": 12, "day_gap": 10,
        "n_phrases": 10, "seed": 0,
        "no_english_filter": False, "per_group_trajectories": False,
        "verbose": False,
    }
    for key, raw in file_values.items():
        if not hasattr(args, key):
            raise ConfigError(f"unknown config key: {key}")
        current = getattr(args, key)
        if current is not None and current != parser_defaults.get(key):
            continue  # explicit command-line value wins
        if isinstance(current, bool):
            setattr(args, key, raw.lower() in ("1", "true", "yes", "on"))
        else:
            setattr(args, key, raw)
    return


def _parse_min_daily(raw: str) -> dict:
    values = {}
    for part in raw.split(","):
        name, _, value = part.partition(":")
        if not value:
            raise ConfigError(f"bad --min-daily entry: {part!r}")
        values[parse_platform(name)] = int(value)
    return values


def _build_run_config(args: argparse.Namespace) -> RunConfig:
    if not args.articles or not args.mentions:
        raise ConfigError("--articles and --mentions are required")
    params = BurstParams()
    if args.base_threshold is not None:
        params.base_threshold = int(args.base_threshold)
    if args.elevation_ratio is not None:
        params.elevation_ratio = float(args.elevation_ratio)
    if args.window is not None:
        params.window = int(args.window)
    if args.min_daily is not None:
        params.min_daily.update(_parse_min_daily(args.min_daily))
    params.__post_init__()

    ingest_cfg = IngestConfig()
    if args.min_abstract_chars is not None:
        ingest_cfg.min_abstract_chars = int(args.min_abstract_chars)

    config = RunConfig(
        articles_path=Path(args.articles),
        mentions_path=Path(args.mentions),
        out_dir=Path(args.out_dir),
        burst_params=params,
        ingest=ingest_cfg,
    )
    if args.method is not None:
        config.method = args.method
    if args.min_cases is not None:
        config.min_cases = int(args.min_cases)
    if args.resamples is not None:
        config.resamples = int(args.resamples)
    if args.level is not None:
        config.level = float(args.level)
    if args.seed is not None:
        config.seed = int(args.seed)
    if args.workers is not None:
        config.workers = int(args.workers)
    if args.grouping_mode is not None:
        config.grouping_mode = args.grouping_mode
    if args.no_english_filter:
        config.english_only = False
    if args.per_group_trajectories:
        config.per_group_trajectories = True
    config.validate()
    Path(config.out_dir).mkdir(parents=True, exist_ok=True)
    return config


def _cmd_stages(args: argparse.Namespace) -> int:
    config = _build_run_config(args)
    store = ingest_corpus(config)
    stats = store.stats
    print(
        f"ingest: {stats.articles_kept} articles, {stats.mentions_kept} mentions "
        f"({stats.mentions_with_text} with text, {stats.mentions_duplicate} duplicates "
        f"skipped, {stats.mentions_unknown_article} unknown-article skipped)"
    )
    if args.command == "ingest":
        return EXIT_OK
    phrase_rows = stage_keyphrases(config, store)
    print(f"keyphrases: {len(phrase_rows)} phrases dumped")
    if args.command == "keyphrases":
        return EXIT_OK
    score_rows = stage_scores(config, store, phrase_rows)
    print(f"score: {len(score_rows)} mention scores dumped")
    if args.command == "score":
        return EXIT_OK
    by_method = stage_bursts(config, store, score_rows)
    for method, sequences in sorted(by_method.items()):
        n_bursts = sum(len(s.bursts()) for s in sequences.values())
        print(f"bursts[{method}]: {n_bursts} bursts in {len(sequences)} sequences")
    if args.command in ("bursts", "sequences"):
        return EXIT_OK
    report_counts = write_reports(config, store, by_method)
    manifest = write_manifest(config, store, report_counts)
    print(f"reports: written to {Path(config.out_dir) / REPORTS_DIR}")
    print(f"manifest: {manifest}")
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    reports = Path(args.out_dir) / REPORTS_DIR
    if not reports.is_dir():
        print(f"no reports under {reports}; run `sciburst analyze` first",
              file=sys.stderr)
        return EXIT_STAGE_FAILURE
    manifest_path = Path(args.out_dir) / "manifest.json"
    if manifest_path.is_file():
        manifest = json.loads(manifest_path.read_text())
        print(f"status: {manifest['status']}")
        print(f"corpus digest: {manifest['corpus_digest'][:16]}…")
    for name in sorted(p.name for p in reports.glob("*.csv")):
        lines = (reports / name).read_text(encoding="utf-8").splitlines()
        print(f"\n== {name} ({max(0, len(lines) - 1)} rows)")
        for line in lines[:8]:
            print("  " + line)
        if len(lines) > 8:
            print(f"  … {len(lines) - 8} more")
    return EXIT_OK


def _cmd_simulate(args: argparse.Namespace) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    articles_path = Path(args.articles_out or out_dir / "articles.jsonl")
    mentions_path = Path(args.mentions_out or out_dir / "mentions.jsonl")
    decay = tuple(float(x) for x in str(args.decay).split(","))
    platforms = tuple(parse_platform(p) for p in str(args.platforms).split(","))
    spec = uniform_spec(
        n_articles=int(args.n_articles),
        inclusion=decay,
        platforms=platforms,
        burst_size=int(args.burst_size),
        day_gap=int(args.day_gap),
        seed=int(args.seed),
        n_phrases=int(args.n_phrases),
    )
    n_articles, n_mentions = write_synthetic(spec, articles_path, mentions_path)
    print(f"simulate: {n_articles} articles -> {articles_path}")
    print(f"simulate: {n_mentions} mentions -> {mentions_path}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        _merge_config_file(args)
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "report":
            return _cmd_report(args)
        return _cmd_stages(args)
    except (ConfigError, SynthSpecError) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_INVALID_CONFIG
    except IngestError as exc:
        print(f"ingest failed: {exc}", file=sys.stderr)
        return EXIT_INGEST_FAILURE
    except EmptyCorpusError as exc:
        print(f"empty corpus: {exc}", file=sys.stderr)
        return EXIT_EMPTY_CORPUS
    except Exception as exc:  # noqa: BLE001 - stage name in message
        logger.exception("stage failed")
        print(f"stage failed: {exc}", file=sys.stderr)
        return EXIT_STAGE_FAILURE


if __name__ == "__main__":
    sys.exit(main())
