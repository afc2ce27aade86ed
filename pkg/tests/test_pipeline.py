import json
from pathlib import Path

import pytest

from sciburst.cli import (
    EXIT_EMPTY_CORPUS,
    EXIT_INVALID_CONFIG,
    EXIT_OK,
    main,
)
from sciburst.pipeline import (
    ConfigError,
    RunConfig,
    load_keyphrase_sets,
    run_pipeline,
)
from sciburst.synth import uniform_spec, write_synthetic


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("corpus")
    spec = uniform_spec(8, (0.8, 0.3), burst_size=10, seed=11)
    write_synthetic(spec, tmp / "articles.jsonl", tmp / "mentions.jsonl")
    return tmp


def run_config(corpus, out, **kw):
    defaults = dict(
        articles_path=corpus / "articles.jsonl",
        mentions_path=corpus / "mentions.jsonl",
        out_dir=out,
        method="textrank",
        min_cases=2,
        resamples=100,
        seed=7,
    )
    defaults.update(kw)
    return RunConfig(**defaults)


def read_bytes_map(root):
    out = {}
    for path in sorted(Path(root).rglob("*")):
        if path.is_file() and not path.name.endswith(".tmp"):
            out[str(path.relative_to(root))] = path.read_bytes()
    return out


class TestRunPipeline:
    def test_produces_reports_and_manifest(self, corpus, tmp_path):
        manifest_path = run_pipeline(run_config(corpus, tmp_path / "out"))
        manifest = json.loads(manifest_path.read_text())
        assert manifest["status"] == "complete"
        assert manifest["parameters"]["seed"] == 7
        assert "min_daily" in manifest["parameters"]["burst_params"]
        assert any("min_daily defaults" in note for note in manifest["notes"])
        reports = tmp_path / "out" / "reports"
        for name in [
            "trajectories.csv",
            "trajectories_by_first_platform.csv",
            "platforms.csv",
            "heterogeneity.csv",
            "score_summary.csv",
            "score_histogram.csv",
            "disciplines.csv",
        ]:
            assert (reports / name).is_file(), name

    def test_dump_formats(self, corpus, tmp_path):
        run_pipeline(run_config(corpus, tmp_path / "out"))
        out = tmp_path / "out"
        kp = [json.loads(l) for l in (out / "keyphrases.jsonl").read_text().splitlines()]
        assert list(kp[0]) == ["article_id", "method", "lemma_form", "surface_form", "rank"]
        sets = load_keyphrase_sets(kp)
        assert all(k[1] == "textrank" for k in sets)
        sc = [json.loads(l) for l in (out / "mention_scores.jsonl").read_text().splitlines()]
        assert list(sc[0]) == ["mention_id", "article_id", "platform", "method", "value"]
        assert all(0.0 <= row["value"] <= 1.0 for row in sc)
        bu = [json.loads(l) for l in (out / "bursts_textrank.jsonl").read_text().splitlines()]
        assert list(bu[0]) == [
            "article_id", "platform", "start_day", "end_day", "peak_day",
            "size", "score", "sequence_position", "group_id", "cooccurring",
        ]
        sq = [json.loads(l) for l in (out / "sequences_textrank.jsonl").read_text().splitlines()]
        assert {row["length"] for row in sq} == {2}

    def test_rerun_reuses_cache_and_is_byte_identical(self, corpus, tmp_path):
        out = tmp_path / "out"
        run_pipeline(run_config(corpus, out))
        first = read_bytes_map(out)
        run_pipeline(run_config(corpus, out))
        assert read_bytes_map(out) == first

    def test_worker_count_does_not_change_outputs(self, corpus, tmp_path):
        serial_out, parallel_out = tmp_path / "serial", tmp_path / "parallel"
        run_pipeline(run_config(corpus, serial_out, workers=1))
        run_pipeline(run_config(corpus, parallel_out, workers=3))
        assert read_bytes_map(serial_out) == read_bytes_map(parallel_out)

    def test_cache_invalidated_on_input_change(self, corpus, tmp_path):
        out = tmp_path / "out"
        articles = (corpus / "articles.jsonl").read_text()
        mutated = tmp_path / "articles.jsonl"
        mutated.write_text(articles)
        config = run_config(corpus, out)
        config.articles_path = mutated
        run_pipeline(config)
        meta = json.loads((out / "keyphrases.meta.json").read_text())
        mutated.write_text(articles.replace("protein", "peptide"))
        run_pipeline(config)
        assert json.loads((out / "keyphrases.meta.json").read_text()) != meta

    def test_both_methods_writes_both_dumps(self, corpus, tmp_path):
        run_pipeline(run_config(corpus, tmp_path / "out", method="both"))
        assert (tmp_path / "out" / "bursts_textrank.jsonl").is_file()
        assert (tmp_path / "out" / "bursts_rake.jsonl").is_file()

    def test_invalid_method_rejected(self, corpus, tmp_path):
        with pytest.raises(ConfigError):
            run_config(corpus, tmp_path / "out", method="tfidf").validate()

    def test_missing_input_rejected(self, corpus, tmp_path):
        config = run_config(corpus, tmp_path / "out")
        config.articles_path = tmp_path / "missing.jsonl"
        with pytest.raises(ConfigError):
            config.validate()


class TestCli:
    def test_simulate_then_run(self, tmp_path, capsys):
        out = tmp_path / "work"
        assert main([
            "simulate", "--out-dir", str(out), "--n-articles", "6",
            "--decay", "0.9,0.4", "--burst-size", "10", "--seed", "3",
        ]) == EXIT_OK
        assert main([
            "run",
            "--articles", str(out / "articles.jsonl"),
            "--mentions", str(out / "mentions.jsonl"),
            "--out-dir", str(out / "out"),
            "--method", "textrank", "--min-cases", "2",
            "--resamples", "50", "--seed", "1",
        ]) == EXIT_OK
        assert (out / "out" / "manifest.json").is_file()
        assert main(["report", "--out-dir", str(out / "out")]) == EXIT_OK
        captured = capsys.readouterr()
        assert "trajectories.csv" in captured.out

    def test_stagewise_subcommands(self, tmp_path):
        out = tmp_path / "work"
        main(["simulate", "--out-dir", str(out), "--n-articles", "4",
              "--decay", "0.8", "--burst-size", "10", "--seed", "2"])
        common = [
            "--articles", str(out / "articles.jsonl"),
            "--mentions", str(out / "mentions.jsonl"),
            "--out-dir", str(out / "out"), "--method", "rake",
            "--min-cases", "1", "--resamples", "50", "--seed", "0",
        ]
        assert main(["ingest"] + common) == EXIT_OK
        assert main(["keyphrases"] + common) == EXIT_OK
        assert (out / "out" / "keyphrases.jsonl").is_file()
        assert main(["score"] + common) == EXIT_OK
        assert (out / "out" / "mention_scores.jsonl").is_file()
        assert main(["bursts"] + common) == EXIT_OK
        assert (out / "out" / "bursts_rake.jsonl").is_file()
        assert main(["sequences"] + common) == EXIT_OK
        assert (out / "out" / "sequences_rake.jsonl").is_file()
        assert main(["analyze"] + common) == EXIT_OK
        assert (out / "out" / "reports" / "platforms.csv").is_file()

    def test_empty_corpus_exit_code(self, tmp_path):
        articles = tmp_path / "articles.jsonl"
        mentions = tmp_path / "mentions.jsonl"
        articles.write_text("")
        mentions.write_text("")
        code = main([
            "run", "--articles", str(articles), "--mentions", str(mentions),
            "--out-dir", str(tmp_path / "out"),
        ])
        assert code == EXIT_EMPTY_CORPUS

    def test_empty_mentions_file_no_reports(self, tmp_path, corpus_files):
        articles, _ = corpus_files
        mentions = tmp_path / "mentions.jsonl"
        mentions.write_text("")
        out = tmp_path / "out"
        code = main([
            "run", "--articles", str(articles), "--mentions", str(mentions),
            "--out-dir", str(out),
        ])
        assert code == EXIT_EMPTY_CORPUS
        assert not (out / "reports").exists()
        assert not (out / "manifest.json").exists()

    def test_invalid_config_exit_code(self, tmp_path):
        code = main([
            "run", "--articles", str(tmp_path / "nope.jsonl"),
            "--mentions", str(tmp_path / "nope2.jsonl"),
            "--out-dir", str(tmp_path / "out"),
        ])
        assert code == EXIT_INVALID_CONFIG

    def test_missing_required_inputs(self, tmp_path):
        assert main(["run", "--out-dir", str(tmp_path)]) == EXIT_INVALID_CONFIG

    def test_config_file_with_cli_override(self, tmp_path, corpus_files):
        articles, mentions = corpus_files
        config = tmp_path / "run.conf"
        config.write_text(
            f"articles={articles}\nmentions={mentions}\n"
            "method=rake\nmin-cases=1\nresamples=50\nseed=4\n"
        )
        out = tmp_path / "out"
        code = main([
            "run", "--config", str(config), "--out-dir", str(out),
            "--method", "textrank",  # overrides the file
        ])
        assert code == EXIT_OK
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["parameters"]["method"] == "textrank"
        assert manifest["parameters"]["seed"] == 4

    def test_env_var_output_dir(self, tmp_path, corpus_files, monkeypatch):
        articles, mentions = corpus_files
        out = tmp_path / "envout"
        monkeypatch.setenv("SCIBURST_OUTPUT_DIR", str(out))
        # env var is read at parser build time; reparse happens per call
        code = main([
            "ingest", "--articles", str(articles), "--mentions", str(mentions),
            "--min-cases", "1",
        ])
        assert code == EXIT_OK


@pytest.fixture(scope="module")
def corpus_files(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("clifiles")
    spec = uniform_spec(4, (0.8,), burst_size=10, seed=21)
    write_synthetic(spec, tmp / "articles.jsonl", tmp / "mentions.jsonl")
    return tmp / "articles.jsonl", tmp / "mentions.jsonl"
