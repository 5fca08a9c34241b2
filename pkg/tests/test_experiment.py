"""Sweep protocol, report/CSV determinism, model round-trips, and the CLI."""

import copy
import json
from pathlib import Path

import numpy as np
import pytest

import termclass as tc
from termclass.cli import main as cli_main

from conftest import separable_corpus


def write_corpus_tree(root: Path, corpus: tc.LabeledCorpus) -> None:
    for doc in corpus:
        d = root / doc.class_label
        d.mkdir(parents=True, exist_ok=True)
        (d / doc.id).write_text(doc.text)


@pytest.fixture
def corpus_dir(tmp_path):
    root = tmp_path / "corpus"
    write_corpus_tree(root, separable_corpus(n_per_class=10))
    return root


def small_config(corpus_dir, outdir, **overrides) -> dict:
    obj = {
        "corpus_path": str(corpus_dir),
        "corpus_format": "newsgroups_dir",
        "preprocess": {"stopwords": "none"},
        "min_df": 1,
        "schemes": ["tcr"],
        "classifiers": ["knn"],
        "knn_k": [3],
        "train_fractions": [0.5],
        "seeds": [0],
        "output_dir": str(outdir),
    }
    obj.update(overrides)
    return obj


class TestExperimentConfig:
    def test_defaults_match_reported_protocol(self):
        config = tc.ExperimentConfig(corpus_path="x", corpus_format="jsonl")
        assert config.train_fractions == (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8)
        assert config.schemes == ("tcr", "bayes")
        assert config.classifier_labels() == ["knn_k10", "svm_rbf"]
        # 8 fractions x 2 schemes x 2 classifier instances x 1 seed
        n_cells = (
            len(config.train_fractions)
            * len(config.schemes)
            * len(config.classifier_labels())
            * len(config.seeds)
        )
        assert n_cells == 32

    def test_from_dict_round_trip(self, tmp_path):
        obj = small_config(tmp_path / "c", tmp_path / "o")
        config = tc.ExperimentConfig.from_dict(obj)
        echo = config.as_dict()
        assert echo["min_df"] == 1
        assert echo["schemes"] == ["tcr"]
        assert echo["preprocess"]["stopwords"] == "none"
        assert echo["preprocess"]["stopword_count"] == 0

    def test_unknown_keys_rejected(self, tmp_path):
        obj = small_config(tmp_path / "c", tmp_path / "o", typo_key=1)
        with pytest.raises(tc.ConfigError, match="typo_key"):
            tc.ExperimentConfig.from_dict(obj)
        bad = small_config(tmp_path / "c", tmp_path / "o")
        bad["preprocess"]["stop_words"] = "none"
        with pytest.raises(tc.ConfigError, match="stop_words"):
            tc.ExperimentConfig.from_dict(bad)

    def test_invalid_values_rejected(self, tmp_path):
        base = lambda **kw: small_config(tmp_path / "c", tmp_path / "o", **kw)
        with pytest.raises(tc.ConfigError):
            tc.ExperimentConfig.from_dict(base(train_fractions=[1.5]))
        with pytest.raises(tc.ConfigError):
            tc.ExperimentConfig.from_dict(base(schemes=["tfidf"]))
        with pytest.raises(tc.ConfigError):
            tc.ExperimentConfig.from_dict(base(classifiers=["forest"]))
        with pytest.raises(tc.ConfigError):
            tc.ExperimentConfig.from_dict(base(min_df=0))
        with pytest.raises(tc.ConfigError):
            tc.ExperimentConfig.from_dict(base(svm={"C": -1.0}))
        with pytest.raises(tc.ConfigError, match="missing"):
            tc.ExperimentConfig.from_dict({"corpus_path": "x"})

    def test_kernel_expansion(self):
        config = tc.ExperimentConfig(
            corpus_path="x",
            corpus_format="jsonl",
            classifiers=("knn", "svm"),
            knn_k=(1, 5, 10),
            svm_kernels=(
                tc.KernelSpec(kind="linear"),
                tc.KernelSpec(kind="rbf"),
                tc.KernelSpec(kind="polynomial"),
            ),
        )
        assert config.classifier_labels() == [
            "knn_k1", "knn_k5", "knn_k10", "svm_linear", "svm_rbf", "svm_polynomial",
        ]


class TestRunSweep:
    def test_single_cell_contract(self, corpus_dir, tmp_path):
        config = tc.ExperimentConfig.from_dict(small_config(corpus_dir, tmp_path / "out"))
        report = tc.run_sweep(config)
        assert len(report.cells) == 1
        cell = report.cells[0]
        assert cell.error is None
        assert cell.scheme == "tcr" and cell.classifier == "knn_k3"
        assert cell.n_train == 15 and cell.n_test == 15
        assert cell.report.accuracy == 1.0

    def test_full_grid_has_every_cell(self, corpus_dir, tmp_path):
        obj = small_config(
            corpus_dir,
            tmp_path / "out",
            schemes=["tcr", "bayes"],
            classifiers=["knn", "svm"],
            knn_k=[1, 3],
            svm={"kernels": [{"kind": "linear"}, {"kind": "rbf"}], "C": 10.0},
            train_fractions=[0.3, 0.6],
            seeds=[0, 1],
        )
        config = tc.ExperimentConfig.from_dict(obj)
        report = tc.run_sweep(config)
        assert len(report.cells) == 2 * 2 * 4 * 2  # fractions x seeds x classifiers x schemes
        combos = {
            (c.scheme, c.classifier, c.train_fraction, c.seed) for c in report.cells
        }
        assert len(combos) == len(report.cells)
        assert all(c.error is None for c in report.cells)

    def test_report_is_deterministic_apart_from_timings(self, corpus_dir, tmp_path):
        def strip_timings(obj):
            if isinstance(obj, dict):
                return {
                    key: strip_timings(value)
                    for key, value in obj.items()
                    if key != "seconds" and key != "total_seconds" and not key.endswith("_s")
                }
            if isinstance(obj, list):
                return [strip_timings(v) for v in obj]
            return obj

        config = tc.ExperimentConfig.from_dict(
            small_config(corpus_dir, tmp_path / "out", classifiers=["knn", "svm"])
        )
        one = strip_timings(tc.run_sweep(config).as_dict())
        two = strip_timings(tc.run_sweep(config).as_dict())
        assert one == two

    def test_csv_files_byte_identical_across_runs(self, corpus_dir, tmp_path):
        config = tc.ExperimentConfig.from_dict(
            small_config(corpus_dir, tmp_path / "out", train_fractions=[0.3, 0.5], seeds=[0, 1])
        )
        a_dir, b_dir = tmp_path / "a", tmp_path / "b"
        wrote_a = tc.write_csvs(tc.run_sweep(config).as_dict(), a_dir)
        wrote_b = tc.write_csvs(tc.run_sweep(config).as_dict(), b_dir)
        assert [p.name for p in wrote_a] == [p.name for p in wrote_b]
        for pa, pb in zip(wrote_a, wrote_b):
            assert pa.read_bytes() == pb.read_bytes()

    def test_csv_row_shape(self, corpus_dir, tmp_path):
        config = tc.ExperimentConfig.from_dict(
            small_config(corpus_dir, tmp_path / "out", train_fractions=[0.3, 0.5], seeds=[0, 1])
        )
        outdir = tmp_path / "out"
        tc.write_csvs(tc.run_sweep(config).as_dict(), outdir)
        lines = (outdir / "csv" / "knn_k3_tcr_accuracy.csv").read_text().strip().splitlines()
        assert lines[0] == "train_fraction,mean,min,max,seed_0,seed_1"
        assert len(lines) == 3
        per_class = (outdir / "csv" / "knn_k3_tcr_per_class_f.csv").read_text().strip().splitlines()
        assert per_class[0] == "class,0.3,0.5"
        assert len(per_class) == 4  # header + 3 classes

    def test_failed_split_recorded_not_raised(self, tmp_path):
        # One class with a single document cannot be split; every cell must
        # carry the error and the sweep itself must still return.
        root = tmp_path / "corpus"
        write_corpus_tree(root, separable_corpus(n_per_class=4))
        lone = root / "lonely"
        lone.mkdir()
        (lone / "only.txt").write_text("w00 w01")
        config = tc.ExperimentConfig.from_dict(small_config(root, tmp_path / "out"))
        report = tc.run_sweep(config)
        assert len(report.cells) == 1
        assert report.failed_cells() == report.cells
        assert "lonely" in report.cells[0].error

    def test_score_table_sources_stay_inside_training_split(self, corpus_dir):
        corpus = tc.load_corpus(corpus_dir, "newsgroups_dir")
        train, test = tc.stratified_split(corpus, tc.SplitSpec(0.5, 0))
        config = tc.PreprocessConfig(stopwords=frozenset(), min_token_len=1)
        vocab = tc.build_vocabulary(train, config)
        stats = tc.build_stats(train, vocab, config)
        table = tc.relevance_table(stats, "tcr")
        test_ids = {d.id for d in test}
        assert set(table.source_doc_ids) == {d.id for d in train}
        assert not set(table.source_doc_ids) & test_ids

    def test_fingerprint_tracks_content(self, corpus_dir, tmp_path):
        a = tc.load_corpus(corpus_dir, "newsgroups_dir")
        assert tc.corpus_fingerprint(a) == tc.corpus_fingerprint(
            tc.load_corpus(corpus_dir, "newsgroups_dir")
        )
        altered_root = tmp_path / "altered"
        write_corpus_tree(altered_root, a)
        first = next(p for p in sorted(altered_root.rglob("*")) if p.is_file())
        first.write_text("changed text")
        assert tc.corpus_fingerprint(
            tc.load_corpus(altered_root, "newsgroups_dir")
        ) != tc.corpus_fingerprint(a)


class TestModelRoundTrip:
    @pytest.mark.parametrize("classifier", ["knn", "svm"])
    def test_save_load_predict_identical(self, classifier, tmp_path):
        corpus = separable_corpus(n_per_class=8)
        config = tc.PreprocessConfig(stopwords=frozenset(), min_token_len=1)
        model = tc.train_model(
            corpus,
            preprocess=config,
            min_df=1,
            scheme="tcr",
            classifier=classifier,
            knn_k=3,
            kernel=tc.KernelSpec(kind="rbf"),
            C=10.0,
        )
        holdout = separable_corpus(n_per_class=5, seed=99)
        docs = [(d.id, d.text) for d in holdout]
        before = tc.predict_with_model(model, docs)
        path = tmp_path / "model.json"
        tc.save_model(model, path)
        after = tc.predict_with_model(tc.load_model(path), docs)
        assert before == after
        truth = [d.class_label for d in holdout]
        assert before == truth

    def test_load_rejects_foreign_json(self, tmp_path):
        path = tmp_path / "other.json"
        path.write_text(json.dumps({"hello": "world"}))
        with pytest.raises(tc.DataError):
            tc.load_model(path)

    def test_unknown_classifier_name(self):
        corpus = separable_corpus(n_per_class=4)
        with pytest.raises(tc.ConfigError):
            tc.train_model(
                corpus,
                preprocess=tc.PreprocessConfig(stopwords=frozenset()),
                min_df=1,
                scheme="tcr",
                classifier="tree",
            )


class TestCli:
    def test_ingest_prints_summary(self, corpus_dir, capsys):
        assert cli_main(["ingest", "--corpus", str(corpus_dir)]) == 0
        out = capsys.readouterr().out
        assert "documents: 30" in out
        assert "class0: 10" in out
        assert "fingerprint:" in out

    def test_sweep_writes_report_and_csvs(self, corpus_dir, tmp_path, capsys):
        cfg = small_config(corpus_dir, tmp_path / "out")
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps(cfg))
        assert cli_main(["sweep", "--config", str(cfg_path)]) == 0
        assert (tmp_path / "out" / "report.json").exists()
        assert (tmp_path / "out" / "csv" / "knn_k3_tcr_accuracy.csv").exists()
        assert "accuracy=1.0000" in capsys.readouterr().out

    def test_report_rerenders_csvs(self, corpus_dir, tmp_path, capsys):
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps(small_config(corpus_dir, tmp_path / "out")))
        cli_main(["sweep", "--config", str(cfg_path)])
        report_path = tmp_path / "out" / "report.json"
        original = (tmp_path / "out" / "csv" / "knn_k3_tcr_accuracy.csv").read_bytes()
        assert cli_main(
            ["report", "--report", str(report_path), "--outdir", str(tmp_path / "again")]
        ) == 0
        again = (tmp_path / "again" / "csv" / "knn_k3_tcr_accuracy.csv").read_bytes()
        assert again == original

    def test_train_and_predict_round_trip(self, corpus_dir, tmp_path, capsys):
        model_path = tmp_path / "model.json"
        code = cli_main(
            [
                "train", "--corpus", str(corpus_dir), "--model", str(model_path),
                "--classifier", "svm", "--kernel", "linear", "--C", "10",
                "--min-df", "1", "--stopwords", "none", "--min-token-len", "1",
            ]
        )
        assert code == 0
        out_path = tmp_path / "predictions.csv"
        code = cli_main(
            [
                "predict", "--model", str(model_path),
                "--input", str(corpus_dir), "--output", str(out_path),
            ]
        )
        assert code == 0
        lines = out_path.read_text().strip().splitlines()
        assert lines[0] == "doc_id,predicted,class"
        assert len(lines) == 31
        assert all(line.split(",")[1] == line.split(",")[2] for line in lines[1:])

    def test_predict_flat_directory_without_labels(self, corpus_dir, tmp_path):
        model_path = tmp_path / "model.json"
        cli_main(
            [
                "train", "--corpus", str(corpus_dir), "--model", str(model_path),
                "--min-df", "1", "--stopwords", "none", "--min-token-len", "1",
            ]
        )
        flat = tmp_path / "flat"
        flat.mkdir()
        (flat / "q1.txt").write_text("w00 w01 w02")
        (flat / "q2.txt").write_text("w20 w21")
        out_path = tmp_path / "predictions.csv"
        assert cli_main(
            ["predict", "--model", str(model_path), "--input", str(flat),
             "--output", str(out_path)]
        ) == 0
        lines = out_path.read_text().strip().splitlines()
        assert lines[0] == "doc_id,predicted"
        assert lines[1] == "q1.txt,class0"
        assert lines[2] == "q2.txt,class2"

    def test_exit_code_1_for_config_errors(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"corpus_path": "x"}))
        assert cli_main(["sweep", "--config", str(bad)]) == 1
        bad.write_text("{not json")
        assert cli_main(["sweep", "--config", str(bad)]) == 1
        assert "config error" in capsys.readouterr().err

    def test_exit_code_2_for_data_errors(self, tmp_path, capsys):
        assert cli_main(["ingest", "--corpus", str(tmp_path / "missing")]) == 2
        assert "data error" in capsys.readouterr().err

    def test_exit_code_3_for_partial_failure(self, tmp_path, capsys):
        root = tmp_path / "corpus"
        write_corpus_tree(root, separable_corpus(n_per_class=4))
        lone = root / "lonely"
        lone.mkdir()
        (lone / "only.txt").write_text("w00")
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps(small_config(root, tmp_path / "out")))
        assert cli_main(["sweep", "--config", str(cfg_path)]) == 3
        assert "ERROR" in capsys.readouterr().out
