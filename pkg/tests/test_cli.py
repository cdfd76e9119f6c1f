import csv
import json

import numpy as np
import pytest

from cgboost import cli, data, model_io


def run(*argv):
    return cli.main(list(argv))


@pytest.fixture()
def blob_csv(tmp_path):
    path = tmp_path / "blobs.csv"
    assert run("generate", "--n", "240", "--classes", "3", "--features", "2",
               "--seed", "5", "--out", str(path)) == 0
    return path


class TestGenerate:
    def test_file_round_trips(self, blob_csv):
        ds = data.load_csv(blob_csv, ["label"], "classification")
        assert ds.n_rows == 240
        assert ds.n_outputs == 3

    def test_different_seeds_differ(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run("generate", "--n", "50", "--seed", "1", "--out", str(a))
        run("generate", "--n", "50", "--seed", "2", "--out", str(b))
        assert a.read_text() != b.read_text()


class TestTrain:
    def test_train_writes_reloadable_model(self, blob_csv, tmp_path, capsys):
        mpath = tmp_path / "m.json"
        assert run("train", "--data", str(blob_csv), "--schema-target",
                   "label", "--trees", "12", "--depth", "3",
                   "--model-out", str(mpath)) == 0
        out = capsys.readouterr().out
        assert "12 stages" in out
        model = model_io.load_model(mpath)
        assert model.n_stages == 12

    def test_per_class_tree_count(self, blob_csv, tmp_path, capsys):
        mpath = tmp_path / "m.json"
        assert run("train", "--data", str(blob_csv), "--schema-target",
                   "label", "--trees", "10", "--depth", "2", "--mode",
                   "per-class", "--model-out", str(mpath)) == 0
        assert "30 trees" in capsys.readouterr().out

    def test_invalid_learning_rate_fails_with_diagnostic(self, blob_csv,
                                                         tmp_path, capsys):
        code = run("train", "--data", str(blob_csv), "--schema-target",
                   "label", "--lr", "0", "--model-out",
                   str(tmp_path / "m.json"))
        assert code != 0
        assert "learning_rate" in capsys.readouterr().err

    def test_missing_data_file(self, tmp_path, capsys):
        code = run("train", "--data", str(tmp_path / "nope.csv"),
                   "--model-out", str(tmp_path / "m.json"))
        assert code != 0
        assert "error:" in capsys.readouterr().err


class TestPredictEvaluate:
    @pytest.fixture()
    def trained(self, blob_csv, tmp_path):
        mpath = tmp_path / "m.json"
        run("train", "--data", str(blob_csv), "--schema-target", "label",
            "--trees", "30", "--depth", "3", "--model-out", str(mpath))
        return mpath

    def test_predict_matches_labels_on_training_data(self, blob_csv,
                                                     trained, tmp_path):
        out = tmp_path / "pred.csv"
        assert run("predict", "--data", str(blob_csv), "--schema-target",
                   "label", "--model-in", str(trained), "--out",
                   str(out)) == 0
        with open(out) as fh:
            rows = list(csv.reader(fh))
        assert rows[0][0] == "label"
        ds = data.load_csv(blob_csv, ["label"], "classification")
        assert len(rows) - 1 == ds.n_rows
        pred = [r[0] for r in rows[1:]]
        truth = [ds.class_names[c] for c in ds.labels]
        agree = np.mean([p == t for p, t in zip(pred, truth)])
        assert agree > 0.95
        for r in rows[1:]:
            assert sum(float(v) for v in r[1:]) == pytest.approx(1.0,
                                                                 abs=1e-9)

    def test_evaluate_prints_metrics(self, blob_csv, trained, capsys):
        assert run("evaluate", "--data", str(blob_csv), "--schema-target",
                   "label", "--model-in", str(trained)) == 0
        out = capsys.readouterr().out
        assert "accuracy:" in out and "precision[" in out

    def test_task_mismatch_is_reported(self, blob_csv, trained, capsys):
        code = run("evaluate", "--data", str(blob_csv), "--schema-target",
                   "label", "--task", "regression", "--model-in",
                   str(trained))
        assert code != 0
        assert "task" in capsys.readouterr().err

    def test_inspect_stage(self, trained, capsys):
        assert run("inspect", "--model-in", str(trained), "--stage", "0") == 0
        out = capsys.readouterr().out
        assert "samples=" in out and "mse=" in out

    def test_inspect_stage_out_of_range(self, trained, capsys):
        assert run("inspect", "--model-in", str(trained),
                   "--stage", "99") != 0
        assert "out of range" in capsys.readouterr().err


class TestGridAndBenchmark:
    def test_grid_lite_on_blobs(self, blob_csv, tmp_path, capsys):
        mpath = tmp_path / "best.json"
        assert run("grid", "--data", str(blob_csv), "--schema-target",
                   "label", "--trees", "10", "--grid-preset", "lite",
                   "--model-out", str(mpath)) == 0
        out = capsys.readouterr().out
        assert "best:" in out
        assert mpath.exists()

    def test_benchmark_reports_both_modes(self, blob_csv, capsys):
        assert run("benchmark", "--data", str(blob_csv), "--schema-target",
                   "label", "--trees", "3", "--depth", "2", "--repeat",
                   "1") == 0
        out = capsys.readouterr().out
        assert "mode=condensed" in out and "mode=per_class" in out
