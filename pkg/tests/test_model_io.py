import json

import numpy as np
import pytest

from cgboost import boosting, model_io
from cgboost.boosting import TrainConfig, PER_CLASS
from cgboost.data import Dataset, make_blobs


def small_model(mode="condensed"):
    ds = make_blobs(80, 3, 2, seed=0)
    return ds, boosting.fit(ds, TrainConfig(n_stages=5, max_depth=3,
                                            subsample=0.8, seed=1, mode=mode))


class TestRoundTrip:
    @pytest.mark.parametrize("mode", ["condensed", PER_CLASS])
    def test_predictions_bit_identical(self, tmp_path, mode):
        ds, model = small_model(mode)
        path = tmp_path / "m.json"
        model_io.save_model(model, path)
        back = model_io.load_model(path)
        np.testing.assert_array_equal(
            boosting.decision_function(model, ds.features),
            boosting.decision_function(back, ds.features))
        assert back.class_names == model.class_names
        assert back.mode == model.mode

    def test_regression_round_trip(self, tmp_path):
        rng = np.random.default_rng(2)
        X = rng.standard_normal((40, 3))
        ds = Dataset(X, "regression", targets=X @ rng.standard_normal((3, 2)))
        model = boosting.fit(ds, TrainConfig(n_stages=4, max_depth=2))
        path = tmp_path / "r.json"
        model_io.save_model(model, path)
        back = model_io.load_model(path)
        np.testing.assert_array_equal(boosting.predict(model, X),
                                      boosting.predict(back, X))

    def test_double_round_trip_stable(self, tmp_path):
        _, model = small_model()
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        model_io.save_model(model, p1)
        model_io.save_model(model_io.load_model(p1), p2)
        assert p1.read_text() == p2.read_text()


class TestErrors:
    def test_missing_file(self, tmp_path):
        with pytest.raises(model_io.ModelIOError, match="cannot read"):
            model_io.load_model(tmp_path / "none.json")

    def test_not_json(self, tmp_path):
        p = tmp_path / "x.json"
        p.write_text("not a model")
        with pytest.raises(model_io.ModelIOError, match="not a valid"):
            model_io.load_model(p)

    def test_wrong_format_marker(self, tmp_path):
        p = tmp_path / "x.json"
        p.write_text(json.dumps({"format": "other"}))
        with pytest.raises(model_io.ModelIOError, match="not a cgboost-model"):
            model_io.load_model(p)

    def test_unsupported_version(self, tmp_path):
        _, model = small_model()
        p = tmp_path / "m.json"
        model_io.save_model(model, p)
        obj = json.loads(p.read_text())
        obj["version"] = 99
        p.write_text(json.dumps(obj))
        with pytest.raises(model_io.ModelIOError, match="version"):
            model_io.load_model(p)
