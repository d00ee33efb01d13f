"""
Tests for model files - exact prediction round trips and format checks
"""

import json

import numpy as np
import pytest

from model_switching.boosting import BoostParams, fit_boosted
from model_switching.errors import ModelFormatError
from model_switching.forest import ForestParams, fit_forest
from model_switching.persistence import (
    FORMAT_VERSION,
    dumps_model,
    load_model,
    model_from_dict,
    model_to_dict,
    save_model,
)
from model_switching.svm import LinearSvm, LinearSvmParams, fit_linear_svm
from model_switching.tree import DecisionTree, TreeParams


@pytest.fixture
def fitted_models(small_split):
    train, _ = small_split
    return [
        fit_forest(train, ForestParams(n_estimators=5, seed=3)),
        fit_boosted(train, BoostParams(n_estimators=5, max_depth=3, seed=3)),
        fit_linear_svm(train, LinearSvmParams(epochs=2, seed=3)),
        DecisionTree(TreeParams(max_depth=4)).fit(train),
    ]


def test_save_load_reproduces_predictions(tmp_path, fitted_models, probe_matrix):
    """Test every model kind predicts identically after a file round trip"""
    for model in fitted_models:
        path = tmp_path / f"{model.kind}.json"
        save_model(model, path)
        loaded = load_model(path)
        assert type(loaded) is type(model)
        assert loaded.params == model.params
        assert np.array_equal(loaded.predict(probe_matrix), model.predict(probe_matrix))
        assert np.array_equal(
            loaded.predict_score(probe_matrix), model.predict_score(probe_matrix)
        )


def test_document_layout(fitted_models):
    """Test the top-level keys and echoed hyperparameters"""
    forest = fitted_models[0]
    doc = model_to_dict(forest)
    assert set(doc) == {"format_version", "model_kind", "params", "learned_state"}
    assert doc["format_version"] == FORMAT_VERSION
    assert doc["model_kind"] == "random_forest"
    assert doc["params"]["n_estimators"] == 5
    assert len(doc["learned_state"]["trees"]) == 5


def test_dumps_is_deterministic(fitted_models):
    """Test serializing the same model twice gives the same text"""
    for model in fitted_models:
        assert dumps_model(model) == dumps_model(model)


def test_future_version_rejected(fitted_models):
    """Test a newer format_version is refused by number"""
    doc = model_to_dict(fitted_models[2])
    doc["format_version"] = FORMAT_VERSION + 1
    message = f"unsupported format_version {FORMAT_VERSION + 1}"
    with pytest.raises(ModelFormatError, match=message):
        model_from_dict(doc)


def test_unknown_kind_rejected(fitted_models):
    """Test an unknown model_kind is refused"""
    doc = model_to_dict(fitted_models[2])
    doc["model_kind"] = "neural_net"
    with pytest.raises(ModelFormatError, match="unknown model_kind"):
        model_from_dict(doc)


def test_malformed_content_rejected(fitted_models):
    """Test missing state, unknown params and wrong weight counts are refused"""
    doc = model_to_dict(fitted_models[2])
    broken = dict(doc, learned_state={})
    with pytest.raises(ModelFormatError):
        model_from_dict(broken)

    extra = json.loads(json.dumps(doc))
    extra["params"]["momentum"] = 0.9
    with pytest.raises(ModelFormatError, match="momentum"):
        model_from_dict(extra)

    short = json.loads(json.dumps(doc))
    short["learned_state"]["weights"] = short["learned_state"]["weights"][:-1]
    with pytest.raises(ModelFormatError):
        model_from_dict(short)


def test_invalid_json_rejected(tmp_path):
    """Test a file that is not JSON is a format error"""
    path = tmp_path / "model.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ModelFormatError):
        load_model(path)


def test_unfitted_model_cannot_be_saved(tmp_path):
    """Test saving before fitting is refused"""
    with pytest.raises(ModelFormatError):
        save_model(LinearSvm(), tmp_path / "model.json")
