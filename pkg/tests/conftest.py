"""
Shared fixtures: small generated datasets that keep the suite fast
"""

import numpy as np
import pytest
import structlog

from model_switching.dataset import Dataset, DatasetSpec, generate, train_val_split
from model_switching.rng import rng_from_seed


@pytest.fixture(autouse=True)
def _reset_structlog():
    """Drop logging config bound to a test's captured (later closed) stderr"""
    yield
    structlog.reset_defaults()


@pytest.fixture
def small_spec():
    """400 rows, 6 columns: 3 informative, 1 redundant, 2 noise"""
    return DatasetSpec(
        n_samples=400,
        n_features=6,
        n_informative=3,
        n_redundant=1,
        class_sep=2.0,
        seed=7,
    )


@pytest.fixture
def small_data(small_spec):
    return generate(small_spec)


@pytest.fixture
def small_split(small_data):
    """(train, val) with a quarter of each class held out"""
    return train_val_split(small_data, 0.25, rng_from_seed(7).split("split"))


@pytest.fixture
def probe_matrix():
    """1000 rows of wide-ranging values for prediction round-trip checks"""
    return np.random.default_rng(11).normal(0.0, 3.0, size=(1000, 6))


@pytest.fixture
def signal_data():
    """Column 0 equals the label, column 1 is filler; 200 balanced rows"""
    y = np.tile([0, 1], 100)
    filler = np.random.default_rng(5).normal(size=200)
    return Dataset(np.column_stack([y.astype(float), filler]), y)
