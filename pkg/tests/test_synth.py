import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mlcplan.data import load_csv, save_csv, split_holdout
from mlcplan.errors import InvalidSize
from mlcplan.learners import LearnerSpec, fit_learner
from mlcplan.synth import SYNTH_KINDS, libre_fixture, synth_generate
from mlcplan.cli import resource_path


@given(st.sampled_from(SYNTH_KINDS), st.integers(0, 2**31), st.integers(1, 40),
       st.integers(2, 6), st.integers(2, 5))
def test_deterministic_and_shaped(kind, seed, rows, d, m):
    a = synth_generate(kind, rows, d, m, seed)
    b = synth_generate(kind, rows, d, m, seed)
    assert a.features.shape == (rows, d) and a.labels.shape == (rows, m)
    np.testing.assert_array_equal(a.features, b.features)
    np.testing.assert_array_equal(a.labels, b.labels)
    assert set(np.unique(a.labels)) <= {0, 1}


@given(st.integers(0, 2**31))
def test_copy_label_columns_identical(seed):
    ds = synth_generate("copy-label", 50, 3, 3, seed)
    np.testing.assert_array_equal(ds.labels[:, 0], ds.labels[:, 1])


def test_xor_label_defeats_linear_models():
    ds = synth_generate("xor-dependence", 1000, 4, 2, seed=0)
    x0, x1 = ds.features[:, 0] > 0, ds.features[:, 1] > 0
    np.testing.assert_array_equal(ds.labels[:, -1], x0 ^ x1)
    model = fit_learner(LearnerSpec("logistic"), ds.features, ds.labels[:, -1])
    acc = np.mean((model.proba_of(ds.features, 1) >= 0.5) == ds.labels[:, -1])
    assert abs(acc - 0.5) <= 0.1


def test_blobs_are_separable_by_nearest_neighbour():
    ds = synth_generate("blobs", 500, 10, 3, seed=0)
    train, test = split_holdout(ds, 0.7, 0)
    for j in range(3):
        model = fit_learner(LearnerSpec("knn", {"k": 1}), train.features, train.labels[:, j])
        acc = np.mean((model.proba_of(test.features, 1) >= 0.5) == test.labels[:, j])
        assert acc >= 0.95


def test_invalid_sizes():
    for args in (("blobs", 0, 2, 2), ("blobs", 10, -1, 2), ("copy-label", 10, 2, 1),
                 ("xor-dependence", 10, 1, 2), ("nope", 10, 2, 2), ("blobs", 2.5, 2, 2)):
        with pytest.raises(InvalidSize):
            synth_generate(*args)


def test_bundled_libre_fixture_matches_generator():
    bundled = load_csv(resource_path("libre_fixture.csv"), 2)
    fresh = libre_fixture()
    np.testing.assert_allclose(bundled.features, fresh.features, rtol=0, atol=1e-15)
    np.testing.assert_array_equal(bundled.labels, fresh.labels)


def test_csv_roundtrip(tmp_path):
    ds = synth_generate("blobs", 20, 3, 2, seed=1)
    save_csv(ds, tmp_path / "d.csv")
    back = load_csv(tmp_path / "d.csv", 2)
    np.testing.assert_array_equal(back.features, ds.features)
    np.testing.assert_array_equal(back.labels, ds.labels)
