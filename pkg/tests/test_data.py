import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mlcplan.data import (
    Dataset,
    label_stats,
    load_csv,
    load_meka_arff,
    save_csv,
    split_holdout,
    split_indices,
)
from mlcplan.errors import (
    DegenerateSplit,
    InvalidDataset,
    LabelCountExceedsColumns,
    MissingFile,
    MissingRelationMarker,
    NonBinaryLabel,
    NonNumericCell,
    UnsupportedAttributeType,
)
from mlcplan.losses import LossKind, compute_loss

CSV = "f1,f2,l1,l2\n0.5,1.0,1,0\n-2,3e-1,0,1\n7,8,1,1\n"


@pytest.fixture
def csv_file(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text(CSV)
    return p


def test_load_csv_suffix(csv_file):
    ds = load_csv(csv_file, 2, "suffix")
    assert (ds.n_rows, ds.n_features, ds.n_labels) == (3, 2, 2)
    assert ds.feature_names == ("f1", "f2")
    assert ds.label_names == ("l1", "l2")
    np.testing.assert_array_equal(ds.labels, [[1, 0], [0, 1], [1, 1]])
    np.testing.assert_array_equal(ds.features[1], [-2.0, 0.3])


def test_load_csv_prefix_rejects_numeric_label_columns(csv_file):
    # f1 holds non-binary values, so treating it as a label must fail
    with pytest.raises(NonBinaryLabel):
        load_csv(csv_file, 2, "prefix")


def test_load_csv_prefix_columns(tmp_path):
    p = tmp_path / "p.csv"
    p.write_text("y1,x1,x2\n1,0.1,0.2\n0,0.3,0.4\n")
    ds = load_csv(p, 1, "prefix")
    assert ds.label_names == ("y1",)
    assert ds.feature_names == ("x1", "x2")


def test_label_count_exceeds_columns(csv_file):
    with pytest.raises(LabelCountExceedsColumns):
        load_csv(csv_file, 5)
    with pytest.raises(LabelCountExceedsColumns):
        load_csv(csv_file, 4)


def test_non_binary_label(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("f1,l1\n1,0.5\n")
    with pytest.raises(NonBinaryLabel):
        load_csv(p, 1)


def test_non_numeric_cell_reports_position(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("f1,f2,l1\n1,2,0\n3,abc,1\n")
    with pytest.raises(NonNumericCell) as info:
        load_csv(p, 1)
    assert (info.value.row, info.value.col) == (1, 1)


def test_missing_file(tmp_path):
    with pytest.raises(MissingFile):
        load_csv(tmp_path / "nope.csv", 1)


def test_csv_roundtrip(tmp_path, csv_file):
    ds = load_csv(csv_file, 2)
    out = tmp_path / "out.csv"
    save_csv(ds, out)
    assert load_csv(out, 2) == ds


@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 4)),
              elements=st.floats(-1e6, 1e6, allow_nan=False)),
       st.integers(1, 3), st.integers(0, 2**31))
def test_csv_roundtrip_property(tmp_path_factory, X, m, seed):
    Y = np.random.default_rng(seed).integers(0, 2, (X.shape[0], m))
    ds = Dataset(X, Y)
    path = tmp_path_factory.mktemp("rt") / "x.csv"
    save_csv(ds, path)
    assert load_csv(path, m) == ds


ARFF = """% comment
@relation 'scene: -C 3'
@attribute a {0,1}
@attribute b {0,1}
@attribute c {0,1}
@attribute x numeric
@attribute y real
@attribute z NUMERIC
@data
1,0,1,0.5,1.5,2
0,0,0,-1,2,3e2
"""


def test_arff_scene_like(tmp_path):
    p = tmp_path / "s.arff"
    p.write_text(ARFF)
    ds = load_meka_arff(p)
    assert (ds.n_labels, ds.n_features, ds.n_rows) == (3, 3, 2)
    np.testing.assert_array_equal(ds.labels, [[1, 0, 1], [0, 0, 0]])
    np.testing.assert_array_equal(ds.features[1], [-1, 2, 300])


def test_arff_negative_marker_means_first_attributes(tmp_path):
    p = tmp_path / "s.arff"
    p.write_text(ARFF.replace("-C 3", "-C -3"))
    ds = load_meka_arff(p)
    assert ds.n_labels == 3 and ds.n_features == 3
    # a binary nominal attribute outside the label block is not numeric
    p.write_text(ARFF.replace("-C 3", "-C -2"))
    with pytest.raises(UnsupportedAttributeType):
        load_meka_arff(p)


def test_arff_missing_marker(tmp_path):
    p = tmp_path / "s.arff"
    p.write_text(ARFF.replace("scene: -C 3", "scene"))
    with pytest.raises(MissingRelationMarker):
        load_meka_arff(p)


def test_arff_string_attribute(tmp_path):
    p = tmp_path / "s.arff"
    p.write_text(ARFF.replace("@attribute z NUMERIC", "@attribute z string"))
    with pytest.raises(UnsupportedAttributeType):
        load_meka_arff(p)


def test_arff_non_binary_label(tmp_path):
    p = tmp_path / "s.arff"
    p.write_text(ARFF.replace("@attribute a {0,1}", "@attribute a numeric").replace("1,0,1,0.5", "2,0,1,0.5"))
    with pytest.raises(NonBinaryLabel):
        load_meka_arff(p)


def test_split_sizes_and_determinism():
    ds = Dataset(np.arange(10.0)[:, None], np.zeros((10, 1)))
    a, b = split_holdout(ds, 0.7, 42)
    assert (a.n_rows, b.n_rows) == (7, 3)
    a2, b2 = split_holdout(ds, 0.7, 42)
    assert a == a2 and b == b2
    assert sorted(np.concatenate([a.features[:, 0], b.features[:, 0]])) == list(np.arange(10.0))


def test_split_edge_cases():
    ds = Dataset([[0.0], [1.0]], [[0], [1]])
    a, b = split_holdout(ds, 0.5, 0)
    assert (a.n_rows, b.n_rows) == (1, 1)
    with pytest.raises(DegenerateSplit):
        split_holdout(Dataset([[0.0]], [[1]]), 0.5, 0)


@given(st.integers(2, 60), st.floats(0.05, 0.95), st.integers(0, 2**32 - 1))
def test_split_is_partition(n, ratio, seed):
    try:
        tr, te = split_indices(n, ratio, seed)
    except DegenerateSplit:
        return
    assert sorted(np.concatenate([tr, te]).tolist()) == list(range(n))
    assert len(tr) == int(np.ceil(ratio * n))


def test_label_stats_examples():
    s = label_stats(Dataset([[0.0], [1.0]], [[1, 0], [0, 1]]))
    assert (s.cardinality, s.density, s.distinct_labelsets) == (1.0, 0.5, 2)
    s = label_stats(Dataset(np.zeros((4, 1)), np.zeros((4, 3))))
    assert (s.density, s.distinct_labelsets) == (0.0, 1)
    assert label_stats(Dataset([[0.0], [1.0]], [[1, 1], [1, 1]])).density == 1.0


@given(st.integers(1, 20), st.integers(1, 6), st.integers(0, 2**31))
def test_density_equals_hamming_of_zeros(S, m, seed):
    Y = np.random.default_rng(seed).integers(0, 2, (S, m))
    ds = Dataset(np.zeros((S, 1)), Y)
    s = label_stats(ds)
    assert s.density == compute_loss(LossKind.HAMMING, Y, np.zeros_like(Y))
    assert 1 <= s.distinct_labelsets <= min(S, 2 ** m)


def test_dataset_invariants():
    with pytest.raises(InvalidDataset):
        Dataset([[np.nan]], [[0]])
    with pytest.raises(InvalidDataset):
        Dataset([[1.0], [2.0]], [[0]])
    with pytest.raises(NonBinaryLabel):
        Dataset([[1.0]], [[2]])
    ds = Dataset([[1.0]], [[1]])
    with pytest.raises(ValueError):
        ds.features[0, 0] = 3.0
