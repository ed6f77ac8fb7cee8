import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mlcplan.data import Dataset, split_holdout
from mlcplan.errors import AllCandidatesFailed, DimensionMismatch, InvalidParam, LabelFitError
from mlcplan.learners import LearnerSpec, fit_learner
from mlcplan.losses import threshold_scores
from mlcplan.mlc import (
    MlcSpec,
    fit_br,
    fit_cc,
    fit_ecc,
    fit_libre,
    fit_lp,
    fit_mlc,
    predict_mlc,
)
from mlcplan.synth import copy_label, libre_fixture

BASES = [LearnerSpec("tree", {"max_depth": 3}), LearnerSpec("logistic", {"iterations": 100}),
         LearnerSpec("knn", {"k": 3}), LearnerSpec("gaussian_nb")]


def random_ds(seed, m, S=40, d=3):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((S, d))
    Y = (X @ rng.standard_normal((d, m)) + 0.5 * rng.standard_normal((S, m)) > 0).astype(int)
    return Dataset(X, Y)


@pytest.mark.parametrize("base", BASES, ids=lambda b: b.name)
def test_single_label_reduction(base):
    for seed in range(5):
        ds = random_ds(seed, 1)
        want = (fit_learner(base, ds.features, ds.labels[:, 0]).proba_of(ds.features, 1) >= 0.5)
        for model in (fit_br(base, ds, seed), fit_cc(base, 3, ds, seed), fit_ecc(base, 3, seed, ds),
                      fit_lp(base, ds, seed)):
            _, hard = predict_mlc(model, ds.features, 0.5)
            np.testing.assert_array_equal(hard[:, 0], want.astype(np.int8))


def test_br_constant_and_copied_labels():
    ds = random_ds(0, 2)
    Y = np.column_stack([ds.labels[:, 0], np.zeros(ds.n_rows, dtype=int), ds.labels[:, 0]])
    ds3 = Dataset(ds.features, Y)
    scores, hard = predict_mlc(fit_br(BASES[0], ds3, 1), ds3.features)
    np.testing.assert_array_equal(scores[:, 1], 0.0)
    np.testing.assert_array_equal(scores[:, 0], scores[:, 2])
    assert hard[:, 1].sum() == 0


@given(st.integers(0, 10**6), st.permutations(range(4)))
def test_br_label_permutation_equivariance(seed, perm):
    ds = random_ds(seed, 4, S=25)
    perm = list(perm)
    a, _ = predict_mlc(fit_br(BASES[0], ds, 0), ds.features)
    b, _ = predict_mlc(fit_br(BASES[0], Dataset(ds.features, ds.labels[:, perm]), 0), ds.features)
    np.testing.assert_array_equal(a[:, perm], b)


def test_libre_selection_table_dominance_and_xor_choice():
    ds = libre_fixture()
    cands = (LearnerSpec("logistic"), LearnerSpec("knn", {"k": 1}))
    model = fit_libre(cands, ds, 0.7, 0)
    assert model.choices[1].name == "knn"
    table = model.selection_errors
    for j, choice in enumerate(model.choices):
        assert table[j, cands.index(choice)] == table[j].min()


def test_libre_single_candidate_equals_br():
    ds = random_ds(3, 3)
    a, _ = predict_mlc(fit_libre((BASES[0],), ds, 0.7, 5), ds.features)
    b, _ = predict_mlc(fit_br(BASES[0], ds, 5), ds.features)
    np.testing.assert_array_equal(a, b)


def test_libre_majority_proxies():
    # label 0 is 90% zeros, label 1 is 90% ones; stumps on a constant feature predict the majority
    X = np.zeros((10, 1))
    Y = np.column_stack([[1] + [0] * 9, [0] + [1] * 9])
    model = fit_libre((LearnerSpec("tree", {"max_depth": 1}),), Dataset(X, Y), 0.5, 0)
    _, hard = predict_mlc(model, X)
    np.testing.assert_array_equal(hard, np.column_stack([np.zeros(10), np.ones(10)]))


def test_libre_all_candidates_failing(monkeypatch):
    import mlcplan.mlc as mlc
    from mlcplan.errors import NumericalFailure

    def boom(*a, **k):
        raise NumericalFailure("synthetic")
    monkeypatch.setattr(mlc, "fit_learner", boom)
    with pytest.raises(AllCandidatesFailed):
        mlc.fit_libre((BASES[0],), random_ds(0, 2), 0.7, 0)


def test_cc_copy_label_uses_augmented_column():
    ds = copy_label(300, 4, 2, seed=1)
    train, test = split_holdout(ds, 0.7, 1)
    model = fit_cc(LearnerSpec("tree"), 0, train, 0, order=[0, 1])
    _, hard = predict_mlc(model, test.features)
    np.testing.assert_array_equal(hard[:, 1], hard[:, 0])


def test_cc_determinism_and_order():
    ds = random_ds(2, 4)
    a = fit_cc(BASES[1], 9, ds, 0)
    b = fit_cc(BASES[1], 9, ds, 0)
    assert a.order.tolist() == b.order.tolist()
    assert sorted(a.order.tolist()) == [0, 1, 2, 3]
    np.testing.assert_array_equal(a.predict_scores(ds.features), b.predict_scores(ds.features))
    with pytest.raises(InvalidParam):
        fit_cc(BASES[0], 0, ds, 0, order=[0, 0, 1, 2])


def test_ecc_is_mean_of_members():
    ds = random_ds(4, 3)
    model = fit_ecc(BASES[1], 4, 11, ds)
    members = model.member_scores(ds.features)
    np.testing.assert_allclose(model.predict_scores(ds.features), np.mean(members, axis=0), atol=1e-15)
    one = fit_ecc(BASES[1], 1, 11, ds)
    np.testing.assert_array_equal(one.predict_scores(ds.features), one.chains[0].predict_scores(ds.features))


def test_lp_classes_and_hard_path():
    X = np.arange(6.0)[:, None]
    Y = np.array([[0, 0], [0, 1], [1, 1], [0, 0], [1, 1], [0, 1]])
    model = fit_lp(LearnerSpec("knn", {"k": 3}), Dataset(X, Y))
    assert model.labelsets.tolist() == [[0, 0], [0, 1], [1, 1]]
    rng = np.random.default_rng(0)
    preds = model.predict_labelsets(rng.uniform(-5, 10, (50, 1)))
    assert {tuple(r) for r in preds.tolist()} <= {(0, 0), (0, 1), (1, 1)}


def test_predict_contract():
    ds = random_ds(5, 3)
    model = fit_br(BASES[0], ds)
    scores, hard = predict_mlc(model, ds.features, 0.0)
    assert hard.min() == 1
    np.testing.assert_array_equal(predict_mlc(model, ds.features, 0.3)[1], threshold_scores(scores, 0.3))
    with pytest.raises(DimensionMismatch):
        predict_mlc(model, np.zeros((2, 5)))
    zeros = Dataset(ds.features, np.zeros((ds.n_rows, 2)))
    assert predict_mlc(fit_br(BASES[0], zeros), ds.features)[1].sum() == 0


def test_spec_roundtrip_and_dispatch():
    spec = MlcSpec.from_dict({"name": "cc", "params": {"order_seed": 7},
                              "base": {"name": "tree", "params": {"max_depth": 4, "min_leaf": 2}}})
    assert MlcSpec.from_dict(spec.to_dict()) == spec
    ds = random_ds(6, 2)
    assert fit_mlc(spec, ds).name == "cc"
    with pytest.raises(InvalidParam):
        MlcSpec("ecc", {"ensemble_size": 0}, BASES[0])
    with pytest.raises(InvalidParam):
        MlcSpec("libre", {}, ())


def test_label_errors_are_tagged(monkeypatch):
    import mlcplan.mlc as mlc
    from mlcplan.errors import NumericalFailure

    def boom(*a, **k):
        raise NumericalFailure("synthetic")
    monkeypatch.setattr(mlc, "fit_learner", boom)
    with pytest.raises(LabelFitError) as info:
        mlc.fit_br(BASES[0], random_ds(0, 2))
    assert info.value.label == 0
