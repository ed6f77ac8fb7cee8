import itertools
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mlcplan.errors import KOutOfRange, NonBinaryEntry, OutOfRangeScore, ShapeMismatch
from mlcplan.losses import (
    CANONICAL_KINDS,
    LossKind,
    all_losses,
    compute_loss,
    row_losses,
    subset_k_closed_form,
    subset_k_enumerated,
    subset_k_loss,
    threshold_scores,
)

F1_KINDS = (LossKind.F1_INSTANCE, LossKind.F1_LABEL, LossKind.F1_MICRO)


def pairs(max_s=30, max_m=8):
    return st.tuples(st.integers(1, max_s), st.integers(1, max_m), st.integers(0, 2**32 - 1)).map(
        lambda t: tuple(np.random.default_rng(t[2]).integers(0, 2, (2, t[0], t[1]))))


def f1(t, p):
    # loop oracle, 0/0 counts as 1
    tp = sum(a and b for a, b in zip(t, p))
    denom = sum(t) + sum(p)
    return 1.0 if denom == 0 else 2 * tp / denom


def oracle(kind, Y, P):
    Y, P = Y.tolist(), P.tolist()
    S, m = len(Y), len(Y[0])
    if kind is LossKind.HAMMING:
        return sum(a != b for y, p in zip(Y, P) for a, b in zip(y, p)) / (S * m)
    if kind is LossKind.SUBSET_ZERO_ONE:
        return sum(y != p for y, p in zip(Y, P)) / S
    if kind is LossKind.F1_INSTANCE:
        return 1 - sum(f1(y, p) for y, p in zip(Y, P)) / S
    if kind is LossKind.F1_LABEL:
        cols = [([y[j] for y in Y], [p[j] for p in P]) for j in range(m)]
        return 1 - sum(f1(t, p) for t, p in cols) / m
    return 1 - f1(sum(Y, []), sum(P, []))


def test_threshold_tie_rule():
    np.testing.assert_array_equal(threshold_scores([[0.5, 0.49]], 0.5), [[1, 0]])
    np.testing.assert_array_equal(threshold_scores([[0.0, 0.3]], 0.0), [[1, 1]])
    np.testing.assert_array_equal(threshold_scores([[0.99, 0.3]], 1.0), [[0, 0]])
    with pytest.raises(OutOfRangeScore):
        threshold_scores([[1.2]], 0.5)
    with pytest.raises(OutOfRangeScore):
        threshold_scores([[0.2]], 1.5)


def test_worked_two_by_two():
    Y = np.array([[1, 0], [0, 1]])
    P = np.array([[1, 1], [0, 1]])
    assert compute_loss(LossKind.HAMMING, Y, P) == 0.25
    assert compute_loss(LossKind.SUBSET_ZERO_ONE, Y, P) == 0.5
    assert compute_loss(LossKind.F1_INSTANCE, Y, P) == pytest.approx(1 - 5 / 6, abs=1e-12)
    assert compute_loss(LossKind.F1_LABEL, Y, P) == pytest.approx(1 - 5 / 6, abs=1e-12)
    assert compute_loss(LossKind.F1_MICRO, Y, P) == pytest.approx(0.2, abs=1e-12)
    for kind in CANONICAL_KINDS:
        assert compute_loss(kind, Y, Y) == 0.0
        assert compute_loss(kind, np.zeros((3, 2)), np.zeros((3, 2))) == 0.0


def test_errors():
    with pytest.raises(ShapeMismatch):
        compute_loss(LossKind.HAMMING, np.zeros((2, 2)), np.zeros((2, 3)))
    with pytest.raises(NonBinaryEntry):
        compute_loss(LossKind.HAMMING, np.zeros((1, 2)), np.array([[0, 2]]))
    with pytest.raises(KOutOfRange):
        subset_k_loss(np.zeros((1, 3)), np.zeros((1, 3)), 4)
    with pytest.raises(KOutOfRange):
        subset_k_loss(np.zeros((1, 3)), np.zeros((1, 3)), 0)


def test_parse_aliases():
    assert LossKind.parse("f1i") is LossKind.F1_INSTANCE
    assert LossKind.parse("f1l") is LossKind.F1_LABEL
    assert LossKind.parse("f1micro") is LossKind.F1_MICRO
    assert LossKind.parse("subset01") is LossKind.SUBSET_ZERO_ONE
    assert LossKind.parse("Hamming") is LossKind.HAMMING


def test_subset_k_worked_example():
    Y, P = np.array([[1, 0, 0]]), np.array([[0, 0, 0]])
    assert subset_k_loss(Y, P, 2) == pytest.approx(2 / 3, abs=1e-15)


@given(pairs())
def test_losses_match_loop_oracle(yp):
    Y, P = yp
    for kind in CANONICAL_KINDS:
        assert compute_loss(kind, Y, P) == pytest.approx(oracle(kind, Y, P), abs=1e-12)


@given(pairs(max_m=7))
def test_subset_k_enumeration_matches_bruteforce_and_closed_form(yp):
    Y, P = yp
    m = Y.shape[1]
    for k in range(1, m + 1):
        brute = np.mean([np.mean([np.any(y[list(T)] != p[list(T)])
                                  for T in itertools.combinations(range(m), k)])
                         for y, p in zip(Y, P)])
        assert subset_k_enumerated(Y, P, k) == pytest.approx(brute, abs=1e-12)
        assert subset_k_closed_form(Y, P, k) == pytest.approx(brute, abs=1e-12)


@given(pairs())
def test_family_identities(yp):
    Y, P = yp
    m = Y.shape[1]
    ham = compute_loss(LossKind.HAMMING, Y, P)
    sub = compute_loss(LossKind.SUBSET_ZERO_ONE, Y, P)
    assert subset_k_loss(Y, P, 1) == ham
    assert subset_k_loss(Y, P, m) == sub
    assert ham <= sub
    ks = [subset_k_loss(Y, P, k) for k in range(1, m + 1)]
    assert all(a <= b + 1e-15 for a, b in zip(ks, ks[1:]))
    for kind in F1_KINDS:
        assert compute_loss(kind, Y, P) == compute_loss(kind, P, Y)
    for kind in CANONICAL_KINDS:
        v = compute_loss(kind, Y, P)
        assert 0.0 <= v <= 1.0
        assert (v == 0.0) == bool(np.array_equal(Y, P))


def test_subset_k_large_m_uses_closed_form():
    rng = np.random.default_rng(0)
    Y, P = rng.integers(0, 2, (2, 5, 30))
    e = (Y != P).sum(axis=1)
    want = np.mean([1 - Fraction(comb(30 - int(ei), 7), comb(30, 7)) for ei in e])
    assert subset_k_loss(Y, P, 7) == pytest.approx(float(want), abs=1e-12)


def test_all_losses_and_row_losses():
    Y = np.array([[1, 0, 1], [0, 0, 0]])
    P = np.array([[1, 1, 1], [0, 0, 0]])
    table = all_losses(Y, P)
    assert set(table) == {"hamming", "subset01", "f1_instance", "f1_label", "f1_micro"}
    rows = row_losses(LossKind.HAMMING, Y, P)
    np.testing.assert_allclose(rows, [1 / 3, 0.0])
