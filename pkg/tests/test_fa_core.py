import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pathmax.fa_core import (
    WeightError,
    as_weights,
    classify_weights,
    evaluate_F,
    F_of_graph,
    rank_one_weights,
    read_weights_csv,
)
from pathmax.graph_core import all_pairs_distances, build_graph, path_graph
from pathmax.spectra import distance_bundle, largest_eigenpair


def ones(n):
    return np.ones((n, n), dtype=int) - np.eye(n, dtype=int)


def test_wiener_values():
    assert F_of_graph(path_graph([1, 2, 3, 4]), ones(4)) == 10
    assert F_of_graph(build_graph(4, [(1, 2), (1, 3), (1, 4)]), ones(4)) == 9


@pytest.mark.parametrize("n", [2, 5, 9])
def test_endpoint_weight(n):
    a = np.zeros((n, n), dtype=int)
    a[0, n - 1] = a[n - 1, 0] = 1
    assert F_of_graph(path_graph(range(1, n + 1)), a) == n - 1


def test_exact_int_and_float():
    v = F_of_graph(path_graph([1, 2, 3]), ones(3))
    assert isinstance(v, int) and v == 4
    assert isinstance(F_of_graph(path_graph([1, 2, 3]), ones(3) * 0.5), float)


def test_diagonal_ignored():
    a = ones(3) + 7 * np.eye(3, dtype=int)
    assert F_of_graph(path_graph([1, 2, 3]), a) == 4


@pytest.mark.parametrize("bad", [np.array([[0, 1], [2, 0]]), np.array([[0, 2 * 10**6], [2 * 10**6, 0]]),
                                 np.array([[0, np.nan], [np.nan, 0]]), np.ones((2, 3))])
def test_weight_validation(bad):
    with pytest.raises(WeightError):
        as_weights(bad)


def test_order_mismatch():
    with pytest.raises(WeightError):
        evaluate_F(np.zeros((3, 3), dtype=int), ones(4))


def test_classify_examples():
    assert classify_weights(ones(4)) == (True, True, True)
    a = ones(4)
    a[1, :] = a[:, 1] = 0
    assert not classify_weights(a).in_N_n
    w = classify_weights(rank_one_weights([1.0, 2.0, 1.0, 3.0], "square_diff"))
    assert w.nonnegative and not w.positive_offdiag
    b = ones(4)
    b[0, 1] = b[1, 0] = 0
    b[2, 3] = b[3, 2] = 0
    assert classify_weights(b) == (True, True, False)
    assert not classify_weights(-ones(3)).nonnegative


def test_rank_one_examples():
    a = rank_one_weights([1, 0, -1], "square_diff")
    assert (a[0, 1], a[0, 2], a[1, 2]) == (1, 4, 1) and not np.diag(a).any()
    assert not rank_one_weights([2, 2, 2], "square_diff").any()
    assert classify_weights(rank_one_weights([0.5, 1.0, 2.0], "square_sum")).positive_offdiag
    with pytest.raises(ValueError):
        rank_one_weights([1, 2], "cube")


@settings(max_examples=60, deadline=None)
@given(st.permutations(list(range(1, 8))))
def test_rayleigh_identities_on_paths(seq):
    b = distance_bundle(all_pairs_distances(path_graph(seq)))
    d = b.D
    for m, kind, scale in ((b.D, "product", 2), (b.DL, "square_diff", 1), (b.DQ, "square_sum", 1)):
        ep = largest_eigenpair(m)
        assert abs(scale * evaluate_F(d, rank_one_weights(ep.x, kind)) - ep.lam) < 1e-8


def test_csv():
    assert read_weights_csv("0,1\n1,0\n").dtype == np.int64
    assert read_weights_csv("0,1.5\n1.5,0").dtype == np.float64
    with pytest.raises(WeightError):
        read_weights_csv("0,1\n1")
    with pytest.raises(WeightError):
        read_weights_csv("0,x\nx,0")
