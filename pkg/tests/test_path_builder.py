import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pathmax.enumeration import prufer_decode
from pathmax.fa_core import WeightError, classify_weights, evaluate_F
from pathmax.graph_core import (
    DisconnectedGraphError,
    all_pairs_distances,
    build_graph,
    decode_graph6,
    is_path,
    path_graph,
)
from pathmax.path_builder import (
    PathCertificate,
    brute_force_best_connected,
    brute_force_best_path,
    check_certificate,
    contract_leaf,
    maximize_on_path,
    path_distances,
)

STAR2 = build_graph(4, [(1, 2), (2, 3), (2, 4)])


def ones(n):
    return np.ones((n, n), dtype=int) - np.eye(n, dtype=int)


def star_tie():
    a = ones(4)
    a[1, :] = a[:, 1] = 0
    return a


def test_contract_leaf():
    a2, relabel = contract_leaf(ones(3), 3, 2)
    assert a2.shape == (2, 2) and a2[0, 1] == 2 and relabel == {1: 1, 2: 2}
    a = np.arange(16).reshape(4, 4)
    a = a + a.T
    np.fill_diagonal(a, 0)
    a[2, :] = a[:, 2] = 0
    a2, _ = contract_leaf(a, 3, 1)
    assert np.array_equal(a2, np.delete(np.delete(a, 2, axis=0), 2, axis=1))


def test_path_is_fixed_point():
    g = path_graph([3, 1, 4, 2])
    cert = maximize_on_path(g, ones(4) * 3)
    assert cert.path == [2, 4, 1, 3] and cert.f_path == cert.f_input and not cert.strict


def test_star_all_ones():
    cert = maximize_on_path(STAR2, ones(4))
    assert (cert.f_input, cert.f_path, cert.strict) == (9, 10, True)
    assert is_path(path_graph(cert.path)) and not check_certificate(STAR2, ones(4), cert)


def test_star_tie_not_strict():
    cert = maximize_on_path(STAR2, star_tie())
    assert (cert.f_input, cert.f_path, cert.strict) == (6, 6, False)


def test_cycle_with_zero_edge_is_strict():
    c4 = build_graph(4, [(1, 2), (2, 3), (3, 4), (1, 4)])
    a = ones(4)
    a[2, 3] = a[3, 2] = 0
    cert = maximize_on_path(c4, a)
    assert cert.strict and cert.f_path > cert.f_input and not check_certificate(c4, a, cert)


def test_rejects_bad_input():
    with pytest.raises(WeightError):
        maximize_on_path(STAR2, -ones(4))
    with pytest.raises(DisconnectedGraphError):
        maximize_on_path(build_graph(4, [(1, 2), (3, 4)]), ones(4))
    with pytest.raises(WeightError):
        maximize_on_path(STAR2, ones(3))


def test_small_orders():
    assert maximize_on_path(build_graph(1, []), np.zeros((1, 1), dtype=int)).path == [1]
    assert maximize_on_path(path_graph([2, 1]), ones(2)).path == [1, 2]


def test_brute_force_path_examples():
    assert brute_force_best_path(ones(4)).value == 10
    a = np.array([[0, 5, 1], [5, 0, 1], [1, 1, 0]])
    assert tuple(brute_force_best_path(a)) == (12, [1, 3, 2])
    assert tuple(brute_force_best_path(np.array([[0, 7], [7, 0]]))) == (7, [1, 2])


def test_brute_force_connected_examples():
    value, graphs = brute_force_best_connected(ones(4))
    assert value == 10 and len(graphs) == 12 and all(is_path(decode_graph6(s)) for s in graphs)
    value, graphs = brute_force_best_connected(star_tie())
    assert value == 6 and not all(is_path(decode_graph6(s)) for s in graphs)
    assert brute_force_best_connected(np.array([[0, 3], [3, 0]])) == (3, ["A_"])


def networkx_best_connected(a):
    """Independent oracle: enumerate edge subsets with networkx shortest paths."""
    n = a.shape[0]
    pairs = list(itertools.combinations(range(n), 2))
    best = None
    for bits in itertools.product([0, 1], repeat=len(pairs)):
        G = nx.Graph()
        G.add_nodes_from(range(n))
        G.add_edges_from(p for p, b in zip(pairs, bits) if b)
        if not nx.is_connected(G):
            continue
        d = dict(nx.all_pairs_shortest_path_length(G))
        v = sum(int(a[i, j]) * d[i][j] for i, j in pairs)
        best = v if best is None else max(best, v)
    return best


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 9), min_size=6, max_size=6))
def test_connected_oracle_matches_networkx(vals):
    a = np.zeros((4, 4), dtype=int)
    a[np.triu_indices(4, 1)] = vals
    a = a + a.T
    assert brute_force_best_connected(a)[0] == networkx_best_connected(a)
    assert brute_force_best_path(a).value == networkx_best_connected(a)


@st.composite
def tree_and_weights(draw, zeros=True, max_n=9):
    n = draw(st.integers(3, max_n))
    seq = draw(st.lists(st.integers(1, n), min_size=n - 2, max_size=n - 2))
    lo = 0 if zeros else 1
    vals = draw(st.lists(st.integers(lo, 20), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    a = np.zeros((n, n), dtype=np.int64)
    a[np.triu_indices(n, 1)] = vals
    return prufer_decode(seq, n), a + a.T


@settings(max_examples=200, deadline=None)
@given(tree_and_weights())
def test_soundness_and_replay(case):
    g, a = case
    cert = maximize_on_path(g, a)
    assert cert.f_input == evaluate_F(all_pairs_distances(g), a)
    assert cert.f_path == evaluate_F(path_distances(cert.path), a) >= cert.f_input
    assert sorted(cert.path) == list(range(1, g.n + 1))
    assert check_certificate(g, a, cert) == []
    if classify_weights(a).in_N_n and not is_path(g):
        assert cert.strict


@settings(max_examples=150, deadline=None)
@given(tree_and_weights(zeros=False))
def test_strict_for_positive_weights(case):
    g, a = case
    cert = maximize_on_path(g, a)
    assert cert.strict == (not is_path(g))


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 7).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2),
    st.lists(st.integers(0, 9), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))))
def test_general_graphs(case):
    n, keep, vals = case
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    edges = [p for p, k in zip(pairs, keep) if k] + [(i, i + 1) for i in range(1, n)]
    g = build_graph(n, edges)
    a = np.zeros((n, n), dtype=np.int64)
    a[np.triu_indices(n, 1)] = vals
    a = a + a.T
    cert = maximize_on_path(g, a)
    assert check_certificate(g, a, cert) == []
    if classify_weights(a).in_N_n and not is_path(g):
        assert cert.strict


def test_float_weights():
    rng = np.random.default_rng(4)
    g = prufer_decode([3, 3, 5, 1], 6)
    w = rng.random((6, 6))
    w = w + w.T
    cert = maximize_on_path(g, w)
    assert cert.f_path >= cert.f_input and check_certificate(g, w, cert) == []


def test_tampered_certificates_detected():
    cert = maximize_on_path(STAR2, ones(4))
    d = cert.to_dict()
    bumped = PathCertificate.from_dict({**d, "f_path": d["f_path"] + 1})
    assert check_certificate(STAR2, ones(4), bumped)
    wrong_path = PathCertificate.from_dict({**d, "path": [1, 2, 3, 4]})
    assert check_certificate(STAR2, ones(4), wrong_path)
    broken = PathCertificate.from_dict(d)
    broken.trace[1].f_after += 1
    assert check_certificate(STAR2, ones(4), broken)
    assert check_certificate(STAR2, ones(4), PathCertificate.from_dict(d)) == []


@settings(max_examples=150, deadline=None)
@given(tree_and_weights())
def test_leaf_contraction_identity(case):
    g, a = case
    u = min(v for v in range(1, g.n + 1) if g.degree(v) == 1)
    (k,) = g.neighbors[u]
    a2, relabel = contract_leaf(a, u, k)
    rest = build_graph(g.n - 1, [(relabel[i], relabel[j]) for i, j in g.edges if u not in (i, j)])
    lhs = evaluate_F(all_pairs_distances(g), a)
    rhs = int(a[u - 1].sum() - a[u - 1, u - 1]) + evaluate_F(all_pairs_distances(rest), a2)
    assert lhs == rhs
