import itertools
from math import factorial

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pathmax.enumeration import (
    EnumerationRangeError,
    batch_distances,
    connected_batches,
    connected_labeled_graphs,
    connected_masks,
    labeled_paths,
    labeled_trees,
    masks_to_adjacency,
    mask_to_graph,
    path_distance_table,
    prufer_decode,
    prufer_encode,
)
from pathmax.graph_core import all_pairs_distances, as_path_sequence, encode_graph6, is_path, is_tree


def test_prufer_examples():
    assert prufer_decode((), 2).edges == {(1, 2)}
    assert prufer_decode((1, 1), 4).edges == {(1, 2), (1, 3), (1, 4)}
    assert as_path_sequence(prufer_decode((2, 3), 4)) == [1, 2, 3, 4]
    with pytest.raises(ValueError):
        prufer_decode((5,), 3)


@settings(max_examples=100, deadline=None)
@given(st.integers(3, 12).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.integers(1, n), min_size=n - 2, max_size=n - 2))))
def test_prufer_round_trip(case):
    n, seq = case
    t = prufer_decode(seq, n)
    assert is_tree(t) and prufer_encode(t) == seq


def test_tree_counts_small():
    trees = list(labeled_trees(4))
    assert len(trees) == 16 and sum(map(is_path, trees)) == 12
    assert len(list(labeled_trees(3))) == 3 and all(map(is_path, labeled_trees(3)))
    assert len(list(labeled_trees(2))) == 1


def test_trees_distinct():
    assert len({t.edges for t in labeled_trees(6)}) == 6 ** 4


def test_path_counts():
    for n in range(2, 7):
        ps = list(labeled_paths(n))
        assert len(ps) == factorial(n) // 2 and len({p.edges for p in ps}) == len(ps)


def test_connected_small():
    assert len(list(connected_labeled_graphs(2))) == 1
    g3 = list(connected_labeled_graphs(3))
    assert len(g3) == 4 and sum(map(is_path, g3)) == 3


@pytest.mark.parametrize("n", [3, 4, 5])
def test_connected_matches_networkx(n):
    ours = [encode_graph6(g) for g in connected_labeled_graphs(n)]
    ref = []
    pairs = [(i, j) for j in range(2, n + 1) for i in range(1, j)]
    for bits in itertools.product([0, 1], repeat=len(pairs)):
        G = nx.Graph()
        G.add_nodes_from(range(1, n + 1))
        G.add_edges_from(p for p, b in zip(pairs, bits) if b)
        if nx.is_connected(G):
            ref.append(nx.to_graph6_bytes(G, header=False).decode().strip())
    assert sorted(ours) == sorted(ref)
    assert len(ours) == len(set(ours))


def test_mask_ranges_partition():
    whole = list(connected_masks(5))
    parts = [m for lo in range(0, 1024, 100) for m in connected_masks(5, lo, lo + 100)]
    assert whole == parts


def test_batched_agree_with_scalar():
    masks, dist = next(connected_batches(5, 0, 1024, chunk=1024))
    assert masks.tolist() == list(connected_masks(5))
    for m, d in zip(masks[::37], dist[::37]):
        assert np.array_equal(d, all_pairs_distances(mask_to_graph(int(m), 5)))


def test_batch_distances_disconnected():
    A = masks_to_adjacency(np.array([0b000001]), 4)
    dist, ok = batch_distances(A)
    assert not ok[0] and dist[0, 0, 2] == -1 and dist[0, 0, 1] == 1


def test_path_table():
    seqs, table = path_distance_table(4)
    assert len(seqs) == 12 and table.shape == (12, 6)
    assert table.sum(axis=1).tolist() == [10] * 12


def test_ranges():
    with pytest.raises(EnumerationRangeError):
        list(labeled_trees(10))
    with pytest.raises(EnumerationRangeError):
        list(connected_masks(8))
