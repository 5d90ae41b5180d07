"""Exhaustive labeled generators: trees (Pruefer), paths (permutations), connected graphs.

All streams are deterministic and lazy. Connected graphs are indexed by the
edge-subset bitmask over the graph6 pair order, so a sweep can be split into
disjoint mask ranges ``[start, stop)`` and consumed by independent workers.
"""

from __future__ import annotations

import heapq
import itertools
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .graph_core import Graph, build_graph

TREE_MAX_N = 9
PATH_MAX_N = 9
CONNECTED_MAX_N = 7


class EnumerationRangeError(ValueError):
    pass


def _check_range(n: int, lo: int, hi: int, what: str):
    if not lo <= n <= hi:
        raise EnumerationRangeError(f"{what} enumeration supports {lo} <= n <= {hi}, got {n}")


def prufer_decode(seq: Sequence[int], n: int) -> Graph:
    if n < 2 or len(seq) != n - 2:
        raise ValueError(f"Pruefer sequence for n={n} must have length {n - 2}")
    if any(not 1 <= s <= n for s in seq):
        raise ValueError(f"Pruefer entries must lie in 1..{n}")
    degree = [1] * (n + 1)
    for s in seq:
        degree[s] += 1
    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for s in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, s))
        degree[s] -= 1
        if degree[s] == 1:
            heapq.heappush(leaves, s)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return build_graph(n, edges)


def prufer_encode(t: Graph) -> list[int]:
    """Inverse of prufer_decode (repeatedly strip the smallest leaf)."""
    nbrs = {v: set(t.neighbors[v]) for v in range(1, t.n + 1)}
    leaves = [v for v, s in nbrs.items() if len(s) == 1]
    heapq.heapify(leaves)
    seq = []
    for _ in range(t.n - 2):
        leaf = heapq.heappop(leaves)
        (parent,) = nbrs.pop(leaf)
        nbrs[parent].discard(leaf)
        seq.append(parent)
        if len(nbrs[parent]) == 1:
            heapq.heappush(leaves, parent)
    return seq


def labeled_trees(n: int, start: int = 0, stop: int | None = None) -> Iterator[Graph]:
    """All n**(n-2) labeled trees, in lexicographic Pruefer order."""
    _check_range(n, 2, TREE_MAX_N, "tree")
    seqs = itertools.product(range(1, n + 1), repeat=n - 2)
    for seq in itertools.islice(seqs, start, stop):
        yield prufer_decode(seq, n)


def path_sequences(n: int) -> Iterator[tuple[int, ...]]:
    """Permutations of 1..n with first < last, in lexicographic order."""
    for p in itertools.permutations(range(1, n + 1)):
        if n == 1 or p[0] < p[-1]:
            yield p


def labeled_paths(n: int) -> Iterator[Graph]:
    """The n!/2 labeled paths (a sequence and its reverse are one path)."""
    _check_range(n, 2, PATH_MAX_N, "path")
    for p in path_sequences(n):
        yield build_graph(n, zip(p, p[1:]))


def pair_list(n: int) -> list[tuple[int, int]]:
    """Vertex pairs in graph6 column order; bit k of a mask is pair_list(n)[k]."""
    return [(i, j) for j in range(2, n + 1) for i in range(1, j)]


def mask_to_graph(mask: int, n: int) -> Graph:
    pairs = pair_list(n)
    return build_graph(n, [pairs[k] for k in range(len(pairs)) if mask >> k & 1])


def _mask_connected(mask: int, n: int, pairs) -> bool:
    adj = [0] * n
    for k, (i, j) in enumerate(pairs):
        if mask >> k & 1:
            adj[i - 1] |= 1 << (j - 1)
            adj[j - 1] |= 1 << (i - 1)
    seen = frontier = 1
    full = (1 << n) - 1
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= adj[low.bit_length() - 1]
            f ^= low
        frontier = nxt & ~seen
        seen |= nxt
    return seen == full


def connected_masks(n: int, start: int = 0, stop: int | None = None) -> Iterator[int]:
    _check_range(n, 2, CONNECTED_MAX_N, "connected-graph")
    pairs = pair_list(n)
    total = 1 << len(pairs)
    stop = total if stop is None else min(stop, total)
    for mask in range(start, stop):
        # fewer than n-1 edges cannot be connected
        if mask.bit_count() >= n - 1 and _mask_connected(mask, n, pairs):
            yield mask


def connected_labeled_graphs(n: int, start: int = 0, stop: int | None = None) -> Iterator[Graph]:
    """Every connected edge subset on 1..n exactly once, by increasing bitmask."""
    for mask in connected_masks(n, start, stop):
        yield mask_to_graph(mask, n)


def mask_space(n: int) -> int:
    return 1 << (n * (n - 1) // 2)


# batched helpers for sweeps -------------------------------------------------

def masks_to_adjacency(masks: np.ndarray, n: int) -> np.ndarray:
    """Stack of 0/1 adjacency matrices (uint8) for an array of edge masks."""
    masks = np.asarray(masks, dtype=np.int64)
    A = np.zeros((masks.size, n, n), dtype=np.uint8)
    for k, (i, j) in enumerate(pair_list(n)):
        bit = ((masks >> k) & 1).astype(np.uint8)
        A[:, i - 1, j - 1] = bit
        A[:, j - 1, i - 1] = bit
    return A


def batch_distances(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Layered reachability on a stack of adjacency matrices.

    Returns ``(dist, connected)``; ``dist`` holds -1 for unreachable pairs.
    """
    B, n, _ = A.shape
    reach = np.broadcast_to(np.eye(n, dtype=bool), (B, n, n)).copy()
    dist = np.where(reach, 0, -1).astype(np.int64)
    Ai = A.astype(np.int32)
    for k in range(1, n):
        grown = reach | (np.matmul(reach.astype(np.int32), Ai) > 0)
        new = grown & ~reach
        if not new.any():
            break
        dist[new] = k
        reach = grown
    return dist, reach.all(axis=(1, 2))


def connected_batches(n: int, start: int = 0, stop: int | None = None, chunk: int = 1 << 15):
    """Yield ``(masks, dist)`` arrays for connected graphs with masks in ``[start, stop)``.

    Vectorised counterpart of connected_labeled_graphs for large sweeps; the
    mask order and membership are identical.
    """
    _check_range(n, 2, CONNECTED_MAX_N, "connected-graph")
    total = mask_space(n)
    stop = total if stop is None else min(stop, total)
    for lo in range(start, stop, chunk):
        masks = np.arange(lo, min(lo + chunk, stop), dtype=np.int64)
        A = masks_to_adjacency(masks, n)
        dist, ok = batch_distances(A)
        if ok.any():
            yield masks[ok], dist[ok]


@lru_cache(maxsize=None)
def connected_distance_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(masks, upper-triangle distance rows) for every connected graph on n vertices.

    Columns follow ``np.triu_indices(n, 1)`` (row-major pairs).
    """
    iu = np.triu_indices(n, 1)
    ms, ds = [], []
    for masks, dist in connected_batches(n):
        ms.append(masks)
        ds.append(dist[:, iu[0], iu[1]])
    masks = np.concatenate(ms)
    table = np.concatenate(ds).astype(np.int64)
    masks.setflags(write=False)
    table.setflags(write=False)
    return masks, table


@lru_cache(maxsize=None)
def path_distance_table(n: int) -> tuple[tuple[tuple[int, ...], ...], np.ndarray]:
    """(sequences, upper-triangle distance rows) for every labeled path on n vertices."""
    _check_range(n, 2, PATH_MAX_N, "path")
    seqs = tuple(path_sequences(n))
    pos = np.empty((len(seqs), n), dtype=np.int64)
    perm = np.array(seqs, dtype=np.int64) - 1
    pos[np.arange(len(seqs))[:, None], perm] = np.arange(n)
    iu = np.triu_indices(n, 1)
    table = np.abs(pos[:, iu[0]] - pos[:, iu[1]])
    table.setflags(write=False)
    return seqs, table
