"""Labeled undirected graphs on vertices 1..n.

Vertices are 1-based on every public surface. Neighbor scans are always in
ascending label order so BFS trees and path orders are reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

MAX_ORDER = 62


class GraphError(ValueError):
    """Malformed graph input."""


class DisconnectedGraphError(GraphError):
    """Raised where a connected graph is required."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not 1 <= self.n <= MAX_ORDER:
            raise GraphError(f"order {self.n} outside 1..{MAX_ORDER}")
        for e in self.edges:
            i, j = e
            if i == j:
                raise GraphError(f"self-loop at vertex {i}")
            if not (1 <= i < j <= self.n):
                raise GraphError(f"edge {e} out of range for n={self.n}")

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        """Sorted neighbor tuples, indexed by label (index 0 unused)."""
        adj: list[list[int]] = [[] for _ in range(self.n + 1)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return tuple(tuple(sorted(a)) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    @property
    def m(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for i, j in self.edges:
            a[i - 1, j - 1] = a[j - 1, i - 1] = 1
        return a

    def remove_vertex(self, v: int) -> tuple["Graph", dict[int, int]]:
        """Delete ``v`` and relabel the rest to 1..n-1 preserving order.

        Returns the smaller graph and the old->new label map.
        """
        relabel = {old: old - (old > v) for old in range(1, self.n + 1) if old != v}
        edges = frozenset((relabel[i], relabel[j]) for i, j in self.edges if v not in (i, j))
        return Graph(self.n - 1, edges), relabel

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.sorted_edges()})"


def _norm_edge(e) -> tuple[int, int]:
    i, j = (int(v) for v in e)
    if i == j:
        raise GraphError(f"self-loop at vertex {i}")
    return (i, j) if i < j else (j, i)


def build_graph(n: int, edges: Iterable) -> Graph:
    """Graph on 1..n from unordered vertex pairs; duplicates collapse."""
    return Graph(int(n), frozenset(_norm_edge(e) for e in edges))


def path_graph(seq: Iterable[int]) -> Graph:
    """Path visiting ``seq`` in order; the vertex set must be exactly 1..n."""
    seq = list(seq)
    if sorted(seq) != list(range(1, len(seq) + 1)):
        raise GraphError(f"{seq} is not an ordering of 1..{len(seq)}")
    return build_graph(len(seq), zip(seq, seq[1:]))


def _bfs(g: Graph, source: int) -> list[int]:
    dist = [-1] * (g.n + 1)
    dist[source] = 0
    queue = deque([source])
    nbrs = g.neighbors
    while queue:
        u = queue.popleft()
        for w in nbrs[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def is_connected(g: Graph) -> bool:
    return min(_bfs(g, 1)[1:]) >= 0


def all_pairs_distances(g: Graph) -> np.ndarray:
    """Integer distance matrix (0-based rows) via one BFS per vertex.

    The result is read-only.
    """
    d = np.empty((g.n, g.n), dtype=np.int64)
    for s in range(1, g.n + 1):
        row = _bfs(g, s)
        if min(row[1:]) < 0:
            raise DisconnectedGraphError("distances requested for a disconnected graph")
        d[s - 1] = row[1:]
    d.setflags(write=False)
    return d


def spanning_tree(g: Graph, root: int = 1) -> Graph:
    """BFS tree from ``root``; children are discovered in ascending label order."""
    seen = [False] * (g.n + 1)
    seen[root] = True
    queue = deque([root])
    tree = []
    nbrs = g.neighbors
    while queue:
        u = queue.popleft()
        for w in nbrs[u]:
            if not seen[w]:
                seen[w] = True
                tree.append((u, w))
                queue.append(w)
    if len(tree) != g.n - 1:
        raise DisconnectedGraphError("spanning tree requested for a disconnected graph")
    return build_graph(g.n, tree)


def is_tree(g: Graph) -> bool:
    return g.m == g.n - 1 and is_connected(g)


def as_path_sequence(g: Graph) -> list[int] | None:
    """Vertex order of ``g`` if it is a path, starting at the lower endpoint."""
    if g.n == 1:
        return [1]
    if g.m != g.n - 1:
        return None
    degs = [g.degree(v) for v in range(1, g.n + 1)]
    if max(degs) > 2:
        return None
    ends = [v for v in range(1, g.n + 1) if degs[v - 1] == 1]
    if len(ends) != 2:
        return None
    seq = [ends[0]]
    prev = 0
    while len(seq) < g.n:
        nxt = [w for w in g.neighbors[seq[-1]] if w != prev]
        if not nxt:
            return None
        prev = seq[-1]
        seq.append(nxt[0])
    return seq


def is_path(g: Graph) -> bool:
    return as_path_sequence(g) is not None


# graph6 ---------------------------------------------------------------------

def _upper_pairs(n: int):
    # column order: (1,2), (1,3), (2,3), (1,4), ...
    for j in range(2, n + 1):
        for i in range(1, j):
            yield i, j


def encode_graph6(g: Graph) -> str:
    bits = [1 if (i, j) in g.edges else 0 for i, j in _upper_pairs(g.n)]
    bits += [0] * (-len(bits) % 6)
    chars = [chr(63 + g.n)]
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k:k + 6]:
            v = (v << 1) | b
        chars.append(chr(63 + v))
    return "".join(chars)


def decode_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise GraphError("empty graph6 string")
    for c in s:
        if not 63 <= ord(c) <= 126:
            raise GraphError(f"graph6 character {c!r} outside 63..126")
    n = ord(s[0]) - 63
    if n > MAX_ORDER:
        raise GraphError("multi-byte graph6 sizes are not supported (n <= 62)")
    if n < 1:
        raise GraphError("graph6 order must be at least 1")
    npairs = n * (n - 1) // 2
    body = s[1:]
    if len(body) != (npairs + 5) // 6:
        raise GraphError(f"graph6 length mismatch for n={n}: got {len(body)} data bytes")
    bits = []
    for c in body:
        v = ord(c) - 63
        bits.extend((v >> (5 - k)) & 1 for k in range(6))
    if any(bits[npairs:]):
        raise GraphError("nonzero graph6 padding bits")
    edges = [p for p, b in zip(_upper_pairs(n), bits) if b]
    return build_graph(n, edges)


# edge-list text format ------------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    """First line ``n m``, then ``m`` lines ``i j`` (1-based)."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or len(lines[0]) != 2:
        raise GraphError("edge list must start with a line 'n m'")
    n, m = int(lines[0][0]), int(lines[0][1])
    body = lines[1:]
    if len(body) != m:
        raise GraphError(f"edge list announces {m} edges but has {len(body)}")
    edges = []
    for parts in body:
        if len(parts) != 2:
            raise GraphError(f"bad edge line {' '.join(parts)!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return build_graph(n, edges)


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"] + [f"{i} {j}" for i, j in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def read_graph6_file(path) -> list[Graph]:
    with open(path) as fh:
        return [decode_graph6(ln) for ln in fh if ln.strip()]
