"""Turn a connected weighted instance (G, A) into a path P on V(G) with F_A(P) >= F_A(G).

The construction follows the leaf-removal induction:

1. replace G by a spanning tree (distances only grow);
2. detach the smallest-labeled leaf u with neighbor k and fold u's weight row
   into k's row (``contract_leaf``);
3. solve the smaller instance, giving a path P';
4. re-attach u: at k if k is an end of P', otherwise at whichever end of P'
   gives the larger F (first end on ties).

Every step is recorded in the certificate trace so it can be replayed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .enumeration import (
    PATH_MAX_N,
    EnumerationRangeError,
    connected_distance_table,
    mask_to_graph,
    path_distance_table,
)
from .fa_core import WeightError, as_weights, evaluate_F, is_exact
from .graph_core import (
    DisconnectedGraphError,
    Graph,
    all_pairs_distances,
    build_graph,
    encode_graph6,
    is_connected,
    is_path,
    path_graph,
    spanning_tree,
)

FLOAT_SLACK = 1e-12


@dataclass
class TraceStep:
    op: str
    vertices: list[int]
    f_before: float | int
    f_after: float | int
    path: list[int] | None = None
    edges: list[list[int]] | None = None

    def to_dict(self) -> dict:
        d = {"op": self.op, "vertices": self.vertices, "f_before": self.f_before, "f_after": self.f_after}
        if self.path is not None:
            d["path"] = self.path
        if self.edges is not None:
            d["edges"] = self.edges
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TraceStep":
        return cls(d["op"], list(d["vertices"]), d["f_before"], d["f_after"], d.get("path"), d.get("edges"))


@dataclass
class PathCertificate:
    path: list[int]
    f_input: float | int
    f_path: float | int
    strict: bool
    trace: list[TraceStep] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "path": self.path,
            "f_input": self.f_input,
            "f_path": self.f_path,
            "strict": self.strict,
            "trace": [s.to_dict() for s in self.trace],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PathCertificate":
        return cls(list(d["path"]), d["f_input"], d["f_path"], bool(d["strict"]),
                   [TraceStep.from_dict(s) for s in d.get("trace", [])])


def _num(v, exact: bool):
    return int(v) if exact else float(v)


def _contract(w: np.ndarray, leaf: int, nbr: int) -> np.ndarray:
    """0-based leaf contraction: fold row/column ``leaf`` into ``nbr`` and drop it."""
    w2 = w.copy()
    w2[nbr, :] += w[leaf, :]
    w2[:, nbr] += w[:, leaf]
    # the (nbr, nbr) and (nbr, leaf) cells pick up junk; the diagonal is irrelevant
    keep = np.array([i for i in range(w.shape[0]) if i != leaf])
    w2 = w2[keep[:, None], keep]
    j = nbr - (nbr > leaf)
    w2[j, j] = w[nbr, nbr]
    return w2


def contract_leaf(a, leaf: int, neighbor: int) -> tuple[np.ndarray, dict[int, int]]:
    """Remove vertex ``leaf`` (1-based) and add its weights onto ``neighbor``.

    For every j outside {leaf, neighbor}: a'[neighbor][j] = a[neighbor][j] + a[leaf][j];
    all other entries are copied. Returns the order n-1 matrix and the
    old->new label map.
    """
    a = as_weights(a)
    n = a.shape[0]
    if leaf == neighbor or not (1 <= leaf <= n and 1 <= neighbor <= n):
        raise ValueError(f"bad contraction ({leaf}, {neighbor}) for order {n}")
    out = _contract(a, leaf - 1, neighbor - 1)
    relabel = {v: v - (v > leaf) for v in range(1, n + 1) if v != leaf}
    return out, relabel


@lru_cache(maxsize=None)
def _triu(m: int):
    return np.triu_indices(m, 1)


@lru_cache(maxsize=None)
def _path_dist_upper(m: int) -> np.ndarray:
    iu = _triu(m)
    return (iu[1] - iu[0]).astype(np.int64)


def _F_sub(D: np.ndarray, idx: list[int], w: np.ndarray):
    """F over the vertices ``idx`` (0-based rows of D) with level weights ``w``."""
    m = len(idx)
    if m < 2:
        return 0
    i, j = _triu(m)
    ix = np.asarray(idx)
    return (D[ix[i], ix[j]] * w[i, j]).sum()


def _F_in_order(w: np.ndarray):
    """F of the path 0, 1, ..., m-1 under ``w``."""
    m = w.shape[0]
    if m < 2:
        return 0
    i, j = _triu(m)
    return (_path_dist_upper(m) * w[i, j]).sum()


def _solve_tree(adj: dict[int, set[int]], verts: list[int], w: np.ndarray, D: np.ndarray, exact: bool):
    """Recursive leaf-removal on a tree with original labels ``verts`` (sorted).

    Returns ``(sequence, contract_steps, attach_steps)``.
    """
    m = len(verts)
    if m <= 2:
        return list(verts), [], []
    leaves = [v for v in verts if len(adj[v]) == 1]
    is_star4 = m == 4 and any(len(adj[v]) == 3 for v in verts)
    # 4-vertex star: if the smallest leaf gives no strict gain, the other
    # leaves are tried (base case of the strict tree argument)
    candidates = leaves if is_star4 else leaves[:1]
    first = None
    for u in candidates:
        result = _detach_and_attach(adj, verts, w, D, exact, u)
        if first is None:
            first = result
        if not is_star4 or result[3]:
            return result[:3]
    return first[:3]


def _detach_and_attach(adj, verts, w, D, exact, u):
    (k,) = adj[u]
    pos = {v: i for i, v in enumerate(verts)}
    iu_, ik = pos[u], pos[k]
    f_tree = _num(_F_sub(D, [v - 1 for v in verts], w), exact)

    sub_verts = [v for v in verts if v != u]
    w_sub = _contract(w, iu_, ik)
    sub_adj = {v: (s - {u}) for v, s in adj.items() if v != u}
    leaf_row = _num(w[iu_].sum() - w[iu_, iu_], exact)
    f_split = leaf_row + _num(_F_sub(D, [v - 1 for v in sub_verts], w_sub), exact)
    contract_step = TraceStep("leaf_contract", [u, k], f_tree, f_split)

    seq, down, up = _solve_tree(sub_adj, sub_verts, w_sub, D, exact)

    # principal submatrix without u; same for every candidate attachment
    base_idx = [pos[v] for v in seq]
    bix = np.asarray(base_idx)
    base = _F_in_order(w[bix[:, None], bix])
    leaf_w = w[iu_, bix]
    steps = np.arange(len(seq))

    def attach_value(at_index: int):
        return _num((np.abs(steps - at_index) + 1) @ leaf_w + base, exact)

    ki = seq.index(k)
    f_T = attach_value(ki)
    if ki == 0:
        new_seq, end, f_new = [u] + seq, seq[0], f_T
    elif ki == len(seq) - 1:
        new_seq, end, f_new = seq + [u], seq[-1], f_T
    else:
        f1, f2 = attach_value(0), attach_value(len(seq) - 1)
        if f1 >= f2:
            new_seq, end, f_new = [u] + seq, seq[0], f1
        else:
            new_seq, end, f_new = seq + [u], seq[-1], f2
    attach_step = TraceStep("attach_endpoint", [u, k, end], f_T, f_new, path=list(new_seq))
    return new_seq, [contract_step] + down, up + [attach_step], f_new > f_tree


def path_distances(seq) -> np.ndarray:
    """Distance matrix of the path visiting ``seq`` (labels 1..n) in order."""
    pos = np.empty(len(seq), dtype=np.int64)
    pos[np.asarray(seq) - 1] = np.arange(len(seq))
    return np.abs(pos[:, None] - pos[None, :])


def _cycle_order(g: Graph) -> list[int]:
    seq, prev = [1], 0
    while len(seq) < g.n:
        nxt = [w for w in g.neighbors[seq[-1]] if w != prev][0]
        prev = seq[-1]
        seq.append(nxt)
    return seq


def _choose_tree(g: Graph, a: np.ndarray, f_input) -> tuple[Graph, list[int]]:
    """BFS tree from vertex 1, replaced when it would lose strictness needlessly.

    If G is not a tree but the BFS tree is a path with the same F, a tree with a
    degree >= 3 vertex (BFS from a max-degree vertex) or, for a cycle, the path
    left by deleting a positive-weight cycle edge is used instead.
    """
    tree = spanning_tree(g, 1)
    if g.m == g.n - 1 or not is_path(tree):
        return tree, [1]
    if evaluate_F(all_pairs_distances(tree), a) != f_input:
        return tree, [1]
    maxdeg = max(g.degree(v) for v in range(1, g.n + 1))
    if maxdeg >= 3:
        root = min(v for v in range(1, g.n + 1) if g.degree(v) == maxdeg)
        return spanning_tree(g, root), [root]
    cyc = _cycle_order(g)
    for i in range(g.n):
        x, y = cyc[i], cyc[(i + 1) % g.n]
        if a[x - 1, y - 1] > 0:
            seq = cyc[i + 1:] + cyc[:i + 1]
            return build_graph(g.n, zip(seq, seq[1:])), sorted((x, y))
    return tree, [1]


def maximize_on_path(g: Graph, a) -> PathCertificate:
    """Build a path P on V(g) with F_a(P) >= F_a(g), with a replayable trace.

    The inequality is strict whenever ``a`` has at most one zero off-diagonal
    entry per row and ``g`` is not a path.
    """
    a = as_weights(a)
    if a.shape[0] != g.n:
        raise WeightError(f"weights of order {a.shape[0]} for a graph of order {g.n}")
    if (a < 0).any():
        raise WeightError("weights must be nonnegative")
    if not is_connected(g):
        raise DisconnectedGraphError("maximize_on_path needs a connected graph")
    exact = is_exact(a)
    D_in = all_pairs_distances(g)
    f_input = evaluate_F(D_in, a)

    tree, tag = _choose_tree(g, a, f_input)
    if tree.edges == g.edges:
        D, f_tree = np.asarray(D_in), f_input
    else:
        D = np.asarray(all_pairs_distances(tree))
        f_tree = evaluate_F(D, a)
    trace = [TraceStep("spanning_tree", tag, f_input, f_tree, edges=[list(e) for e in tree.sorted_edges()])]

    adj = {v: set(tree.neighbors[v]) for v in range(1, g.n + 1)}
    seq, down, up = _solve_tree(adj, list(range(1, g.n + 1)), a, D, exact)
    trace += down + up
    if seq[0] > seq[-1]:
        seq = seq[::-1]
    f_path = evaluate_F(path_distances(seq), a)
    return PathCertificate(seq, f_input, f_path, f_path > f_input, trace)


# replay ---------------------------------------------------------------------

def _close(x, y, exact: bool) -> bool:
    if exact:
        return x == y
    return abs(x - y) <= FLOAT_SLACK * max(1.0, abs(x), abs(y))


def _geq(x, y, exact: bool) -> bool:
    return x >= y if exact else x >= y - FLOAT_SLACK * max(1.0, abs(x), abs(y))


def _F_rows(dist: np.ndarray, w: np.ndarray):
    """F with a distance matrix already restricted to the level's vertices."""
    i, j = _triu(w.shape[0])
    return (dist[i, j] * w[i, j]).sum() if w.shape[0] > 1 else 0


def _positions(seq: list[int], labels: list[int]) -> np.ndarray:
    where = {v: p for p, v in enumerate(seq)}
    pos = np.array([where[v] for v in labels])
    return np.abs(pos[:, None] - pos[None, :])


def check_certificate(g: Graph, a, cert: PathCertificate) -> list[str]:
    """Independently replay a certificate; returns a list of problems (empty = valid).

    Level values are recomputed from the spanning tree's own BFS distances
    (deleting a leaf leaves the other distances unchanged) and from path
    positions, never from the builder's bookkeeping.
    """
    a = as_weights(a)
    exact = is_exact(a)
    problems = []
    n = g.n
    if sorted(cert.path) != list(range(1, n + 1)):
        return [f"path {cert.path} is not an ordering of 1..{n}"]
    f_in = evaluate_F(all_pairs_distances(g), a)
    f_p = evaluate_F(all_pairs_distances(path_graph(cert.path)), a)
    if not _close(f_in, cert.f_input, exact):
        problems.append(f"f_input {cert.f_input} != recomputed {f_in}")
    if not _close(f_p, cert.f_path, exact):
        problems.append(f"f_path {cert.f_path} != recomputed {f_p}")
    if not _geq(f_p, f_in, exact):
        problems.append(f"path value {f_p} below input value {f_in}")
    if cert.strict != (cert.f_path > cert.f_input):
        problems.append("strict flag inconsistent with values")
    if not cert.trace:
        return problems + ["empty trace"]

    st = cert.trace[0]
    if st.op != "spanning_tree" or st.edges is None:
        return problems + ["trace must start with a spanning_tree step carrying edges"]
    tree_edges = {tuple(sorted(e)) for e in st.edges}
    if not tree_edges <= set(g.edges) or len(tree_edges) != n - 1:
        return problems + ["spanning_tree edges are not a spanning tree of the input"]
    tree = build_graph(n, tree_edges)
    if not is_connected(tree):
        return problems + ["spanning_tree edges are disconnected"]
    Dt = np.asarray(all_pairs_distances(tree))
    f_tree = evaluate_F(Dt, a)
    if not (_close(st.f_before, f_in, exact) and _close(st.f_after, f_tree, exact)):
        problems.append("spanning_tree step values do not replay")

    contracts = [s for s in cert.trace[1:] if s.op == "leaf_contract"]
    attaches = [s for s in cert.trace[1:] if s.op == "attach_endpoint"]
    if len(contracts) + len(attaches) != len(cert.trace) - 1 or len(contracts) != len(attaches):
        return problems + ["trace has unknown steps or unmatched contract/attach counts"]

    labels = list(range(1, n + 1))
    edges = set(tree_edges)
    w = a
    levels = []
    for step in contracts:
        u, k = step.vertices
        if {tuple(sorted((u, k)))} != {e for e in edges if u in e}:
            return problems + [f"vertex {u} is not a leaf attached to {k}"]
        ix = np.array(labels) - 1
        f_level = _num(_F_rows(Dt[ix[:, None], ix], w), exact)
        iu_, ik = labels.index(u), labels.index(k)
        w_next = _contract(w, iu_, ik)
        rest = [v for v in labels if v != u]
        rx = np.array(rest) - 1
        f_split = _num((w[iu_].sum() - w[iu_, iu_]) + _F_rows(Dt[rx[:, None], rx], w_next), exact)
        if not (_close(step.f_before, f_level, exact) and _close(step.f_after, f_split, exact)):
            problems.append(f"leaf_contract {u}->{k} does not replay")
        if not _close(f_level, f_split, exact):
            problems.append(f"leaf identity fails at {u}->{k}")
        levels.append((u, k, labels, w))
        labels, edges, w = rest, {e for e in edges if u not in e}, w_next

    if len(labels) > 2:
        return problems + ["trace stops before the instance is reduced to two vertices"]
    seq = list(labels)
    for step, (u, k, lvl_labels, lvl_w) in zip(attaches, reversed(levels)):
        su, sk, end = step.vertices
        if (su, sk) != (u, k) or end not in (seq[0], seq[-1]):
            problems.append(f"attach step {step.vertices} does not match contraction {u}->{k}")
            return problems
        new_seq = [u] + seq if end == seq[0] else seq + [u]
        if step.path is not None and step.path != new_seq and step.path != new_seq[::-1]:
            problems.append(f"attach step path {step.path} != replayed {new_seq}")
        # T = previous path plus the edge {u, k}: u sits one step beyond k
        d_T = _positions(seq, [v for v in lvl_labels if v != u])
        rest_idx = [i for i, v in enumerate(lvl_labels) if v != u]
        d_full = np.zeros((len(lvl_labels),) * 2, dtype=np.int64)
        d_full[np.ix_(rest_idx, rest_idx)] = d_T
        ui = lvl_labels.index(u)
        d_full[ui, rest_idx] = d_full[rest_idx, ui] = d_T[[v for v in lvl_labels if v != u].index(k)] + 1
        f_T = _num(_F_rows(d_full, lvl_w), exact)
        f_new = _num(_F_rows(_positions(new_seq, lvl_labels), lvl_w), exact)
        if not (_close(step.f_before, f_T, exact) and _close(step.f_after, f_new, exact)):
            problems.append(f"attach step at {u} does not replay")
        if not _geq(f_new, f_T, exact):
            problems.append(f"attach step at {u} decreased F ({f_T} -> {f_new})")
        seq = new_seq
    if seq != cert.path and seq[::-1] != cert.path:
        problems.append(f"replayed path {seq} != certificate path {cert.path}")
    elif attaches and not _close(attaches[-1].f_after, f_p, exact):
        problems.append("final attach value differs from f_path")
    return problems


# brute-force oracles --------------------------------------------------------

class BestPath(NamedTuple):
    value: float | int
    path: list[int]


def _upper(a: np.ndarray) -> np.ndarray:
    return a[np.triu_indices(a.shape[0], 1)]


def brute_force_best_path(a) -> BestPath:
    """Exact maximum of F_a over all labeled paths; ties go to the lexicographically first sequence."""
    a = as_weights(a)
    n = a.shape[0]
    if not 2 <= n <= PATH_MAX_N:
        raise EnumerationRangeError(f"path oracle supports 2 <= n <= {PATH_MAX_N}, got {n}")
    seqs, table = path_distance_table(n)
    vals = table.astype(a.dtype) @ _upper(a)
    best = int(np.argmax(vals))
    return BestPath(_num(vals[best], is_exact(a)), list(seqs[best]))


def brute_force_best_connected(a, tie_rel: float = 1e-12) -> tuple[float | int, list[str]]:
    """Exact maximum of F_a over all connected labeled graphs and every maximizer (graph6)."""
    a = as_weights(a)
    n = a.shape[0]
    if not 2 <= n <= 6:
        raise EnumerationRangeError(f"connected-graph oracle supports 2 <= n <= 6, got {n}")
    masks, table = connected_distance_table(n)
    vals = table.astype(a.dtype) @ _upper(a)
    best = vals.max()
    if is_exact(a):
        hits = np.flatnonzero(vals == best)
    else:
        hits = np.flatnonzero(vals >= best - tie_rel * max(1.0, abs(best)))
    return _num(best, is_exact(a)), [encode_graph6(mask_to_graph(int(masks[i]), n)) for i in hits]


def certificate_payload(g: Graph, weights_tag, cert: PathCertificate) -> dict:
    """Self-contained JSON record for a certificate."""
    out = {"input_graph6": encode_graph6(g), "weights": weights_tag}
    out.update(cert.to_dict())
    return out
