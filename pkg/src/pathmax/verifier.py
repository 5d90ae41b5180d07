"""Exhaustive and randomized checks of the path-maximization statements and their spectral companions.

Every task returns a VerificationReport. A report passes when it scanned a
nonempty universe and recorded no violations. Non-path extremal graphs found
outside a theorem's hypothesis are kept separately as ``exhibits``.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb, factorial

import numpy as np

from . import __version__
from .enumeration import (
    CONNECTED_MAX_N,
    TREE_MAX_N,
    EnumerationRangeError,
    batch_distances,
    connected_batches,
    connected_distance_table,
    mask_space,
    mask_to_graph,
    path_distance_table,
    path_sequences,
    prufer_decode,
    labeled_trees,
)
from .fa_core import classify_weights, evaluate_F
from .graph_core import (
    DisconnectedGraphError,
    Graph,
    all_pairs_distances,
    encode_graph6,
    is_connected,
    is_path,
    path_graph,
)
from .path_builder import check_certificate, maximize_on_path, path_distances
from .spectra import (
    certify_top,
    distance_bundle,
    full_spectrum,
    jacobi_top,
    power_iteration_batch,
    top_eigenpair,
)

TIE_REL = 1e-9
RAYLEIGH_TOL = 1e-8
RESIDUAL_TOL = 1e-12
NATH_PAUL_GAP = 1e-8

DISTANCE_KINDS = ("D", "DL", "DQ")
ADJACENCY_KINDS = ("ADJ", "LAP", "Q")
MATRIX_KINDS = DISTANCE_KINDS + ADJACENCY_KINDS
# the direction in which a path is the unique extremal graph
PATH_DIRECTION = {"D": "max", "DL": "max", "DQ": "max", "ADJ": "min", "LAP": "min", "Q": "min"}
EXTREMAL_STATEMENT = {
    "D": "largest distance eigenvalue is maximal only on paths",
    "DL": "largest distance Laplacian eigenvalue is maximal only on paths",
    "DQ": "largest distance signless Laplacian eigenvalue is maximal only on paths",
    "ADJ": "largest adjacency eigenvalue is minimal only on paths",
    "LAP": "largest Laplacian eigenvalue is minimal only on paths",
    "Q": "largest signless Laplacian eigenvalue is minimal only on paths",
}
WEIGHT_CLASSES = ("positive", "N_n", "nonneg")
SPECTRAL_CHUNK = 1 << 15


def connected_count(n: int) -> int:
    """Number of connected labeled graphs on n vertices (standard recurrence)."""
    c = [0, 1]
    for m in range(2, n + 1):
        total = 2 ** comb(m, 2)
        total -= sum(comb(m - 1, k - 1) * c[k] * 2 ** comb(m - k, 2) for k in range(1, m))
        c.append(total)
    return c[n]


def path_count(n: int) -> int:
    return 1 if n < 2 else factorial(n) // 2


def tree_count(n: int) -> int:
    return 1 if n < 2 else n ** (n - 2)


@dataclass
class VerificationReport:
    task: str
    config: dict
    universe_count: int = 0
    universe_by_n: dict = field(default_factory=dict)
    extremal_value: dict = field(default_factory=dict)
    extremal_graphs: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    exhibits: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    seed: int | None = None
    weight_class: str | None = None
    elapsed_ms: int | None = None

    @property
    def passed(self) -> bool:
        return self.universe_count > 0 and not self.violations

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "task": self.task,
            "status": "PASS" if self.passed else "FAIL",
            "version": __version__,
            "config": self.config,
            "seed": self.seed,
            "weight_class": self.weight_class,
            "universe_count": self.universe_count,
            "universe_by_n": {str(k): v for k, v in self.universe_by_n.items()},
            "extremal_value": {str(k): v for k, v in self.extremal_value.items()},
            "extremal_graphs": self.extremal_graphs,
            "violations": self.violations,
            "exhibits": self.exhibits,
            "stats": self.stats,
            "tolerances": self.tolerances,
            "elapsed_ms": self.elapsed_ms if timing else None,
        }


def _finish(report: VerificationReport, t0: float) -> VerificationReport:
    report.elapsed_ms = int(round((time.perf_counter() - t0) * 1000))
    return report


def _map(fn, tasks, jobs: int):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


# random weights -------------------------------------------------------------

def trial_rng(seed: int, *keys: int) -> np.random.Generator:
    """Counter-based generator for one (seed, keys...) cell, independent of scheduling."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *keys])))


def _sym(upper_vals: np.ndarray, n: int) -> np.ndarray:
    a = np.zeros((n, n), dtype=np.int64)
    a[np.triu_indices(n, 1)] = upper_vals
    return a + a.T


def random_weights(n: int, weight_class: str, rng: np.random.Generator, max_weight: int = 100) -> np.ndarray:
    """Integer symmetric weights with a zero diagonal.

    ``positive``: every off-diagonal entry uniform in [1, max_weight];
    ``N_n``: as positive, then the pairs of a random nonempty matching zeroed;
    ``nonneg``: every off-diagonal pair zero with probability 1/2.
    """
    m = comb(n, 2)
    a = _sym(rng.integers(1, max_weight + 1, size=m), n)
    if weight_class == "positive":
        return a
    if weight_class == "N_n":
        perm = rng.permutation(n)
        r = int(rng.integers(1, n // 2 + 1)) if n >= 2 else 0
        for t in range(r):
            i, j = perm[2 * t], perm[2 * t + 1]
            a[i, j] = a[j, i] = 0
        return a
    if weight_class == "nonneg":
        keep = _sym(rng.integers(0, 2, size=m), n)
        return a * keep
    raise ValueError(f"unknown weight class {weight_class!r}; expected one of {WEIGHT_CLASSES}")


def planted_zero_weights(n: int, zero_budget: int, rng: np.random.Generator, max_weight: int = 100) -> np.ndarray:
    """Weights in [1, max_weight] with at most ``zero_budget`` zero off-diagonal entries per row.

    With a budget of n-1 or more, a whole row is zeroed first.
    """
    a = _sym(rng.integers(1, max_weight + 1, size=comb(n, 2)), n)
    used = np.zeros(n, dtype=np.int64)
    if zero_budget >= n - 1 and n >= 2:
        v = int(rng.integers(n))
        a[v, :] = a[:, v] = 0
        used += 1
        used[v] = n - 1
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for p in rng.permutation(len(pairs)):
        i, j = pairs[p]
        if a[i, j] and used[i] < zero_budget and used[j] < zero_budget and rng.random() < 0.5:
            a[i, j] = a[j, i] = 0
            used[i] += 1
            used[j] += 1
    return a


def weights_tag(a: np.ndarray) -> str:
    return ";".join(",".join(str(int(v)) for v in row) for row in a)


# F_A theorems --------------------------------------------------------------

def _path_mask_set(n: int) -> set[int]:
    pairs = {(i, j): k for k, (i, j) in enumerate((i, j) for j in range(2, n + 1) for i in range(1, j))}
    out = set()
    for seq in path_sequences(n):
        m = 0
        for x, y in zip(seq, seq[1:]):
            m |= 1 << pairs[(min(x, y), max(x, y))]
        out.add(m)
    return out


def _check_trees(n, mats, classes, report, max_report=20):
    """maximize_on_path soundness/strictness over every labeled tree for each weight matrix."""
    checked = strict_needed = 0
    iu = np.triu_indices(n, 1)
    W = np.stack([a[iu] for a in mats], axis=1)
    for g in labeled_trees(n):
        g_is_path = is_path(g)
        f_trees = all_pairs_distances(g)[iu] @ W
        for t, (a, wc) in enumerate(zip(mats, classes)):
            cert = maximize_on_path(g, a)
            pos = np.empty(n, dtype=np.int64)
            pos[np.asarray(cert.path) - 1] = np.arange(n)
            f_g = int(f_trees[t])
            f_p = int(np.abs(pos[iu[0]] - pos[iu[1]]) @ W[:, t])
            checked += 1
            bad = None
            if cert.f_input != f_g or cert.f_path != f_p:
                bad = "certificate_values"
            elif f_p < f_g:
                bad = "soundness"
            elif wc.in_N_n and not g_is_path:
                strict_needed += 1
                if not f_p > f_g:
                    bad = "strictness"
            if bad and len(report.violations) < max_report:
                report.violations.append({
                    "check": bad, "n": n, "trial": t, "graph6": encode_graph6(g), "weights": weights_tag(a),
                    "expected": f_g, "actual": f_p, "gap": f_p - f_g,
                })
    return checked, strict_needed


def verify_fa_max(n_min: int, n_max: int, trials: int, seed: int, weight_class: str = "positive",
                  weights: list | None = None, check_trees: bool = True) -> VerificationReport:
    """Max of F_a over connected graphs equals the max over paths, and path-only maximizers in class.

    With ``weights`` given (one order-n matrix per trial), they replace the
    random draws; all comparisons are exact integer arithmetic.
    """
    t0 = time.perf_counter()
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not 2 <= n_min <= n_max <= 6:
        raise EnumerationRangeError("verify_fa_max needs 2 <= n_min <= n_max <= 6")
    if weight_class not in WEIGHT_CLASSES:
        raise ValueError(f"unknown weight class {weight_class!r}")
    report = VerificationReport(
        "verify-fa",
        {"n_min": n_min, "n_max": n_max, "trials": trials, "seed": seed, "weight_class": weight_class,
         "explicit_weights": weights is not None, "check_trees": check_trees},
        seed=seed, weight_class=weight_class, tolerances={"comparison": "exact integer"},
    )
    report.stats = {"maximizer_counts": {}, "tying_paths": {}, "trees_checked": 0, "strict_checks": 0}
    for n in range(n_min, n_max + 1):
        if weights is not None:
            mats = [np.asarray(w, dtype=np.int64) for w in weights if np.asarray(w).shape == (n, n)]
        else:
            mats = [random_weights(n, weight_class, trial_rng(seed, n, t)) for t in range(trials)]
        if not mats:
            continue
        classes = [classify_weights(a) for a in mats]
        masks, table = connected_distance_table(n)
        seqs, ptable = path_distance_table(n)
        path_masks = _path_mask_set(n)
        iu = np.triu_indices(n, 1)
        W = np.stack([a[iu] for a in mats], axis=1)
        vals = table @ W
        pvals = ptable @ W
        best = vals.max(axis=0)
        pbest = pvals.max(axis=0)
        report.universe_by_n[n] = int(len(masks))
        report.universe_count += int(len(masks)) * len(mats)
        report.extremal_value[n] = [int(v) for v in best]
        counts, tying = [], []
        seen = set(report.extremal_graphs)
        for t, a in enumerate(mats):
            hits = np.flatnonzero(vals[:, t] == best[t])
            counts.append(int(hits.size))
            tying.append(int((pvals[:, t] == pbest[t]).sum()))
            if best[t] != pbest[t]:
                report.violations.append({
                    "check": "max_equality", "n": n, "trial": t, "weights": weights_tag(a),
                    "graph6": encode_graph6(mask_to_graph(int(masks[hits[0]]), n)),
                    "expected": int(best[t]), "actual": int(pbest[t]), "gap": int(best[t] - pbest[t]),
                })
            g6s = []
            for h in hits:
                m = int(masks[h])
                g6 = encode_graph6(mask_to_graph(m, n))
                g6s.append(g6)
                if m in path_masks:
                    continue
                entry = {"n": n, "trial": t, "graph6": g6, "weights": weights_tag(a), "value": int(best[t])}
                if classes[t].in_N_n:
                    report.violations.append({"check": "path_only_maximizers", **entry,
                                              "expected": "path", "actual": "non-path", "gap": 0})
                else:
                    report.exhibits.append({"note": "expected outside hypothesis", **entry})
            for g6 in g6s:
                if g6 not in seen:
                    seen.add(g6)
                    report.extremal_graphs.append(g6)
        report.stats["maximizer_counts"][str(n)] = counts
        report.stats["tying_paths"][str(n)] = tying
        if check_trees:
            c, s = _check_trees(n, mats, classes, report)
            report.stats["trees_checked"] += c
            report.stats["strict_checks"] += s
    return _finish(report, t0)


def verify_trees_exhaustive(n_min: int, n_max: int, trials: int, seed: int,
                            weight_class: str = "N_n") -> VerificationReport:
    """maximize_on_path over every labeled tree for ``trials`` random matrices per n."""
    t0 = time.perf_counter()
    if not 2 <= n_min <= n_max <= TREE_MAX_N:
        raise EnumerationRangeError(f"tree sweeps need 2 <= n <= {TREE_MAX_N}")
    report = VerificationReport(
        "verify-trees", {"n_min": n_min, "n_max": n_max, "trials": trials, "seed": seed,
                         "weight_class": weight_class},
        seed=seed, weight_class=weight_class, tolerances={"comparison": "exact integer"},
    )
    report.stats = {"trees_checked": 0, "strict_checks": 0}
    for n in range(n_min, n_max + 1):
        mats = [random_weights(n, weight_class, trial_rng(seed, n, t)) for t in range(trials)]
        classes = [classify_weights(a) for a in mats]
        c, s = _check_trees(n, mats, classes, report)
        report.universe_by_n[n] = tree_count(n)
        report.universe_count += c
        report.stats["trees_checked"] += c
        report.stats["strict_checks"] += s
    return _finish(report, t0)


def verify_construction(n_min: int, n_max: int, instances: int, seed: int,
                        weight_class: str = "nonneg", replay: bool = True) -> VerificationReport:
    """Random (tree, weights) instances: soundness, strictness where it applies, and trace replay."""
    t0 = time.perf_counter()
    if not 2 <= n_min <= n_max <= 62:
        raise ValueError("need 2 <= n_min <= n_max <= 62")
    report = VerificationReport(
        "verify-construction", {"n_min": n_min, "n_max": n_max, "instances": instances, "seed": seed,
                                "weight_class": weight_class, "replay": replay},
        seed=seed, weight_class=weight_class, tolerances={"comparison": "exact integer"},
    )
    strict_checks = 0
    for t in range(instances):
        rng = trial_rng(seed, t)
        n = int(rng.integers(n_min, n_max + 1))
        g = prufer_decode([int(v) for v in rng.integers(1, n + 1, size=n - 2)], n) if n > 2 else path_graph([1, 2])
        a = random_weights(n, weight_class, rng)
        cert = maximize_on_path(g, a)
        report.universe_by_n[n] = report.universe_by_n.get(n, 0) + 1
        report.universe_count += 1
        problems = []
        f_g = evaluate_F(all_pairs_distances(g), a)
        if cert.f_path < f_g or cert.f_input != f_g:
            problems.append("soundness")
        if classify_weights(a).in_N_n and not is_path(g):
            strict_checks += 1
            if not cert.f_path > f_g:
                problems.append("strictness")
        if replay:
            problems += check_certificate(g, a, cert)
        if problems:
            report.violations.append({"check": "; ".join(problems), "n": n, "trial": t,
                                      "graph6": encode_graph6(g), "weights": weights_tag(a),
                                      "expected": f_g, "actual": cert.f_path, "gap": cert.f_path - f_g})
    report.stats = {"strict_checks": strict_checks}
    return _finish(report, t0)


def tightness_search(n: int, zero_budget: int, trials: int, seed: int, max_weight: int = 100,
                     weights: list | None = None) -> VerificationReport:
    """Look for weight matrices whose connected-graph maximizers include a non-path.

    Exhibits are expected once rows may carry two or more zeros. Any exhibit
    whose matrix lies in N(n) is a violation.
    """
    t0 = time.perf_counter()
    if not 2 <= n <= 6:
        raise EnumerationRangeError("tightness_search needs 2 <= n <= 6")
    report = VerificationReport(
        "tightness", {"n": n, "zero_budget": zero_budget, "trials": trials, "seed": seed,
                      "max_weight": max_weight, "explicit_weights": weights is not None},
        seed=seed, tolerances={"comparison": "exact integer"},
    )
    mats = [np.asarray(w, dtype=np.int64) for w in (weights or [])]
    mats += [planted_zero_weights(n, zero_budget, trial_rng(seed, n, t), max_weight) for t in range(trials)]
    masks, table = connected_distance_table(n)
    path_masks = _path_mask_set(n)
    iu = np.triu_indices(n, 1)
    vals = table @ np.stack([a[iu] for a in mats], axis=1)
    best = vals.max(axis=0)
    report.universe_by_n[n] = int(len(masks))
    report.universe_count = int(len(masks)) * len(mats)
    instances_with_exhibit = 0
    for t, a in enumerate(mats):
        hits = [int(masks[h]) for h in np.flatnonzero(vals[:, t] == best[t])]
        non_paths = [encode_graph6(mask_to_graph(m, n)) for m in hits if m not in path_masks]
        if not non_paths:
            continue
        instances_with_exhibit += 1
        entry = {"n": n, "trial": t, "weights": weights_tag(a), "value": int(best[t]),
                 "non_path_maximizers": non_paths,
                 "path_maximizers": [encode_graph6(mask_to_graph(m, n)) for m in hits if m in path_masks]}
        if classify_weights(a).in_N_n:
            report.violations.append({"check": "path_only_maximizers", "graph6": non_paths[0],
                                      "expected": "path", "actual": "non-path", "gap": 0, **entry})
        else:
            report.exhibits.append(entry)
    report.stats = {"instances": len(mats), "instances_with_exhibit": instances_with_exhibit}
    return _finish(report, t0)


# spectral sweeps ------------------------------------------------------------

def kind_matrices(kind: str, dist: np.ndarray, adj: np.ndarray) -> np.ndarray:
    """Stack of integer matrices of one kind from stacked distances/adjacency."""
    n = dist.shape[-1]
    eye = np.eye(n, dtype=np.int64)
    if kind in DISTANCE_KINDS:
        base = dist.astype(np.int64)
    else:
        base = adj.astype(np.int64)
    if kind in ("D", "ADJ"):
        return base
    diag = base.sum(axis=-1)[..., :, None] * eye
    return diag - base if kind in ("DL", "LAP") else diag + base


def quadratic_form_identity(kind: str, weights_src: np.ndarray, x: np.ndarray) -> np.ndarray:
    """sum_{i<j} w_ij * g(x_i, x_j) for the rank-one weight matching ``kind``.

    For distance kinds ``weights_src`` is the distance matrix, for adjacency
    kinds the adjacency matrix; at a unit eigenvector this equals lambda.
    """
    n = x.shape[-1]
    i, j = np.triu_indices(n, 1)
    w = weights_src[..., i, j].astype(np.float64)
    xi, xj = x[..., i], x[..., j]
    if kind in ("D", "ADJ"):
        return 2.0 * (w * xi * xj).sum(axis=-1)
    if kind in ("DL", "LAP"):
        return (w * (xi - xj) ** 2).sum(axis=-1)
    return (w * (xi + xj) ** 2).sum(axis=-1)


def _universe_chunks(n: int, universe: str, graphs: list[Graph] | None):
    """Chunk descriptors; each chunk is processed independently of scheduling."""
    if universe == "connected":
        total = mask_space(n)
        return [("connected", n, lo, min(lo + SPECTRAL_CHUNK, total)) for lo in range(0, total, SPECTRAL_CHUNK)]
    if universe == "trees":
        total = tree_count(n)
        step = 1 << 13
        return [("trees", n, lo, min(lo + step, total)) for lo in range(0, total, step)]
    sel = [g for g in graphs if g.n == n]
    step = 1 << 13
    return [("file", n, lo, [encode_graph6(g) for g in sel[lo:lo + step]]) for lo in range(0, len(sel), step)]


def _load_chunk(desc):
    """Return (keys, adjacency stack, distance stack) for the connected graphs of a chunk."""
    src, n = desc[0], desc[1]
    if src == "connected":
        masks, dist = [], []
        for m, d in connected_batches(n, desc[2], desc[3], chunk=SPECTRAL_CHUNK):
            masks.append(m)
            dist.append(d)
        if not masks:
            return np.zeros(0, dtype=np.int64), None, None
        masks = np.concatenate(masks)
        from .enumeration import masks_to_adjacency
        return masks, masks_to_adjacency(masks, n), np.concatenate(dist)
    if src == "trees":
        import itertools
        seqs = itertools.islice(itertools.product(range(1, n + 1), repeat=n - 2), desc[2], desc[3])
        gs = [prufer_decode(s, n) for s in seqs]
        keys = np.arange(desc[2], desc[2] + len(gs))
    else:
        from .graph_core import decode_graph6
        gs = [decode_graph6(s) for s in desc[3]]
        keys = np.arange(desc[2], desc[2] + len(gs))
    A = np.stack([g.adjacency_matrix() for g in gs]).astype(np.uint8)
    dist, ok = batch_distances(A)
    return keys[ok], A[ok], dist[ok]


def _spectral_chunk(args):
    desc, kind, direction, tie_rel = args
    keys, A, dist = _load_chunk(desc)
    out = {"count": int(len(keys)), "paths": 0, "best": None, "cands": [], "worst_path": None,
           "violations": [], "fallbacks": 0, "max_residual": 0.0, "max_rayleigh": 0.0,
           "iterations": 0}
    if not len(keys):
        return out
    n = A.shape[-1]
    M = kind_matrices(kind, dist, A)
    lam, X, res, iters, ok = power_iteration_batch(M, tol=RESIDUAL_TOL)
    cert = certify_top(M, lam)
    out["iterations"] = int(iters.sum())
    for b in np.flatnonzero(~ok | ~cert):
        ep = jacobi_top(M[b])
        lam[b], X[b], res[b] = ep.lam, ep.x, ep.residual
        out["fallbacks"] += 1
    sign = 1.0 if direction == "max" else -1.0
    src = dist if kind in DISTANCE_KINDS else A
    ray = np.abs(quadratic_form_identity(kind, src, X) - lam)
    rowsum = np.abs(M).sum(axis=-1).max(axis=-1)
    checks = {
        "residual": res > max(RESIDUAL_TOL, 1e-10),
        "rayleigh": ray > RAYLEIGH_TOL,
        "gershgorin_upper": lam > rowsum + 1e-9,
        "unit_vector": np.abs(np.linalg.norm(X, axis=1) - 1.0) > 1e-12,
    }
    # the all-ones Rayleigh quotient is a lower bound for any symmetric matrix
    checks["rayleigh_lower"] = lam < M.sum(axis=(1, 2)) / n - 1e-9
    out["max_residual"] = float(res.max())
    out["max_rayleigh"] = float(ray.max())
    for name, bad in checks.items():
        for b in np.flatnonzero(bad)[:20]:
            out["violations"].append({"check": name, "key": int(keys[b]), "lambda": float(lam[b]),
                                      "residual": float(res[b]), "rayleigh_gap": float(ray[b])})
    deg = A.sum(axis=-1)
    is_p = (deg.sum(axis=-1) == 2 * (n - 1)) & (deg.max(axis=-1) <= 2)
    s = sign * lam
    best = float(s.max())
    tol = 4 * tie_rel * max(1.0, abs(best))
    near = np.flatnonzero(s >= best - tol)
    out["best"] = best
    out["cands"] = [(int(keys[b]), float(lam[b]), bool(is_p[b])) for b in near]
    out["paths"] = int(is_p.sum())
    if is_p.any():
        out["worst_path"] = float(s[is_p].min())
    return out


def _graph_from_key(desc_src: str, n: int, key: int, graphs: list[Graph] | None) -> Graph:
    if desc_src == "connected":
        return mask_to_graph(key, n)
    if desc_src == "trees":
        seq, k = [], key
        for _ in range(n - 2):
            seq.append(k % n + 1)
            k //= n
        return prufer_decode(seq[::-1], n)
    return [g for g in graphs if g.n == n][key]


def _matrix_for(kind: str, g: Graph) -> np.ndarray:
    if kind in DISTANCE_KINDS:
        b = distance_bundle(all_pairs_distances(g))
        return {"D": b.D, "DL": b.DL, "DQ": b.DQ}[kind]
    A = g.adjacency_matrix()
    return kind_matrices(kind, A, A)


def verify_spectral(n_min: int, n_max: int, kind: str, direction: str | None = None,
                    universe: str = "connected", graphs: list[Graph] | None = None,
                    jobs: int = 1, tie_rel: float = TIE_REL) -> VerificationReport:
    """Scan a graph universe and check that only paths attain the extremal largest eigenvalue.

    Both directions of the "if and only if" are checked: every path in the
    universe attains the extremum within tolerance, and any non-path that
    comes within tolerance (after a Jacobi recomputation) is a violation.
    """
    t0 = time.perf_counter()
    kind = kind.upper()
    if kind not in MATRIX_KINDS:
        raise ValueError(f"unknown matrix kind {kind!r}; expected one of {MATRIX_KINDS}")
    direction = direction or PATH_DIRECTION[kind]
    if direction != PATH_DIRECTION[kind]:
        raise ValueError(
            f"direction={direction} is not a path-extremal statement for {kind}: "
            f"the relevant result says the {EXTREMAL_STATEMENT[kind]}"
        )
    if universe == "connected" and not 2 <= n_min <= n_max <= CONNECTED_MAX_N:
        raise EnumerationRangeError(f"connected universe needs 2 <= n <= {CONNECTED_MAX_N}")
    if universe == "trees" and not 2 <= n_min <= n_max <= TREE_MAX_N:
        raise EnumerationRangeError(f"tree universe needs 2 <= n <= {TREE_MAX_N}")
    if universe == "file":
        if graphs is None:
            raise ValueError("universe=file needs a graph list")
        for k, g in enumerate(graphs):
            if not is_connected(g):
                raise DisconnectedGraphError(f"graph {k + 1} of the input ({encode_graph6(g)}) is disconnected")
    if universe not in ("connected", "trees", "file"):
        raise ValueError(f"unknown universe {universe!r}")
    if not 0 < tie_rel < 1e-3:
        raise ValueError("tie tolerance must lie in (0, 1e-3)")

    report = VerificationReport(
        "verify-spectral",
        {"n_min": n_min, "n_max": n_max, "matrix": kind, "direction": direction, "universe": universe},
        tolerances={"tie_rel": tie_rel, "rayleigh_abs": RAYLEIGH_TOL, "residual_abs": RESIDUAL_TOL},
    )
    stats = {"fallbacks": 0, "max_residual": 0.0, "max_rayleigh_gap": 0.0, "power_iterations": 0,
             "near_ties_resolved": 0, "paths": {}}
    sign = 1.0 if direction == "max" else -1.0
    for n in range(n_min, n_max + 1):
        chunks = _universe_chunks(n, universe, graphs)
        parts = _map(_spectral_chunk, [(c, kind, direction, tie_rel) for c in chunks], jobs)
        count = sum(p["count"] for p in parts)
        if count == 0:
            continue
        report.universe_by_n[n] = count
        report.universe_count += count
        stats["fallbacks"] += sum(p["fallbacks"] for p in parts)
        stats["power_iterations"] += sum(p["iterations"] for p in parts)
        stats["max_residual"] = max([stats["max_residual"]] + [p["max_residual"] for p in parts])
        stats["max_rayleigh_gap"] = max([stats["max_rayleigh_gap"]] + [p["max_rayleigh"] for p in parts])
        src = chunks[0][0]
        for p in parts:
            for v in p["violations"]:
                g = _graph_from_key(src, n, v.pop("key"), graphs)
                report.violations.append({"n": n, "graph6": encode_graph6(g), "expected": None,
                                          "actual": v["lambda"], "gap": v["rayleigh_gap"], **v})
        expected = {"connected": connected_count, "trees": tree_count}.get(universe)
        if expected and expected(n) != count:
            report.violations.append({"check": "universe_count", "n": n, "graph6": None,
                                      "expected": expected(n), "actual": count, "gap": count - expected(n)})
        best = max(p["best"] for p in parts if p["best"] is not None)
        tol = tie_rel * max(1.0, abs(best))
        cands = [c for p in parts for c in p["cands"] if sign * c[1] >= best - tol]
        n_paths = sum(p["paths"] for p in parts)
        stats["paths"][str(n)] = n_paths
        path_cands = [c for c in cands if c[2]]
        extremal = []
        if not path_cands:
            report.violations.append({"check": "path_attains_extremum", "n": n, "graph6": None,
                                      "expected": sign * best, "actual": None, "gap": None})
            ref = None
        else:
            ref_g = _graph_from_key(src, n, path_cands[0][0], graphs)
            ref = float(full_spectrum(_matrix_for(kind, ref_g))[-1])
        worst = [p["worst_path"] for p in parts if p["worst_path"] is not None]
        if worst and min(worst) < best - tol:
            report.violations.append({"check": "path_attains_extremum", "n": n, "graph6": None,
                                      "expected": sign * best, "actual": sign * min(worst),
                                      "gap": best - min(worst)})
        if universe in ("connected", "trees") and n_paths != path_count(n):
            report.violations.append({"check": "path_count", "n": n, "graph6": None,
                                      "expected": path_count(n), "actual": n_paths, "gap": n_paths - path_count(n)})
        for key, lam, isp in sorted(cands):
            g = _graph_from_key(src, n, key, graphs)
            if isp:
                extremal.append(encode_graph6(g))
                continue
            lam_j = float(full_spectrum(_matrix_for(kind, g))[-1])
            ref_s = sign * (ref if ref is not None else sign * best)
            if sign * lam_j >= ref_s - tie_rel * max(1.0, abs(ref_s)):
                extremal.append(encode_graph6(g))
                report.violations.append({"check": "non_path_extremal", "n": n, "graph6": encode_graph6(g),
                                          "expected": ref, "actual": lam_j,
                                          "gap": None if ref is None else sign * (ref - lam_j)})
            else:
                stats["near_ties_resolved"] += 1
        report.extremal_value[n] = sign * best
        report.extremal_graphs.extend(extremal)
    report.stats = stats
    return _finish(report, t0)


def verify_monotone_universe(n_min: int, n_max: int, kinds=DISTANCE_KINDS, jobs: int = 1) -> VerificationReport:
    """For distance kinds, the maximum over trees equals the maximum over connected graphs."""
    t0 = time.perf_counter()
    report = VerificationReport("monotone-universe", {"n_min": n_min, "n_max": n_max, "kinds": list(kinds)},
                                tolerances={"tie_rel": TIE_REL})
    for kind in kinds:
        for n in range(n_min, n_max + 1):
            rc = verify_spectral(n, n, kind, "max", "connected", jobs=jobs)
            rt = verify_spectral(n, n, kind, "max", "trees", jobs=jobs)
            vc, vt = rc.extremal_value[n], rt.extremal_value[n]
            report.universe_count += rc.universe_count + rt.universe_count
            report.extremal_value[f"{kind}:{n}"] = vc
            if abs(vc - vt) > TIE_REL * max(1.0, abs(vc)):
                report.violations.append({"check": "tree_max_equals_connected_max", "kind": kind, "n": n,
                                          "graph6": None, "expected": vc, "actual": vt, "gap": vc - vt})
    return _finish(report, t0)


def nath_paul_distinctness(n_min: int, n_max: int) -> VerificationReport:
    """The top eigenvector of the distance Laplacian of P_n has pairwise distinct entries."""
    t0 = time.perf_counter()
    if not 2 <= n_min <= n_max <= 32:
        raise ValueError("nath_paul_distinctness needs 2 <= n_min <= n_max <= 32")
    report = VerificationReport("nath-paul", {"n_min": n_min, "n_max": n_max},
                                tolerances={"min_gap": NATH_PAUL_GAP, "residual_abs": RESIDUAL_TOL})
    gaps = {}
    for n in range(n_min, n_max + 1):
        seq = list(range(1, n + 1))
        DL = distance_bundle(path_distances(seq)).DL
        ep = top_eigenpair(DL, tol=RESIDUAL_TOL)
        x = ep.x / np.linalg.norm(ep.x)
        diffs = np.abs(x[:, None] - x[None, :])[np.triu_indices(n, 1)]
        gap = float(diffs.min())
        gaps[str(n)] = gap
        report.universe_by_n[n] = 1
        report.universe_count += 1
        report.extremal_value[n] = ep.lam
        report.extremal_graphs.append(encode_graph6(path_graph(seq)))
        if not gap > NATH_PAUL_GAP:
            report.violations.append({"check": "distinct_entries", "n": n, "graph6": encode_graph6(path_graph(seq)),
                                      "expected": f"> {NATH_PAUL_GAP}", "actual": gap, "gap": gap - NATH_PAUL_GAP})
    report.stats = {"min_gap": gaps}
    return _finish(report, t0)
