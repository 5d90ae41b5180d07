"""Acceptance criteria 1-10, each at its stated scale and tolerance.

One summary line per criterion is printed at the end of the pytest run.
The n=7 connected sweeps are shared between criteria 4, 5 and 6.
"""

import math
import os
import time
from math import factorial

import numpy as np
import pytest

from pathmax import verifier as V
from pathmax.enumeration import connected_masks, labeled_paths, labeled_trees
from pathmax.fa_core import evaluate_F, rank_one_weights
from pathmax.graph_core import all_pairs_distances, build_graph, decode_graph6, is_path, path_graph
from pathmax.spectra import distance_bundle, full_spectrum, largest_eigenpair

SEED = 20240521
JOBS = int(os.environ.get("PATHMAX_JOBS") or os.cpu_count() or 1)
_SWEEPS = {}


def sweep(kind):
    if kind not in _SWEEPS:
        _SWEEPS[kind] = V.verify_spectral(2, 7, kind, universe="connected", jobs=JOBS)
    return _SWEEPS[kind]


def test_criterion_1_weak_max_equality(criterion):
    t0 = time.perf_counter()
    r = V.verify_fa_max(2, 6, 100, SEED, "nonneg", check_trees=False)
    secs = time.perf_counter() - t0
    unequal = [v for v in r.violations if v["check"] == "max_equality"]
    ok = r.passed and not unequal and r.universe_by_n[6] == 26704 and secs < 600
    criterion("1", ok, f"n=2..6 x 100 nonneg matrices, {len(unequal)} max-equality violations, "
                       f"{len(r.exhibits)} non-path ties outside N(n), {secs:.1f}s")
    assert ok


@pytest.mark.parametrize("wc", ["N_n", "positive"])
def test_criterion_2_strict_connected(criterion, wc):
    r = V.verify_fa_max(2, 6, 100, SEED, wc, check_trees=False)
    ok = r.passed and not r.exhibits
    criterion("2", ok, f"class {wc}: {len(r.violations)} violations over n=2..6 x 100")
    assert ok


def test_criterion_2_strict_trees(criterion):
    r = V.verify_trees_exhaustive(2, 7, 25, SEED, "N_n")
    expected = sum(n ** (n - 2) for n in range(2, 8)) * 25
    ok = r.passed and r.universe_count == expected
    criterion("2", ok, f"all labeled trees n=2..7 x 25 N(n) matrices: {r.universe_count} runs, "
                       f"{r.stats['strict_checks']} strictness checks, {len(r.violations)} violations")
    assert ok


def test_criterion_3_construction_soundness(criterion):
    t0 = time.perf_counter()
    r = V.verify_construction(8, 9, 10_000, SEED, "nonneg", replay=True)
    secs = time.perf_counter() - t0
    ok = r.passed and r.universe_count == 10_000 and secs < 60
    criterion("3", ok, f"10000 random (tree, nonneg) instances n=8..9, {len(r.violations)} violations, {secs:.1f}s")
    assert ok


ANCHORS = [
    ("D", [1, 2, 3], 1 + math.sqrt(3)),
    ("DL", [1, 2, 3], 5.0),
    ("DQ", [1, 2, 3], (7 + math.sqrt(17)) / 2),
    ("D", [1, 2, 3, 4], 2 + math.sqrt(10)),
]


def test_criterion_4_anchors(criterion):
    errs = []
    for kind, seq, expected in ANCHORS:
        b = distance_bundle(all_pairs_distances(path_graph(seq)))
        errs.append(abs(largest_eigenpair(getattr(b, kind)).lam - expected))
    star = distance_bundle(all_pairs_distances(build_graph(4, [(1, 2), (1, 3), (1, 4)]))).D
    errs.append(abs(largest_eigenpair(star).lam - (2 + math.sqrt(7))))
    ok = max(errs) <= 1e-9
    criterion("4", ok, f"closed-form anchors, max error {max(errs):.1e}")
    assert ok


@pytest.mark.parametrize("kind", ["D", "DL", "DQ"])
def test_criterion_4_distance_max(criterion, kind):
    r = sweep(kind)
    only_paths = all(is_path(decode_graph6(s)) for s in r.extremal_graphs)
    ok = r.passed and only_paths and r.universe_by_n[7] == 1866256
    criterion("4", ok, f"{kind} max over connected n=2..7 ({r.universe_count} graphs): "
                       f"{len(r.violations)} violations, lambda*(7)={r.extremal_value[7]:.9f}")
    assert ok


@pytest.mark.parametrize("kind", ["ADJ", "LAP", "Q"])
def test_criterion_5_adjacency_min(criterion, kind):
    r = sweep(kind)
    bad = sorted({(v["n"], v["check"]) for v in r.violations})
    ok = r.passed
    criterion("5", ok, f"{kind} min over connected n=2..7: {len(r.violations)} violations"
                       + (f" {bad[:4]}" if bad else ""))
    assert ok


@pytest.mark.parametrize("kind", ["D", "DL", "DQ"])
def test_criterion_6_rayleigh(criterion, kind):
    r = sweep(kind)
    gap = r.stats["max_rayleigh_gap"]
    ray = [v for v in r.violations if v["check"] == "rayleigh"]
    ok = gap <= 1e-8 and not ray
    criterion("6", ok, f"{kind}: max |F - lambda| over {r.universe_count} graphs = {gap:.1e}")
    assert ok


def test_criterion_6_identity_through_evaluate_F(criterion):
    # the sweep uses a vectorized form; check it against evaluate_F directly
    worst = 0.0
    rng = np.random.default_rng(SEED)
    masks = list(connected_masks(6))
    from pathmax.enumeration import mask_to_graph
    for m in rng.choice(masks, 300, replace=False):
        g = mask_to_graph(int(m), 6)
        d = all_pairs_distances(g)
        b = distance_bundle(d)
        for mat, kind, scale in ((b.D, "product", 2), (b.DL, "square_diff", 1), (b.DQ, "square_sum", 1)):
            ep = largest_eigenpair(mat)
            worst = max(worst, abs(scale * evaluate_F(d, rank_one_weights(ep.x, kind)) - ep.lam))
    ok = worst <= 1e-8
    criterion("6", ok, f"evaluate_F on rank-one weights, 300 graphs x 3 kinds, max gap {worst:.1e}")
    assert ok


def test_criterion_7_nath_paul(criterion):
    r = V.nath_paul_distinctness(2, 12)
    g3 = r.stats["min_gap"]["3"]
    ok = r.passed and abs(g3 - 1 / math.sqrt(2)) <= 1e-9
    criterion("7", ok, f"n=2..12 min gap {min(r.stats['min_gap'].values()):.3e}, n=3 gap {g3:.12f}")
    assert ok


def test_criterion_8_tightness(criterion):
    a = np.ones((4, 4), dtype=int) - np.eye(4, dtype=int)
    a[1, :] = a[:, 1] = 0
    planted = V.tightness_search(4, 3, 0, SEED, weights=[a])
    ex = planted.exhibits
    star_tie = bool(ex) and ex[0]["value"] == 6 and ex[0]["path_maximizers"] and \
        all(not is_path(decode_graph6(s)) for s in ex[0]["non_path_maximizers"])
    budget1 = V.tightness_search(4, 1, 1000, SEED)
    ok = star_tie and planted.passed and budget1.passed and not budget1.exhibits
    criterion("8", ok, f"planted zero row: non-path ties path at F={ex[0]['value'] if ex else None}; "
                       f"budget 1: {len(budget1.exhibits)} exhibits in 1000 trials")
    assert ok


def test_criterion_9_eigensolvers(criterion):
    rng = np.random.default_rng(SEED)
    worst_lam = worst_trace = 0.0
    for _ in range(500):
        n = int(rng.integers(1, 31))
        m = rng.uniform(-10, 10, (n, n))
        m = np.triu(m) + np.triu(m, 1).T
        w = full_spectrum(m)
        worst_lam = max(worst_lam, abs(largest_eigenpair(m).lam - w[-1]))
        worst_trace = max(worst_trace, abs(w.sum() - np.trace(m)) / max(np.linalg.norm(m), 1e-300))
    ok = worst_lam <= 1e-8 and worst_trace <= 1e-9
    criterion("9", ok, f"500 matrices: max |power - Jacobi| {worst_lam:.1e}, "
                       f"max |sum - trace|/||m||_F {worst_trace:.1e}")
    assert ok


def test_criterion_10_counts(criterion):
    trees = [sum(1 for _ in labeled_trees(n)) for n in range(2, 9)]
    paths = [sum(1 for _ in labeled_paths(n)) for n in range(2, 9)]
    conn = [sum(1 for _ in connected_masks(n)) for n in (4, 5)]
    ok = (trees == [n ** (n - 2) for n in range(2, 9)]
          and paths == [factorial(n) // 2 for n in range(2, 9)] and conn == [38, 728])
    criterion("10", ok, f"trees {trees}, paths {paths}, connected n=4,5 {conn}")
    assert ok
