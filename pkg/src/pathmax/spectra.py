"""Distance- and adjacency-derived matrices and their largest eigenpairs.

Matrices are built in exact integer arithmetic; conversion to float happens
only inside the eigensolvers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph_core import Graph

POWER_MAX_ITER = 100_000
JACOBI_MAX_ORDER = 64


class EigenSolverError(RuntimeError):
    """Power iteration ran out of iterations without meeting the residual tolerance."""


@dataclass(frozen=True)
class DistanceBundle:
    D: np.ndarray
    T: np.ndarray
    DL: np.ndarray
    DQ: np.ndarray


@dataclass(frozen=True)
class EigenPair:
    lam: float
    x: np.ndarray
    residual: float
    iterations: int
    method: str = "power"


def distance_bundle(d: np.ndarray) -> DistanceBundle:
    D = np.array(d, dtype=np.int64)
    T = np.diag(D.sum(axis=1))
    return DistanceBundle(D=D, T=T, DL=T - D, DQ=T + D)


def adjacency_bundle(g: Graph) -> dict[str, np.ndarray]:
    A = g.adjacency_matrix()
    deg = np.diag(A.sum(axis=1))
    return {"ADJ": A, "LAP": deg - A, "Q": deg + A}


def check_symmetric(m) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.array_equal(m, m.T):
        raise ValueError("matrix is not symmetric")
    return m


def start_vector(n: int, variant: int = 0) -> np.ndarray:
    # all-ones plus a fixed pseudo-random perturbation; a purely arithmetic
    # perturbation can be exactly orthogonal to structured eigenvectors
    u = np.random.default_rng(0x5EED + variant).uniform(-0.25, 0.25, n)
    v = 1.0 + u
    return v / np.linalg.norm(v)


def dominates_spectrum(mats: np.ndarray, bound) -> np.ndarray:
    """True where ``bound*I - M`` is positive definite, i.e. every eigenvalue is below ``bound``.

    Batched Cholesky-style elimination; by Sylvester's inertia law all pivots
    are positive exactly when the shifted matrix is positive definite.
    """
    S = -np.array(mats, dtype=np.float64, ndmin=3)
    B, n, _ = S.shape
    S[:, np.arange(n), np.arange(n)] += np.broadcast_to(np.asarray(bound, dtype=np.float64), (B,))[:, None]
    ok = np.ones(B, dtype=bool)
    for k in range(n):
        piv = S[:, k, k]
        ok &= piv > 0
        safe = np.where(piv > 0, piv, 1.0)
        col = S[:, k + 1:, k]
        S[:, k + 1:, k + 1:] -= col[:, :, None] * S[:, None, k, k + 1:] / safe[:, None, None]
    return ok


def certify_top(mats: np.ndarray, lam: np.ndarray, rel: float = 1e-9) -> np.ndarray:
    """Check that no eigenvalue exceeds ``lam`` by more than ``rel*max(1, |lam|)``."""
    lam = np.asarray(lam, dtype=np.float64)
    return dominates_spectrum(mats, lam + rel * np.maximum(1.0, np.abs(lam)))


def gershgorin_bound(m: np.ndarray) -> np.ndarray | float:
    """Largest absolute row sum, an upper bound on every |eigenvalue|; batched."""
    return np.abs(m).sum(axis=-1).max(axis=-1)


def gershgorin_shift(m: np.ndarray) -> np.ndarray | float:
    """Smallest sigma >= 0 with every Gershgorin disc of M + sigma*I in [0, inf).

    Then M + sigma*I is positive semidefinite and its largest eigenvalue is
    also the largest in modulus. Zero for Laplacian-like and nonnegative
    diagonally dominant matrices, where a bigger shift only slows convergence.
    """
    diag = np.diagonal(m, axis1=-2, axis2=-1)
    radius = np.abs(m).sum(axis=-1) - np.abs(diag)
    return np.maximum(0.0, -(diag - radius).min(axis=-1))


def power_iteration_batch(mats: np.ndarray, tol: float = 1e-12, max_iter: int = POWER_MAX_ITER,
                          variant: int = 0):
    """Shifted power iteration on a stack of symmetric matrices.

    Each matrix M is iterated as M + sigma*I with sigma from gershgorin_shift,
    which makes the largest (not largest-modulus) eigenvalue dominant. The
    residual is measured on the unshifted M.

    Returns ``(lam, x, residual, iterations, converged)`` arrays.
    """
    M = np.asarray(mats, dtype=np.float64)
    B, n, _ = M.shape
    sigma = gershgorin_shift(M)
    x = np.tile(start_vector(n, variant), (B, 1))
    lam = np.zeros(B)
    res = np.full(B, np.inf)
    iters = np.zeros(B, dtype=np.int64)
    done = np.zeros(B, dtype=bool)

    # rows of the working arrays map to ``active``; ``live`` marks rows still
    # iterating. Arrays are compacted only once enough rows have finished.
    active = np.arange(B)
    Ma, xa, sa = M, x.copy(), sigma
    live = np.ones(B, dtype=bool)
    it = 0
    while it < max_iter:
        it += 1
        y = np.matmul(Ma, xa[:, :, None])[:, :, 0]
        la = np.einsum("bi,bi->b", xa, y)
        ra = np.linalg.norm(y - la[:, None] * xa, axis=1)
        conv = live & (ra <= tol)
        if conv.any():
            idx = active[conv]
            lam[idx], res[idx], x[idx], iters[idx] = la[conv], ra[conv], xa[conv], it
            done[idx] = True
            live &= ~conv
            nlive = int(live.sum())
            if nlive == 0:
                break
            if nlive < 0.8 * live.size:
                active, Ma, sa = active[live], Ma[live], sa[live]
                y, xa = y[live], xa[live]
                live = np.ones(nlive, dtype=bool)
        z = y + sa[:, None] * xa
        xa = z / np.linalg.norm(z, axis=1)[:, None]
    rest = ~done
    if rest.any():
        rows = np.flatnonzero(live)
        y = np.matmul(Ma[rows], xa[rows][:, :, None])[:, :, 0]
        la = np.einsum("bi,bi->b", xa[rows], y)
        idx = active[rows]
        lam[idx] = la
        res[idx] = np.linalg.norm(y - la[:, None] * xa[rows], axis=1)
        x[idx] = xa[rows]
        iters[idx] = it
    return lam, x, res, iters, done


def largest_eigenpair(m, tol: float = 1e-12, max_iter: int = POWER_MAX_ITER) -> EigenPair:
    """Largest eigenvalue and a unit eigenvector by Gershgorin-shifted power iteration.

    A converged pair is accepted only if ``certify_top`` confirms nothing lies
    above it; otherwise one restart from a second start vector is made.
    Raises EigenSolverError when no certified pair is found within ``max_iter``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    M = check_symmetric(m).astype(np.float64)
    for variant in (0, 1):
        lam, x, res, iters, ok = power_iteration_batch(M[None], tol=tol, max_iter=max_iter, variant=variant)
        if not ok[0]:
            raise EigenSolverError(
                f"power iteration stalled at residual {res[0]:.3e} after {iters[0]} iterations"
            )
        if certify_top(M[None], lam)[0]:
            return EigenPair(float(lam[0]), x[0], float(res[0]), int(iters[0]))
    raise EigenSolverError("power iteration settled on an eigenvalue below the top of the spectrum")


def full_spectrum(m, vectors: bool = False, rel_tol: float = 1e-12):
    """All eigenvalues (ascending) by cyclic Jacobi rotations.

    Sweeps continue until every off-diagonal magnitude is at most
    ``rel_tol * ||m||_F``. With ``vectors=True`` returns ``(w, V)`` where the
    columns of V are the matching unit eigenvectors.
    """
    A = check_symmetric(m).astype(np.float64).copy()
    n = A.shape[0]
    if n > JACOBI_MAX_ORDER:
        raise ValueError(f"Jacobi is capped at order {JACOBI_MAX_ORDER}")
    V = np.eye(n)
    thresh = rel_tol * np.linalg.norm(A)
    for _sweep in range(100):
        off = np.abs(A - np.diag(np.diag(A)))
        if n < 2 or off.max() <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= thresh * 1e-3:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                Ap, Aq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * Ap - s * Aq
                A[:, q] = s * Ap + c * Aq
                Ap, Aq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * Ap - s * Aq
                A[q, :] = s * Ap + c * Aq
                A[p, q] = A[q, p] = 0.0
                Vp, Vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * Vp - s * Vq
                V[:, q] = s * Vp + c * Vq
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    if vectors:
        return w[order], V[:, order]
    return w[order]


def top_eigenpair(m, tol: float = 1e-12) -> EigenPair:
    """largest_eigenpair with the Jacobi fallback on stalls."""
    try:
        return largest_eigenpair(m, tol=tol)
    except EigenSolverError:
        return jacobi_top(m)


def jacobi_top(m) -> EigenPair:
    M = check_symmetric(m).astype(np.float64)
    w, V = full_spectrum(M, vectors=True)
    x = V[:, -1] / np.linalg.norm(V[:, -1])
    lam = float(x @ M @ x)
    res = float(np.linalg.norm(M @ x - lam * x))
    return EigenPair(lam, x, res, 0, method="jacobi")


def matrix_to_csv(m) -> str:
    m = np.asarray(m)
    fmt = (lambda v: str(int(v))) if np.issubdtype(m.dtype, np.integer) else repr
    return "\n".join(",".join(fmt(v) for v in row) for row in m.tolist()) + "\n"
