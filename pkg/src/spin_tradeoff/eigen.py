"""Small dense symmetric eigensolvers: power iteration and cyclic Jacobi."""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, NumericError

SYMMETRY_TOL = 1e-12


def _check_symmetric(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    if np.abs(m - m.T).max(initial=0.0) > SYMMETRY_TOL * scale:
        raise DomainError("matrix is not symmetric")
    return m


def jacobi_eigh(m: np.ndarray, tol: float = 1e-15, max_sweeps: int = 50) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization of a real symmetric matrix.

    Returns ``(eigenvalues, eigenvectors)`` sorted ascending, eigenvectors in
    columns, matching the layout of ``numpy.linalg.eigh``.
    """
    a = _check_symmetric(m).copy()
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a)
    if n < 2 or scale == 0.0:
        return np.diag(a).copy(), v
    rows, cols = np.triu_indices(n, k=1)
    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * np.sum(a[rows, cols] ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        raise NumericError("Jacobi sweeps did not converge", off_norm=float(off), scale=float(scale))
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def _nonnegative(v: np.ndarray) -> np.ndarray:
    # Perron-Frobenius vector: fix the global sign, then clip roundoff negatives
    if v.sum() < 0:
        v = -v
    v = np.where((v < 0) & (v >= -1e-13), 0.0, v)
    return v


def principal_eigenvector(
    m: np.ndarray,
    tol: float = 1e-12,
    max_iter: int = 10_000,
    start: np.ndarray | None = None,
) -> tuple[float, np.ndarray]:
    """Largest eigenpair of a symmetric entrywise-nonnegative matrix.

    Power iteration from a fixed positive start vector (uniform unless given),
    stopping once ``||M v - lambda v|| <= tol``.  If that does not happen within
    ``max_iter`` steps the problem is handed to :func:`jacobi_eigh`.  The
    returned vector has unit norm and nonnegative entries.
    """
    m = _check_symmetric(m)
    if np.any(m < 0):
        raise DomainError("matrix has negative entries")
    n = m.shape[0]
    v = np.full(n, 1.0 / np.sqrt(n)) if start is None else np.asarray(start, float) / np.linalg.norm(start)
    lam = float(v @ m @ v)
    for _ in range(max_iter):
        mv = m @ v
        lam = float(v @ mv)
        if np.linalg.norm(mv - lam * v) <= tol:
            return lam, _nonnegative(v)
        norm = np.linalg.norm(mv)
        if norm == 0.0:
            break
        v = mv / norm

    w, vecs = jacobi_eigh(m)
    lam = float(w[-1])
    v = _nonnegative(vecs[:, -1])
    residual = float(np.linalg.norm(m @ v - lam * v))
    if residual > tol or np.any(v < 0):
        gap = float(w[-1] - w[-2]) if n > 1 else float("inf")
        raise NumericError(
            "principal eigenvector did not converge",
            residual=residual,
            gap=gap,
            min_component=float(v.min()),
        )
    return lam, v
