"""Full-space oracles for the two-spin Choi-operator constructions.

Tensor products use first-factor-major ordering with ``m`` ascending from
``-j``: basis vector ``|n>|m>`` sits at index ``k_n * d + k_m``.  Every
object here is ``d^2 x d^2`` and meant for small spins only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .angular import SpinJ, SpinLike, as_spin, cg_table, rotation_matrices
from .coherent import chunk_streams, sample_quaternions
from .eigen import jacobi_eigh
from .errors import DomainError
from .tradeoff import XiDiagonal, build_matrices, tradeoff_point

FULL_SPACE_MAX_TWO_J = 6


@dataclass(frozen=True)
class ChoiOperators:
    spin: SpinJ
    R_F: np.ndarray = field(repr=False)
    R_G: np.ndarray = field(repr=False)
    P_2j: np.ndarray = field(repr=False)


def partial_transpose_second(x: np.ndarray, d: int) -> np.ndarray:
    """Transpose on the second tensor factor: ``<a,b|X^T2|c,e> = <a,e|X|c,b>``."""
    return x.reshape(d, d, d, d).transpose(0, 3, 2, 1).reshape(d * d, d * d)


def partial_trace_first(x: np.ndarray, d: int) -> np.ndarray:
    return np.einsum("abac->bc", x.reshape(d, d, d, d))


def diagonal_embedding(v: np.ndarray) -> np.ndarray:
    """``sum_n v_n |n, n>`` as a ``d^2`` vector."""
    d = v.shape[0]
    out = np.zeros(d * d, dtype=v.dtype)
    out[:: d + 1] = v
    return out


def build_projector_2j(spin: SpinLike) -> np.ndarray:
    """Projector onto the total-spin-2j multiplet of two spin-j systems."""
    spin = as_spin(spin)
    d = spin.dim
    c = cg_table(spin)
    P = np.zeros((d * d, d * d))
    for big_k in range(2 * d - 1):  # big_k = 2j + M
        vec = np.zeros(d * d)
        for k in range(max(0, big_k - d + 1), min(big_k, d - 1) + 1):
            vec[k * d + big_k - k] = c[k, big_k - k]
        P += np.outer(vec, vec)
    return P


def build_RF_RG(spin: SpinLike) -> ChoiOperators:
    spin = as_spin(spin)
    d = spin.dim
    norm = 2 * spin.two_j + 1
    P = build_projector_2j(spin)
    R_F = partial_transpose_second(P, d) / norm
    lowest = np.zeros((d, d))
    lowest[0, 0] = 1.0
    reduced = partial_trace_first(np.kron(lowest, np.eye(d)) @ P, d)
    R_G = np.kron(np.eye(d), reduced) / norm
    return ChoiOperators(spin, R_F, R_G, P)


def monte_carlo_RF(spin: SpinLike, samples: int, rng=None) -> np.ndarray:
    """Haar average of ``(U (x) U*) |-j,-j><-j,-j| (U (x) U*)^dag``."""
    spin = as_spin(spin)
    if samples < 1000:
        raise DomainError(f"need at least 1000 samples, got {samples}")
    d = spin.dim
    acc = np.zeros((d * d, d * d), dtype=complex)
    for child, size in chunk_streams(rng, samples):
        u = rotation_matrices(spin, sample_quaternions(child, size))
        col = u[:, :, 0]
        vec = (col[:, :, None] * col.conj()[:, None, :]).reshape(size, d * d)
        acc += np.einsum("ni,nj->ij", vec, vec.conj())
    acc /= samples
    return (acc + acc.conj().T) / 2


def schur_average(spin: SpinLike, x: np.ndarray, samples: int, rng=None) -> np.ndarray:
    """Haar average of ``U_g X U_g^dag``; should approach ``Tr[X]/(2j+1) I``."""
    spin = as_spin(spin)
    if samples < 1000:
        raise DomainError(f"need at least 1000 samples, got {samples}")
    x = np.asarray(x, dtype=complex)
    acc = np.zeros_like(x)
    for child, size in chunk_streams(rng, samples):
        u = rotation_matrices(spin, sample_quaternions(child, size))
        acc += np.einsum("nij,jk,nlk->il", u, x, u.conj())
    return acc / samples


def full_space_eigencheck(spin: SpinLike, p: float, ops: ChoiOperators | None = None) -> tuple[float, float]:
    """Squared overlap of the top eigenvector of ``p R_G + (1-p) R_F`` with the diagonal optimum.

    Returns ``(overlap, gap)`` where ``gap`` separates the two largest
    eigenvalues of the full ``d^2`` operator.
    """
    spin = as_spin(spin)
    if spin.two_j > FULL_SPACE_MAX_TWO_J:
        raise DomainError(f"full-space check limited to two_j <= {FULL_SPACE_MAX_TWO_J}")
    if not 0.0 <= p < 1.0:
        # at p = 1 the operator is I (x) diag(dG): top eigenspace is d-fold degenerate
        raise DomainError(f"p={p!r} outside [0, 1)")
    ops = ops if ops is not None else build_RF_RG(spin)
    C = p * ops.R_G + (1.0 - p) * ops.R_F
    w, vecs = jacobi_eigh(C.real)
    top = vecs[:, -1]
    chi = diagonal_embedding(tradeoff_point(spin, p).a)
    chi = chi / np.linalg.norm(chi)
    overlap = float((top @ chi) ** 2)
    return overlap, float(w[-1] - w[-2])


def choi_of(xi: XiDiagonal) -> np.ndarray:
    """Seed Choi operator ``R_0 = |chi><chi|`` with ``chi = sum_n a_n |n, n>``; ``Tr R_0 = 2j+1``."""
    chi = diagonal_embedding(xi.a)
    return np.outer(chi, chi)


def trace_xi_from_choi(xi: XiDiagonal) -> float:
    """``sqrt(<Phi|R_0|Phi>)`` with ``|Phi> = sum_n |n, n>``."""
    phi = diagonal_embedding(np.ones(xi.spin.dim))
    return math.sqrt(float(phi @ choi_of(xi) @ phi))


def restriction_residuals(spin: SpinLike, ops: ChoiOperators | None = None) -> tuple[float, float]:
    """Max deviation of ``R_F``, ``R_G`` on ``span{|n,n>}`` from the reduced ``K``, ``diag(dG)``."""
    spin = as_spin(spin)
    ops = ops if ops is not None else build_RF_RG(spin)
    d = spin.dim
    diag_idx = np.arange(d) * (d + 1)
    mats = build_matrices(spin)
    rf = ops.R_F[np.ix_(diag_idx, diag_idx)]
    rg = ops.R_G[np.ix_(diag_idx, diag_idx)]
    return float(np.abs(rf - mats.K).max()), float(np.abs(rg - np.diag(mats.dG)).max())
