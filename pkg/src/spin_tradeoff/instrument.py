"""The covariant measurement instrument ``E_g(rho) = A_g rho A_g`` with ``A_g = U_g xi U_g^dag``.

Fidelities are available by three routes that share no code beyond the
Clebsch-Gordan table and rotation matrices:

* :func:`fidelities_bilinear` -- the reduced quadratic forms in ``a``;
* :func:`fidelities_quadrature` -- the one-dimensional orbit integrals in
  ``u = cos^2(theta/2)``, Gauss-Legendre;
* :func:`fidelities_monte_carlo` -- Haar-sampled group elements plugged into
  the defining integrands with full rotation matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .angular import (
    GroupLike,
    SpinJ,
    SpinLike,
    _as_group,
    as_spin,
    binomial,
    cg_table,
    compose,
    rotation_matrices,
    rotation_matrix,
)
from .coherent import chunk_streams, sample_quaternions
from .errors import DomainError
from .tradeoff import XiDiagonal

@dataclass(frozen=True)
class CovariantInstrument:
    xi: XiDiagonal

    @property
    def spin(self) -> SpinJ:
        return self.xi.spin

    @property
    def a(self) -> np.ndarray:
        return self.xi.a

    @classmethod
    def identity(cls, spin: SpinLike) -> "CovariantInstrument":
        return cls(XiDiagonal.identity(spin))

    @classmethod
    def optimal_estimation(cls, spin: SpinLike) -> "CovariantInstrument":
        return cls(XiDiagonal.optimal_estimation(spin))


@dataclass(frozen=True)
class DensityMatrix:
    spin: SpinJ
    rho: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        d = self.spin.dim
        if rho.shape != (d, d):
            raise DomainError(f"density matrix must be {d}x{d}, got {rho.shape}")
        if np.abs(rho - rho.conj().T).max() > 1e-12:
            raise DomainError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > 1e-12:
            raise DomainError(f"density matrix trace {np.trace(rho).real!r} != 1")
        if np.linalg.eigvalsh(rho).min() < -1e-12:
            raise DomainError("density matrix has negative eigenvalues")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @classmethod
    def pure(cls, spin: SpinLike, psi: np.ndarray) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(as_spin(spin), np.outer(psi, psi.conj()))

    @classmethod
    def random(cls, spin: SpinLike, rng: np.random.Generator) -> "DensityMatrix":
        """Full-rank state from a Ginibre matrix (Hilbert-Schmidt measure)."""
        spin = as_spin(spin)
        d = spin.dim
        z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        rho = z @ z.conj().T
        rho = (rho + rho.conj().T) / 2
        return cls(spin, rho / np.trace(rho).real)


def kraus_at(inst: CovariantInstrument, g: GroupLike) -> np.ndarray:
    """``A_g = U_g xi U_g^dag`` (Hermitian, positive semidefinite)."""
    u = rotation_matrix(inst.spin, g)
    return (u * inst.a) @ u.conj().T


def map_at(inst: CovariantInstrument, g: GroupLike, rho: np.ndarray) -> np.ndarray:
    """Unnormalized output ``E_g(rho)``."""
    a_g = kraus_at(inst, g)
    return a_g @ rho @ a_g


def apply(inst: CovariantInstrument, g: GroupLike, rho: DensityMatrix) -> tuple[DensityMatrix | None, float]:
    """Posterior state and outcome density (w.r.t. normalized Haar measure) for outcome ``g``.

    The posterior is ``None`` when the density is below 1e-15; callers decide
    how to treat such outcomes.
    """
    out = map_at(inst, g, rho.rho)
    density = float(np.trace(out).real)
    if density <= 1e-15:
        return None, density
    post = out / density
    return DensityMatrix(inst.spin, (post + post.conj().T) / 2), density


def fidelities_bilinear(inst: CovariantInstrument) -> tuple[float, float]:
    """``(F, G)`` from the reduced quadratic forms."""
    spin = inst.spin
    a = inst.a
    c2 = cg_table(spin) ** 2
    norm = 2 * spin.two_j + 1
    F = float(a @ c2 @ a) / norm
    G = float(np.sum(a**2 * c2[:, 0])) / norm
    return F, G


def _bernstein(two_j: int, u: np.ndarray) -> np.ndarray:
    # b_k(u) = C(2j, k) (1-u)^k u^(2j-k); k = j + n
    k = np.arange(two_j + 1)
    binom = np.array([binomial(two_j, int(kk)) for kk in k])
    return binom * (1.0 - u[:, None]) ** k * u[:, None] ** (two_j - k)


def fidelities_quadrature(inst: CovariantInstrument, nodes: int | None = None) -> tuple[float, float]:
    """``(F, G)`` by Gauss-Legendre quadrature of the orbit integrals.

    With ``u = cos^2(theta/2)`` the integrands are the polynomials
    ``[sum_n a_n b_n(u)]^2`` and ``[sum_n a_n^2 b_n(u)] u^(2j)`` on ``[0, 1]``,
    of degree ``4j``.  At least ``4j + 2`` nodes are required.
    """
    two_j = inst.spin.two_j
    min_nodes = 2 * two_j + 2
    if nodes is None:
        nodes = min_nodes
    if nodes < min_nodes:
        raise DomainError(f"need at least {min_nodes} quadrature nodes for two_j={two_j}, got {nodes}")
    x, w = np.polynomial.legendre.leggauss(nodes)
    u = (x + 1.0) / 2.0
    w = w / 2.0
    b = _bernstein(two_j, u)
    a = inst.a
    F = float(np.sum(w * (b @ a) ** 2))
    G = float(np.sum(w * (b @ a**2) * u**two_j))
    return F, G


def _mc_chunk(inst: CovariantInstrument, rng: np.random.Generator, size: int) -> tuple[np.ndarray, np.ndarray]:
    u = rotation_matrices(inst.spin, sample_quaternions(rng, size))
    kraus = (u * inst.a[None, None, :]) @ u.conj().transpose(0, 2, 1)
    # <-j| A_g |-j><-j| A_g |-j> and Tr[A_g |-j><-j| A_g] |<-j|U_g|-j>|^2
    f_vals = np.abs(kraus[:, 0, 0]) ** 2
    g_vals = np.sum(np.abs(kraus[:, :, 0]) ** 2, axis=1) * np.abs(u[:, 0, 0]) ** 2
    return f_vals, g_vals


def fidelities_monte_carlo(
    inst: CovariantInstrument,
    samples: int,
    rng: np.random.Generator | int | None = None,
) -> tuple[float, float, float, float]:
    """Haar Monte Carlo estimate ``(F, G, stderr_F, stderr_G)``.

    Samples are drawn in chunks, each from its own child seed of ``rng``, so
    the result depends only on the seed and ``samples``.
    """
    if samples < 100:
        raise DomainError(f"need at least 100 samples, got {samples}")
    chunks = [_mc_chunk(inst, child, size) for child, size in chunk_streams(rng, samples)]
    f_all = np.concatenate([c[0] for c in chunks])
    g_all = np.concatenate([c[1] for c in chunks])
    return float(f_all.mean()), float(g_all.mean()), _stderr(f_all), _stderr(g_all)


def _stderr(x: np.ndarray) -> float:
    return float(np.std(x, ddof=1) / math.sqrt(x.size))


def density_monte_carlo(
    inst: CovariantInstrument,
    rho: DensityMatrix,
    samples: int,
    rng: np.random.Generator | int | None = None,
) -> tuple[float, float]:
    """Haar average of the outcome density ``Tr[A_g rho A_g]`` and its standard error.

    Trace preservation makes the exact value 1.
    """
    if samples < 100:
        raise DomainError(f"need at least 100 samples, got {samples}")
    vals = []
    for child, size in chunk_streams(rng, samples):
        u = rotation_matrices(inst.spin, sample_quaternions(child, size))
        kraus = (u * inst.a[None, None, :]) @ u.conj().transpose(0, 2, 1)
        vals.append(np.einsum("nij,jk,nki->n", kraus, rho.rho, kraus).real)
    vals = np.concatenate(vals)
    return float(vals.mean()), _stderr(vals)


def covariance_residual(inst: CovariantInstrument, g: GroupLike, h: GroupLike, rho: DensityMatrix) -> float:
    """Frobenius norm of ``U_g^dag E_h(U_g rho U_g^dag) U_g - E_{g^-1 h}(rho)``."""
    g = _as_group(g)
    u_g = rotation_matrix(inst.spin, g)
    lhs = u_g.conj().T @ map_at(inst, h, u_g @ rho.rho @ u_g.conj().T) @ u_g
    rhs = map_at(inst, compose(g.inverse(), h), rho.rho)
    return float(np.linalg.norm(lhs - rhs))
