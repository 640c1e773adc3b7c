"""Optimal estimation/operation fidelity tradeoff for spin coherent states.

Everything here lives on the ``d``-dimensional span of ``|n>|n>``: the
optimal Choi operator is ``|chi><chi|`` with ``chi = sum_n a_n |n, n>``, so the
two fidelities reduce to

    F = a^T K a,      K[n, m] = c_{n,m}^2 / (4j + 1)
    G = sum_n dG[n] a_n^2,  dG[n] = c_{n,-j}^2 / (4j + 1)

subject to ``sum_n a_n^2 = 2j + 1``.  For a weight ``p`` the maximizer of
``p G + (1 - p) F`` is the Perron vector of ``p diag(dG) + (1 - p) K``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .angular import SpinJ, SpinLike, as_spin, cg_table
from .eigen import principal_eigenvector
from .errors import DomainError, NumericError

CLAMP_TOL = 1e-14


def g_min(spin: SpinLike) -> float:
    """Estimation fidelity of a random guess, ``1 / (2j + 1)``."""
    return 1.0 / as_spin(spin).dim


def g_max(spin: SpinLike) -> float:
    spin = as_spin(spin)
    return spin.dim / (2 * spin.two_j + 1)


def f_min(spin: SpinLike) -> float:
    """Operation fidelity left by the optimal estimation instrument (equals ``g_max``)."""
    return g_max(spin)


@dataclass(frozen=True)
class TradeoffMatrices:
    spin: SpinJ
    K: np.ndarray = field(repr=False)
    dG: np.ndarray = field(repr=False)

    def combined(self, p: float) -> np.ndarray:
        """``M(p) = p diag(dG) + (1 - p) K``."""
        return p * np.diag(self.dG) + (1.0 - p) * self.K


def build_matrices(spin: SpinLike) -> TradeoffMatrices:
    spin = as_spin(spin)
    c2 = cg_table(spin) ** 2
    norm = 2 * spin.two_j + 1
    K = c2 / norm
    dG = c2[:, 0] / norm
    K.setflags(write=False)
    dG.setflags(write=False)
    return TradeoffMatrices(spin, K, dG)


@dataclass(frozen=True)
class XiDiagonal:
    """Diagonal Kraus seed ``xi = sum_n a_n |n><n|`` (ascending m)."""

    spin: SpinJ
    a: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=float)
        if a.shape != (self.spin.dim,):
            raise DomainError(f"need {self.spin.dim} coefficients, got shape {a.shape}")
        if np.any(a < 0):
            raise DomainError("xi coefficients must be nonnegative")
        if abs(np.sum(a**2) - self.spin.dim) > 1e-10:
            raise DomainError(f"sum a_n^2 = {np.sum(a**2)!r}, expected {self.spin.dim} (trace preservation)")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @classmethod
    def normalized(cls, spin: SpinLike, a: Sequence[float]) -> "XiDiagonal":
        """Rescale nonnegative ``a`` so that ``sum a_n^2 = 2j + 1``."""
        spin = as_spin(spin)
        a = np.asarray(a, dtype=float)
        return cls(spin, a * math.sqrt(spin.dim) / np.linalg.norm(a))

    @classmethod
    def identity(cls, spin: SpinLike) -> "XiDiagonal":
        spin = as_spin(spin)
        return cls(spin, np.ones(spin.dim))

    @classmethod
    def optimal_estimation(cls, spin: SpinLike) -> "XiDiagonal":
        spin = as_spin(spin)
        a = np.zeros(spin.dim)
        a[0] = math.sqrt(spin.dim)
        return cls(spin, a)

    @property
    def trace(self) -> float:
        return float(np.sum(self.a))

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.a)


@dataclass(frozen=True)
class TradeoffPoint:
    p: float
    xi: XiDiagonal
    G: float
    F: float
    I: float
    D: float
    trace_xi: float
    lambda_max: float  # top eigenvalue of M(p) for a unit vector; p G + (1-p) F = (2j+1) lambda_max

    @property
    def spin(self) -> SpinJ:
        return self.xi.spin

    @property
    def a(self) -> np.ndarray:
        return self.xi.a

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "G": self.G,
            "F": self.F,
            "I": self.I,
            "D": self.D,
            "trace_xi": self.trace_xi,
            "lambda_max": self.lambda_max,
            "a": [float(x) for x in self.a],
        }


def _clamp_unit(name: str, value: float) -> float:
    if -CLAMP_TOL <= value < 0.0:
        return 0.0
    if 1.0 < value <= 1.0 + CLAMP_TOL:
        return 1.0
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name}={value!r} outside [0, 1]")
    return value


def normalize(spin: SpinLike, G: float, F: float) -> tuple[float, float]:
    """Map ``(G, F)`` to normalized information ``I`` and disturbance ``D``."""
    spin = as_spin(spin)
    if spin.two_j == 0:
        raise DomainError("information and disturbance are undefined for j = 0")
    lo, hi = g_min(spin), g_max(spin)
    info = (G - lo) / (hi - lo)
    dist = (1.0 - F) / (1.0 - f_min(spin))
    return _clamp_unit("I", info), _clamp_unit("D", dist)


def ho_tradeoff(info: float) -> float:
    """Disturbance of the optimal harmonic-oscillator coherent-state measurement at information ``info``."""
    if not 0.0 <= info <= 1.0:
        raise DomainError(f"I={info!r} outside [0, 1]")
    return 1.0 - math.sqrt(2.0 * (1.0 - info) / (2.0 - info))


def _point_from_xi(spin: SpinJ, mats: TradeoffMatrices, p: float, xi: XiDiagonal, lam: float) -> TradeoffPoint:
    a = xi.a
    G = float(np.sum(mats.dG * a**2))
    F = float(a @ mats.K @ a)
    info, dist = normalize(spin, G, F)
    return TradeoffPoint(p=p, xi=xi, G=G, F=F, I=info, D=dist, trace_xi=xi.trace, lambda_max=lam)


def tradeoff_point(spin: SpinLike, p: float, matrices: TradeoffMatrices | None = None) -> TradeoffPoint:
    """Optimal instrument for the objective ``p G + (1 - p) F``."""
    spin = as_spin(spin)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p!r} outside [0, 1]")
    mats = matrices if matrices is not None else build_matrices(spin)
    p = float(p)
    if p == 1.0:
        # diag(dG) is maximized by e_0 but power iteration would crawl near degeneracy
        return _point_from_xi(spin, mats, p, XiDiagonal.optimal_estimation(spin), float(mats.dG[0]))
    lam, v = principal_eigenvector(mats.combined(p))
    xi = XiDiagonal.normalized(spin, v)
    return _point_from_xi(spin, mats, p, xi, lam)


def sweep_curve(spin: SpinLike, grid: Iterable[float]) -> list[TradeoffPoint]:
    """Trace the frontier over an ascending grid of weights ``p``.

    Emits a ``RuntimeWarning`` if ``G`` ever decreases or ``F`` increases
    along the grid by more than 1e-10.
    """
    spin = as_spin(spin)
    grid = [float(p) for p in grid]
    if not grid:
        raise DomainError("empty p grid")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise DomainError("p grid must be sorted ascending")
    mats = build_matrices(spin)
    points = [tradeoff_point(spin, p, mats) for p in grid]
    for prev, cur in zip(points, points[1:]):
        if cur.G < prev.G - 1e-10 or cur.F > prev.F + 1e-10:
            warnings.warn(
                f"frontier not monotone between p={prev.p} and p={cur.p} "
                f"(dG={cur.G - prev.G:.3e}, dF={cur.F - prev.F:.3e})",
                RuntimeWarning,
                stacklevel=2,
            )
    return points


def solve_for_G(spin: SpinLike, G_target: float, tol: float = 1e-8, max_iter: int = 200) -> TradeoffPoint:
    """Bisect on ``p`` for the frontier point whose estimation fidelity is ``G_target``."""
    spin = as_spin(spin)
    lo_g, hi_g = g_min(spin), g_max(spin)
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    if not lo_g - tol <= G_target <= hi_g + tol:
        raise DomainError(f"G={G_target!r} outside [{lo_g}, {hi_g}] for {spin}")
    mats = build_matrices(spin)
    lo = tradeoff_point(spin, 0.0, mats)
    if abs(lo.G - G_target) <= tol:
        return lo
    hi = tradeoff_point(spin, 1.0, mats)
    if abs(hi.G - G_target) <= tol:
        return hi
    for _ in range(max_iter):
        mid = tradeoff_point(spin, 0.5 * (lo.p + hi.p), mats)
        if not lo.G - 1e-12 <= mid.G <= hi.G + 1e-12:
            raise NumericError(
                "G(p) not monotone inside bisection bracket",
                p_lo=lo.p, p_mid=mid.p, p_hi=hi.p, G_lo=lo.G, G_mid=mid.G, G_hi=hi.G,
            )
        if abs(mid.G - G_target) <= tol:
            return mid
        if mid.G < G_target:
            lo = mid
        else:
            hi = mid
    raise NumericError("bisection on p exhausted its iterations", p=mid.p, G=mid.G, target=G_target)
