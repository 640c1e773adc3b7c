"""Angular-momentum special functions for a single spin-j irrep.

All magnetic indices are handled as doubled integers (``two_m``) so that
half-integer spins never require floating-point index arithmetic.  Internally
an index is shifted to ``k = j + m`` in ``{0, ..., 2j}``; matrix rows and
columns are ordered by ascending ``m`` (``k = 0`` is ``m = -j``).

Rotation convention
-------------------
A unit quaternion ``(w, x, y, z)`` represents the SU(2) element
``exp(-i alpha n.J)`` with ``w = cos(alpha/2)`` and ``(x, y, z) = sin(alpha/2) n``.
Matrices are built as ``D_{m'm} = exp(-i m' a) d_{m'm}(b) exp(-i m c)`` from
ZYZ Euler angles and the Condon-Shortley small-d matrix.  With this choice the
coherent-state element for direction ``(theta, phi)`` (a rotation by ``-theta``
about ``(sin phi, -cos phi, 0)``, see :meth:`GroupElement.from_direction`) has
its ``m' = -j`` column equal to::

    sqrt(C(2j, j+m)) (-sin(theta/2))**(j+m) cos(theta/2)**(j-m) exp(-i (j+m) phi)

with no extra phase.  This column identity is the normative convention; the
tests pin it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from .errors import DomainError

_LNFACT_EXACT_MAX = 256
_LNFACT_MAX = 10_000
_QUAT_TOL = 1e-12
_CG_EXACT_MAX = 500  # exact rational c^2 below this two_j, log-space above

_LNFACT_TABLE = tuple(math.log(math.factorial(k)) for k in range(_LNFACT_EXACT_MAX + 1))


@dataclass(frozen=True)
class SpinJ:
    """Spin magnitude stored as the integer ``two_j`` (so ``j = two_j / 2``)."""

    two_j: int

    def __post_init__(self):
        if isinstance(self.two_j, bool) or int(self.two_j) != self.two_j or self.two_j < 0:
            raise DomainError(f"two_j must be a nonnegative integer, got {self.two_j!r}")
        object.__setattr__(self, "two_j", int(self.two_j))

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def dim(self) -> int:
        return self.two_j + 1

    def two_ms(self) -> range:
        """Doubled magnetic numbers ``-2j, -2j+2, ..., 2j``."""
        return range(-self.two_j, self.two_j + 1, 2)

    def index(self, two_m: int) -> int:
        """Row index ``k = j + m`` of a doubled magnetic number."""
        if int(two_m) != two_m:
            raise DomainError(f"two_m must be an integer, got {two_m!r}")
        two_m = int(two_m)
        if abs(two_m) > self.two_j or (two_m + self.two_j) % 2:
            raise DomainError(f"two_m={two_m} is not a magnetic index for two_j={self.two_j}")
        return (two_m + self.two_j) // 2

    def __str__(self):
        return f"j={self.two_j}/2" if self.two_j % 2 else f"j={self.two_j // 2}"


SpinLike = Union[SpinJ, int]


def as_spin(spin: SpinLike) -> SpinJ:
    """Accept either a :class:`SpinJ` or a bare ``two_j`` integer."""
    return spin if isinstance(spin, SpinJ) else SpinJ(spin)


def ln_factorial(k: int) -> float:
    """``ln(k!)`` for ``0 <= k <= 10000``; tabulated exactly up to 256."""
    if isinstance(k, bool) or int(k) != k:
        raise DomainError(f"ln_factorial needs an integer, got {k!r}")
    k = int(k)
    if k < 0 or k > _LNFACT_MAX:
        raise DomainError(f"ln_factorial argument {k} outside [0, {_LNFACT_MAX}]")
    if k <= _LNFACT_EXACT_MAX:
        return _LNFACT_TABLE[k]
    return math.lgamma(k + 1.0)


def binomial(n: int, k: int) -> float:
    """Binomial coefficient as a float; exact integer arithmetic for ``n <= 20``."""
    if k < 0 or k > n:
        return 0.0
    if n <= 20:
        return float(math.comb(n, k))
    return math.exp(ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k))


def cg_stretched(spin: SpinLike, two_n: int, two_m: int) -> float:
    """Clebsch-Gordan coefficient <j,n; j,m | 2j, n+m> of the stretched multiplet.

    Uses the product-of-factorials closed form, which in terms of
    ``k = j+n`` and ``l = j+m`` reads ``sqrt(C(2j,k) C(2j,l) / C(4j,k+l))``.
    The squared coefficient is formed as an exact rational for moderate spins
    and from log-factorials otherwise.
    """
    spin = as_spin(spin)
    k, l = spin.index(two_n), spin.index(two_m)
    return _cg_k(spin.two_j, k, l)


def _cg_k(two_j: int, k: int, l: int) -> float:
    if k == 0 and l == 0:
        return 1.0
    if two_j <= _CG_EXACT_MAX:
        ratio = Fraction(math.comb(two_j, k) * math.comb(two_j, l), math.comb(2 * two_j, k + l))
        return math.sqrt(ratio)
    log_sq = (
        2.0 * ln_factorial(two_j)
        + ln_factorial(k + l)
        + ln_factorial(2 * two_j - k - l)
        - ln_factorial(2 * two_j)
        - ln_factorial(k)
        - ln_factorial(two_j - k)
        - ln_factorial(l)
        - ln_factorial(two_j - l)
    )
    return math.exp(0.5 * log_sq)


@lru_cache(maxsize=64)
def _cg_table_cached(two_j: int) -> np.ndarray:
    d = two_j + 1
    c = np.empty((d, d))
    for k in range(d):
        for l in range(k, d):
            c[k, l] = c[l, k] = _cg_k(two_j, k, l)
    c.setflags(write=False)
    return c


def cg_table(spin: SpinLike) -> np.ndarray:
    """The symmetric ``d x d`` table ``c[k, l]`` of stretched coefficients (read-only)."""
    return _cg_table_cached(as_spin(spin).two_j)


@dataclass(frozen=True)
class GroupElement:
    """An SU(2) element as a unit quaternion ``(w, x, y, z)``."""

    w: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("w", "x", "y", "z"):
            object.__setattr__(self, name, float(getattr(self, name)))
        norm2 = self.w**2 + self.x**2 + self.y**2 + self.z**2
        if not abs(norm2 - 1.0) <= _QUAT_TOL:
            raise DomainError(f"quaternion is not normalized (|q|^2 = {norm2!r})")

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls(1.0, 0.0, 0.0, 0.0)

    @classmethod
    def from_quaternion(cls, q: Sequence[float]) -> "GroupElement":
        """Normalize an arbitrary nonzero 4-vector into a group element."""
        q = np.asarray(q, dtype=float)
        norm = np.linalg.norm(q)
        if q.shape != (4,) or not np.isfinite(norm) or norm == 0.0:
            raise DomainError(f"cannot normalize quaternion {q!r}")
        return cls(*(q / norm))

    @classmethod
    def from_axis_angle(cls, axis: Sequence[float], angle: float) -> "GroupElement":
        """``exp(-i angle n.J)`` for the unit vector along ``axis``."""
        n = np.asarray(axis, dtype=float)
        n = n / np.linalg.norm(n)
        s = math.sin(angle / 2)
        return cls(math.cos(angle / 2), s * n[0], s * n[1], s * n[2])

    @classmethod
    def from_direction(cls, theta: float, phi: float) -> "GroupElement":
        """The element ``exp(i theta (J_x sin phi - J_y cos phi))`` mapping ``|-j>`` to ``|theta, phi>``."""
        s = math.sin(theta / 2)
        return cls(math.cos(theta / 2), -s * math.sin(phi), s * math.cos(phi), 0.0)

    @property
    def q(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def inverse(self) -> "GroupElement":
        return GroupElement(self.w, -self.x, -self.y, -self.z)

    def euler_zyz(self) -> tuple[float, float, float]:
        """ZYZ Euler angles ``(alpha, beta, gamma)`` with ``alpha + gamma`` kept mod 4 pi.

        Keeping the half-angle sums unreduced makes the map back to SU(2)
        single valued, so half-integer spins see the sign of ``q``.
        """
        return _euler_zyz(self.q[None, :])[0]


GroupLike = Union[GroupElement, Sequence[float]]


def _as_group(g: GroupLike) -> GroupElement:
    return g if isinstance(g, GroupElement) else GroupElement(*g)


def compose(g1: GroupLike, g2: GroupLike) -> GroupElement:
    """Hamilton product ``g1 g2``, renormalized."""
    a, b = _as_group(g1), _as_group(g2)
    w = a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z
    x = a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y
    y = a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x
    z = a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w
    return GroupElement.from_quaternion((w, x, y, z))


def inverse(g: GroupLike) -> GroupElement:
    return _as_group(g).inverse()


def _euler_zyz(q: np.ndarray) -> np.ndarray:
    # U(q) in the (+j, -j) spin-1/2 basis is [[w - iz, -(y + ix)], [y - ix, w + iz]]
    #   = [[e^{-i(a+c)/2} cos(b/2), -e^{-i(a-c)/2} sin(b/2)], ...]
    w, x, y, z = q[:, 0], q[:, 1], q[:, 2], q[:, 3]
    cos_half = np.hypot(w, z)
    sin_half = np.hypot(x, y)
    beta = 2.0 * np.arctan2(sin_half, cos_half)
    total = np.where(cos_half > 0.0, 2.0 * np.arctan2(z, w), 0.0)
    diff = np.where(sin_half > 0.0, -2.0 * np.arctan2(x, y), 0.0)
    return np.stack([(total + diff) / 2, beta, (total - diff) / 2], axis=-1)


@lru_cache(maxsize=64)
def _small_d_terms(two_j: int):
    """Per-entry sum terms ``(k', k, coef, cos_power, sin_power)`` of d^j(beta)."""
    d = two_j + 1
    lf = ln_factorial
    terms = []
    for kp in range(d):  # kp = j + m'
        for k in range(d):  # k = j + m
            base = 0.5 * (lf(kp) + lf(two_j - kp) + lf(k) + lf(two_j - k))
            dm = kp - k  # m' - m
            for s in range(max(0, -dm), min(k, two_j - kp) + 1):
                coef = math.exp(base - lf(k - s) - lf(s) - lf(dm + s) - lf(two_j - kp - s))
                if (dm + s) % 2:
                    coef = -coef
                terms.append((kp, k, coef, two_j - dm - 2 * s, dm + 2 * s))
    return tuple(terms)


def _small_d_batch(two_j: int, beta: np.ndarray) -> np.ndarray:
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    d = two_j + 1
    c = np.cos(beta / 2)
    s = np.sin(beta / 2)
    cpow = np.stack([c**p for p in range(two_j + 1)], axis=0)
    spow = np.stack([s**p for p in range(two_j + 1)], axis=0)
    out = np.zeros((beta.shape[0], d, d))
    for kp, k, coef, pc, ps in _small_d_terms(two_j):
        out[:, kp, k] += coef * cpow[pc] * spow[ps]
    return out


def wigner_small_d(spin: SpinLike, beta: float) -> np.ndarray:
    """Real orthogonal ``d^j_{m'm}(beta)`` (rows ``m'``, columns ``m``, ascending)."""
    spin = as_spin(spin)
    return _small_d_batch(spin.two_j, np.array([beta]))[0]


def rotation_matrices(spin: SpinLike, quats: np.ndarray) -> np.ndarray:
    """Vectorized :func:`rotation_matrix` over an ``(N, 4)`` array of unit quaternions."""
    spin = as_spin(spin)
    quats = np.asarray(quats, dtype=float).reshape(-1, 4)
    angles = _euler_zyz(quats)
    alpha, beta, gamma = angles[:, 0], angles[:, 1], angles[:, 2]
    two_m = np.arange(-spin.two_j, spin.two_j + 1, 2) / 2.0
    phase_left = np.exp(-1j * np.outer(alpha, two_m))
    phase_right = np.exp(-1j * np.outer(gamma, two_m))
    small = _small_d_batch(spin.two_j, beta)
    return phase_left[:, :, None] * small * phase_right[:, None, :]


def rotation_matrix(spin: SpinLike, g: GroupLike) -> np.ndarray:
    """The unitary ``U_g`` of the spin-j irrep in the ascending-m ``J_z`` basis."""
    g = _as_group(g)
    return rotation_matrices(spin, g.q[None, :])[0]


def spin_operators(spin: SpinLike) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(J_x, J_y, J_z)`` in the ascending-m basis, Condon-Shortley phases."""
    spin = as_spin(spin)
    j = spin.j
    m = np.arange(-spin.two_j, spin.two_j + 1, 2) / 2.0
    # J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>
    raise_amp = np.sqrt(j * (j + 1) - m[:-1] * (m[:-1] + 1))
    j_plus = np.diag(raise_amp, k=-1).astype(complex)
    j_minus = j_plus.conj().T
    jx = (j_plus + j_minus) / 2
    jy = (j_plus - j_minus) / 2j
    jz = np.diag(m).astype(complex)
    return jx, jy, jz
