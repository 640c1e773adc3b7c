"""Spin coherent states: amplitudes, overlap weights and Haar sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .angular import GroupElement, SpinLike, as_spin, binomial, SpinJ
from .errors import DomainError


@dataclass(frozen=True)
class Direction:
    """A point on the Bloch sphere; ``theta = 0`` is the ``|-j>`` pole."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise DomainError(f"theta={self.theta!r} outside [0, pi]")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise DomainError(f"phi={self.phi!r} outside [0, 2 pi)")
        if self.theta == 0.0 and self.phi != 0.0:
            object.__setattr__(self, "phi", 0.0)

    @classmethod
    def wrap(cls, theta: float, phi: float) -> "Direction":
        """Build a direction, reducing ``phi`` into ``[0, 2 pi)``."""
        return cls(float(theta), float(phi) % (2 * math.pi))

    def group_element(self) -> GroupElement:
        return GroupElement.from_direction(self.theta, self.phi)


@dataclass(frozen=True)
class CoherentState:
    spin: SpinJ
    direction: Direction
    amplitudes: np.ndarray = field(repr=False)

    @property
    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


def amplitude(spin: SpinLike, direction: Direction, two_m: int) -> complex:
    """<m|theta, phi> in the ascending-m basis."""
    spin = as_spin(spin)
    k = spin.index(two_m)
    return complex(_amplitudes(spin.two_j, direction.theta, direction.phi)[k])


def _amplitudes(two_j: int, theta: float, phi: float) -> np.ndarray:
    k = np.arange(two_j + 1)
    binom = np.array([binomial(two_j, int(kk)) for kk in k])
    s, c = -math.sin(theta / 2), math.cos(theta / 2)
    return np.sqrt(binom) * s**k * c ** (two_j - k) * np.exp(-1j * k * phi)


def coherent_state(spin: SpinLike, direction: Direction) -> CoherentState:
    spin = as_spin(spin)
    amps = _amplitudes(spin.two_j, direction.theta, direction.phi)
    amps.setflags(write=False)
    return CoherentState(spin, direction, amps)


def overlap_weights(spin: SpinLike, theta) -> np.ndarray:
    """All ``B_m(theta) = |<m|theta, phi>|^2`` at once; trailing axis is ``k = j+m``.

    ``theta`` may be an array, in which case the result has shape ``theta.shape + (d,)``.
    """
    spin = as_spin(spin)
    theta = np.asarray(theta, dtype=float)
    k = np.arange(spin.dim)
    binom = np.array([binomial(spin.two_j, int(kk)) for kk in k])
    s2 = np.sin(theta / 2)[..., None] ** 2
    c2 = np.cos(theta / 2)[..., None] ** 2
    return binom * s2**k * c2 ** (spin.two_j - k)


def overlap_weight(spin: SpinLike, theta: float, two_m: int) -> float:
    spin = as_spin(spin)
    k = spin.index(two_m)
    return float(overlap_weights(spin, theta)[k])


def make_rng(seed: int | np.random.SeedSequence | None = None) -> np.random.Generator:
    """PCG64 generator; child streams come from ``SeedSequence.spawn``."""
    return np.random.default_rng(seed)


def chunk_streams(rng, samples: int, chunk: int = 8192):
    """Split ``samples`` into chunks, each paired with its own spawned generator.

    Chunk results depend only on the parent seed, so chunks may be evaluated
    in any order or on separate workers and merged afterwards.
    """
    rng = rng if isinstance(rng, np.random.Generator) else make_rng(rng)
    n_chunks = math.ceil(samples / chunk)
    sizes = [chunk] * (n_chunks - 1) + [samples - chunk * (n_chunks - 1)]
    return list(zip(rng.spawn(n_chunks), sizes))


def sample_directions(rng: np.random.Generator, size: int) -> tuple[np.ndarray, np.ndarray]:
    """``size`` isotropic directions as ``(theta, phi)`` arrays."""
    cos_theta = rng.uniform(-1.0, 1.0, size)
    phi = rng.uniform(0.0, 2 * math.pi, size)
    return np.arccos(cos_theta), phi


def sample_direction(rng: np.random.Generator) -> Direction:
    theta, phi = sample_directions(rng, 1)
    return Direction(float(theta[0]), float(phi[0]))


def sample_quaternions(rng: np.random.Generator, size: int) -> np.ndarray:
    """``(size, 4)`` Haar-random unit quaternions (normalized Gaussian 4-vectors)."""
    q = rng.standard_normal((size, 4))
    return q / np.linalg.norm(q, axis=1, keepdims=True)


def sample_group(rng: np.random.Generator) -> GroupElement:
    return GroupElement(*sample_quaternions(rng, 1)[0])
