import math

import numpy as np
import pytest

from spin_tradeoff.angular import GroupElement, rotation_matrix, rotation_matrices
from spin_tradeoff.coherent import (
    Direction,
    amplitude,
    coherent_state,
    make_rng,
    overlap_weight,
    overlap_weights,
    sample_direction,
    sample_directions,
    sample_group,
    sample_quaternions,
)
from spin_tradeoff.errors import DomainError


def test_ground_state():
    for two_j in range(5):
        for phi in (0.0, 1.0):
            d = Direction(0.0, phi)
            assert amplitude(two_j, d, -two_j) == 1
            assert all(amplitude(two_j, d, m) == 0 for m in range(-two_j + 2, two_j + 1, 2))


def test_antipodal_state():
    phi = 0.9
    for two_j in range(1, 6):
        d = Direction(math.pi, phi)
        top = amplitude(two_j, d, two_j)
        assert abs(top) == pytest.approx(1.0, abs=1e-15)
        assert top == pytest.approx((-1) ** two_j * np.exp(-1j * two_j * phi), abs=1e-12)
        assert all(abs(amplitude(two_j, d, m)) < 1e-15 for m in range(-two_j, two_j, 2))


def test_spin_half_equator():
    d = Direction(math.pi / 2, 0.0)
    assert amplitude(1, d, -1) == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert amplitude(1, d, 1) == pytest.approx(-1 / math.sqrt(2), abs=1e-15)


def test_normalization_grid():
    for two_j in range(0, 41):
        for theta in np.linspace(0, math.pi, 9):
            for phi in np.linspace(0, 2 * math.pi, 4, endpoint=False):
                psi = coherent_state(two_j, Direction(theta, phi)).amplitudes
                assert abs(np.vdot(psi, psi) - 1) < 1e-12


def test_matches_rotation_column():
    for two_j in range(0, 11):
        for theta, phi in [(0.4, 0.1), (2.0, 4.0), (math.pi, 5.5)]:
            d = Direction(theta, phi)
            psi = coherent_state(two_j, d).amplitudes
            col = rotation_matrix(two_j, d.group_element())[:, 0]
            np.testing.assert_allclose(psi, col, atol=1e-12)


def test_overlap_weights():
    assert overlap_weight(2, math.pi / 2, 0) == pytest.approx(0.5, abs=1e-15)
    for two_j in range(0, 12):
        for theta in (0.0, 0.3, 1.9, math.pi):
            w = overlap_weights(two_j, theta)
            assert w.sum() == pytest.approx(1.0, abs=1e-13)
            assert w[0] == pytest.approx(math.cos(theta / 2) ** (2 * two_j), abs=1e-15)
            psi = coherent_state(two_j, Direction(theta, 0.0)).amplitudes
            np.testing.assert_allclose(w, np.abs(psi) ** 2, atol=1e-14)


def test_direction_validation():
    with pytest.raises(DomainError):
        Direction(-0.1, 0.0)
    with pytest.raises(DomainError):
        Direction(0.5, 2 * math.pi)
    assert Direction(0.0, 3.0).phi == 0.0
    assert Direction.wrap(1.0, -1.0).phi == pytest.approx(2 * math.pi - 1.0)
    with pytest.raises(DomainError):
        amplitude(2, Direction(0.1, 0.1), 1)


class TestSampling:
    N = 100_000

    def test_direction_moments(self):
        theta, phi = sample_directions(make_rng(1), self.N)
        assert abs(np.cos(theta).mean()) < 4 / math.sqrt(self.N) / math.sqrt(3)
        assert np.all((phi >= 0) & (phi < 2 * math.pi))
        for two_j in (1, 2, 6):
            b = overlap_weights(two_j, theta)[:, 0]
            se = b.std(ddof=1) / math.sqrt(self.N)
            assert abs(b.mean() - 1 / (two_j + 1)) < 4 * se

    def test_direction_determinism(self):
        a = [sample_direction(make_rng(5)) for _ in range(2)]
        assert a[0] == a[1]
        t1, p1 = sample_directions(make_rng(9), 50)
        t2, p2 = sample_directions(make_rng(9), 50)
        assert t1.tobytes() == t2.tobytes() and p1.tobytes() == p2.tobytes()

    def test_group_moments(self):
        q = sample_quaternions(make_rng(2), self.N)
        se = q.std(axis=0, ddof=1) / math.sqrt(self.N)
        assert np.all(np.abs(q.mean(axis=0)) < 4 * se)
        assert np.allclose(np.linalg.norm(q, axis=1), 1.0, atol=1e-14)

    def test_group_determinism(self):
        assert sample_group(make_rng(3)) == sample_group(make_rng(3))
        assert sample_quaternions(make_rng(3), 10).tobytes() == sample_quaternions(make_rng(3), 10).tobytes()

    def test_schur_average_spin_one(self):
        rng = make_rng(4)
        x = np.array([[0.2, 0.1 + 0.3j, 0.0], [0.1 - 0.3j, 0.5, 0.4], [0.0, 0.4, 0.3]])
        us = rotation_matrices(2, sample_quaternions(rng, 50_000))
        vals = np.einsum("nij,jk,nlk->nil", us, x, us.conj())
        mean = vals.mean(axis=0)
        se = vals.std(axis=0, ddof=1) / math.sqrt(len(us))
        target = np.trace(x) / 3 * np.eye(3)
        assert np.all(np.abs(mean - target) < 4 * se + 1e-12)

    def test_haar_ground_overlap(self):
        for two_j in (1, 3, 5):
            us = rotation_matrices(two_j, sample_quaternions(make_rng(10 + two_j), 50_000))
            vals = np.abs(us[:, 0, 0]) ** 2
            se = vals.std(ddof=1) / math.sqrt(len(vals))
            assert abs(vals.mean() - 1 / (two_j + 1)) < 4 * se
