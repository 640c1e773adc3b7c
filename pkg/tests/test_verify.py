import math

import numpy as np
import pytest

from spin_tradeoff.angular import rotation_matrix
from spin_tradeoff.coherent import make_rng, sample_group
from spin_tradeoff.errors import DomainError
from spin_tradeoff.tradeoff import build_matrices, sweep_curve
from spin_tradeoff.verify import (
    build_projector_2j,
    build_RF_RG,
    diagonal_embedding,
    full_space_eigencheck,
    monte_carlo_RF,
    partial_trace_first,
    partial_transpose_second,
    restriction_residuals,
    schur_average,
    trace_xi_from_choi,
)


def swap(d):
    s = np.zeros((d * d, d * d))
    for a in range(d):
        for b in range(d):
            s[b * d + a, a * d + b] = 1
    return s


class TestProjector:
    def test_qubit_triplet(self):
        np.testing.assert_allclose(build_projector_2j(1), (np.eye(4) + swap(2)) / 2, atol=1e-15)

    @pytest.mark.parametrize("two_j", range(0, 7))
    def test_projector_properties(self, two_j):
        P = build_projector_2j(two_j)
        np.testing.assert_allclose(P @ P, P, atol=1e-12)
        np.testing.assert_allclose(P, P.T, atol=0)
        assert np.trace(P) == pytest.approx(2 * two_j + 1, abs=1e-12)
        assert np.linalg.matrix_rank(P) == 2 * two_j + 1
        # lies inside the symmetric subspace
        np.testing.assert_allclose(swap(two_j + 1) @ P, P, atol=1e-12)
        rng = make_rng(two_j)
        for _ in range(5):
            u = rotation_matrix(two_j, sample_group(rng))
            uu = np.kron(u, u)
            assert np.abs(uu @ P - P @ uu).max() < 1e-10


class TestChoi:
    def test_helpers(self):
        rng = make_rng(0)
        x = rng.standard_normal((9, 9))
        np.testing.assert_allclose(partial_transpose_second(partial_transpose_second(x, 3), 3), x)
        a, b = rng.standard_normal((3, 3)), rng.standard_normal((3, 3))
        np.testing.assert_allclose(partial_trace_first(np.kron(a, b), 3), np.trace(a) * b, atol=1e-14)
        np.testing.assert_allclose(partial_transpose_second(np.kron(a, b), 3), np.kron(a, b.T), atol=1e-14)

    @pytest.mark.parametrize("two_j", range(1, 7))
    def test_restrictions_match_reduced(self, two_j):
        rf, rg = restriction_residuals(two_j)
        assert rf < 1e-12 and rg < 1e-12

    def test_spin_half_rg(self):
        ops = build_RF_RG(1)
        idx = [0, 3]
        np.testing.assert_allclose(ops.R_G[np.ix_(idx, idx)], np.diag([1, 0.5]) / 3, atol=1e-15)

    @pytest.mark.parametrize("two_j", range(1, 7))
    def test_operator_properties(self, two_j):
        ops = build_RF_RG(two_j)
        for r in (ops.R_F, ops.R_G):
            np.testing.assert_allclose(r, r.T, atol=1e-15)
            assert np.linalg.eigvalsh(r).min() > -1e-10
        assert np.trace(ops.R_F) == pytest.approx(1.0, abs=1e-12)
        # fidelities of the identity map |Phi><Phi| through the full operators
        phi = diagonal_embedding(np.ones(two_j + 1))
        assert phi @ ops.R_F @ phi == pytest.approx(1.0, abs=1e-12)
        assert phi @ ops.R_G @ phi == pytest.approx(1 / (two_j + 1), abs=1e-12)

    @pytest.mark.parametrize("two_j", [1, 2])
    def test_monte_carlo_rf(self, two_j):
        n = 100_000
        est = monte_carlo_RF(two_j, n, 5)
        exact = build_RF_RG(two_j).R_F
        assert np.abs(est - exact).max() < 5 / math.sqrt(n)
        np.testing.assert_allclose(est, est.conj().T, atol=1e-12)
        assert np.trace(est).real == pytest.approx(1.0, abs=1e-12)

    def test_sample_minimum(self):
        with pytest.raises(DomainError):
            monte_carlo_RF(1, 999)
        with pytest.raises(DomainError):
            schur_average(1, np.eye(2), 10)


class TestSchur:
    def test_identity_exact(self):
        np.testing.assert_allclose(schur_average(3, np.eye(4), 2000, 1), np.eye(4), atol=1e-13)

    @pytest.mark.parametrize("two_j", [1, 2, 4])
    def test_ground_projector(self, two_j):
        d = two_j + 1
        n = 50_000
        x = np.zeros((d, d))
        x[0, 0] = 1
        assert np.abs(schur_average(two_j, x, n, 2) - np.eye(d) / d).max() < 5 / math.sqrt(n)

    def test_traceless(self):
        rng = make_rng(3)
        h = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        h = h + h.conj().T
        h -= np.trace(h) / 3 * np.eye(3)
        n = 50_000
        assert np.abs(schur_average(2, h, n, 4)).max() < 5 * np.abs(h).max() / math.sqrt(n)


class TestEigencheck:
    @pytest.mark.parametrize("two_j,p", [(1, 0.0), (2, 0.5), (4, 0.9)])
    def test_examples(self, two_j, p):
        overlap, gap = full_space_eigencheck(two_j, p)
        assert overlap >= 1 - 1e-9
        assert gap > 0

    def test_domain(self):
        with pytest.raises(DomainError):
            full_space_eigencheck(7, 0.5)
        with pytest.raises(DomainError):
            full_space_eigencheck(2, 1.0)


@pytest.mark.parametrize("two_j", [1, 2, 5, 10])
def test_trace_xi_choi_projection(two_j):
    for pt in sweep_curve(two_j, np.linspace(0, 1, 11)):
        assert abs(pt.trace_xi - trace_xi_from_choi(pt.xi)) < 1e-10
