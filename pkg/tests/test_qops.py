import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from nlshare.qops import (
    I2,
    PHI_PLUS_KET,
    SX,
    SY,
    SZ,
    expectation,
    is_density,
    is_observable,
    ket_to_density,
    partial_trace,
    pauli_plane_batch,
    pauli_plane_observable,
    permute_subsystems,
    random_density,
    tensor,
)

angles = st.floats(-10, 10, allow_nan=False)
PHI = ket_to_density(PHI_PLUS_KET)


def brute_expectation_on_phi_plus(a, b):
    """<psi|A x B|psi> summed entry by entry over the two nonzero amplitudes."""
    amp = {(0, 0): 1 / math.sqrt(2), (1, 1): 1 / math.sqrt(2)}
    total = 0j
    for (i, j), ci in amp.items():
        for (k, l), ck in amp.items():
            total += np.conj(ci) * a[i, k] * b[j, l] * ck
    return total.real


class TestPaulPlane:
    def test_theta_zero_is_sigma_z(self):
        assert_allclose(pauli_plane_observable(0.0), SZ, atol=1e-15)

    def test_pi_over_three(self):
        want = math.sqrt(3) / 2 * SX + SZ / 2
        assert_allclose(pauli_plane_observable(math.pi / 3), want, atol=1e-15)

    def test_pi_is_minus_sigma_z(self):
        assert_allclose(pauli_plane_observable(math.pi), -SZ, atol=1e-15)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            pauli_plane_observable(float("nan"))

    @given(angles)
    def test_involutory(self, t):
        a = pauli_plane_observable(t)
        assert np.max(np.abs(a @ a - I2)) <= 1e-12
        assert is_observable(a)

    def test_batch_matches_scalar(self):
        ts = np.linspace(-3, 3, 11)
        batch = pauli_plane_batch(ts)
        for t, b in zip(ts, batch):
            assert_allclose(b, pauli_plane_observable(t), atol=1e-15)


class TestTensor:
    def test_identity(self):
        assert_allclose(tensor([I2, I2]), np.eye(4))

    def test_zz_correlated_on_phi_plus(self):
        assert expectation(PHI, tensor([SZ, SZ])) == pytest.approx(1.0, abs=1e-15)

    def test_xz_traceless(self):
        t = tensor([SX, SZ])
        assert t.shape == (4, 4)
        assert abs(np.trace(t)) == 0

    def test_empty(self):
        with pytest.raises(ValueError):
            tensor([])

    @given(angles, angles, angles)
    def test_associative(self, a, b, c):
        A, B, C = (pauli_plane_observable(x) for x in (a, b, c))
        left = tensor([A, tensor([B, C])])
        right = tensor([tensor([A, B]), C])
        assert np.max(np.abs(left - right)) <= 1e-14


class TestExpectation:
    def test_zz_and_zx(self):
        assert expectation(PHI, np.kron(SZ, SZ)) == pytest.approx(1.0)
        assert expectation(PHI, np.kron(SZ, SX)) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("t1", np.linspace(0, 2 * math.pi, 7))
    @pytest.mark.parametrize("t2", np.linspace(-1, 3, 5))
    def test_angle_grid_against_brute_force(self, t1, t2):
        a, b = pauli_plane_observable(t1), pauli_plane_observable(t2)
        brute = brute_expectation_on_phi_plus(a, b)
        assert brute == pytest.approx(math.cos(t1 - t2), abs=1e-14)
        assert expectation(PHI, np.kron(a, b)) == pytest.approx(brute, abs=1e-14)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            expectation(PHI, SZ)

    def test_identity_gives_one(self):
        rho = random_density(4, np.random.default_rng(1))
        assert expectation(rho, np.eye(4)) == pytest.approx(1.0, abs=1e-12)

    @given(angles, angles, st.floats(-3, 3))
    @settings(max_examples=50)
    def test_linear(self, a, b, c):
        rho = random_density(4, np.random.default_rng(3))
        A, B = np.kron(pauli_plane_observable(a), I2), np.kron(I2, pauli_plane_observable(b))
        lhs = expectation(rho, A + c * B)
        assert lhs == pytest.approx(expectation(rho, A) + c * expectation(rho, B), abs=1e-12)

    def test_rejects_complex_value(self):
        with pytest.raises(ValueError):
            expectation(np.eye(2) / 2, np.array([[0, 1], [0, 0]]) * 1j + np.eye(2) * 1j)


def test_sigma_y_is_an_observable_but_not_in_plane():
    assert is_observable(SY)
    assert not np.allclose(SY.imag, 0)


def test_random_density_is_valid():
    rng = np.random.default_rng(0)
    for d in (2, 4, 8):
        assert is_density(random_density(d, rng))


def test_permute_swaps_factors():
    a, b = pauli_plane_observable(0.3), pauli_plane_observable(1.1)
    assert_allclose(permute_subsystems(np.kron(a, b), [2, 2], [1, 0]), np.kron(b, a), atol=1e-15)


def test_partial_trace_of_phi_plus_is_maximally_mixed():
    assert_allclose(partial_trace(PHI, [2, 2], [0]), I2 / 2, atol=1e-15)
    rho = random_density(2, np.random.default_rng(2))
    sigma = random_density(2, np.random.default_rng(3))
    assert_allclose(partial_trace(np.kron(rho, sigma), [2, 2], [1]), sigma, atol=1e-14)
