import math

import numpy as np

from qlbdirac.algebra import (
    AXES, IDENTITY, NJL_SERIES_THRESHOLD, anticommutator, axis_index, collision_matrix_em,
    collision_matrix_free, collision_matrix_njl, dagger, em_generator, expm_antihermitian,
    rotation, unitarity_residual)
from qlbdirac.exceptions import InvalidAxis
from qlbdirac.oracle import series_expm

from .utils import QLBTestCase


def random_antihermitian(rng, scale=1.0):
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    return scale * 0.5 * (a - dagger(a))


class TestDiracSet(QLBTestCase):

    def test_beta(self):
        self.assertArrayClose(self.dirac.beta, np.diag([1, 1, -1, -1]), atol=0)

    def test_anticommutators(self):
        for i, a in enumerate(AXES):
            alpha = self.dirac.alpha(a)
            self.assertArrayClose(anticommutator(alpha, self.dirac.beta), np.zeros((4, 4)), atol=0)
            for j, b in enumerate(AXES):
                expected = 2 * IDENTITY if i == j else np.zeros((4, 4))
                self.assertArrayClose(
                    anticommutator(alpha, self.dirac.alpha(b)), expected, atol=0)

    def test_gamma5(self):
        g0, g1, g2, g3 = self.dirac.gammas()
        product = IDENTITY
        for gamma in (g0, g1, g2, g3):
            product = product @ gamma
        self.assertArrayClose(self.dirac.gamma5, 1j * product, atol=0)
        self.assertArrayClose(np.diag(self.dirac.gamma5), np.zeros(4), atol=0)
        self.assertArrayClose(self.dirac.gamma5[:2, 2:], np.eye(2), atol=0)
        self.assertArrayClose(self.dirac.gamma5[2:, :2], np.eye(2), atol=0)

    def test_sigma(self):
        sigma = self.dirac.sigma
        self.assertArrayClose(sigma, self.dirac.beta @ self.dirac.gamma5, atol=0)
        self.assertArrayClose(dagger(sigma), -sigma, atol=0)
        self.assertArrayClose(anticommutator(self.dirac.beta, sigma), np.zeros((4, 4)), atol=0)
        self.assertArrayClose(sigma @ sigma, -IDENTITY, atol=0)

    def test_immutable(self):
        with self.assertRaises(ValueError):
            self.dirac.beta[0, 0] = 2.0

    def test_replace(self):
        perturbed = self.dirac.replace(beta=np.diag([1.001, 1, -1, -1]))
        self.assertEqual(1.001, perturbed.beta[0, 0])
        self.assertIs(self.dirac.alpha_x, perturbed.alpha_x)
        self.assertEqual(1.0, self.dirac.beta[0, 0])


class TestUnitarityResidual(QLBTestCase):

    def test_any_size(self):
        self.assertEqual(0.0, unitarity_residual(np.eye(4)))
        self.assertEqual(0.0, unitarity_residual(np.roll(np.eye(32), 1, axis=0)))
        self.assertEqual(3.0, unitarity_residual(2 * np.eye(6)))

    def test_stack(self):
        stack = np.stack([IDENTITY, 1j * IDENTITY, self.dirac.beta])
        self.assertEqual(0.0, unitarity_residual(stack))
        self.assertEqual(0.75, unitarity_residual(np.stack([np.eye(8), 0.5 * np.eye(8)])))


class TestRotation(QLBTestCase):

    def test_properties(self):
        for axis in AXES:
            S = rotation(self.dirac, axis)
            self.assertArrayClose(S, dagger(S), atol=0)
            self.assertArrayClose(S @ S, IDENTITY, atol=1e-14)
            self.assertArrayClose(
                dagger(S) @ self.dirac.alpha(axis) @ S, self.dirac.beta, atol=1e-14)

    def test_axis_forms(self):
        self.assertIs(rotation(self.dirac, 'y'), rotation(self.dirac, 1))

    def test_invalid_axis(self):
        for axis in ('w', 3, -1, True, None):
            with self.assertRaises(InvalidAxis):
                axis_index(axis)
        self.assertQLBError('invalid_axis', rotation, self.dirac, 'q')


class TestExpmAntihermitian(QLBTestCase):

    def test_zero(self):
        self.assertArrayClose(expm_antihermitian(np.zeros((4, 4))), IDENTITY, atol=0)

    def test_mass_term(self):
        result = expm_antihermitian(-1j * 0.3 * self.dirac.beta)
        expected = math.cos(0.3) * IDENTITY - 1j * math.sin(0.3) * self.dirac.beta
        self.assertArrayClose(result, expected, atol=1e-14)

    def test_random_against_series(self):
        rng = np.random.default_rng(42)
        for _ in range(50):
            M = random_antihermitian(rng, scale=rng.uniform(0.1, 3.0))
            result = expm_antihermitian(M)
            self.assertArrayClose(result, series_expm(M), atol=1e-12)
            self.assertUnitary(result)

    def test_stack(self):
        rng = np.random.default_rng(1)
        stack = np.array([random_antihermitian(rng) for _ in range(6)]).reshape(2, 3, 4, 4)
        result = expm_antihermitian(stack)
        self.assertEqual((2, 3, 4, 4), result.shape)
        self.assertArrayClose(result[1, 2], expm_antihermitian(stack[1, 2]), atol=1e-14)

    def test_not_antihermitian(self):
        self.assertQLBError('not_antihermitian', expm_antihermitian, self.dirac.beta)


class TestFreeCollision(QLBTestCase):

    def test_massless(self):
        self.assertArrayClose(collision_matrix_free(self.dirac, 0.0, 1.0), IDENTITY, atol=0)

    def test_quarter_turn(self):
        result = collision_matrix_free(self.dirac, math.pi / 2, 1.0)
        self.assertArrayClose(result, -1j * self.dirac.beta, atol=1e-15)

    def test_against_generic(self):
        result = collision_matrix_free(self.dirac, 0.15, 2.0)
        self.assertArrayClose(result, expm_antihermitian(-1j * 0.3 * self.dirac.beta), atol=1e-13)
        self.assertUnitary(result, atol=1e-14)

    def test_arrays(self):
        masses = np.array([0.0, 0.1, 0.2])
        result = collision_matrix_free(self.dirac, masses, 1.0)
        self.assertEqual((3, 4, 4), result.shape)
        self.assertArrayClose(result[2], collision_matrix_free(self.dirac, 0.2, 1.0), atol=1e-15)

    def test_time_step_positive(self):
        self.assertQLBError('invalid_parameter', collision_matrix_free, self.dirac, 0.1, 0.0)
        self.assertQLBError('invalid_parameter', collision_matrix_free, self.dirac, 0.1, -1.0)


class TestNJLCollision(QLBTestCase):

    def generator(self, m, g, rho_s, rho_a, dt):
        return dt * (-1j * (m - g * rho_s) * self.dirac.beta - g * rho_a * self.dirac.sigma)

    def test_free_massless(self):
        result = collision_matrix_njl(self.dirac, 0.0, 0.0, 0.7, -0.3, 1.0)
        self.assertArrayClose(result, IDENTITY, atol=0)

    def test_dynamic_mass(self):
        rho, dt = 0.4, 0.5
        result = collision_matrix_njl(self.dirac, 0.0, 1.0, rho, 0.0, dt)
        expected = math.cos(rho * dt) * IDENTITY + 1j * self.dirac.beta * math.sin(rho * dt)
        self.assertArrayClose(result, expected, atol=1e-15)

    def test_against_series(self):
        result = collision_matrix_njl(self.dirac, 0.0, 2.0, 0.1, 0.05, 1.0)
        self.assertArrayClose(
            result, series_expm(self.generator(0.0, 2.0, 0.1, 0.05, 1.0)), atol=1e-12)

    def test_seeded_draws(self):
        rng = np.random.default_rng(42)
        m, g = rng.uniform(0, 2, 1000), rng.uniform(-3, 3, 1000)
        rho_s, rho_a = rng.uniform(-1, 1, 1000), rng.uniform(-1, 1, 1000)
        dt = rng.uniform(0.01, 2, 1000)
        result = collision_matrix_njl(self.dirac, m, g, rho_s, rho_a, dt)
        self.assertEqual((1000, 4, 4), result.shape)
        self.assertUnitary(result, atol=1e-13)
        for i in range(0, 1000, 97):
            self.assertArrayClose(
                result[i], series_expm(self.generator(m[i], g[i], rho_s[i], rho_a[i], dt[i])),
                atol=1e-12)

    def test_small_angle_series(self):
        for theta in (0.0, NJL_SERIES_THRESHOLD * 0.5, NJL_SERIES_THRESHOLD * 0.999,
                      NJL_SERIES_THRESHOLD * 1.001, NJL_SERIES_THRESHOLD * 2):
            result = collision_matrix_njl(self.dirac, 0.0, 1.0, -0.6 * theta, 0.8 * theta, 1.0)
            expected = series_expm(self.generator(0.0, 1.0, -0.6 * theta, 0.8 * theta, 1.0))
            self.assertArrayClose(result, expected, atol=1e-15)

    def test_determinant(self):
        result = collision_matrix_njl(self.dirac, 0.3, 1.5, 0.2, -0.4, 0.7)
        self.assertAlmostEqual(1.0, abs(np.linalg.det(result)), delta=1e-12)


class TestEMCollision(QLBTestCase):

    def test_decoupled(self):
        result = collision_matrix_em(self.dirac, 0.2, 0.0, [0.3, 0.1, 0.0], 0.5, 1.0)
        self.assertArrayClose(result, collision_matrix_free(self.dirac, 0.2, 1.0), atol=1e-13)

    def test_scalar_potential_phase(self):
        result = collision_matrix_em(self.dirac, 0.0, 1.5, [0, 0, 0], 0.2, 2.0)
        self.assertArrayClose(result, np.exp(-1j * 1.5 * 0.2 * 2.0) * IDENTITY, atol=1e-14)

    def test_vector_potential(self):
        e, a, dt = 0.8, 0.3, 1.0
        result = collision_matrix_em(self.dirac, 0.0, e, [0, 0, a], 0.0, dt)
        expected = math.cos(e * a * dt) * IDENTITY + 1j * math.sin(e * a * dt) * self.dirac.alpha_z
        self.assertArrayClose(result, expected, atol=1e-14)

    def test_against_series(self):
        A = np.array([0.2, 0.0, 0.0])
        result = collision_matrix_em(self.dirac, 0.1, 1.0, A, 0.05, 1.0)
        expected = series_expm(-em_generator(self.dirac, 0.1, 1.0, A, 0.05))
        self.assertArrayClose(result, expected, atol=1e-12)
        self.assertUnitary(result)

    def test_site_arrays(self):
        A = np.zeros((3, 5))
        A[0] = np.linspace(-1, 1, 5)
        V = np.linspace(0, 1, 5)
        result = collision_matrix_em(self.dirac, 0.1, 1.0, A, V, 1.0)
        self.assertEqual((5, 4, 4), result.shape)
        self.assertArrayClose(
            result[3], collision_matrix_em(self.dirac, 0.1, 1.0, A[:, 3], V[3], 1.0), atol=1e-14)

    def test_vector_potential_shape(self):
        self.assertQLBError('invalid_parameter', em_generator, self.dirac, 0.1, 1.0, [0, 0], 0.0)
