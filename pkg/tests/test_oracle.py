import math

import numpy as np

from qlbdirac.algebra import collision_matrix_free
from qlbdirac.lattice import Boundary, Grid, SpinorField
from qlbdirac.oracle import (
    MAX_SITES, analytic_free_evolution, apply, block_diagonal, compose, dense_collision,
    dense_factors, dense_split_step, dense_streaming, dense_translation, from_vector, series_expm,
    to_vector)
from qlbdirac.physics import ANTIPARTICLE
from qlbdirac.potentials import PlaneWaveVectorPotential
from qlbdirac.scheme import NJL, Electromagnetic, Free, StepPlan, qlb_step, stream_axis

from .utils import QLBTestCase


class TestSeriesExpm(QLBTestCase):

    def test_zero(self):
        self.assertArrayClose(series_expm(np.zeros((3, 3))), np.eye(3), atol=0)

    def test_diagonal(self):
        values = np.array([0.5, -2.0, 3j, 7.0])
        self.assertArrayClose(
            series_expm(np.diag(values)), np.diag(np.exp(values)), atol=1e-11)

    def test_free_collision(self):
        for m in (0.0, 0.1, 0.3, 2.5):
            self.assertArrayClose(
                series_expm(-1j * m * self.dirac.beta),
                collision_matrix_free(self.dirac, m, 1.0), atol=1e-14)

    def test_large_antihermitian(self):
        rng = np.random.default_rng(5)
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        generator = 10.0 * (a - a.conj().T)
        self.assertUnitary(series_expm(generator), atol=1e-11)

    def test_non_finite(self):
        matrix = np.eye(2)
        matrix[0, 1] = np.nan
        self.assertQLBError('invalid_parameter', series_expm, matrix)


class TestVectors(QLBTestCase):

    def test_site_major_order(self):
        grid = Grid((2, 1, 3))
        data = np.zeros((4,) + grid.shape, dtype=complex)
        data[2, 1, 0, 1] = 1.0
        vector = to_vector(SpinorField(grid, data))
        # site (1, 0, 1) is number 4 in C order
        self.assertEqual([4 * 4 + 2], list(np.flatnonzero(vector)))
        self.assertArrayClose(from_vector(grid, vector).data, data, atol=0)

    def test_block_diagonal(self):
        grid = Grid.line(3)
        blocks = [k * np.eye(4) for k in (1, 2, 3)]
        self.assertArrayClose(
            np.diag(block_diagonal(grid, blocks)), np.repeat([1, 2, 3], 4), atol=0)
        self.assertArrayClose(block_diagonal(grid, self.dirac.beta),
                              np.kron(np.eye(3), self.dirac.beta), atol=0)

    def test_compose_order(self):
        a = np.array([[0, 1], [1, 0]])
        b = np.diag([1, 2])
        self.assertArrayClose(compose([a, b]), b @ a, atol=0)


class TestDenseStreaming(QLBTestCase):

    def test_translation_is_permutation(self):
        operator = dense_translation(Grid((2, 1, 3)), 'z')
        self.assertArrayClose(np.sum(operator, axis=0), np.ones(24), atol=0)
        self.assertArrayClose(np.sum(operator, axis=1), np.ones(24), atol=0)

    def test_copy_boundary_not_unitary(self):
        operator = dense_translation(Grid.line(4, boundary=Boundary.COPY), 'z')
        self.assertArrayClose(np.sum(operator, axis=1), np.ones(16), atol=0)
        self.assertNotAlmostEqual(0.0, float(np.max(np.abs(
            operator.conj().T @ operator - np.eye(16)))))

    def test_massless_cycle(self):
        step = dense_split_step(Grid.line(4), self.dirac, Free(0.0))
        self.assertArrayClose(np.linalg.matrix_power(step, 4), np.eye(16), atol=1e-13)

    def test_matches_stream_axis(self):
        grid = Grid((2, 4, 1))
        field = SpinorField.random(grid, seed=8)
        expected = stream_axis(stream_axis(field, self.dirac, 'x'), self.dirac, 'y')
        actual = apply(dense_streaming(grid, self.dirac), field)
        self.assertArrayClose(actual.data, expected.data, atol=1e-14)

    def test_axis_order_matters(self):
        grid = Grid((4, 4, 1))
        xy = dense_streaming(grid, self.dirac, ['x', 'y'])
        yx = dense_streaming(grid, self.dirac, ['y', 'x'])
        self.assertGreater(float(np.max(np.abs(xy - yx))), 1e-3)

    def test_too_large(self):
        grid = Grid.line(MAX_SITES + 1)
        self.assertQLBError('oracle_too_large', dense_streaming, grid, self.dirac)
        self.assertQLBError('oracle_too_large', dense_translation, grid, 'z')
        dense_streaming(Grid.line(MAX_SITES), self.dirac)


class TestDenseSplitStep(QLBTestCase):

    def test_unitary(self):
        step = dense_split_step(Grid.line(8), self.dirac, Free(0.3))
        self.assertUnitary(step, atol=1e-13)

    def test_factors(self):
        grid = Grid((2, 2, 2))
        factors = dense_factors(grid, self.dirac, Free(0.1))
        self.assertEqual(10, len(factors))
        self.assertArrayClose(
            compose(factors), dense_split_step(grid, self.dirac, Free(0.1)), atol=0)

    def test_random_fields_free(self):
        grid = Grid((2, 2, 2))
        model = Free(0.3)
        step = dense_split_step(grid, self.dirac, model)
        for seed in range(100):
            field = SpinorField.random(grid, seed=seed)
            self.assertArrayClose(
                qlb_step(field, self.dirac, model).data, apply(step, field).data,
                atol=1e-12, msg="seed {0}".format(seed))

    def test_reversed_plan(self):
        grid = Grid((4, 2, 1))
        model = Free(0.2)
        step = dense_split_step(grid, self.dirac, model, axis_order=['y', 'x'])
        field = SpinorField.random(grid, seed=4)
        stepped = qlb_step(field, self.dirac, model, plan=StepPlan(['y', 'x']))
        self.assertArrayClose(stepped.data, apply(step, field).data, atol=1e-12)

    def test_electromagnetic(self):
        grid = Grid((4, 1, 4))
        potential = PlaneWaveVectorPotential(0.3, 2 * math.pi / 4, 0.2)
        model = Electromagnetic(mass=0.1, charge=1.0, potential=potential)
        field = SpinorField.random(grid, seed=12)
        for t_n in (0.0, 3.0):
            step = dense_split_step(grid, self.dirac, model, t_n=t_n)
            stepped = qlb_step(field, self.dirac, model, t_n=t_n)
            self.assertArrayClose(stepped.data, apply(step, field).data, atol=1e-12)

    def test_njl(self):
        grid = Grid.line(8)
        model = NJL(mass=0.1, coupling=2.0)
        field = SpinorField.random(grid, seed=21)
        streamed = apply(dense_streaming(grid, self.dirac), field)
        step = dense_split_step(grid, self.dirac, model, reference=streamed)
        stepped = qlb_step(field, self.dirac, model)
        self.assertArrayClose(stepped.data, apply(step, field).data, atol=1e-12)

    def test_njl_needs_reference(self):
        self.assertQLBError(
            'invalid_parameter', dense_collision, Grid.line(4), self.dirac, NJL(0.1, 1.0))


class TestAnalyticFreeEvolution(QLBTestCase):

    def test_phase(self):
        self.assertEqual(1.0, analytic_free_evolution(0.0, 0.0, 10.0))
        self.assertAlmostEqual(
            0.0, abs(analytic_free_evolution(3.0, 4.0, 1.0) - np.exp(-5j)), delta=1e-15)
        self.assertAlmostEqual(
            0.0, abs(analytic_free_evolution(3.0, 4.0, 1.0, ANTIPARTICLE) - np.exp(5j)),
            delta=1e-15)

    def test_unknown_branch(self):
        self.assertQLBError('invalid_parameter', analytic_free_evolution, 1.0, 1.0, 1.0, 'up')
