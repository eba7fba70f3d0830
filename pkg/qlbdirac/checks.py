"""
Invariant checks of the matrix algebra and the streaming operators.
"""
import logging
from dataclasses import dataclass

import numpy as np

from .algebra import (
    AXES, IDENTITY, UNITARY_TOL, anticommutator, build_dirac_set, collision_matrix_em,
    collision_matrix_free, collision_matrix_njl, dagger, max_abs, rotation, unitarity_residual)
from .lattice import Grid, SpinorField, shift_components

logger = logging.getLogger(__name__)

#: Tolerance of the exact algebraic identities.
ALGEBRA_TOL = 1e-14


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self):
        return bool(self.residual <= self.tolerance)

    def __str__(self):
        return '{status}  {name:<40} residual {residual:.3e}  tolerance {tolerance:.1e}'.format(
            status='PASS' if self.passed else 'FAIL', name=self.name,
            residual=self.residual, tolerance=self.tolerance)


def _algebra_checks(dirac):
    alphas = [dirac.alpha(axis) for axis in AXES]
    yield 'beta hermitian', max_abs(dirac.beta - dagger(dirac.beta))
    yield 'beta squared', max_abs(dirac.beta @ dirac.beta - IDENTITY)
    for axis, alpha in zip(AXES, alphas):
        yield 'alpha_{0} hermitian'.format(axis), max_abs(alpha - dagger(alpha))
        yield 'alpha_{0} squared'.format(axis), max_abs(alpha @ alpha - IDENTITY)
        yield '{{alpha_{0}, beta}}'.format(axis), max_abs(anticommutator(alpha, dirac.beta))
    for i, a in enumerate(AXES):
        for b in AXES[i + 1:]:
            yield '{{alpha_{0}, alpha_{1}}}'.format(a, b), max_abs(
                anticommutator(dirac.alpha(a), dirac.alpha(b)))

    yield 'gamma5 squared', max_abs(dirac.gamma5 @ dirac.gamma5 - IDENTITY)
    yield '{gamma5, gamma^mu}', max(
        max_abs(anticommutator(dirac.gamma5, gamma)) for gamma in dirac.gammas())
    yield 'sigma anti-hermitian', max_abs(dirac.sigma + dagger(dirac.sigma))
    yield 'sigma squared', max_abs(dirac.sigma @ dirac.sigma + IDENTITY)

    for axis in AXES:
        S = rotation(dirac, axis)
        yield 'S_{0} hermitian'.format(axis), max_abs(S - dagger(S))
        yield 'S_{0} squared'.format(axis), max_abs(S @ S - IDENTITY)
        yield 'S_{0} alpha_{0} S_{0} = beta'.format(axis), max_abs(
            S @ dirac.alpha(axis) @ S - dirac.beta)


def _unitarity_checks(dirac, rng, draws):
    dt = rng.uniform(0.01, 2.0, draws)
    mass = rng.uniform(0.0, 2.0, draws)
    yield 'free collision unitary', unitarity_residual(
        collision_matrix_free(dirac, mass, dt))

    coupling = rng.uniform(-3.0, 3.0, draws)
    scalar = rng.uniform(-1.0, 1.0, draws)
    axial = rng.uniform(-1.0, 1.0, draws)
    yield 'njl collision unitary', unitarity_residual(
        collision_matrix_njl(dirac, mass, coupling, scalar, axial, dt))
    # Small angles exercise the series branch.
    yield 'njl collision unitary, small angle', unitarity_residual(
        collision_matrix_njl(dirac, mass * 1e-6, coupling * 1e-6, scalar, axial, dt))

    charge = rng.uniform(-2.0, 2.0, draws)
    A = rng.uniform(-1.0, 1.0, (3, draws))
    V = rng.uniform(-1.0, 1.0, draws)
    yield 'em collision unitary', unitarity_residual(
        collision_matrix_em(dirac, mass, charge, A, V, dt))


def _lattice_checks(seed):
    grid = Grid((4, 3, 5))
    field = SpinorField.random(grid, seed)
    for axis in AXES:
        there = shift_components(field, axis)
        back = shift_components(there, axis, inverse=True)
        yield 'shift {0} inverse'.format(axis), max_abs(back.data - field.data)
        yield 'shift {0} norm'.format(axis), abs(there.norm2() - field.norm2())


def run_checks(dirac=None, seed=42, draws=1000):
    """
    Run every check and return a list of :class:`CheckResult`.
    """
    dirac = dirac if dirac is not None else build_dirac_set()
    rng = np.random.default_rng(seed)

    results = [CheckResult(name, residual, ALGEBRA_TOL)
               for name, residual in _algebra_checks(dirac)]
    results.extend(CheckResult(name, residual, UNITARY_TOL)
                   for name, residual in _unitarity_checks(dirac, rng, draws))
    results.extend(CheckResult(name, residual, ALGEBRA_TOL)
                   for name, residual in _lattice_checks(seed))

    failed = [result for result in results if not result.passed]
    logger.info("%d checks, %d failed", len(results), len(failed))
    return results
