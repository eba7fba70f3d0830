"""
One quantum lattice Boltzmann time step: for every active axis rotate with
``S_a``, stream, rotate back; then collide.

.. math::

    \\psi(t_{n+1}) = C (S_z P_z S_z^{-1}) (S_y P_y S_y^{-1}) (S_x P_x S_x^{-1}) \\psi(t_n)
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    axis_name, collision_matrix_em, collision_matrix_free, collision_matrix_njl, rotation)
from .exceptions import InvalidAxis, InvalidParameter, InvariantViolation, NonFiniteDensity
from .lattice import (
    Boundary, SpinorField, apply_site_matrix, apply_site_matrix_field, check_unitary,
    matmul_into, shift_components, shift_into)
from .physics import rho_a, rho_s
from .potentials import ZeroPotential

logger = logging.getLogger(__name__)

#: Relative norm drift tolerated by :func:`evolve` before it gives up.
NORM_TOLERANCE = 1e-9


class CollisionModel:
    """
    Base class of the collision models. A model is either uniform, with one
    collision matrix for every site, or produces a matrix per site.
    """
    #: Name used in configuration files.
    name = None
    uniform = False

    def uniform_matrix(self, dirac, dt):
        raise NotImplementedError

    def site_matrices(self, field, dirac, t):
        raise NotImplementedError


@dataclass(frozen=True)
class Free(CollisionModel):
    mass: float = 0.0

    name = 'free'
    uniform = True

    def uniform_matrix(self, dirac, dt):
        return collision_matrix_free(dirac, self.mass, dt)

    def site_matrices(self, field, dirac, t):
        matrix = self.uniform_matrix(dirac, field.dt)
        return np.broadcast_to(matrix, field.grid.shape + (4, 4))


@dataclass(frozen=True)
class Electromagnetic(CollisionModel):
    """
    Coupling to an external potential, sampled at the start of each step.
    """
    mass: float = 0.0
    charge: float = 0.0
    potential: object = field(default_factory=ZeroPotential)

    name = 'em'

    def site_matrices(self, field, dirac, t):
        A, V = self.potential.sample(field.grid, t)
        return collision_matrix_em(dirac, self.mass, self.charge, A, V, field.dt)


@dataclass(frozen=True)
class NJL(CollisionModel):
    """
    Nambu-Jona-Lasinio self interaction. The densities are taken from the
    field entering the collision and held fixed over the step.
    """
    mass: float = 0.0
    coupling: float = 0.0

    name = 'njl'

    def site_matrices(self, field, dirac, t):
        scalar = rho_s(field, dirac)
        axial = rho_a(field, dirac)
        if not (np.all(np.isfinite(scalar)) and np.all(np.isfinite(axial))):
            raise NonFiniteDensity("Scalar or axial density is not finite")
        return collision_matrix_njl(dirac, self.mass, self.coupling, scalar, axial, field.dt)


@dataclass(frozen=True)
class StepPlan:
    """
    The order in which the active axes are streamed. The collision always
    follows the last axis.
    """
    axis_order: tuple

    def __post_init__(self):
        object.__setattr__(self, 'axis_order', tuple(axis_name(a) for a in self.axis_order))

    @classmethod
    def default(cls, grid):
        return cls(grid.active_axes)

    def validate(self, grid):
        if sorted(self.axis_order) != sorted(grid.active_axes):
            raise InvalidAxis(
                "A step must stream every active axis ({0}) exactly once, got {1}".format(
                    ', '.join(grid.active_axes), ', '.join(self.axis_order)),
                code='invalid_plan')
        return self


def stream_axis(field, dirac, axis, inverse=False):
    """
    ``S_a P_a S_a^{-1} psi``: rotate so ``alpha_a`` is diagonal,
    stream the light-cone components one site, rotate back.
    """
    field.grid.require_active(axis)
    S = rotation(dirac, axis)
    rotated = apply_site_matrix(field, S, check=False)
    return apply_site_matrix(shift_components(rotated, axis, inverse=inverse), S, check=False)


def collide(field, dirac, model, t_n, workers=1):
    """
    Apply the collision of ``model`` at time ``t_n``.
    """
    if model.uniform:
        return apply_site_matrix(field, model.uniform_matrix(dirac, field.dt), workers=workers)
    return apply_site_matrix_field(field, model.site_matrices(field, dirac, t_n))


def qlb_step(field, dirac, model, plan=None, t_n=0.0, workers=1):
    """
    Advance ``field`` by one time step.
    """
    plan = (plan or StepPlan.default(field.grid)).validate(field.grid)
    for axis in plan.axis_order:
        field = stream_axis(field, dirac, axis)
    return collide(field, dirac, model, t_n, workers=workers)


class Stepper:
    """
    Repeated time steps with preallocated buffers.

    Adjacent uniform matrices are fused: the entry rotation of each axis is
    combined with the exit rotation of the previous one, and a uniform
    collision with the last exit rotation. With one active axis and a uniform
    collision the field stays in the rotated frame between steps and each
    step is one shift and one product with ``S C S``.
    """

    def __init__(self, grid, dirac, model, plan=None, dt=1.0, workers=1, check=True):
        self.grid = grid
        self.dirac = dirac
        self.model = model
        self.dt = dt
        self.workers = workers
        self.check = check
        self._pool = None
        self.plan = (plan or StepPlan.default(grid)).validate(grid)

        rotations = [rotation(dirac, axis) for axis in self.plan.axis_order]
        self._entry = [rotations[0]] + [
            rotations[i] @ rotations[i - 1] for i in range(1, len(rotations))]
        self._exit = rotations[-1]
        if model.uniform:
            collision = model.uniform_matrix(dirac, dt)
            if check:
                check_unitary(collision)
            self._exit = collision @ self._exit

        self.rotated_frame = model.uniform and len(rotations) == 1
        if self.rotated_frame:
            self._frame = rotations[0]
            self._transfer = rotations[0] @ self._exit
        logger.debug("Stepper for %s on %s, rotated frame: %s",
                     model, grid, self.rotated_frame)

    def _matmul(self, out, matrix, src):
        matmul_into(out.reshape(4, -1), matrix, src.reshape(4, -1), pool=self._pool)

    def _collide_sites(self, out, src, t):
        stack = self.model.site_matrices(SpinorField(self.grid, src, self.dt), self.dirac, t)
        if self.check:
            check_unitary(stack)
        np.einsum('xyzij,jxyz->ixyz', stack, src, out=out)

    def _step(self, current, spare, t):
        for matrix, axis in zip(self._entry, self.plan.axis_order):
            self._matmul(spare, matrix, current)
            shift_into(current, spare, self.grid, axis)
        self._matmul(spare, self._exit, current)
        if self.model.uniform:
            return spare, current
        self._collide_sites(current, spare, t)
        return current, spare

    def run(self, field, n_steps, first_step=0):
        """
        Advance ``field`` by ``n_steps`` steps starting at step ``first_step``.
        Returns a new field; ``field`` is not modified.
        """
        if n_steps < 0:
            raise InvalidParameter("The number of steps must not be negative")
        if n_steps == 0:
            return field.copy()
        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                self._pool = pool
                try:
                    return self._run(field, n_steps, first_step)
                finally:
                    self._pool = None
        return self._run(field, n_steps, first_step)

    def _run(self, field, n_steps, first_step):
        current = np.empty_like(field.data)
        spare = np.empty_like(field.data)
        if self.rotated_frame:
            axis = self.plan.axis_order[0]
            self._matmul(current, self._frame, field.data)
            for _ in range(n_steps):
                shift_into(spare, current, self.grid, axis)
                self._matmul(current, self._transfer, spare)
            result = np.empty_like(field.data)
            self._matmul(result, self._frame, current)
            return field.with_data(result)

        current[...] = field.data
        for n in range(n_steps):
            current, spare = self._step(current, spare, (first_step + n) * self.dt)
        return field.with_data(current)


def observation_steps(n_steps, cadence=1, snapshot_steps=()):
    """
    The steps at which a run is observed: step 0, every ``cadence`` steps,
    each of ``snapshot_steps`` and the final step.
    """
    if cadence < 1:
        raise InvalidParameter("The snapshot cadence must be at least one")
    steps = set(range(0, n_steps + 1, cadence))
    steps.update(s for s in snapshot_steps if 0 <= s <= n_steps)
    steps.add(n_steps)
    return sorted(steps)


def evolve(field, dirac, model, plan=None, n_steps=0, observer=None, cadence=1,
           snapshot_steps=(), workers=1, first_step=0, norm_tolerance=NORM_TOLERANCE):
    """
    Apply :func:`qlb_step` ``n_steps`` times.

    ``observer(step, field)`` is called at every step returned by
    :func:`observation_steps`. On periodic grids the norm is checked at each
    observation and :exc:`~qlbdirac.exceptions.InvariantViolation` is raised
    when it has drifted by more than ``norm_tolerance`` relative to the start.
    """
    if n_steps < 0:
        raise InvalidParameter("The number of steps must not be negative")
    stepper = Stepper(field.grid, dirac, model, plan, dt=field.dt, workers=workers)
    stops = observation_steps(n_steps, cadence, snapshot_steps) if observer else [n_steps]
    conserving = field.grid.boundary is Boundary.PERIODIC
    initial = field.norm2()

    current = field
    done = 0
    for stop in stops:
        if stop > done:
            current = stepper.run(current, stop - done, first_step + done)
            done = stop
        if conserving and initial > 0:
            drift = abs(current.norm2() - initial) / initial
            logger.debug("step %d: relative norm drift %.3e", first_step + stop, drift)
            if not drift <= norm_tolerance or not math.isfinite(drift):
                raise InvariantViolation(
                    "Norm drifted by {0:.3e} (relative) by step {1}".format(
                        drift, first_step + stop), step=first_step + stop)
        if observer is not None:
            observer(first_step + stop, current)
    return current
