"""
Phase error of a free plane wave under joint refinement of the lattice
spacing and the time step.

The physical box, wavenumber, mass and final time are held fixed. Level
``l`` uses ``h = 2**-l``, ``sites = base_sites * 2**l`` and ``T / h`` steps.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from .algebra import build_dirac_set
from .exceptions import InvalidParameter
from .lattice import Grid
from .oracle import analytic_free_evolution
from .physics import PARTICLE, plane_wave
from .scheme import Free, Stepper

logger = logging.getLogger(__name__)

#: Below this every level is considered exact and no order is fitted.
EXACT_THRESHOLD = 1e-10

MIN_LEVELS = 3


@dataclass(frozen=True)
class ConvergenceLevel:
    level: int
    dt: float
    sites: int
    steps: int
    phase_error: float


@dataclass(frozen=True)
class ConvergenceResult:
    levels: tuple
    #: Fitted slope of ``log(error)`` against ``log(dt)``, ``None`` when exact.
    order: float = None

    @property
    def exact(self):
        return self.order is None

    def ratios(self):
        """
        Error ratio between each pair of successive levels.
        """
        errors = [level.phase_error for level in self.levels]
        return [coarse / fine for coarse, fine in zip(errors, errors[1:])]


def phase_error(initial, final, reference):
    """
    Phase of ``<initial|final>`` relative to the ``reference`` phase factor.
    """
    overlap = np.vdot(initial.data, final.data)
    return abs(float(np.angle(overlap * np.conj(reference))))


def fit_order(dts, errors):
    slope, _ = np.polyfit(np.log(dts), np.log(errors), 1)
    return float(slope)


def run_convergence(base_sites, modes, mass, time, levels=4, branch=PARTICLE,
                    axis='z', dirac=None, workers=1):
    """
    Run the plane wave with ``modes`` wavelengths in the box at every level
    and return a :class:`ConvergenceResult`.
    """
    if levels < MIN_LEVELS:
        raise InvalidParameter(
            "A convergence study needs at least {0} levels".format(MIN_LEVELS))
    if not time > 0:
        raise InvalidParameter("The convergence time must be positive")
    dirac = dirac or build_dirac_set()
    k = 2.0 * math.pi * modes / base_sites
    reference = analytic_free_evolution(k, mass, time, branch)

    results = []
    for level in range(levels):
        h = 2.0 ** -level
        sites = base_sites * 2 ** level
        steps = int(round(time / h))
        grid = Grid.line(sites, axis)
        initial = plane_wave(grid, dirac, k * h, mass * h, branch, axis=axis, dt=h)
        stepper = Stepper(grid, dirac, Free(mass), dt=h, workers=workers)
        final = stepper.run(initial, steps)
        error = phase_error(initial, final, reference)
        logger.info("level %d: dt = %g, %d sites, %d steps, phase error %.6e",
                    level, h, sites, steps, error)
        results.append(ConvergenceLevel(level, h, sites, steps, error))

    errors = [result.phase_error for result in results]
    if all(error < EXACT_THRESHOLD for error in errors):
        return ConvergenceResult(tuple(results))
    order = fit_order([result.dt for result in results], errors)
    logger.info("fitted order %.4f", order)
    return ConvergenceResult(tuple(results), order)
