"""
Memory layout comparison for the one dimensional free step.

Fields are stored component major, ``(4, sites)``, so every component is a
contiguous row and a site-uniform matrix is a single ``(4, 4) @ (4, sites)``
product. The alternative is site major, ``(sites, 4)``, with the four
components of a site next to each other. :func:`compare_layouts` times the
same rotated-frame step (one shift, one product with ``S C S``) in both.
"""
import logging
import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from .algebra import build_dirac_set, collision_matrix_free, rotation
from .exceptions import InvalidParameter
from .lattice import LEFT_MOVERS, RIGHT_MOVERS

logger = logging.getLogger(__name__)


def mlups(updates, seconds):
    """
    Million lattice site updates per second.
    """
    return updates / seconds / 1e6 if seconds > 0 else math.inf


def component_major_step(out, psi, transfer):
    """
    One step on ``(4, sites)`` data. Returns the buffer holding the result.
    """
    out[RIGHT_MOVERS] = np.roll(psi[RIGHT_MOVERS], 1, axis=1)
    out[LEFT_MOVERS] = np.roll(psi[LEFT_MOVERS], -1, axis=1)
    np.matmul(transfer, out, out=psi)
    return psi


def site_major_step(out, psi, transfer):
    """
    One step on ``(sites, 4)`` data. Returns the buffer holding the result.
    """
    out[:, RIGHT_MOVERS] = np.roll(psi[:, RIGHT_MOVERS], 1, axis=0)
    out[:, LEFT_MOVERS] = np.roll(psi[:, LEFT_MOVERS], -1, axis=0)
    np.matmul(out, transfer.T, out=psi)
    return psi


def transfer_matrix(dirac, mass, dt=1.0, axis='z'):
    """
    ``S C S``: exit rotation, free collision and the next entry rotation.
    """
    frame = rotation(dirac, axis)
    return frame @ collision_matrix_free(dirac, mass, dt) @ frame


def _time(step, psi, transfer, steps, repeats):
    best = math.inf
    for _ in range(repeats):
        work = psi.copy()
        out = np.empty_like(psi)
        start = time.perf_counter()
        for _ in range(steps):
            step(out, work, transfer)
        best = min(best, time.perf_counter() - start)
    return best


@dataclass(frozen=True)
class LayoutReport:
    sites: int
    steps: int
    seconds_component: float
    mlups_component: float
    seconds_site: float
    mlups_site: float

    @property
    def speedup(self):
        return self.seconds_site / self.seconds_component if self.seconds_component else math.inf

    def lines(self):
        yield 'sites          {0}'.format(self.sites)
        yield 'steps          {0}'.format(self.steps)
        yield '(4, sites)     {0:.6f} s  {1:.2f} MLUPS'.format(
            self.seconds_component, self.mlups_component)
        yield '(sites, 4)     {0:.6f} s  {1:.2f} MLUPS'.format(
            self.seconds_site, self.mlups_site)
        yield 'speedup        {0:.2f}'.format(self.speedup)


def compare_layouts(sites, steps, mass=0.0, repeats=3, seed=42, dirac=None, out=None):
    """
    Time ``steps`` free steps on ``sites`` sites in both layouts, keeping
    the best of ``repeats`` runs of each.
    """
    if sites < 2 or steps < 1 or repeats < 1:
        raise InvalidParameter("Need at least two sites, one step and one repeat")
    dirac = dirac or build_dirac_set()
    transfer = transfer_matrix(dirac, mass)
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal((4, sites)) + 1j * rng.standard_normal((4, sites))

    seconds_component = _time(component_major_step, psi, transfer, steps, repeats)
    seconds_site = _time(site_major_step, np.ascontiguousarray(psi.T), transfer, steps, repeats)

    updates = sites * steps
    report = LayoutReport(
        sites=sites, steps=steps,
        seconds_component=seconds_component,
        mlups_component=mlups(updates, seconds_component),
        seconds_site=seconds_site,
        mlups_site=mlups(updates, seconds_site))
    for line in report.lines():
        print(line, file=out or sys.stdout)
    logger.info("Layout: component major %.2f MLUPS, site major %.2f MLUPS",
                report.mlups_component, report.mlups_site)
    return report
