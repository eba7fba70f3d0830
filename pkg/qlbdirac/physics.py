"""
Initial conditions, observables and analytic reference quantities.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import axis_name, rotation
from .exceptions import (
    IncommensurateWave, InvalidParameter, PacketOutsideGrid, UndefinedVelocity)
from .lattice import LEFT_MOVERS, RIGHT_MOVERS, SpinorField

logger = logging.getLogger(__name__)

#: Minimum density in a half-line for its centroid to be defined.
CENTROID_MIN_MASS = 1e-8

#: Packets must fit in the grid out to this many widths.
PACKET_WIDTHS = 5.0

#: Early-time window, in steps, for the mean velocity fit.
DEFAULT_WINDOW = (10, 50)

PARTICLE = 'particle'
ANTIPARTICLE = 'antiparticle'


@dataclass(frozen=True)
class WavepacketSpec:
    """
    Parameters of the Gaussian minimum-uncertainty packet.
    ``k`` and ``sigma`` are in lattice units and ``center`` is a site coordinate.
    """
    k: float = 0.006
    sigma: float = 48.0
    c_u: float = 1.177
    c_d: float = 0.784
    center: float = 0.0
    axis: str = 'z'

    def __post_init__(self):
        if not self.sigma > 0:
            raise InvalidParameter("The packet width must be positive")
        object.__setattr__(self, 'axis', axis_name(self.axis))

    @property
    def asymmetry(self):
        """
        ``c_u / c_d``, or ``None`` when ``c_d`` is zero.
        """
        return self.c_u / self.c_d if self.c_d != 0 else None


def packet_envelope(grid, spec):
    """
    ``exp(-(x - center)^2 / 4 sigma^2) / (2 pi sigma^2)^(1/4)``
    multiplied over the active axes.
    """
    envelope = np.ones(grid.shape)
    norm = (2.0 * math.pi * spec.sigma ** 2) ** 0.25
    for axis in grid.active_axes:
        offset = grid.mesh(axis) - spec.center
        envelope = envelope * np.exp(-offset ** 2 / (4.0 * spec.sigma ** 2)) / norm
    return envelope


def _check_packet_fits(grid, spec):
    if not grid.is_active(spec.axis):
        raise PacketOutsideGrid("The packet axis {0} is not active".format(spec.axis))
    reach = PACKET_WIDTHS * spec.sigma
    for axis in grid.active_axes:
        coordinates = grid.coordinates(axis)
        if spec.center - reach < coordinates[0] or spec.center + reach > coordinates[-1]:
            raise PacketOutsideGrid(
                "A packet of width {0} centred at {1} does not fit along {2} "
                "(sites {3:g}..{4:g})".format(
                    spec.sigma, spec.center, axis, coordinates[0], coordinates[-1]))


def init_gaussian(grid, dirac, spec, normalize=True, dt=1.0):
    """
    Build the Gaussian packet

    .. math::

        S_y (-C_u e^{ikz} + C_d e^{-ikz}, C_u e^{ikz} - C_d e^{-ikz},
             C_u e^{ikz} + C_d e^{-ikz}, C_u e^{ikz} + C_d e^{-ikz})^T G(z)

    and, unless ``normalize`` is false, rescale it to unit norm.
    """
    _check_packet_fits(grid, spec)
    z = grid.mesh(spec.axis) - spec.center
    up = spec.c_u * np.exp(1j * spec.k * z)
    down = spec.c_d * np.exp(-1j * spec.k * z)
    column = np.stack([-up + down, up - down, up + down, up + down]) * packet_envelope(grid, spec)
    data = np.einsum('ij,j...->i...', rotation(dirac, 'y'), column)

    result = SpinorField(grid, data, dt)
    if normalize:
        return result.normalized()
    logger.warning("Initial condition left unnormalised (norm2 = %.6g)", result.norm2())
    return result


def bilinear(field, matrix):
    """
    ``psi^dagger M psi`` at every site, complex.
    """
    return np.einsum('i...,ij,j...->...', np.conj(field.data), matrix, field.data)


def density(field):
    """
    ``rho = sum_i |psi_i|^2``.
    """
    return np.sum(field.data.real ** 2 + field.data.imag ** 2, axis=0)


def rho_s(field, dirac):
    """
    Scalar density ``psi^dagger beta psi``.
    """
    return bilinear(field, dirac.beta).real


def rho_a(field, dirac):
    """
    Axial density ``i psi^dagger beta gamma5 psi``.
    """
    return (1j * bilinear(field, dirac.sigma)).real


def branch_densities(field, dirac, axis):
    """
    Densities of the right-moving and left-moving branches along ``axis``:
    components 1,2 and 3,4 of ``S_a psi``.
    """
    rotated = np.einsum('ij,j...->i...', rotation(dirac, axis), field.data)
    power = rotated.real ** 2 + rotated.imag ** 2
    return power[RIGHT_MOVERS].sum(axis=0), power[LEFT_MOVERS].sum(axis=0)


def axis_profile(values, grid, axis):
    """
    Sum a per-site quantity over every axis but ``axis``.
    """
    index = grid.require_active(axis)
    others = tuple(i for i in range(3) if i != index)
    return np.sum(values, axis=others)


def centroid(profile, coordinates):
    mass = float(np.sum(profile))
    if not mass >= CENTROID_MIN_MASS:
        return math.nan
    return float(np.sum(profile * coordinates)) / mass


def centroids(profile, split=0.0, coordinates=None):
    """
    Density weighted mean coordinate of each half-line, relative to ``split``.

    Returns ``(left, right)``. A site exactly at the split contributes half its
    weight to each side. A half with less than :data:`CENTROID_MIN_MASS` has an
    undefined centroid, reported as ``nan``.
    """
    profile = np.asarray(profile, dtype=float)
    if coordinates is None:
        coordinates = np.arange(profile.size, dtype=float) - profile.size // 2
    offsets = np.asarray(coordinates, dtype=float) - split
    at_split = np.where(offsets == 0, 0.5, 0.0)
    left = profile * (np.where(offsets < 0, 1.0, 0.0) + at_split)
    right = profile * (np.where(offsets > 0, 1.0, 0.0) + at_split)
    return centroid(left, offsets), centroid(right, offsets)


@dataclass
class ObservableRecord:
    """
    Observables of one snapshot. Positions are relative to the packet centre
    and measured along the propagation axis.
    """
    step: int
    time: float
    norm2: float
    density: np.ndarray = field(repr=False)
    rho_s: np.ndarray = field(repr=False)
    rho_a: np.ndarray = field(repr=False)
    rho_right: np.ndarray = field(repr=False)
    rho_left: np.ndarray = field(repr=False)
    #: Centroids of the left and right moving branches.
    centroid_left: float
    centroid_right: float
    #: Centroids of the total density on each half-line.
    split_left: float
    split_right: float
    v_mean: float = math.nan


def observe(field, dirac, step, axis, center=0.0, reference=None):
    """
    Compute an :class:`ObservableRecord`. ``reference`` is the first record of
    the run and anchors the running mean velocity.
    """
    grid = field.grid
    coordinates = grid.coordinates(axis) - center
    rho = density(field)
    right, left = branch_densities(field, dirac, axis)
    split_left, split_right = centroids(
        axis_profile(rho, grid, axis), 0.0, coordinates)

    record = ObservableRecord(
        step=step,
        time=step * field.dt,
        norm2=field.norm2(),
        density=rho,
        rho_s=rho_s(field, dirac),
        rho_a=rho_a(field, dirac),
        rho_right=right,
        rho_left=left,
        centroid_left=centroid(axis_profile(left, grid, axis), coordinates),
        centroid_right=centroid(axis_profile(right, grid, axis), coordinates),
        split_left=split_left,
        split_right=split_right,
    )
    if reference is not None and step > reference.step:
        record.v_mean = (record.centroid_right - reference.centroid_right) / (
            step - reference.step)
    return record


def theory_group_velocity(k, m_dyn):
    """
    ``k / sqrt(k^2 + m'^2)``, as a fraction of ``c``.
    """
    if k == 0 and m_dyn == 0:
        raise UndefinedVelocity("The group velocity is undefined for k = m' = 0")
    return k / math.hypot(k, m_dyn)


def measured_mean_velocity(records, window=DEFAULT_WINDOW, attribute='centroid_right'):
    """
    Least-squares slope of ``attribute`` against the step index over the
    inclusive ``window``, in sites per step.
    """
    start, stop = window
    points = [(record.step, getattr(record, attribute)) for record in records
              if start <= record.step <= stop and math.isfinite(getattr(record, attribute))]
    if len(points) < 3 or len({step for step, _ in points}) < 2:
        raise UndefinedVelocity(
            "Need at least three snapshots in steps {0}..{1}, got {2}".format(
                start, stop, len(points)),
            code='degenerate_window')
    steps, values = np.array(points, dtype=float).T
    slope, _ = np.polyfit(steps, values, 1)
    return float(slope)


def plane_wave_energy(k, m, branch=PARTICLE):
    energy = math.hypot(k, m)
    return energy if branch == PARTICLE else -energy


def free_spinor(dirac, k, m, axis, branch=PARTICLE):
    """
    Unit eigenvector of ``k alpha_a + m beta`` with eigenvalue ``+E``
    (particle) or ``-E`` (antiparticle).
    """
    if branch not in (PARTICLE, ANTIPARTICLE):
        raise InvalidParameter("Unknown branch {0!r}".format(branch))
    sign = 1.0 if branch == PARTICLE else -1.0
    energy = math.hypot(k, m)
    if energy == 0:
        spinor = np.zeros(4, dtype=complex)
        spinor[0 if branch == PARTICLE else 2] = 1.0
        return spinor
    hamiltonian = k * dirac.alpha(axis) + m * dirac.beta
    projector = 0.5 * (np.eye(4) + sign * hamiltonian / energy)
    column = int(np.argmax(np.linalg.norm(projector, axis=0)))
    spinor = projector[:, column]
    return spinor / np.linalg.norm(spinor)


def plane_wave(grid, dirac, k, m, branch=PARTICLE, axis=None, dt=1.0):
    """
    Normalised free Dirac eigenstate ``u e^{ik x_a}`` with energy ``+-sqrt(k^2 + m^2)``.
    ``k`` must fit a whole number of wavelengths on the grid.
    """
    axis = axis_name(axis if axis is not None else grid.active_axes[0])
    sites = grid.extent[grid.require_active(axis)]
    modes = k * sites / (2.0 * math.pi)
    if abs(modes - round(modes)) > 1e-9:
        raise IncommensurateWave(
            "k = {0!r} is not a whole number of wavelengths on {1} sites".format(k, sites))

    spinor = free_spinor(dirac, k, m, axis, branch)
    phase = np.exp(1j * k * grid.mesh(axis)) / math.sqrt(grid.sites)
    data = spinor.reshape(4, 1, 1, 1) * phase
    return SpinorField(grid, data, dt)


def lattice_dispersion(k, m, dt=1.0):
    """
    Eigenphase per unit time of the one dimensional split propagator,
    ``arccos(cos(m dt) cos(k dt)) / dt``.
    """
    return math.acos(math.cos(m * dt) * math.cos(k * dt)) / dt


def lattice_group_velocity(k, m, dt=1.0):
    omega = lattice_dispersion(k, m, dt) * dt
    if omega == 0:
        raise UndefinedVelocity("The lattice group velocity is undefined at zero frequency")
    return math.sin(k * dt) * math.cos(m * dt) / math.sin(omega)
