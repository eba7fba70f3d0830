"""
Electromagnetic potentials for the electromagnetic collision model.

A potential is sampled once per time step. ``sample(grid, t)`` returns
``(A, V)`` where ``A`` has shape ``(3,) + grid.shape`` and ``V`` has shape
``grid.shape``.

Potentials that can be chosen in a configuration file are listed in
:data:`CONFIG_POTENTIALS` under their :attr:`~Potential.name` and built with
:meth:`~Potential.from_config`.
"""
import csv
import logging
import math

import numpy as np

from .algebra import AXES, axis_index, axis_name
from .exceptions import InvalidParameter

logger = logging.getLogger(__name__)


class Potential:
    """
    Base class for all potentials. Subclasses implement :meth:`sample`.
    """

    #: Value of the ``potential`` configuration key that selects this class.
    name = None

    def sample(self, grid, t):
        raise NotImplementedError

    @classmethod
    def from_config(cls, config, grid):
        """
        Build the potential from the ``potential_*`` keys of a run
        configuration.
        """
        raise NotImplementedError

    def _zeros(self, grid):
        return np.zeros((3,) + grid.shape), np.zeros(grid.shape)


class ZeroPotential(Potential):
    name = 'none'

    def sample(self, grid, t):
        return self._zeros(grid)

    @classmethod
    def from_config(cls, config, grid):
        return cls()


class UniformScalarPotential(Potential):
    """
    ``V = v`` everywhere, ``A = 0``. Only adds a global phase.
    """
    name = 'uniform_v'

    def __init__(self, v):
        self.v = float(v)

    def sample(self, grid, t):
        A, V = self._zeros(grid)
        V[...] = self.v
        return A, V

    @classmethod
    def from_config(cls, config, grid):
        return cls(config.potential_v)


class ConstantVectorPotential(Potential):
    name = 'constant_a'

    def __init__(self, a):
        self.a = np.asarray(a, dtype=float)
        if self.a.shape != (3,):
            raise InvalidParameter("A constant vector potential needs three components")

    def sample(self, grid, t):
        A, V = self._zeros(grid)
        A[...] = self.a.reshape((3, 1, 1, 1))
        return A, V

    @classmethod
    def from_config(cls, config, grid):
        return cls(config.potential_a)


class PlaneWaveVectorPotential(Potential):
    """
    A linearly polarised wave,
    ``A_pol = amplitude * cos(wavenumber * x_prop - omega * t)``.
    """
    name = 'plane_wave_a'

    def __init__(self, amplitude, wavenumber, omega, polarization='x', propagation='z'):
        self.amplitude = float(amplitude)
        self.wavenumber = float(wavenumber)
        self.omega = float(omega)
        self.polarization = axis_name(polarization)
        self.propagation = axis_name(propagation)

    def sample(self, grid, t):
        A, V = self._zeros(grid)
        phase = self.wavenumber * grid.mesh(self.propagation) - self.omega * t
        A[axis_index(self.polarization)] = self.amplitude * np.cos(phase)
        return A, V

    @classmethod
    def from_config(cls, config, grid):
        return cls(config.potential_amplitude, config.potential_wavenumber,
                   config.potential_omega, polarization=config.potential_polarization,
                   propagation=config.packet_axis)


class FunctionPotential(Potential):
    """
    Wraps a callable ``func(grid, t) -> (A, V)``. A three element ``A`` is
    taken as uniform in space.
    """

    def __init__(self, func):
        self.func = func

    def sample(self, grid, t):
        A, V = self.func(grid, t)
        A = np.asarray(A, dtype=float)
        if A.shape == (3,):
            A = A.reshape((3, 1, 1, 1))
        A = np.broadcast_to(A, (3,) + grid.shape)
        V = np.broadcast_to(np.asarray(V, dtype=float), grid.shape)
        return A, V


def _number(row, column, path, line):
    try:
        value = float(row[column])
    except (TypeError, ValueError):
        value = math.nan
    if not math.isfinite(value):
        raise InvalidParameter(
            "Potential file {0} has an invalid {1} value {2!r}".format(
                path, column, row[column]),
            code='not_a_number', path=path, line=line)
    return value


class SampledPotential(Potential):
    """
    A static potential read from a delimiter-separated file.

    The file has a header naming one coordinate column per active axis
    followed by ``v, a_x, a_y, a_z``, one row per site.
    Sites missing from the file have zero potential.

    Problems with the file raise :exc:`~qlbdirac.exceptions.InvalidParameter`
    with code ``missing_columns``, ``not_a_number`` or ``outside_grid`` and
    the ``path`` and one-based ``line`` of the offending row.
    """
    name = 'file'

    value_columns = ('v', 'a_x', 'a_y', 'a_z')

    def __init__(self, A, V, path=None):
        self.A = np.asarray(A, dtype=float)
        self.V = np.asarray(V, dtype=float)
        self.path = path

    @classmethod
    def from_config(cls, config, grid):
        return cls.from_csv(config.potential_file, grid)

    @classmethod
    def from_csv(cls, path, grid):
        A = np.zeros((3,) + grid.shape)
        V = np.zeros(grid.shape)
        offsets = [n // 2 for n in grid.extent]
        with open(path, newline='') as f:
            reader = csv.DictReader(f)
            missing = [c for c in grid.active_axes + cls.value_columns
                       if c not in (reader.fieldnames or [])]
            if missing:
                raise InvalidParameter(
                    "Potential file {0} is missing columns: {1}".format(
                        path, ', '.join(missing)),
                    code='missing_columns', path=path, line=1)
            for row in reader:
                line = reader.line_num
                site = [0, 0, 0]
                for axis in grid.active_axes:
                    index = axis_index(axis)
                    site[index] = int(round(_number(row, axis, path, line))) + offsets[index]
                    if not 0 <= site[index] < grid.extent[index]:
                        raise InvalidParameter(
                            "Potential file {0} has a site outside the grid".format(path),
                            code='outside_grid', path=path, line=line)
                site = tuple(site)
                V[site] = _number(row, 'v', path, line)
                for index, axis in enumerate(AXES):
                    A[(index,) + site] = _number(row, 'a_' + axis, path, line)
        logger.info("Loaded potential from %s", path)
        return cls(A, V, path=path)

    def sample(self, grid, t):
        if self.V.shape != grid.shape:
            raise InvalidParameter("Sampled potential does not match the grid")
        return self.A, self.V


#: Potentials selectable with the ``potential`` configuration key.
CONFIG_POTENTIALS = {cls.name: cls for cls in (
    ZeroPotential, UniformScalarPotential, ConstantVectorPotential, PlaneWaveVectorPotential,
    SampledPotential)}
