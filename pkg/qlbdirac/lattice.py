"""
Spinor fields on regular 1, 2 or 3 dimensional lattices.

Data is stored component-major with shape ``(4, Nx, Ny, Nz)``.
Inactive axes have extent 1, so every component is one contiguous row of
``Nx * Ny * Nz`` sites and a uniform collision is a single
``(4, 4) @ (4, sites)`` product.
"""
import enum
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .algebra import AXES, UNITARY_TOL, axis_index, axis_name, unitarity_residual
from .exceptions import InvalidAxis, InvalidGrid, NonUnitaryMatrix

logger = logging.getLogger(__name__)

#: Number of sites in one block of a matrix application.
#: Blocks are fixed so the floating point work does not depend on the worker count.
BLOCK_SITES = 1 << 14

RIGHT_MOVERS = slice(0, 2)
LEFT_MOVERS = slice(2, 4)


class Boundary(enum.Enum):
    #: Streaming wraps around; each shift is an exact permutation.
    PERIODIC = 'periodic'
    #: Zero-gradient outflow. Incoming components copy the boundary site.
    #: Does not conserve the norm.
    COPY = 'copy'


@dataclass(frozen=True)
class Grid:
    """
    A regular lattice with unit spacing ``dx = c dt``.

    ``extent`` always has three entries. Axes with extent 1 are inactive.
    """
    extent: tuple
    boundary: Boundary = Boundary.PERIODIC

    def __post_init__(self):
        extent = tuple(int(n) for n in self.extent)
        if len(extent) != 3 or any(n < 1 for n in extent):
            raise InvalidGrid("A grid needs three positive extents, got {0!r}".format(
                self.extent))
        if not any(n >= 2 for n in extent):
            raise InvalidGrid("A grid needs at least one active axis of two or more sites")
        object.__setattr__(self, 'extent', extent)
        object.__setattr__(self, 'boundary', Boundary(self.boundary))

    @classmethod
    def line(cls, sites, axis='z', boundary=Boundary.PERIODIC):
        extent = [1, 1, 1]
        extent[axis_index(axis)] = sites
        return cls(tuple(extent), boundary)

    @classmethod
    def from_axes(cls, extents, axes, boundary=Boundary.PERIODIC):
        """
        Build a grid from per-axis extents, for example
        ``Grid.from_axes([64, 64], ['x', 'y'])``.
        """
        if len(extents) != len(axes) or len(set(axis_name(a) for a in axes)) != len(axes):
            raise InvalidGrid("Each active axis needs exactly one extent")
        extent = [1, 1, 1]
        for sites, axis in zip(extents, axes):
            if sites < 2:
                raise InvalidGrid("Active axis {0} needs at least two sites".format(
                    axis_name(axis)))
            extent[axis_index(axis)] = sites
        return cls(tuple(extent), boundary)

    @property
    def active_axes(self):
        return tuple(name for name, n in zip(AXES, self.extent) if n >= 2)

    @property
    def dims(self):
        return len(self.active_axes)

    @property
    def shape(self):
        return self.extent

    @property
    def sites(self):
        return int(np.prod(self.extent))

    def is_active(self, axis):
        return self.extent[axis_index(axis)] >= 2

    def require_active(self, axis):
        if not self.is_active(axis):
            raise InvalidAxis(
                "Axis {0} is not active on this grid".format(axis_name(axis)),
                code='inactive_axis')
        return axis_index(axis)

    def coordinates(self, axis):
        """
        Site coordinates along ``axis``, centred so that ``0`` is the middle site.
        """
        sites = self.extent[axis_index(axis)]
        return np.arange(sites, dtype=float) - sites // 2

    def mesh(self, axis):
        """
        Coordinates along ``axis`` broadcast to the full grid shape.
        """
        index = axis_index(axis)
        shape = [1, 1, 1]
        shape[index] = self.extent[index]
        return np.broadcast_to(self.coordinates(axis).reshape(shape), self.shape)


@dataclass(eq=False)
class SpinorField:
    """
    A four component complex field sampled on a grid.

    .. autoattribute:: data
        :annotation:
    """
    grid: Grid
    #: Complex amplitudes, shape ``(4,) + grid.shape``.
    data: np.ndarray = field(repr=False)
    dt: float = 1.0

    def __post_init__(self):
        self.data = np.ascontiguousarray(self.data, dtype=complex)
        expected = (4,) + self.grid.shape
        if self.data.shape != expected:
            raise InvalidGrid("Field data has shape {0}, expected {1}".format(
                self.data.shape, expected))

    @classmethod
    def zeros(cls, grid, dt=1.0):
        return cls(grid, np.zeros((4,) + grid.shape, dtype=complex), dt)

    @classmethod
    def random(cls, grid, seed, dt=1.0):
        """
        A normalised field with independent Gaussian amplitudes.
        """
        rng = np.random.default_rng(seed)
        shape = (4,) + grid.shape
        data = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        return cls(grid, data, dt).normalized()

    def norm2(self):
        """
        ``sum |psi_i|^2 dx^dims`` with ``dx = 1``.
        The reduction order is fixed by the array layout.
        """
        return float(np.sum(self.data.real ** 2 + self.data.imag ** 2))

    def normalized(self):
        return self.with_data(self.data / np.sqrt(self.norm2()))

    def with_data(self, data):
        return replace(self, data=data)

    def copy(self):
        return self.with_data(self.data.copy())

    def flat(self):
        """
        The data as ``(4, sites)``. A view when the data is contiguous.
        """
        return self.data.reshape(4, -1)


def _index(axis_dim, selector, components):
    index = [slice(None)] * 4
    index[0] = components
    index[axis_dim] = selector
    return tuple(index)


def _stream_into(out, src, axis_dim, components, direction, boundary):
    """
    Move ``components`` of ``src`` by ``direction`` (+1 or -1) sites along
    ``axis_dim`` and write the result into ``out``.
    """
    if direction > 0:
        out[_index(axis_dim, slice(1, None), components)] = \
            src[_index(axis_dim, slice(None, -1), components)]
        source = -1 if boundary is Boundary.PERIODIC else 0
        out[_index(axis_dim, 0, components)] = src[_index(axis_dim, source, components)]
    else:
        out[_index(axis_dim, slice(None, -1), components)] = \
            src[_index(axis_dim, slice(1, None), components)]
        source = 0 if boundary is Boundary.PERIODIC else -1
        out[_index(axis_dim, -1, components)] = src[_index(axis_dim, source, components)]


def shift_into(out, src, grid, axis, inverse=False):
    """
    Buffer form of :func:`shift_components`. ``out`` must not alias ``src``.
    """
    axis_dim = grid.require_active(axis) + 1
    direction = -1 if inverse else 1
    _stream_into(out, src, axis_dim, RIGHT_MOVERS, direction, grid.boundary)
    _stream_into(out, src, axis_dim, LEFT_MOVERS, -direction, grid.boundary)
    return out


def shift_components(field, axis, inverse=False):
    """
    Stream the field one site along ``axis``.

    Components 1 and 2 take their value from ``x_a - 1`` (right-movers);
    components 3 and 4 from ``x_a + 1`` (left-movers).
    ``inverse=True`` applies the opposite pattern.
    On a periodic grid this is an exact permutation of amplitudes.
    """
    out = np.empty_like(field.data)
    shift_into(out, field.data, field.grid, axis, inverse=inverse)
    return field.with_data(out)


def check_unitary(matrix, tol=UNITARY_TOL):
    residual = unitarity_residual(matrix)
    if not residual <= tol:
        raise NonUnitaryMatrix(
            "Collision matrix is not unitary (residual {0:.3e} > {1:.1e})".format(
                residual, tol), residual=residual)
    return residual


def _blocks(sites):
    return [(start, min(start + BLOCK_SITES, sites)) for start in range(0, sites, BLOCK_SITES)]


def matmul_into(out, matrix, src, workers=1, pool=None):
    """
    ``out = matrix @ src`` for ``(4, sites)`` arrays, block by block.

    The blocks are the same for any ``workers``, so the result is bitwise
    independent of the number of threads. Blocks run on ``pool`` when one
    is given, otherwise on a pool of ``workers`` threads made for this call.
    """
    blocks = _blocks(src.shape[1])

    def run(block):
        start, stop = block
        out[:, start:stop] = matrix @ src[:, start:stop]

    if pool is not None and len(blocks) > 1:
        list(pool.map(run, blocks))
    elif workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as own:
            list(own.map(run, blocks))
    else:
        for block in blocks:
            run(block)
    return out


def apply_site_matrix(field, matrix, workers=1, check=True):
    """
    ``psi(x) <- U psi(x)`` with the same unitary ``U`` at every site.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if check:
        check_unitary(matrix)
    out = np.empty_like(field.data)
    matmul_into(out.reshape(4, -1), matrix, field.flat(), workers=workers)
    return field.with_data(out)


def site_matrices(grid, matrices):
    """
    Normalise a per-site matrix description to an array of shape
    ``grid.shape + (4, 4)``. ``matrices`` is either such an array or a
    callable taking a site index tuple and returning a 4x4 matrix.
    """
    if callable(matrices):
        stack = np.empty(grid.shape + (4, 4), dtype=complex)
        for site in np.ndindex(*grid.shape):
            stack[site] = matrices(site)
        return stack
    stack = np.asarray(matrices, dtype=complex)
    if stack.shape != grid.shape + (4, 4):
        raise InvalidGrid("Site matrices have shape {0}, expected {1}".format(
            stack.shape, grid.shape + (4, 4)))
    return stack


def apply_site_matrix_field(field, matrices, check=True):
    """
    ``psi(x) <- U(x) psi(x)`` with a space dependent unitary.
    """
    stack = site_matrices(field.grid, matrices)
    if check:
        check_unitary(stack)
    out = np.einsum('xyzij,jxyz->ixyz', stack, field.data)
    return field.with_data(out)
