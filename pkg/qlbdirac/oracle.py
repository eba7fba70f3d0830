"""
Brute-force references for small lattices.

Everything here is built from explicit dense matrices: the series
exponential, permutation matrices for streaming, and block-diagonal
rotations and collisions. Only the matrices of the :class:`DiracSet` are
shared with the fast code paths.

Dense vectors are ordered site-major: entry ``4 * site + component``,
with sites numbered in C order over ``(Nx, Ny, Nz)``.
"""
import functools
import logging
import math

import numpy as np

from .exceptions import InvalidParameter, OracleTooLarge
from .lattice import SpinorField
from .physics import ANTIPARTICLE, PARTICLE

logger = logging.getLogger(__name__)

#: Largest lattice the dense oracle will build.
MAX_SITES = 32

#: Series terms are added until their norm drops below this.
SERIES_TOL = 1e-18

_AXES = 'xyz'


def _norm(matrix):
    return float(np.max(np.sum(np.abs(matrix), axis=1)))


def series_expm(matrix, max_terms=200):
    """
    Matrix exponential by scaling, a truncated Taylor series and squaring.

    ``matrix`` is scaled by ``2**-s`` so its infinity norm is at most ``0.5``.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if not np.all(np.isfinite(matrix)):
        raise InvalidParameter("Cannot exponentiate a matrix with non-finite entries")
    norm = _norm(matrix)
    squarings = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0.5 else 0
    scaled = matrix / 2.0 ** squarings

    identity = np.eye(matrix.shape[0], dtype=complex)
    result = identity.copy()
    term = identity
    for n in range(1, max_terms):
        term = term @ scaled / n
        result = result + term
        if _norm(term) < SERIES_TOL:
            break
    for _ in range(squarings):
        result = result @ result
    return result


def _check_size(grid):
    if grid.sites > MAX_SITES:
        raise OracleTooLarge(
            "The dense oracle is limited to {0} sites, got {1}".format(MAX_SITES, grid.sites))


def to_vector(field):
    return field.data.reshape(4, -1).T.reshape(-1).copy()


def from_vector(grid, vector, dt=1.0):
    data = np.asarray(vector, dtype=complex).reshape(-1, 4).T.reshape((4,) + grid.shape)
    return SpinorField(grid, data, dt)


def apply(operator, field):
    """
    Apply a dense operator to a field.
    """
    return from_vector(field.grid, operator @ to_vector(field), field.dt)


def block_diagonal(grid, blocks):
    """
    A dense operator with ``blocks[site]`` acting on each site.
    ``blocks`` is one 4x4 matrix or one per site, in site order.
    """
    _check_size(grid)
    blocks = np.asarray(blocks, dtype=complex)
    if blocks.ndim == 2:
        return np.kron(np.eye(grid.sites), blocks)
    blocks = blocks.reshape(grid.sites, 4, 4)
    operator = np.zeros((4 * grid.sites, 4 * grid.sites), dtype=complex)
    for site in range(grid.sites):
        operator[4 * site:4 * site + 4, 4 * site:4 * site + 4] = blocks[site]
    return operator


def dense_rotation(grid, dirac, axis, inverse=False):
    matrix = dirac.rot[axis]
    if inverse:
        matrix = np.linalg.inv(matrix)
    return block_diagonal(grid, matrix)


def dense_translation(grid, axis):
    """
    The permutation moving components 1,2 one site up ``axis`` and
    components 3,4 one site down. Periodic grids wrap, copy boundaries
    repeat the edge value.
    """
    _check_size(grid)
    dim = _AXES.index(axis)
    sites = grid.extent[dim]
    periodic = grid.boundary.value == 'periodic'
    flat = list(np.ndindex(*grid.extent))
    number = {site: n for n, site in enumerate(flat)}

    operator = np.zeros((4 * grid.sites, 4 * grid.sites), dtype=complex)
    for n, site in enumerate(flat):
        for component in range(4):
            offset = -1 if component < 2 else 1
            source = list(site)
            position = site[dim] + offset
            if periodic:
                position %= sites
            else:
                position = min(max(position, 0), sites - 1)
            source[dim] = position
            operator[4 * n + component, 4 * number[tuple(source)] + component] = 1.0
    return operator


def _site_densities(dirac, spinor):
    conj = np.conj(spinor)
    scalar = float(np.real(conj @ dirac.beta @ spinor))
    axial = float(np.real(1j * (conj @ dirac.sigma @ spinor)))
    return scalar, axial


def _collision_blocks(grid, dirac, model, t_n, dt, reference):
    identity = np.eye(4, dtype=complex)
    if model.name == 'free':
        return [series_expm(-1j * model.mass * dt * dirac.beta)] * grid.sites
    if model.name == 'em':
        A, V = model.potential.sample(grid, t_n)
        A = np.asarray(A).reshape(3, -1)
        V = np.asarray(V).reshape(-1)
        blocks = []
        for site in range(grid.sites):
            generator = (1j * model.mass * dirac.beta + 1j * model.charge * V[site] * identity
                         - 1j * model.charge * sum(
                             A[i, site] * dirac.alpha(_AXES[i]) for i in range(3)))
            blocks.append(series_expm(-dt * generator))
        return blocks
    if model.name == 'njl':
        if reference is None:
            raise InvalidParameter("The NJL oracle needs a reference field for the densities")
        spinors = reference.data.reshape(4, -1).T
        blocks = []
        for spinor in spinors:
            scalar, axial = _site_densities(dirac, spinor)
            generator = (-1j * (model.mass - model.coupling * scalar) * dirac.beta
                         - model.coupling * axial * dirac.sigma)
            blocks.append(series_expm(dt * generator))
        return blocks
    raise InvalidParameter("No dense collision for model {0!r}".format(model))


def dense_collision(grid, dirac, model, t_n=0.0, dt=1.0, reference=None):
    """
    The collision factor. NJL densities are read from ``reference``,
    normally the field after streaming.
    """
    _check_size(grid)
    return block_diagonal(grid, _collision_blocks(grid, dirac, model, t_n, dt, reference))


def _axis_order(grid, axis_order):
    active = [axis for axis, n in zip(_AXES, grid.extent) if n >= 2]
    return list(axis_order) if axis_order is not None else active


def _streaming_factors(grid, dirac, axis_order):
    factors = []
    for axis in _axis_order(grid, axis_order):
        factors.append(dense_rotation(grid, dirac, axis, inverse=True))
        factors.append(dense_translation(grid, axis))
        factors.append(dense_rotation(grid, dirac, axis))
    return factors


def dense_factors(grid, dirac, model, t_n=0.0, dt=1.0, reference=None, axis_order=None):
    """
    The factors of one step in the order they act: for each axis the inverse
    rotation, the translation and the rotation, then the collision.
    """
    factors = _streaming_factors(grid, dirac, axis_order)
    factors.append(dense_collision(grid, dirac, model, t_n, dt, reference))
    return factors


def compose(factors):
    """
    The product of ``factors`` applied first to last.
    """
    return functools.reduce(lambda acc, factor: factor @ acc, factors)


def dense_streaming(grid, dirac, axis_order=None):
    _check_size(grid)
    return compose(_streaming_factors(grid, dirac, axis_order))


def dense_split_step(grid, dirac, model, t_n=0.0, dt=1.0, reference=None, axis_order=None):
    """
    One full step as a ``4 * sites`` square matrix.
    """
    _check_size(grid)
    operator = compose(dense_factors(grid, dirac, model, t_n, dt, reference, axis_order))
    logger.debug("Dense step on %d sites for %s", grid.sites, model)
    return operator


def analytic_free_evolution(k, m, T, branch=PARTICLE):
    """
    Continuum phase ``exp(-i E T)`` of a free plane wave,
    with ``E = +-sqrt(k^2 + m^2)``.
    """
    if branch not in (PARTICLE, ANTIPARTICLE):
        raise InvalidParameter("Unknown branch {0!r}".format(branch))
    energy = math.hypot(k, m)
    if branch == ANTIPARTICLE:
        energy = -energy
    return complex(np.exp(-1j * energy * T))
