"""
The Dirac matrix set in the Dirac-Pauli representation,
the streaming rotations that diagonalise each ``alpha`` matrix,
and the 4x4 unitary exponentials used as collision matrices.

All constructors accept scalars or arrays of per-site parameters.
Array arguments produce stacks of matrices with shape ``(..., 4, 4)``.
"""
import logging
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from .exceptions import InvalidAxis, InvalidParameter, InvalidScatteringMatrix

logger = logging.getLogger(__name__)

AXES = ('x', 'y', 'z')

#: Tolerance for unitarity and anti-Hermiticity checks in double precision.
UNITARY_TOL = 1e-12

#: Below this angle the NJL exponential uses the series form of sin(t)/t.
NJL_SERIES_THRESHOLD = 1e-4

IDENTITY = np.eye(4, dtype=complex)
IDENTITY.setflags(write=False)

_PAULI = {
    'x': np.array([[0, 1], [1, 0]], dtype=complex),
    'y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'z': np.array([[1, 0], [0, -1]], dtype=complex),
}


def axis_index(axis):
    """
    Normalise ``axis`` (``'x'``, ``'y'``, ``'z'`` or 0, 1, 2) to an index.
    """
    if isinstance(axis, str) and axis in AXES:
        return AXES.index(axis)
    if isinstance(axis, (int, np.integer)) and not isinstance(axis, bool) and 0 <= axis < 3:
        return int(axis)
    raise InvalidAxis("Not a valid axis: {0!r}".format(axis))


def axis_name(axis):
    return AXES[axis_index(axis)]


def _frozen(matrix):
    matrix = np.array(matrix, dtype=complex)
    matrix.setflags(write=False)
    return matrix


def dagger(matrix):
    return np.conj(np.swapaxes(matrix, -1, -2))


def max_abs(matrix):
    return float(np.max(np.abs(matrix))) if np.size(matrix) else 0.0


def anticommutator(a, b):
    return a @ b + b @ a


def unitarity_residual(matrix):
    """
    ``max |U^dagger U - I|`` over all entries of a matrix or a stack of matrices.
    """
    matrix = np.asarray(matrix, dtype=complex)
    return max_abs(dagger(matrix) @ matrix - np.eye(matrix.shape[-1]))


@dataclass(frozen=True, eq=False)
class DiracSet:
    """
    The fixed matrices of the Dirac equation in the Dirac-Pauli representation.

    ``rot`` maps each axis name to the rotation
    ``S_a = (beta + alpha_a) / sqrt(2)``,
    which is Hermitian, involutory and satisfies ``S_a alpha_a S_a = beta``.
    """
    beta: np.ndarray
    alpha_x: np.ndarray
    alpha_y: np.ndarray
    alpha_z: np.ndarray
    gamma5: np.ndarray
    sigma: np.ndarray
    rot: MappingProxyType

    def alpha(self, axis):
        return (self.alpha_x, self.alpha_y, self.alpha_z)[axis_index(axis)]

    def gammas(self):
        """
        ``(gamma^0, gamma^1, gamma^2, gamma^3)`` with ``gamma^i = beta alpha^i``.
        """
        return (self.beta,) + tuple(self.beta @ alpha for alpha in
                                    (self.alpha_x, self.alpha_y, self.alpha_z))

    def replace(self, **matrices):
        """
        A copy with some matrices swapped out. Used to build deliberately
        broken sets for negative controls.
        """
        values = {name: getattr(self, name) for name in (
            'beta', 'alpha_x', 'alpha_y', 'alpha_z', 'gamma5', 'sigma', 'rot')}
        values.update({
            name: value if name == 'rot' else _frozen(value)
            for name, value in matrices.items()})
        return DiracSet(**values)


def build_dirac_set():
    """
    Build the Dirac-Pauli matrix set.

    ``beta = diag(1, 1, -1, -1)``, each ``alpha_a`` holds the Pauli matrix
    ``sigma_a`` in its off-diagonal blocks, ``gamma5 = i g0 g1 g2 g3`` and
    ``sigma = beta gamma5``.
    """
    offdiagonal = np.array([[0, 1], [1, 0]], dtype=complex)
    beta = np.kron(_PAULI['z'], np.eye(2, dtype=complex))
    alphas = {name: np.kron(offdiagonal, pauli) for name, pauli in _PAULI.items()}

    g0, g1, g2, g3 = (beta,) + tuple(beta @ alphas[name] for name in AXES)
    gamma5 = 1j * (g0 @ g1 @ g2 @ g3)
    sigma = beta @ gamma5

    rot = {name: _frozen(np.sqrt(0.5) * (beta + alphas[name])) for name in AXES}

    return DiracSet(
        beta=_frozen(beta),
        alpha_x=_frozen(alphas['x']),
        alpha_y=_frozen(alphas['y']),
        alpha_z=_frozen(alphas['z']),
        gamma5=_frozen(gamma5),
        sigma=_frozen(sigma),
        rot=MappingProxyType(rot),
    )


def rotation(dirac, axis):
    """
    The streaming rotation ``S_a`` for ``axis``.
    """
    return dirac.rot[axis_name(axis)]


def expm_antihermitian(generator, tol=UNITARY_TOL):
    """
    ``exp(M)`` for an anti-Hermitian ``M`` (or a stack of them).

    ``iM`` is Hermitian, so ``exp(M) = V exp(-i w) V^dagger``
    with ``iM = V diag(w) V^dagger``.
    The eigenvectors are orthonormal to working precision,
    which keeps the result unitary to roundoff.
    """
    generator = np.asarray(generator, dtype=complex)
    residual = max_abs(generator + dagger(generator))
    if residual > tol:
        raise InvalidScatteringMatrix(
            "Scattering matrix is not anti-Hermitian "
            "(residual {0:.3e} > {1:.1e})".format(residual, tol))

    hermitian = 1j * generator
    hermitian = 0.5 * (hermitian + dagger(hermitian))
    eigenvalues, eigenvectors = np.linalg.eigh(hermitian)
    phases = np.exp(-1j * eigenvalues)
    return (eigenvectors * phases[..., np.newaxis, :]) @ dagger(eigenvectors)


def _check_dt(dt):
    if not np.all(np.asarray(dt) > 0):
        raise InvalidParameter("The time step must be positive, got {0!r}".format(dt))
    return np.asarray(dt, dtype=float)


def collision_matrix_free(dirac, m, dt):
    """
    ``C = cos(m dt) I - i beta sin(m dt)``.
    """
    phase = (np.asarray(m, dtype=float) * _check_dt(dt))[..., np.newaxis, np.newaxis]
    return np.cos(phase) * IDENTITY - 1j * np.sin(phase) * dirac.beta


def collision_matrix_njl(dirac, m, g, rho_s, rho_a, dt):
    """
    Closed form of ``exp(dt M_NJL)`` with
    ``M_NJL = -i beta (m - g rho_s) - g rho_a Sigma``.

    With ``a = (m - g rho_s) dt`` and ``b = g rho_a dt`` the generator
    squares to ``-(a^2 + b^2) I``, so
    ``exp(M) = cos(t) I + sin(t)/t M`` with ``t = sqrt(a^2 + b^2)``.
    ``rho_s`` and ``rho_a`` may be per-site arrays.
    """
    dt = _check_dt(dt)
    a = (m - g * np.asarray(rho_s, dtype=float)) * dt
    b = g * np.asarray(rho_a, dtype=float) * dt
    a, b = np.broadcast_arrays(a, b)

    theta = np.hypot(a, b)
    small = theta < NJL_SERIES_THRESHOLD
    theta2 = theta * theta
    safe_theta = np.where(small, 1.0, theta)
    sinc = np.where(small, 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0,
                    np.sin(theta) / safe_theta)

    a = a[..., np.newaxis, np.newaxis]
    b = b[..., np.newaxis, np.newaxis]
    generator = -1j * a * dirac.beta - b * dirac.sigma
    return (np.cos(theta)[..., np.newaxis, np.newaxis] * IDENTITY
            + sinc[..., np.newaxis, np.newaxis] * generator)


def em_generator(dirac, m, e, A, V):
    """
    ``M = i beta m - i e alpha_a A_a + i e V``.

    ``A`` has shape ``(3, ...)`` and ``V`` has shape ``(...)``.
    """
    A = np.asarray(A, dtype=float)
    V = np.asarray(V, dtype=float)
    if A.shape[0] != 3:
        raise InvalidParameter("The vector potential needs three components")

    m = np.asarray(m, dtype=float)[..., np.newaxis, np.newaxis]
    e = np.asarray(e, dtype=float)[..., np.newaxis, np.newaxis]
    coupling = sum(
        A[index][..., np.newaxis, np.newaxis] * dirac.alpha(index) for index in range(3))
    return (1j * m * dirac.beta - 1j * e * coupling
            + 1j * e * V[..., np.newaxis, np.newaxis] * IDENTITY)


def collision_matrix_em(dirac, m, e, A, V, dt):
    """
    ``C = exp(-dt M)`` for the electromagnetic scattering matrix ``M``.
    """
    dt = _check_dt(dt)[..., np.newaxis, np.newaxis]
    return expm_antihermitian(-dt * em_generator(dirac, m, e, A, V))
