"""Full-density-matrix GKLS integrator in the product basis.

Product basis ordering, used everywhere a 4x4 dense state appears: (|11>, |10>, |01>, |00>), with
|1> the excited level, so sigma_3 = diag(+1, -1) on each atom. This module rebuilds the master
equation from the coefficient tensors and validates the X-state propagation in xstate.
"""
from dataclasses import dataclass
import math

import numpy as np

from unruh_pair.coefficients import Coefficients
from unruh_pair.errors import InvalidStateError, NumericError, UsageError, check_finite
from unruh_pair.xstate import XState
import unruh_pair.console as con

DenseState = np.ndarray

PRODUCT_BASIS = ('11', '10', '01', '00')

SIGMA = np.array([
    [[0.0, 1.0], [1.0, 0.0]],
    [[0.0, -1.0j], [1.0j, 0.0]],
    [[1.0, 0.0], [0.0, -1.0]],
], dtype=complex)

IDENTITY2 = np.eye(2, dtype=complex)

# sigma_i^(1) = sigma_i x 1, sigma_i^(2) = 1 x sigma_i; indexed [alpha, i].
ATOM_SIGMA = np.array([[np.kron(s, IDENTITY2) for s in SIGMA],
                       [np.kron(IDENTITY2, s) for s in SIGMA]])

# Columns are |G>, |A>, |S>, |E> written in the product basis.
COUPLED_FROM_PRODUCT = np.array([
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 1.0, 1.0, 0.0],
    [0.0, -1.0, 1.0, 0.0],
    [1.0, 0.0, 0.0, 0.0],
], dtype=complex) / np.array([1.0, math.sqrt(2.0), math.sqrt(2.0), 1.0])

# Coupled-basis (G, A, S, E) positions outside the X pattern.
OFF_X = ((0, 1), (0, 2), (1, 3), (2, 3), (1, 0), (2, 0), (3, 1), (3, 2))

X_FORM_TOLERANCE = 1e-8
HERMITIAN_TOLERANCE = 1e-12
TRACE_TOLERANCE = 1e-8
CONVERGENCE_TOLERANCE = 1e-8

# Default step is this fraction of the largest admissible step.
DEFAULT_STEP_FRACTION = 0.05


def _coefficient_block(a_rate, b_rate):
    """A delta_ij - i B epsilon_ij3 - A delta_3i delta_3j."""
    return np.array([
        [a_rate, -1.0j * b_rate, 0.0],
        [1.0j * b_rate, a_rate, 0.0],
        [0.0, 0.0, 0.0],
    ], dtype=complex)


@dataclass(frozen=True)
class GklsData:
    """Coefficient tensors of the master equation and the operators they multiply."""

    coeffs: Coefficients
    blocks: np.ndarray
    omega12: np.ndarray
    products: np.ndarray

    def block(self, alpha: int, beta: int) -> np.ndarray:
        """C^(alpha beta) with atoms numbered from 1."""
        return self.blocks[alpha - 1, beta - 1]


def build_gkls(coeffs: Coefficients) -> GklsData:
    """Assemble C^(alpha beta), Omega^(12) and the products sigma_i^(alpha) sigma_j^(beta)."""
    same = _coefficient_block(coeffs.a1, coeffs.b1)
    cross = _coefficient_block(coeffs.a2, coeffs.b2)
    blocks = np.array([[same, cross], [cross, same]])
    omega12 = coeffs.d * np.diag([1.0, 1.0, 0.0])
    products = np.einsum('aikl,bjlm->abijkm', ATOM_SIGMA, ATOM_SIGMA)
    return GklsData(coeffs=coeffs, blocks=blocks, omega12=omega12, products=products)


def kossakowski_matrix(data: GklsData) -> np.ndarray:
    """6x6 matrix over (sigma_1..3 of atom 1, sigma_1..3 of atom 2)."""
    return np.block([[data.blocks[0, 0], data.blocks[0, 1]],
                     [data.blocks[1, 0], data.blocks[1, 1]]])


def is_completely_positive(data: GklsData, tolerance: float = 1e-12) -> bool:
    """True when the Kossakowski matrix is positive semidefinite."""
    return bool(np.linalg.eigvalsh(kossakowski_matrix(data)).min() >= -tolerance)


def gkls_rhs(rho: DenseState, data: GklsData, free_hamiltonian: bool = False) -> DenseState:
    """d rho / d tau: interatomic commutator, optional free term, and the dissipator."""
    derivative = np.zeros((4, 4), dtype=complex)

    for i in range(3):
        for j in range(3):
            if data.omega12[i, j] != 0.0:
                pair = data.products[0, 1, i, j]
                derivative += 1.0j * data.omega12[i, j] * (pair @ rho - rho @ pair)

    if free_hamiltonian:
        # omega = 1; the Lamb shift of the level spacing is not included.
        hamiltonian = 0.5 * (ATOM_SIGMA[0, 2] + ATOM_SIGMA[1, 2])
        derivative += -1.0j * (hamiltonian @ rho - rho @ hamiltonian)

    for alpha in range(2):
        for beta in range(2):
            block = data.blocks[alpha, beta]
            for i in range(3):
                for j in range(3):
                    weight = block[i, j]
                    if weight == 0.0:
                        continue
                    sigma_i = ATOM_SIGMA[alpha, i]
                    sigma_j = ATOM_SIGMA[beta, j]
                    product = data.products[alpha, beta, i, j]
                    derivative += 0.5 * weight * (2.0 * sigma_j @ rho @ sigma_i
                                                  - product @ rho - rho @ product)
    return derivative


def liouvillian(data: GklsData, free_hamiltonian: bool = False) -> np.ndarray:
    """16x16 matrix of gkls_rhs acting on row-major flattened density matrices."""
    superoperator = np.zeros((16, 16), dtype=complex)
    for column in range(16):
        unit = np.zeros(16, dtype=complex)
        unit[column] = 1.0
        superoperator[:, column] = gkls_rhs(unit.reshape(4, 4), data, free_hamiltonian).ravel()
    return superoperator


def max_step(coeffs: Coefficients) -> float:
    """Largest admissible step: min(1/(40 A1), pi/(20 |D|))."""
    bound = 1.0 / (40.0 * coeffs.a1)
    if coeffs.d != 0.0:
        bound = min(bound, math.pi / (20.0 * abs(coeffs.d)))
    return bound


def default_step(coeffs: Coefficients) -> float:
    """Step used when none is given."""
    return DEFAULT_STEP_FRACTION * max_step(coeffs)


def _step_matrix(superoperator, h):
    """One classical fourth-order step I + z + z^2/2 + z^3/6 + z^4/24 for z = h L."""
    z = h * superoperator
    identity = np.eye(superoperator.shape[0], dtype=complex)
    return identity + z @ (identity + z @ (identity + z @ (identity + z / 4.0) / 3.0) / 2.0)


def _rk4(vector, superoperator, interval, dt):
    steps = max(1, math.ceil(interval / dt - 1e-12))
    step = _step_matrix(superoperator, interval / steps)
    return np.linalg.matrix_power(step, steps) @ vector


def _march(rho0, superoperator, taus, dt):
    states = []
    vector = np.asarray(rho0, dtype=complex).ravel()
    current = 0.0
    for tau in taus:
        if tau > current:
            vector = _rk4(vector, superoperator, tau - current, dt)
            current = tau
        states.append(vector.reshape(4, 4).copy())
    return states


def integrate_samples(rho0: DenseState, data: GklsData, taus, dt: float = None,
                      free_hamiltonian: bool = False) -> list:
    """Dense states at each of the nondecreasing times, checked against half the step."""
    if dt is None:
        dt = default_step(data.coeffs)
    check_finite('dt', dt)
    if dt <= 0.0:
        raise UsageError('step-invalid', f'dt must be > 0, got {dt}.')
    if dt > max_step(data.coeffs) * (1.0 + 1e-12):
        raise UsageError('step-too-large',
                         f'dt = {dt} exceeds the admissible {max_step(data.coeffs):.6g}.')
    taus = [float(tau) for tau in taus]
    if any(tau < 0.0 for tau in taus) or any(b < a for a, b in zip(taus, taus[1:])):
        raise UsageError('tau-invalid', 'Sample times must be >= 0 and nondecreasing.')
    validate_dense(rho0)

    superoperator = liouvillian(data, free_hamiltonian)
    coarse = _march(rho0, superoperator, taus, dt)
    fine = _march(rho0, superoperator, taus, dt / 2.0)
    deviation = max((np.abs(a - b).max() for a, b in zip(coarse, fine)), default=0.0)
    con.trace(f'Step-halving deviation {deviation:.3g} at dt = {dt:.6g}.')
    if deviation > CONVERGENCE_TOLERANCE:
        raise NumericError('non-convergence',
                           f'dt and dt/2 differ by {deviation:.3g} (> {CONVERGENCE_TOLERANCE}).')
    return fine


def integrate(rho0: DenseState, data: GklsData, tau_max: float, dt: float = None,
              free_hamiltonian: bool = False) -> DenseState:
    """Dense state at tau_max by the classical fourth-order scheme."""
    check_finite('tau_max', tau_max)
    if tau_max < 0.0:
        raise UsageError('tau-invalid', f'tau_max must be >= 0, got {tau_max}.')
    return integrate_samples(rho0, data, [tau_max], dt, free_hamiltonian)[0]


def validate_dense(rho: DenseState):
    """Reject matrices that are not 4x4, Hermitian and of unit trace."""
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise InvalidStateError('state-invalid', f'Expected a 4x4 matrix, got {rho.shape}.')
    if np.abs(rho - rho.conj().T).max() > HERMITIAN_TOLERANCE:
        raise InvalidStateError('state-invalid', 'Density matrix is not Hermitian.')
    if abs(np.trace(rho) - 1.0) > TRACE_TOLERANCE:
        raise InvalidStateError('state-invalid',
                                f'Trace must be 1, got {np.trace(rho).real:.17g}.')


def to_coupled(rho: DenseState) -> np.ndarray:
    """Product basis to coupled basis (G, A, S, E)."""
    return COUPLED_FROM_PRODUCT.conj().T @ rho @ COUPLED_FROM_PRODUCT


def dense_to_x(rho: DenseState) -> XState:
    """Coupled-basis X state of a dense matrix; the off-X elements must vanish."""
    coupled = to_coupled(np.asarray(rho, dtype=complex))
    leak = max(abs(coupled[i, j]) for i, j in OFF_X)
    if leak > X_FORM_TOLERANCE:
        raise InvalidStateError('state-not-x-form',
                                f'Off-X element of size {leak:.3g} in the dense state.')
    return XState(p_gg=float(coupled[0, 0].real), p_ee=float(coupled[3, 3].real),
                  p_aa=float(coupled[1, 1].real), p_ss=float(coupled[2, 2].real),
                  c_as=complex(coupled[1, 2]), c_ge=complex(coupled[0, 3]))


def x_to_dense(state: XState) -> DenseState:
    """Product-basis matrix of an X state."""
    return COUPLED_FROM_PRODUCT @ state.as_matrix() @ COUPLED_FROM_PRODUCT.conj().T


def x_deviation(rho: DenseState, state: XState, free_hamiltonian: bool = False) -> float:
    """Largest coupled-basis gap between a dense state and an X state.

    Under the free Hamiltonian rho_GE rotates at twice the transition frequency, so only its
    modulus is compared.
    """
    coupled = to_coupled(np.asarray(rho, dtype=complex))
    reference = state.as_matrix().astype(complex)
    if free_hamiltonian:
        for i, j in ((0, 3), (3, 0)):
            coupled[i, j] = abs(coupled[i, j])
            reference[i, j] = abs(reference[i, j])
    return float(np.abs(coupled - reference).max())
