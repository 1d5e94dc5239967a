"""Two-atom X states in the coupled basis {G, A, S, E} and their exact propagation.

|G> = |00>, |A> = (|10> - |01>)/sqrt(2), |S> = (|10> + |01>)/sqrt(2), |E> = |11>.
Populations follow a constant 4x4 rate matrix; the coherences rho_AS and rho_GE decay in closed
form. Population vectors are ordered (p_gg, p_ee, p_aa, p_ss).
"""
from dataclasses import dataclass
import cmath
import math

import numpy as np
import scipy.linalg as sla

from unruh_pair.coefficients import Coefficients
from unruh_pair.errors import InvalidStateError, NumericError, UsageError, check_finite
import unruh_pair.console as con

TRACE_TOLERANCE = 1e-10
NEGATIVE_SLACK = 1e-12
POSITIVITY_TOLERANCE = 1e-10

# Eigenvector matrices worse conditioned than this switch to the series propagator.
EIGEN_CONDITION_LIMIT = 1e4

# Relative singular-value cut used to count the generator's nullspace.
NULLSPACE_RCOND = 1e-13

# Uniformized series: squarings bring rate * tau below SERIES_STEP; at most SERIES_TERMS terms.
SERIES_STEP = 0.5
SERIES_TERMS = 40

COUPLED_BASIS = ('G', 'A', 'S', 'E')


@dataclass(frozen=True)
class XState:
    """X-form density matrix; rho_SA and rho_EG are the conjugates of c_as and c_ge."""

    p_gg: float
    p_ee: float
    p_aa: float
    p_ss: float
    c_as: complex = 0j
    c_ge: complex = 0j

    def __post_init__(self):
        check_finite('populations', self.p_gg, self.p_ee, self.p_aa, self.p_ss)
        check_finite('coherences', self.c_as.real, self.c_as.imag,
                     self.c_ge.real, self.c_ge.imag)
        populations = self.populations()
        if abs(populations.sum() - 1.0) > TRACE_TOLERANCE:
            raise InvalidStateError('state-invalid',
                                    f'Trace must be 1, got {populations.sum():.17g}.')
        if populations.min() < -NEGATIVE_SLACK:
            raise InvalidStateError('state-invalid',
                                    f'Populations must be >= 0, got {populations.min():.3g}.')
        if abs(self.c_as) ** 2 > self.p_aa * self.p_ss + POSITIVITY_TOLERANCE:
            raise InvalidStateError('state-invalid', '|rho_AS|^2 exceeds p_aa * p_ss.')
        if abs(self.c_ge) ** 2 > self.p_gg * self.p_ee + POSITIVITY_TOLERANCE:
            raise InvalidStateError('state-invalid', '|rho_GE|^2 exceeds p_gg * p_ee.')

    def populations(self) -> np.ndarray:
        """Population vector (p_gg, p_ee, p_aa, p_ss)."""
        return np.array([self.p_gg, self.p_ee, self.p_aa, self.p_ss])

    def trace(self) -> float:
        """Sum of the populations."""
        return float(self.populations().sum())

    def as_matrix(self) -> np.ndarray:
        """4x4 density matrix in the coupled basis ordered (G, A, S, E)."""
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0] = self.p_gg
        rho[1, 1] = self.p_aa
        rho[2, 2] = self.p_ss
        rho[3, 3] = self.p_ee
        rho[1, 2] = self.c_as
        rho[2, 1] = self.c_as.conjugate()
        rho[0, 3] = self.c_ge
        rho[3, 0] = self.c_ge.conjugate()
        return rho

    def to_dict(self) -> dict:
        """Plain mapping of the independent elements."""
        return {'p_gg': self.p_gg, 'p_ee': self.p_ee, 'p_aa': self.p_aa, 'p_ss': self.p_ss,
                're_as': self.c_as.real, 'im_as': self.c_as.imag,
                're_ge': self.c_ge.real, 'im_ge': self.c_ge.imag}


def initial_product_eg() -> XState:
    """|10>: one atom excited, the other in its ground state."""
    return XState(p_gg=0.0, p_ee=0.0, p_aa=0.5, p_ss=0.5, c_as=0.5 + 0j)


def initial_superposition(theta: float, phi: float) -> XState:
    """cos(theta)|A> + sin(theta) e^{i phi}|S>.

    rho_AS(0) = cos(theta) sin(theta) e^{+i phi}: with rho_AS' = -4(A1 + iD) rho_AS this is the
    phase for which the closed-form initial rate carries -2 D sin^2(2 theta) sin(2 phi).
    """
    check_finite('theta/phi', theta, phi)
    cos_t = math.cos(theta)
    sin_t = math.sin(theta)
    return XState(p_gg=0.0, p_ee=0.0, p_aa=cos_t * cos_t, p_ss=sin_t * sin_t,
                  c_as=cos_t * sin_t * cmath.exp(1j * phi))


def initial_x_state(p_gg: float, p_ee: float, p_aa: float, p_ss: float,
                    c_as: complex = 0j, c_ge: complex = 0j) -> XState:
    """Explicit X state; raises InvalidStateError when not a density matrix."""
    return XState(float(p_gg), float(p_ee), float(p_aa), float(p_ss),
                  complex(c_as), complex(c_ge))


@dataclass(frozen=True)
class DiagonalGenerator:
    """Classical rate matrix acting on (p_gg, p_ee, p_aa, p_ss); columns sum to zero."""

    matrix: np.ndarray

    def column_sums(self) -> np.ndarray:
        """Column sums, zero up to round-off."""
        return self.matrix.sum(axis=0)


def diagonal_generator(coeffs: Coefficients) -> DiagonalGenerator:
    """Rate matrix of the four population equations."""
    a1, a2, b1, b2 = coeffs.a1, coeffs.a2, coeffs.b1, coeffs.b2
    emit_a = 2.0 * (a1 + b1 - a2 - b2)
    emit_s = 2.0 * (a1 + b1 + a2 + b2)
    absorb_a = 2.0 * (a1 - b1 - a2 + b2)
    absorb_s = 2.0 * (a1 - b1 + a2 - b2)
    matrix = np.array([
        [-4.0 * (a1 - b1), 0.0, emit_a, emit_s],
        [0.0, -4.0 * (a1 + b1), absorb_a, absorb_s],
        [absorb_a, emit_a, -4.0 * (a1 - a2), 0.0],
        [absorb_s, emit_s, 0.0, -4.0 * (a1 + a2)],
    ])
    return DiagonalGenerator(matrix)


class PopulationPropagator:
    """exp(M tau) for a fixed generator, evaluated on arrays of times.

    The eigendecomposition is used while it is well conditioned. Detailed balance makes the
    eigenvector condition number grow like 1/r, r = exp(-2 pi / a) the absorption-to-emission
    ratio, so cold generators go through a scaling-and-squaring series of the nonnegative
    matrix M/q + 1 instead; that series keeps every population to full relative precision.
    """

    def __init__(self, generator: DiagonalGenerator):
        self._matrix = generator.matrix
        self._rate = float(-np.diag(self._matrix).min())
        eigenvalues, eigenvectors = np.linalg.eig(self._matrix)
        condition = float(np.linalg.cond(eigenvectors))
        emission = self._matrix[1, 1]
        ratio = self._matrix[0, 0] / emission if emission != 0.0 else 0.0
        if ratio > 0.0:
            condition = max(condition, 1.0 / ratio)
        else:
            condition = math.inf
        self._spectral = condition < EIGEN_CONDITION_LIMIT
        if self._spectral:
            self._eigenvalues = eigenvalues
            self._eigenvectors = eigenvectors
        else:
            con.trace(f'Generator condition {condition:.3g}; using the series propagator.')

    def uses_eigendecomposition(self) -> bool:
        """True unless the series fallback is active."""
        return self._spectral

    def flow(self, tau: float) -> np.ndarray:
        """The 4x4 matrix exp(M tau)."""
        if self._spectral:
            modes = self._eigenvectors * np.exp(self._eigenvalues * tau)
            return (modes @ np.linalg.inv(self._eigenvectors)).real
        return _series_expm(self._matrix, self._rate, tau)

    def populations(self, populations0: np.ndarray, taus) -> np.ndarray:
        """Populations at each time; shape (len(taus), 4)."""
        taus = np.atleast_1d(np.asarray(taus, dtype=float))
        if self._spectral:
            weights = np.linalg.solve(self._eigenvectors, populations0.astype(complex))
            modes = np.exp(np.outer(taus, self._eigenvalues)) * weights
            result = (modes @ self._eigenvectors.T).real
        else:
            result = np.array([_series_expm(self._matrix, self._rate, tau) @ populations0
                               for tau in taus])
        return _clip_round_off(result)

    def populations_stepped(self, populations0: np.ndarray, dtau: float, n: int) -> np.ndarray:
        """Populations at k * dtau for k = 0..n-1, by repeated application of one step."""
        step = self.flow(dtau)
        result = np.empty((n, 4))
        result[0] = populations0
        for k in range(1, n):
            result[k] = step @ result[k - 1]
        return _clip_round_off(result)


def _clip_round_off(populations):
    negligible = (populations < 0.0) & (populations >= -POSITIVITY_TOLERANCE)
    return np.where(negligible, 0.0, populations)


def _series_expm(matrix, rate, tau):
    """exp(matrix * tau) for a rate matrix via its nonnegative uniformized series."""
    identity = np.eye(matrix.shape[0])
    if rate == 0.0 or tau == 0.0:
        return identity
    jump = matrix / rate + identity
    total_rate = rate * tau
    squarings = max(0, math.ceil(math.log2(total_rate / SERIES_STEP)))
    x = total_rate / 2.0 ** squarings
    term = identity * math.exp(-x)
    total = term.copy()
    for k in range(1, SERIES_TERMS):
        term = term @ jump * (x / k)
        total += term
        if term.max() < 1e-18 * total.max():
            break
    for _ in range(squarings):
        total = total @ total
    return total


def _check_time(tau):
    check_finite('tau', tau)
    if tau < 0.0:
        raise UsageError('tau-negative', f'Time must be >= 0, got {tau}.')


def _evolve_many(state0: XState, coeffs: Coefficients, propagator: PopulationPropagator,
                 taus: np.ndarray) -> list:
    populations = propagator.populations(state0.populations(), taus)
    decay_as = -4.0 * (coeffs.a1 + 1j * coeffs.d)
    decay_ge = -4.0 * coeffs.a1
    states = []
    for tau, (p_gg, p_ee, p_aa, p_ss) in zip(taus, populations):
        states.append(XState(p_gg=float(p_gg), p_ee=float(p_ee),
                             p_aa=float(p_aa), p_ss=float(p_ss),
                             c_as=state0.c_as * cmath.exp(decay_as * tau),
                             c_ge=state0.c_ge * math.exp(decay_ge * tau)))
    return states


def evolve(state0: XState, coeffs: Coefficients, tau: float,
           propagator: PopulationPropagator = None) -> XState:
    """State at time tau; a precomputed propagator for the same coefficients may be passed."""
    _check_time(tau)
    if propagator is None:
        propagator = PopulationPropagator(diagonal_generator(coeffs))
    return _evolve_many(state0, coeffs, propagator, np.array([float(tau)]))[0]


def trajectory(state0: XState, coeffs: Coefficients, tau_max: float, n: int) -> list:
    """n samples (tau, state) uniformly spaced on [0, tau_max], endpoints included."""
    check_finite('tau_max', tau_max)
    if n < 2:
        raise UsageError('samples-invalid', f'Need at least 2 samples, got {n}.')
    if tau_max <= 0.0:
        raise UsageError('tau-invalid', f'tau_max must be > 0, got {tau_max}.')
    taus = np.linspace(0.0, tau_max, n)
    propagator = PopulationPropagator(diagonal_generator(coeffs))
    return list(zip(taus.tolist(), _evolve_many(state0, coeffs, propagator, taus)))


def steady_state(coeffs: Coefficients) -> XState:
    """Normalized nullspace of the rate matrix, coherences zero."""
    generator = diagonal_generator(coeffs)
    null = sla.null_space(generator.matrix, rcond=NULLSPACE_RCOND)
    if null.shape[1] != 1:
        raise NumericError('degenerate-generator',
                           f'Stationary space has dimension {null.shape[1]} (f = {coeffs.f}).')
    vector = null[:, 0] / null[:, 0].sum()
    vector = np.where(np.abs(vector) < NEGATIVE_SLACK, np.abs(vector), vector)
    p_gg, p_ee, p_aa, p_ss = (float(value) for value in vector)
    return XState(p_gg=p_gg, p_ee=p_ee, p_aa=p_aa, p_ss=p_ss)


def interaction_oscillation(coeffs: Coefficients, tau):
    """4 Im(rho_AS)^2 = e^{-8 A1 tau} sin^2(4 D tau) for the |10> start."""
    tau = np.asarray(tau, dtype=float)
    return (np.exp(-8.0 * coeffs.a1 * tau) * np.sin(4.0 * coeffs.d * tau) ** 2)[()]


INITIAL_KINDS = ('product-eg', 'superposition', 'x-state')


@dataclass(frozen=True)
class InitialSpec:
    """Which initial state a run starts from."""

    kind: str = 'product-eg'
    theta: float = 0.0
    phi: float = 0.0
    elements: tuple = ()

    def __post_init__(self):
        if self.kind not in INITIAL_KINDS:
            raise UsageError('init-unknown',
                             f'Unknown initial state {self.kind!r}; use one of {INITIAL_KINDS}.')

    def build(self) -> XState:
        """The initial XState."""
        if self.kind == 'product-eg':
            return initial_product_eg()
        if self.kind == 'superposition':
            return initial_superposition(self.theta, self.phi)
        if len(self.elements) != 8:
            raise UsageError('x-state-incomplete',
                             'x-state needs p_gg, p_ee, p_aa, p_ss, re_as, im_as, re_ge, im_ge.')
        p_gg, p_ee, p_aa, p_ss, re_as, im_as, re_ge, im_ge = self.elements
        return initial_x_state(p_gg, p_ee, p_aa, p_ss,
                               complex(re_as, im_as), complex(re_ge, im_ge))


def sample_uniform(state0: XState, coeffs: Coefficients, propagator: PopulationPropagator,
                   dtau: float, n: int) -> list:
    """States at k * dtau, k = 0..n-1, stepping the population flow."""
    populations = propagator.populations_stepped(state0.populations(), dtau, n)
    decay_as = -4.0 * (coeffs.a1 + 1j * coeffs.d)
    decay_ge = -4.0 * coeffs.a1
    states = []
    for k, (p_gg, p_ee, p_aa, p_ss) in enumerate(populations):
        tau = k * dtau
        states.append(XState(p_gg=float(p_gg), p_ee=float(p_ee),
                             p_aa=float(p_aa), p_ss=float(p_ss),
                             c_as=state0.c_as * cmath.exp(decay_as * tau),
                             c_ge=state0.c_ge * math.exp(decay_ge * tau)))
    return states
