"""Concurrence of two-atom states and the closed-form initial rates of change."""
from dataclasses import dataclass
import math

import numpy as np

from unruh_pair.coefficients import Coefficients
from unruh_pair.errors import InvalidStateError, NumericError
from unruh_pair.xstate import XState, PopulationPropagator, diagonal_generator, evolve
import unruh_pair.console as con
import unruh_pair.gkls as gk

RADICAND_TOLERANCE = 1e-12

# sin^2(2 theta) sin^2(phi) + cos^2(2 theta) below this makes the superposition formula singular.
SINGULAR_DENOMINATOR = 1e-12

# Default finite-difference step, relative to the fastest rate of the generator.
RATE_STEP_SCALE = 1e-3

SPIN_FLIP = np.kron(gk.SIGMA[1], gk.SIGMA[1])


@dataclass(frozen=True)
class ConcurrenceBreakdown:
    """Both X-state branches and the concurrence max(0, k1, k2)."""

    k1: float
    k2: float
    c: float


@dataclass(frozen=True)
class InitialRate:
    """Rate of change of concurrence at tau = 0.

    raw is K1'(0) (or the superposition formula); clamped is what C(tau) actually does, which is
    0 when C(0) = 0 and raw < 0. source names the formula or 'numerical'.
    """

    raw: float
    clamped: float
    source: str


def _radicand(value, name):
    if value < -RADICAND_TOLERANCE:
        raise InvalidStateError('radicand-negative',
                                f'{name} radicand {value:.3g} < 0: state is not positive.')
    return math.sqrt(max(value, 0.0))


def concurrence_x(state: XState) -> ConcurrenceBreakdown:
    """Concurrence of an X state from its coupled-basis elements."""
    diff = state.p_aa - state.p_ss
    total = state.p_aa + state.p_ss
    # (rho_AS - rho_SA)^2 = -4 Im^2 and (rho_AS + rho_SA)^2 = 4 Re^2.
    first = _radicand(diff * diff + 4.0 * state.c_as.imag ** 2, 'K1')
    second = _radicand(total * total - 4.0 * state.c_as.real ** 2, 'K2')
    corners = math.sqrt(max(state.p_gg, 0.0) * max(state.p_ee, 0.0))
    k1 = first - 2.0 * corners
    k2 = 2.0 * abs(state.c_ge) - second
    return ConcurrenceBreakdown(k1=k1, k2=k2, c=max(0.0, k1, k2))


def concurrence_curve(samples) -> list:
    """Breakdowns for a sequence of (tau, state) samples."""
    return [concurrence_x(state) for _, state in samples]


def _matrix_sqrt(rho):
    eigenvalues, eigenvectors = np.linalg.eigh(rho)
    roots = np.sqrt(np.clip(eigenvalues, 0.0, None))
    return (eigenvectors * roots) @ eigenvectors.conj().T


def concurrence_general(rho: gk.DenseState) -> float:
    """Wootters concurrence of any two-qubit density matrix in the product basis."""
    gk.validate_dense(rho)
    rho = np.asarray(rho, dtype=complex)
    root = _matrix_sqrt(rho)
    flipped_root = SPIN_FLIP @ root.conj() @ SPIN_FLIP
    # Singular values of sqrt(rho) sqrt(rho~) are the square roots of eig(rho rho~).
    lambdas = np.linalg.svd(root @ flipped_root, compute_uv=False)
    lambdas = np.sort(lambdas)[::-1]
    return float(max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]))


def _absorption_scale(coeffs):
    """A1^2 - B1^2, written as a product to keep its small values accurate."""
    return (np.asarray(coeffs.a1) - coeffs.b1) * (np.asarray(coeffs.a1) + coeffs.b1)


def generation_possible(coeffs: Coefficients):
    """A2^2 + D^2 > A1^2 - B1^2; elementwise for grid coefficients."""
    verdict = np.asarray(coeffs.a2) ** 2 + np.asarray(coeffs.d) ** 2 > _absorption_scale(coeffs)
    return bool(verdict) if verdict.ndim == 0 else verdict


def generation_rate_product(coeffs: Coefficients):
    """K1'(0) for the |10> start: 4 sqrt(A2^2 + D^2) - 4 sqrt(A1^2 - B1^2)."""
    rate = (4.0 * np.hypot(coeffs.a2, coeffs.d)
            - 4.0 * np.sqrt(np.clip(_absorption_scale(coeffs), 0.0, None)))
    return np.asarray(rate)[()]


def initial_rate_superposition(coeffs: Coefficients, theta: float, phi: float) -> float:
    """C'(0) for cos(theta)|A> + sin(theta) e^{i phi}|S>, from the closed form."""
    cos2 = math.cos(2.0 * theta)
    sin2 = math.sin(2.0 * theta)
    denominator_sq = cos2 * cos2 + sin2 * sin2 * math.sin(phi) ** 2
    if denominator_sq < SINGULAR_DENOMINATOR:
        raise NumericError('formula-singular',
                           f'Initial-rate denominator vanishes at theta={theta}, phi={phi}.')
    numerator = (-4.0 * coeffs.a1 * denominator_sq + 4.0 * coeffs.a2 * cos2
                 - 2.0 * coeffs.d * sin2 * sin2 * math.sin(2.0 * phi))
    emission = coeffs.a1 - coeffs.a2 * cos2
    absorption = coeffs.b1 - coeffs.b2 * cos2
    corners = (emission - absorption) * (emission + absorption)
    return float(numerator / math.sqrt(denominator_sq) - 4.0 * math.sqrt(max(corners, 0.0)))


def default_rate_step(coeffs: Coefficients) -> float:
    """Finite-difference step small against 1/(4 A1) and 1/(4|D|)."""
    return RATE_STEP_SCALE / (4.0 * max(coeffs.a1, abs(coeffs.d)))


def numerical_initial_rate(state0: XState, coeffs: Coefficients, h: float = None) -> float:
    """dC/dtau at 0+ from forward differences at h, h/2, h/4 with Richardson extrapolation."""
    if h is None:
        h = default_rate_step(coeffs)
    if not h > 0.0:
        raise NumericError('step-invalid', f'Finite-difference step must be > 0, got {h}.')
    propagator = PopulationPropagator(diagonal_generator(coeffs))

    def concurrence_at(tau):
        return concurrence_x(evolve(state0, coeffs, tau, propagator)).c

    c0 = concurrence_at(0.0)
    slopes = [(concurrence_at(step) - c0) / step for step in (h, h / 2.0, h / 4.0)]
    first = [2.0 * slopes[1] - slopes[0], 2.0 * slopes[2] - slopes[1]]
    return (4.0 * first[1] - first[0]) / 3.0


def initial_rate(state0: XState, coeffs: Coefficients, kind: str = 'x-state',
                 theta: float = 0.0, phi: float = 0.0) -> InitialRate:
    """Initial rate for a start of the given kind, analytic where a closed form applies."""
    c0 = concurrence_x(state0).c
    if kind == 'product-eg':
        raw = float(generation_rate_product(coeffs))
        source = 'product-eg'
    elif kind == 'superposition':
        try:
            raw = initial_rate_superposition(coeffs, theta, phi)
            source = 'superposition'
        except NumericError as e:
            con.trace(f'{e}; falling back to finite differences.')
            raw = numerical_initial_rate(state0, coeffs)
            source = 'numerical'
    else:
        raw = numerical_initial_rate(state0, coeffs)
        source = 'numerical'
    clamped = 0.0 if c0 <= 0.0 and raw < 0.0 else raw
    return InitialRate(raw=raw, clamped=clamped, source=source)
