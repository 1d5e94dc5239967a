"""Field-correlation spectra and GKLS rate constants for two accelerated atoms.

Units are dimensionless throughout: the atomic transition frequency is 1, accelerations are
a/omega, separations are omega*L, and rates carry the factor gamma0 explicitly. The atoms share
the proper acceleration, which is perpendicular to their separation.
"""
from dataclasses import dataclass
import math

import numpy as np

from unruh_pair.errors import InvalidStateError, check_finite

TWO_PI = 2.0 * math.pi

# Below this a*L the rapidity 2/a*asinh(aL/2) is taken from its series.
SERIES_THRESHOLD = 1e-6

# Above this a/omega coth(pi/a) is taken from its Laurent expansion.
LAURENT_THRESHOLD = 1e6


def _validate_arrays(accel, separation=None):
    accel = np.asarray(accel, dtype=float)
    if np.any(np.isnan(accel)):
        raise InvalidStateError('nan-input', 'Acceleration must not be NaN.')
    if np.any(accel < 0.0):
        raise InvalidStateError('accel-negative', 'Acceleration a/omega must be >= 0.')
    if separation is None:
        return accel, None
    separation = np.asarray(separation, dtype=float)
    if np.any(np.isnan(separation)):
        raise InvalidStateError('nan-input', 'Separation must not be NaN.')
    if np.any(separation <= 0.0):
        raise InvalidStateError('separation-nonpositive',
                                'Separation omega*L must be > 0; D diverges as 1/(omega*L).')
    return accel, separation


def _rapidity(accel, separation):
    """Return 2/a * asinh(aL/2), the proper-time phase per unit frequency."""
    small = accel * separation < SERIES_THRESHOLD
    safe_accel = np.where(small, 1.0, accel)
    series = separation - accel ** 2 * separation ** 3 / 24.0
    exact = 2.0 / safe_accel * np.arcsinh(safe_accel * separation / 2.0)
    return np.where(small, series, exact)


def _distance(accel, separation):
    """Return L * sqrt(1 + a^2 L^2 / 4)."""
    return separation * np.hypot(1.0, accel * separation / 2.0)


def _cross_factor(lam, accel, separation):
    """Geometric factor of the cross spectrum at frequency lam; even in lam."""
    rapidity = _rapidity(accel, separation)
    # np.sinc(x) = sin(pi x) / (pi x), so this is sin(lam k) / (lam k) with the lam -> 0 limit.
    return rapidity / _distance(accel, separation) * np.sinc(lam * rapidity / math.pi)


def coth_pi_over(accel):
    """coth(pi*omega/a), the thermal enhancement of the emission/absorption rates."""
    accel, _ = _validate_arrays(accel)
    result = np.ones_like(accel)
    hot = accel > LAURENT_THRESHOLD
    warm = (accel > 0.0) & ~hot
    u = TWO_PI / np.where(warm, accel, 1.0)
    boltzmann = np.exp(-u)
    result = np.where(warm, 1.0 + 2.0 * boltzmann / -np.expm1(-u), result)
    safe_hot = np.where(hot, accel, 1.0)
    result = np.where(hot, safe_hot / math.pi + math.pi / (3.0 * safe_hot), result)
    return result[()]


def unruh_temperature(accel_ratio):
    """Unruh temperature a/(2 pi) in units of omega."""
    accel, _ = _validate_arrays(accel_ratio)
    return (accel / TWO_PI)[()]


def spectral_density_same(lam, accel):
    """Fourier transform of the single-atom Wightman function, G11 = G22.

    Returns (1/2pi) * lam / (1 - exp(-2 pi lam / a)); for a = 0 the zero-temperature limit.
    """
    lam = np.asarray(lam, dtype=float)
    if np.any(np.isnan(lam)):
        raise InvalidStateError('nan-input', 'Frequency must not be NaN.')
    accel, _ = _validate_arrays(accel)
    lam, accel = np.broadcast_arrays(lam, accel)

    inertial = accel == 0.0
    zero_temperature = np.where(lam > 0.0, lam, 0.0)

    safe_accel = np.where(inertial, 1.0, accel)
    u = TWO_PI * np.abs(lam) / safe_accel
    at_zero = lam == 0.0
    safe_u = np.where(at_zero, 1.0, u)
    occupation = -np.expm1(-safe_u)
    emission = np.abs(lam) / occupation
    absorption = np.abs(lam) * np.exp(-safe_u) / occupation
    thermal = np.where(lam > 0.0, emission, absorption)
    thermal = np.where(at_zero, safe_accel / TWO_PI, thermal)

    value = np.where(inertial, zero_temperature, thermal)
    return (value / TWO_PI)[()]


def spectral_density_cross(lam, accel, separation):
    """Fourier transform of the cross correlation G12 = G21."""
    accel, separation = _validate_arrays(accel, separation)
    same = spectral_density_same(lam, accel)
    return (np.asarray(same) * _cross_factor(np.asarray(lam, dtype=float),
                                             accel, separation))[()]


def geometric_factor(accel_ratio, separation):
    """f = sin(2/a asinh(aL/2)) / (L sqrt(1 + a^2 L^2 / 4)), with |f| <= 1."""
    accel, separation = _validate_arrays(accel_ratio, separation)
    return (np.sin(_rapidity(accel, separation)) / _distance(accel, separation))[()]


def interaction_strength(accel_ratio, separation):
    """D / gamma0 = cos(2/a asinh(aL/2)) / (4 L sqrt(1 + a^2 L^2 / 4)); sign kept."""
    accel, separation = _validate_arrays(accel_ratio, separation)
    return (0.25 * np.cos(_rapidity(accel, separation))
            / _distance(accel, separation))[()]


@dataclass(frozen=True)
class SimConfig:
    """Dimensionless physical parameters of one simulation point."""

    accel_ratio: float
    separation: float
    gamma0: float = 1.0
    include_interaction: bool = True

    def __post_init__(self):
        check_finite('accel_ratio', self.accel_ratio)
        check_finite('separation', self.separation)
        check_finite('gamma0', self.gamma0)
        if self.accel_ratio < 0.0:
            raise InvalidStateError('accel-negative',
                                    f'a/omega must be >= 0, got {self.accel_ratio}.')
        if self.separation <= 0.0:
            raise InvalidStateError('separation-nonpositive',
                                    f'omega*L must be > 0, got {self.separation}.')
        if self.gamma0 <= 0.0:
            raise InvalidStateError('gamma0-nonpositive',
                                    f'gamma0 must be > 0, got {self.gamma0}.')

    def switched(self, include_interaction: bool) -> 'SimConfig':
        """Same point with the interaction switch set."""
        return SimConfig(self.accel_ratio, self.separation, self.gamma0, include_interaction)


@dataclass(frozen=True)
class Coefficients:
    """GKLS rate constants; a2 = f*a1 and b2 = f*b1 hold exactly.

    Fields are floats for a single point and numpy arrays for coefficient_grid.
    """

    a1: float
    a2: float
    b1: float
    b2: float
    d: float
    f: float
    gamma0: float = 1.0
    include_interaction: bool = True

    def is_inertial(self) -> bool:
        """True when absorption vanishes (a1 == b1)."""
        return bool(np.all(self.a1 == self.b1))

    def to_dict(self) -> dict:
        """Plain mapping, for output."""
        return {'a1': float(self.a1), 'a2': float(self.a2), 'b1': float(self.b1),
                'b2': float(self.b2), 'd': float(self.d), 'f': float(self.f),
                'gamma0': float(self.gamma0),
                'include_interaction': bool(self.include_interaction)}


def _assemble(accel, separation, gamma0, include_interaction):
    f = np.asarray(geometric_factor(accel, separation))
    b1 = np.full_like(f, gamma0 / 4.0)
    a1 = b1 * np.asarray(coth_pi_over(accel))
    if include_interaction:
        d = gamma0 * np.asarray(interaction_strength(accel, separation))
    else:
        d = np.zeros_like(f)
    return Coefficients(a1=a1[()], a2=(f * a1)[()], b1=b1[()], b2=(f * b1)[()],
                        d=d[()], f=f[()], gamma0=gamma0,
                        include_interaction=include_interaction)


def coefficients(config: SimConfig) -> Coefficients:
    """Rate constants A1, A2, B1, B2, D and the geometric factor for one point."""
    coeffs = _assemble(config.accel_ratio, config.separation, config.gamma0,
                       config.include_interaction)
    return Coefficients(a1=float(coeffs.a1), a2=float(coeffs.a2), b1=float(coeffs.b1),
                        b2=float(coeffs.b2), d=float(coeffs.d), f=float(coeffs.f),
                        gamma0=config.gamma0,
                        include_interaction=config.include_interaction)


def coefficient_grid(accel_ratios, separations, gamma0: float = 1.0,
                     include_interaction: bool = True) -> Coefficients:
    """Coefficients broadcast over arrays of accelerations and separations."""
    check_finite('gamma0', gamma0)
    if gamma0 <= 0.0:
        raise InvalidStateError('gamma0-nonpositive', f'gamma0 must be > 0, got {gamma0}.')
    accel, separation = np.broadcast_arrays(np.asarray(accel_ratios, dtype=float),
                                            np.asarray(separations, dtype=float))
    return _assemble(accel, separation, gamma0, include_interaction)
