"""Figure-level analyses: generation regions, rate and maximum-concurrence sweeps, asymptotics."""
from dataclasses import dataclass, field
import math

import numpy as np

from unruh_pair.coefficients import (Coefficients, SimConfig, coefficient_grid,
                                     coefficients as make_coefficients)
from unruh_pair.errors import NumericError, UsageError
from unruh_pair.xstate import (InitialSpec, PopulationPropagator, XState, diagonal_generator,
                               evolve, sample_uniform, steady_state)
import unruh_pair.concurrence as cc
import unruh_pair.console as con
import unruh_pair.sweep_manager as sm

AXES = ('accel', 'sep')
AXIS_LABELS = {'accel': 'a_over_omega', 'sep': 'omega_l'}

DEFAULT_TAU_MAX = 20.0
MAX_HORIZON_DOUBLINGS = 3
HORIZON_FLOOR = 1e-6
GOLDEN_TOLERANCE = 1e-10
MONOTONE_RELATIVE_TOLERANCE = 1e-9
MIN_MONOTONE_POINTS = 8

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI_SQUARE = (3.0 - math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class SweepResult:
    """Curves over one parameter axis, for the interaction switched on and off."""

    axis_name: str
    axis: np.ndarray
    columns: dict
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=float)
        if axis.ndim != 1 or np.any(np.diff(axis) <= 0.0):
            raise UsageError('axis-invalid', 'Sweep axis must be strictly increasing.')
        for name, values in self.columns.items():
            if len(values) != len(axis):
                raise UsageError('axis-invalid', f'Column {name} does not match the axis.')

    def column(self, name: str) -> np.ndarray:
        """One output column as an array."""
        return np.asarray(self.columns[name])


@dataclass(frozen=True)
class RegionMask:
    """Generation verdicts on an (omega L, a/omega) grid; arrays indexed [a, L]."""

    omega_l: np.ndarray
    a_over_omega: np.ndarray
    with_d: np.ndarray
    without_d: np.ndarray
    meta: dict = field(default_factory=dict)

    def enlargement(self) -> float:
        """Relative growth of the generation region when D is switched on."""
        base = int(self.without_d.sum())
        return (int(self.with_d.sum()) - base) / max(base, 1)


@dataclass(frozen=True)
class Monotonicity:
    """Shape of one curve."""

    kind: str
    argmax: int


def _axis_values(lo, hi, resolution, spacing):
    if not (lo > 0.0 and hi > lo):
        raise UsageError('range-invalid', f'Need 0 < lo < hi, got ({lo}, {hi}).')
    if resolution < 2:
        raise UsageError('grid-invalid', f'Need at least 2 grid points, got {resolution}.')
    if spacing == 'log':
        return np.geomspace(lo, hi, resolution)
    if spacing == 'linear':
        return np.linspace(lo, hi, resolution)
    raise UsageError('spacing-invalid', f'Unknown spacing {spacing!r}.')


def region_scan(l_range, a_range, resolution, gamma0: float = 1.0) -> RegionMask:
    """Where entanglement generation from |10> is possible, with and without D."""
    if isinstance(resolution, int):
        resolution = (resolution, resolution)
    omega_l = _axis_values(l_range[0], l_range[1], resolution[0], 'linear')
    a_over_omega = _axis_values(a_range[0], a_range[1], resolution[1], 'linear')
    accel, sep = np.meshgrid(a_over_omega, omega_l, indexing='ij')
    with_d = cc.generation_possible(coefficient_grid(accel, sep, gamma0, True))
    without_d = cc.generation_possible(coefficient_grid(accel, sep, gamma0, False))
    con.trace(f'Region scan: {int(with_d.sum())} nodes with D, {int(without_d.sum())} without.')
    meta = {'l_range': list(l_range), 'a_range': list(a_range),
            'resolution': list(resolution), 'gamma0': gamma0}
    return RegionMask(omega_l=omega_l, a_over_omega=a_over_omega,
                      with_d=np.asarray(with_d), without_d=np.asarray(without_d), meta=meta)


def _point_config(fixed_axis, fixed_value, x, gamma0, include_interaction):
    if fixed_axis == 'sep':
        return SimConfig(x, fixed_value, gamma0, include_interaction)
    return SimConfig(fixed_value, x, gamma0, include_interaction)


def _check_axis(fixed_axis):
    if fixed_axis not in AXES:
        raise UsageError('axis-invalid', f'Fixed axis must be one of {AXES}, got {fixed_axis!r}.')


def _swept_axis(fixed_axis):
    return 'accel' if fixed_axis == 'sep' else 'sep'


def rate_sweep(fixed_axis: str, fixed_value: float, value_range, resolution: int,
               initial: InitialSpec, gamma0: float = 1.0, spacing: str = 'log',
               workers: int = 1, show_progress: bool = False) -> SweepResult:
    """C'(0) along the free axis, D on and off; clamped values plus the raw K1'(0)."""
    _check_axis(fixed_axis)
    values = _axis_values(value_range[0], value_range[1], resolution, spacing)
    state0 = initial.build()

    def evaluate(x):
        rates = []
        for switch in (True, False):
            coeffs = make_coefficients(_point_config(fixed_axis, fixed_value, x, gamma0, switch))
            rates.append(cc.initial_rate(state0, coeffs, initial.kind,
                                         initial.theta, initial.phi))
        return rates

    results = sm.run_tasks(values.tolist(), evaluate, workers, show_progress)
    columns = {
        'with_d': np.array([r[0].clamped for r in results]),
        'without_d': np.array([r[1].clamped for r in results]),
        'raw_with_d': np.array([r[0].raw for r in results]),
        'raw_without_d': np.array([r[1].raw for r in results]),
    }
    meta = {'quantity': 'rate', 'fixed_axis': fixed_axis, 'fixed_value': fixed_value,
            'range': list(value_range), 'resolution': resolution, 'spacing': spacing,
            'gamma0': gamma0, 'init': initial.kind, 'theta': initial.theta, 'phi': initial.phi}
    return SweepResult(_swept_axis(fixed_axis), values, columns, meta)


def sampling_step(coeffs: Coefficients) -> float:
    """Dense sampling step min(1/(40 A1), pi/(20 |D|))."""
    step = 1.0 / (40.0 * coeffs.a1)
    if coeffs.d != 0.0:
        step = min(step, math.pi / (20.0 * abs(coeffs.d)))
    return step


def golden_section_max(func, a, b, tol=GOLDEN_TOLERANCE):
    """Golden-section search for a maximum of func on [a, b]; returns (x, func(x))."""
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, func(x)

    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = func(c)
    yd = func(d)
    for _ in range(n - 1):
        if yc > yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = func(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = func(d)

    return (c, yc) if yc > yd else (d, yd)


def max_concurrence(state0: XState, coeffs: Coefficients,
                    tau_max: float = DEFAULT_TAU_MAX) -> tuple:
    """(c_max, tau_star): dense sampling on [0, tau_max], then golden-section refinement."""
    if not tau_max > 0.0:
        raise UsageError('tau-invalid', f'tau_max must be > 0, got {tau_max}.')
    intervals = max(2, math.ceil(tau_max / sampling_step(coeffs)))
    dtau = tau_max / intervals
    propagator = PopulationPropagator(diagonal_generator(coeffs))
    states = sample_uniform(state0, coeffs, propagator, dtau, intervals + 1)
    curve = np.array([cc.concurrence_x(state).c for state in states])

    if curve[-1] > HORIZON_FLOOR and curve[-1] > curve[-2]:
        raise NumericError('horizon-too-short',
                           f'C({tau_max}) = {curve[-1]:.3g} is still rising.')

    best = int(np.argmax(curve))
    lo = max(best - 1, 0) * dtau
    hi = min(best + 1, intervals) * dtau

    def concurrence_at(tau):
        return cc.concurrence_x(evolve(state0, coeffs, tau, propagator)).c

    tau_star, c_star = golden_section_max(concurrence_at, lo, hi)
    if c_star < curve[best]:
        return float(curve[best]), best * dtau
    return float(c_star), float(tau_star)


def max_concurrence_auto(state0: XState, coeffs: Coefficients,
                         tau_max: float = DEFAULT_TAU_MAX,
                         doublings: int = MAX_HORIZON_DOUBLINGS) -> tuple:
    """max_concurrence, doubling the horizon up to `doublings` times when it is too short."""
    for attempt in range(doublings + 1):
        try:
            return max_concurrence(state0, coeffs, tau_max)
        except NumericError as e:
            if e.code != 'horizon-too-short' or attempt == doublings:
                raise
            con.trace(f'{e}; doubling the horizon to {2.0 * tau_max}.')
            tau_max *= 2.0
    raise NumericError('horizon-too-short', 'Horizon doubling exhausted.')


def max_concurrence_sweep(fixed_axis: str, fixed_value: float, value_range, resolution: int,
                          initial: InitialSpec, gamma0: float = 1.0, spacing: str = 'log',
                          tau_max: float = DEFAULT_TAU_MAX, workers: int = 1,
                          show_progress: bool = False) -> SweepResult:
    """Maximum concurrence during evolution along the free axis, D on and off."""
    _check_axis(fixed_axis)
    values = _axis_values(value_range[0], value_range[1], resolution, spacing)
    state0 = initial.build()

    def evaluate(x):
        found = []
        for switch in (True, False):
            coeffs = make_coefficients(_point_config(fixed_axis, fixed_value, x, gamma0, switch))
            found.append(max_concurrence_auto(state0, coeffs, tau_max))
        return found

    results = sm.run_tasks(values.tolist(), evaluate, workers, show_progress)
    columns = {
        'with_d': np.array([r[0][0] for r in results]),
        'without_d': np.array([r[1][0] for r in results]),
        'tau_with_d': np.array([r[0][1] for r in results]),
        'tau_without_d': np.array([r[1][1] for r in results]),
    }
    meta = {'quantity': 'maxc', 'fixed_axis': fixed_axis, 'fixed_value': fixed_value,
            'range': list(value_range), 'resolution': resolution, 'spacing': spacing,
            'gamma0': gamma0, 'tau_max': tau_max, 'init': initial.kind,
            'theta': initial.theta, 'phi': initial.phi}
    return SweepResult(_swept_axis(fixed_axis), values, columns, meta)


def asymptotic_concurrence(coeffs: Coefficients, state0: XState = None) -> float:
    """Concurrence of the stationary state; the coherences of state0 decay as exp(-4 A1 tau)."""
    del state0
    return cc.concurrence_x(steady_state(coeffs)).c


def classify(values) -> Monotonicity:
    """Monotone-decreasing, monotone-increasing or non-monotone, with the argmax index."""
    values = np.asarray(values, dtype=float)
    if len(values) < MIN_MONOTONE_POINTS:
        raise UsageError('curve-too-short',
                         f'Need at least {MIN_MONOTONE_POINTS} points, got {len(values)}.')
    tol = MONOTONE_RELATIVE_TOLERANCE * np.abs(values).max()
    steps = np.diff(values)
    argmax = int(np.argmax(values))
    if np.all(steps <= tol):
        return Monotonicity('monotone-decreasing', argmax)
    if np.all(steps >= -tol):
        return Monotonicity('monotone-increasing', argmax)
    return Monotonicity('non-monotone', argmax)


def monotonicity_report(sweep: SweepResult) -> dict:
    """Classification of the with_d and without_d curves (and raw rates when present)."""
    names = [name for name in ('with_d', 'without_d', 'raw_with_d', 'raw_without_d')
             if name in sweep.columns]
    return {name: classify(sweep.column(name)) for name in names}
