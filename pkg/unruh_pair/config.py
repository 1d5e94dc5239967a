"""Run configuration: defaults, YAML/JSON config files and the RunConfig object."""
import math
import os
import pathlib as plib

import yaml

from unruh_pair.coefficients import SimConfig
from unruh_pair.errors import InvalidStateError, UsageError
from unruh_pair.xstate import InitialSpec
import unruh_pair.console as con

COMMANDS = ('coeffs', 'evolve', 'rate', 'region', 'sweep', 'maxc', 'steady', 'oracle', 'figure')
FORMATS = ('csv', 'json')
QUANTITIES = ('rate', 'maxc')
X_STATE_KEYS = ('p_gg', 'p_ee', 'p_aa', 'p_ss', 're_as', 'im_as', 're_ge', 'im_ge')

default_config = {
    'command': None,
    'accel': None,
    'sep': None,
    'gamma0': 1.0,
    'with_d': True,
    'init': 'product-eg',
    'theta': None,
    'phi': None,
    'x_state': None,
    'tau_max': 20.0,
    'samples': 201,
    'grid': None,
    'axis': 'accel',
    'lo': None,
    'hi': None,
    'spacing': None,
    'quantity': 'rate',
    'raw': False,
    'free_hamiltonian': False,
    'dt': None,
    'out': None,
    'format': 'csv',
    'threads': 0,
    'gnuplot_hint': False,
    'figure': None,
    'panel': 1,
}

# Sweep windows per swept axis, and the region-scan window.
DEFAULT_SWEEP_RANGES = {'accel': (0.01, 20.0), 'sep': (0.05, 50.0)}
DEFAULT_SWEEP_GRID = 200
DEFAULT_REGION_L = (0.02, 6.0)
DEFAULT_REGION_A = (10.0 / 300.0, 10.0)
DEFAULT_REGION_GRID = 300

_THETA = '0.5235987755982988'
_PHI_PLUS = '0.7853981633974483'
_PHI_MINUS = '-0.7853981633974483'


def _panels(base, flag, values):
    return [base + [flag, value] for value in values]


# Command lines reproducing each figure's dataset, one list per panel.
FIGURE_PRESETS = {
    1: [['region']],
    2: _panels(['sweep', '--quantity', 'rate', '--axis', 'accel'], '--sep', ['0.3', '3', '30']),
    3: _panels(['sweep', '--quantity', 'rate', '--axis', 'sep'], '--accel', ['0.1', '1', '10']),
    4: [['evolve', '--accel', '0.1', '--sep', '0.5', '--tau-max', '20', '--with-d'],
        ['evolve', '--accel', '0.1', '--sep', '0.5', '--tau-max', '20', '--no-d']],
    5: _panels(['sweep', '--quantity', 'maxc', '--axis', 'accel'], '--sep', ['0.3', '3', '30']),
    6: _panels(['sweep', '--quantity', 'maxc', '--axis', 'sep'], '--accel', ['0.1', '1', '10']),
    7: [base + ['--theta', _THETA, '--phi', phi]
        for phi in (_PHI_PLUS, _PHI_MINUS)
        for base in (_panels(['sweep', '--quantity', 'rate', '--init', 'superposition',
                              '--axis', 'accel'], '--sep', ['0.3', '3', '30'])
                     + _panels(['sweep', '--quantity', 'rate', '--init', 'superposition',
                                '--axis', 'sep'], '--accel', ['0.1', '1', '10']))],
    8: [['evolve', '--accel', '0.5', '--sep', '0.3', '--init', 'superposition',
         '--theta', _THETA, '--phi', phi, switch]
        for phi in (_PHI_PLUS, _PHI_MINUS) for switch in ('--with-d', '--no-d')],
}


CONFIG_FILE_NAME = 'unruh_pair.yml'


def search_for_config_file(path):
    """Search the directory and its parents for unruh_pair.yml."""
    current_path = plib.Path(path)
    if current_path.is_file():
        current_path = current_path.parent
    for parent in (current_path, *current_path.parents):
        config_file_path = os.path.join(parent.as_posix(), CONFIG_FILE_NAME)
        if os.path.exists(config_file_path):
            return config_file_path
    return ''


def load(file_path):
    """Load a YAML or JSON config file."""
    try:
        with open(file_path, 'r', encoding='utf-8') as file:
            config = yaml.safe_load(file)
    except FileNotFoundError as e:
        raise UsageError('config-not-found', f'{file_path} not found.') from e
    except yaml.YAMLError as e:
        raise UsageError('config-invalid', f'{file_path} is invalid: {e}') from e
    if config is None:
        con.trace(f'{file_path} is empty; using defaults.')
        return {}
    if not isinstance(config, dict):
        raise UsageError('config-invalid', f'{file_path} must hold a mapping.')
    unknown = sorted(set(config) - set(default_config))
    if unknown:
        raise UsageError('config-unknown-key', f'Unknown config keys: {", ".join(unknown)}.')
    return config


def _get(config, key):
    if key in config and config[key] is not None:
        return config[key]
    con.trace(f'No {key} given; using {default_config[key]!r}.')
    return default_config[key]


def _number(config, key, kind=float):
    value = _get(config, key)
    if value is None:
        return None
    try:
        value = kind(value)
    except (TypeError, ValueError) as e:
        raise UsageError('config-invalid', f'{key} must be a number, got {value!r}.') from e
    if isinstance(value, float) and math.isnan(value):
        raise InvalidStateError('nan-input', f'{key} must not be NaN.')
    return value


def _choice(config, key, choices):
    value = _get(config, key)
    if value is not None and value not in choices:
        raise UsageError('config-invalid', f'{key} must be one of {choices}, got {value!r}.')
    return value


def _flag(config, key):
    value = _get(config, key)
    if not isinstance(value, bool):
        raise UsageError('config-invalid', f'{key} must be true or false, got {value!r}.')
    return value


def get_x_state(config):
    """Explicit X-state elements as an 8-tuple, or None."""
    value = _get(config, 'x_state')
    if value is None:
        return None
    if isinstance(value, dict):
        missing = [key for key in X_STATE_KEYS if key not in value]
        if missing:
            raise UsageError('x-state-incomplete', f'x_state lacks {", ".join(missing)}.')
        value = [value[key] for key in X_STATE_KEYS]
    if isinstance(value, str):
        raise UsageError('config-invalid', f'x_state must be a list or mapping, got {value!r}.')
    try:
        values = tuple(float(item) for item in value)
    except (TypeError, ValueError) as e:
        raise UsageError('config-invalid', f'x_state must hold numbers, got {value!r}.') from e
    if len(values) != len(X_STATE_KEYS):
        raise UsageError('x-state-incomplete', f'x_state needs {len(X_STATE_KEYS)} values.')
    return values


def get_range(config, lo_default, hi_default):
    """(lo, hi) window."""
    lo = _number(config, 'lo')
    hi = _number(config, 'hi')
    return (lo_default if lo is None else lo, hi_default if hi is None else hi)


class RunConfig:
    """Validated settings of one command-line run."""

    def __init__(self, config: dict):
        self._values = {
            'command': _choice(config, 'command', COMMANDS),
            'accel': _number(config, 'accel'),
            'sep': _number(config, 'sep'),
            'gamma0': _number(config, 'gamma0'),
            'with_d': _flag(config, 'with_d'),
            'init': _choice(config, 'init', ('product-eg', 'superposition', 'x-state')),
            'theta': _number(config, 'theta'),
            'phi': _number(config, 'phi'),
            'x_state': get_x_state(config),
            'tau_max': _number(config, 'tau_max'),
            'samples': _number(config, 'samples', int),
            'grid': _number(config, 'grid', int),
            'axis': _choice(config, 'axis', ('accel', 'sep')),
            'lo': _number(config, 'lo'),
            'hi': _number(config, 'hi'),
            'spacing': _choice(config, 'spacing', (None, 'log', 'linear')),
            'quantity': _choice(config, 'quantity', QUANTITIES),
            'raw': _flag(config, 'raw'),
            'free_hamiltonian': _flag(config, 'free_hamiltonian'),
            'dt': _number(config, 'dt'),
            'out': _get(config, 'out'),
            'format': _choice(config, 'format', FORMATS),
            'threads': _number(config, 'threads', int),
            'gnuplot_hint': _flag(config, 'gnuplot_hint'),
            'figure': _number(config, 'figure', int),
            'panel': _number(config, 'panel', int),
        }
        if self._values['x_state'] is not None:
            self._values['x_state'] = dict(zip(X_STATE_KEYS, self._values['x_state']))
        self._validate()

    def _validate(self):
        values = self._values
        if values['command'] is None:
            raise UsageError('command-missing', 'No subcommand given.')
        if values['accel'] is not None and values['accel'] < 0.0:
            raise InvalidStateError('accel-negative',
                                    f'a/omega must be >= 0, got {values["accel"]}.')
        if values['sep'] is not None and values['sep'] <= 0.0:
            raise InvalidStateError('separation-nonpositive',
                                    f'omega*L must be > 0, got {values["sep"]}.')
        if values['gamma0'] <= 0.0:
            raise InvalidStateError('gamma0-nonpositive',
                                    f'gamma0 must be > 0, got {values["gamma0"]}.')
        angles = values['theta'] is not None or values['phi'] is not None
        if angles and values['init'] != 'superposition':
            raise UsageError('conflicting-flags', '--theta/--phi need --init superposition.')
        if values['init'] == 'superposition' and (values['theta'] is None or values['phi'] is None):
            raise UsageError('missing-parameter', '--init superposition needs --theta and --phi.')
        if values['x_state'] is not None and values['init'] != 'x-state':
            raise UsageError('conflicting-flags', '--x-state needs --init x-state.')
        if values['init'] == 'x-state' and values['x_state'] is None:
            raise UsageError('x-state-incomplete', '--init x-state needs --x-state.')
        if values['samples'] < 2:
            raise UsageError('samples-invalid',
                             f'--samples must be >= 2, got {values["samples"]}.')
        if values['tau_max'] <= 0.0:
            raise UsageError('tau-invalid', f'--tau-max must be > 0, got {values["tau_max"]}.')
        if values['grid'] is not None and values['grid'] < 2:
            raise UsageError('grid-invalid', f'--grid must be >= 2, got {values["grid"]}.')
        if values['command'] == 'figure':
            if values['figure'] not in FIGURE_PRESETS:
                raise UsageError('figure-unknown',
                                 f'figure needs a number in 1..{len(FIGURE_PRESETS)}.')
            if not 1 <= values['panel'] <= len(FIGURE_PRESETS[values['figure']]):
                raise UsageError('panel-unknown',
                                 f'Figure {values["figure"]} has '
                                 f'{len(FIGURE_PRESETS[values["figure"]])} panels.')

    def __eq__(self, other):
        return isinstance(other, RunConfig) and self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(tuple(sorted((k, repr(v)) for k, v in self._values.items())))

    def get(self, key):
        """Raw value of one key."""
        return self._values[key]

    def get_command(self):
        """Get subcommand."""
        return self._values['command']

    def require(self, *keys):
        """Values of keys the current command cannot run without."""
        missing = [key for key in keys if self._values[key] is None]
        if missing:
            flags = ', '.join('--' + key.replace('_', '-') for key in missing)
            raise UsageError('missing-parameter',
                             f'{self._values["command"]} needs {flags}.')
        return [self._values[key] for key in keys]

    def get_sim_config(self, include_interaction=None) -> SimConfig:
        """SimConfig of the configured point."""
        accel, sep = self.require('accel', 'sep')
        if include_interaction is None:
            include_interaction = self._values['with_d']
        return SimConfig(accel, sep, self._values['gamma0'], include_interaction)

    def get_initial_spec(self) -> InitialSpec:
        """Initial-state selection."""
        kind = self._values['init']
        if kind == 'superposition':
            return InitialSpec(kind, self._values['theta'], self._values['phi'])
        if kind == 'x-state':
            elements = tuple(self._values['x_state'][key] for key in X_STATE_KEYS)
            return InitialSpec(kind, elements=elements)
        return InitialSpec(kind)

    def get_output_path(self):
        """Output path, or None for stdout."""
        return self._values['out']

    def get_format(self):
        """csv or json."""
        return self._values['format']

    def to_dict(self) -> dict:
        """Full echo of the settings; RunConfig(to_dict()) reproduces this object."""
        values = dict(self._values)
        if values['x_state'] is not None:
            values['x_state'] = dict(values['x_state'])
        return values


def merge(file_config: dict, flags: dict) -> dict:
    """Explicit flags over file values over defaults."""
    merged = dict(default_config)
    for source in (file_config, flags):
        for key, value in source.items():
            if value is not None:
                merged[key] = value
    return merged
