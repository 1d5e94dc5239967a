"""Main functions."""
import argparse
import os
import sys

import numpy as np

from unruh_pair.coefficients import coefficients as make_coefficients, unruh_temperature
from unruh_pair.errors import SimulationError, UsageError
import unruh_pair.concurrence as cc
import unruh_pair.config as cfg
import unruh_pair.console as con
import unruh_pair.gkls as gk
import unruh_pair.output as out
import unruh_pair.sweep as sw
import unruh_pair.thread_manager as tm
import unruh_pair.xstate as xs

SWITCHES = (True, False)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser reporting problems as UsageError instead of exiting."""

    def error(self, message):
        raise UsageError('usage', message)


def _x_state_list(text):
    try:
        return [float(item) for item in text.split(',')]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f'invalid x-state list {text!r}') from e


def build_parser() -> argparse.ArgumentParser:
    """Command-line parser; every flag defaults to None so config files can fill gaps."""
    parser = _Parser(prog='unruh-pair',
                     description='Entanglement dynamics of two uniformly accelerated atoms.')
    parser.add_argument('command', choices=cfg.COMMANDS, help='What to compute.')
    parser.add_argument('figure', nargs='?', type=int, default=None,
                        help='Figure number for the figure command.')
    # Physical point.
    parser.add_argument('--accel', type=float, help='Acceleration a/omega.')
    parser.add_argument('--sep', type=float, help='Separation omega*L.')
    parser.add_argument('--gamma0', type=float, help='Inertial decay rate (default 1).')
    switch = parser.add_mutually_exclusive_group()
    switch.add_argument('--with-d', dest='with_d', action='store_const', const=True,
                        help='Keep the environment-induced interaction (default).')
    switch.add_argument('--no-d', dest='with_d', action='store_const', const=False,
                        help='Drop the environment-induced interaction.')
    # Initial state.
    parser.add_argument('--init', choices=('product-eg', 'superposition', 'x-state'),
                        help='Initial state.')
    parser.add_argument('--theta', type=float, help='Superposition angle theta.')
    parser.add_argument('--phi', type=float, help='Superposition phase phi.')
    parser.add_argument('--x-state', dest='x_state', type=_x_state_list,
                        help='p_gg,p_ee,p_aa,p_ss,re_as,im_as,re_ge,im_ge.')
    # Time and grids.
    parser.add_argument('--tau-max', dest='tau_max', type=float, help='Evolution horizon.')
    parser.add_argument('--samples', type=int, help='Trajectory sample count.')
    parser.add_argument('--grid', type=int, help='Sweep or region resolution.')
    parser.add_argument('--axis', choices=sw.AXES, help='Swept axis.')
    parser.add_argument('--lo', type=float, help='Lower end of the swept axis.')
    parser.add_argument('--hi', type=float, help='Upper end of the swept axis.')
    parser.add_argument('--spacing', choices=('log', 'linear'), help='Sweep grid spacing.')
    parser.add_argument('--quantity', choices=cfg.QUANTITIES, help='Swept quantity.')
    parser.add_argument('--raw', action='store_const', const=True,
                        help='Plot the unclamped K1\'(0) in rate sweeps.')
    # Oracle.
    parser.add_argument('--free-hamiltonian', dest='free_hamiltonian', action='store_const',
                        const=True, help='Keep the free atomic Hamiltonian in the oracle.')
    parser.add_argument('--dt', type=float, help='Oracle integration step.')
    # Output.
    parser.add_argument('--out', type=str, help='Output file (default stdout).')
    parser.add_argument('--format', choices=cfg.FORMATS, help='Output format.')
    parser.add_argument('--panel', type=int, help='Panel of a figure preset (default 1).')
    parser.add_argument('--threads', type=int, help='Worker threads (0 = automatic).')
    parser.add_argument('--gnuplot-hint', dest='gnuplot_hint', action='store_const',
                        const=True, help='Print a plotting command as comments.')
    parser.add_argument('--config', type=str, default='', help='YAML or JSON config file.')
    # Set logging verbosity.
    parser.add_argument('-v', '--verbosity', type=int, default=1,
                        help='Log to stderr. 0: Quiet, 1: Information, 2: Output debug logs.')
    return parser


def _flags(arguments) -> dict:
    flags = {key: value for key, value in vars(arguments).items()
             if key not in ('config', 'verbosity') and value is not None}
    return flags


def parse_cli(argv) -> cfg.RunConfig:
    """Command line (and optional config file) to a validated RunConfig."""
    arguments = build_parser().parse_args(argv)
    con.set_verbosity(con.verbosity_from_level(arguments.verbosity))
    file_config = cfg.load(arguments.config) if arguments.config else {}
    flags = _flags(arguments)

    command = flags.get('command', file_config.get('command'))
    if command == 'figure':
        merged = cfg.merge(file_config, flags)
        figure = merged['figure']
        panel = merged['panel']
        if figure not in cfg.FIGURE_PRESETS:
            raise UsageError('figure-unknown',
                             f'figure needs a number in 1..{len(cfg.FIGURE_PRESETS)}.')
        panels = cfg.FIGURE_PRESETS[figure]
        if not 1 <= panel <= len(panels):
            raise UsageError('panel-unknown', f'Figure {figure} has {len(panels)} panels.')
        preset = _flags(build_parser().parse_args(panels[panel - 1]))
        con.trace(f'Figure {figure} panel {panel}: {" ".join(panels[panel - 1])}')
        overrides = {key: value for key, value in flags.items()
                     if key not in ('command', 'figure', 'panel')}
        preset.update(overrides)
        preset['figure'] = figure
        preset['panel'] = panel
        return cfg.RunConfig(cfg.merge(file_config, preset))

    return cfg.RunConfig(cfg.merge(file_config, flags))


def _echo(run_config: cfg.RunConfig, **extra) -> dict:
    meta = run_config.to_dict()
    meta.update(extra)
    return meta


def _workers(run_config):
    return tm.worker_count(run_config.get('threads'))


def _execute_coeffs(run_config) -> out.Table:
    sim_config = run_config.get_sim_config()
    record = make_coefficients(sim_config).to_dict()
    record['unruh_temperature'] = float(unruh_temperature(sim_config.accel_ratio))
    return out.record_table([record], _echo(run_config))


def _execute_evolve(run_config) -> out.Table:
    coeffs = make_coefficients(run_config.get_sim_config())
    state0 = run_config.get_initial_spec().build()
    samples = xs.trajectory(state0, coeffs, run_config.get('tau_max'), run_config.get('samples'))
    return out.trajectory_table(samples, _echo(run_config, **coeffs.to_dict()))


def _execute_rate(run_config) -> out.Table:
    initial = run_config.get_initial_spec()
    state0 = initial.build()
    records = []
    for switch in SWITCHES:
        coeffs = make_coefficients(run_config.get_sim_config(switch))
        rate = cc.initial_rate(state0, coeffs, initial.kind, initial.theta, initial.phi)
        records.append({'include_interaction': switch, 'analytic': rate.raw,
                        'clamped': rate.clamped,
                        'numerical': cc.numerical_initial_rate(state0, coeffs),
                        'source': rate.source})
    return out.record_table(records, _echo(run_config))


def _execute_region(run_config) -> out.Table:
    grid = run_config.get('grid') or cfg.DEFAULT_REGION_GRID
    mask = sw.region_scan(cfg.DEFAULT_REGION_L, cfg.DEFAULT_REGION_A, grid,
                          run_config.get('gamma0'))
    con.error(f'Generation region grows by {100.0 * mask.enlargement():.1f}% with D.')
    return out.region_table(mask, _echo(run_config))


def _execute_sweep(run_config) -> out.Table:
    axis = run_config.get('axis')
    fixed_axis = 'sep' if axis == 'accel' else 'accel'
    (fixed_value,) = run_config.require(fixed_axis)
    lo, hi = cfg.get_range(run_config.to_dict(), *cfg.DEFAULT_SWEEP_RANGES[axis])
    grid = run_config.get('grid') or cfg.DEFAULT_SWEEP_GRID
    spacing = run_config.get('spacing') or 'log'
    initial = run_config.get_initial_spec()
    show_progress = con.ConsoleFlags().get_verbosity() != con.Verbosity.QUIET

    if run_config.get('quantity') == 'rate':
        sweep = sw.rate_sweep(fixed_axis, fixed_value, (lo, hi), grid, initial,
                              run_config.get('gamma0'), spacing, _workers(run_config),
                              show_progress)
        prefix = 'raw_' if run_config.get('raw') else ''
    else:
        sweep = sw.max_concurrence_sweep(fixed_axis, fixed_value, (lo, hi), grid, initial,
                                         run_config.get('gamma0'), spacing,
                                         run_config.get('tau_max'), _workers(run_config),
                                         show_progress)
        prefix = ''

    shapes = {}
    if grid >= sw.MIN_MONOTONE_POINTS:
        shapes = {name: shape.kind for name, shape in sw.monotonicity_report(sweep).items()}
        con.trace(f'Curve shapes: {shapes}')
    plotted = 'raw' if prefix else ('clamped' if sweep.meta['quantity'] == 'rate' else 'c_max')
    return out.sweep_table(sweep, prefix, _echo(run_config, plotted=plotted, shapes=shapes))


def _execute_maxc(run_config) -> out.Table:
    state0 = run_config.get_initial_spec().build()
    records = []
    for switch in SWITCHES:
        coeffs = make_coefficients(run_config.get_sim_config(switch))
        c_max, tau_star = sw.max_concurrence_auto(state0, coeffs, run_config.get('tau_max'))
        records.append({'include_interaction': switch, 'c_max': c_max, 'tau_star': tau_star,
                        'c_asymptotic': sw.asymptotic_concurrence(coeffs, state0)})
    return out.record_table(records, _echo(run_config))


def _execute_steady(run_config) -> out.Table:
    coeffs = make_coefficients(run_config.get_sim_config())
    state = xs.steady_state(coeffs)
    record = state.to_dict()
    record['c'] = cc.concurrence_x(state).c
    return out.record_table([record], _echo(run_config))


def _execute_oracle(run_config) -> out.Table:
    coeffs = make_coefficients(run_config.get_sim_config())
    state0 = run_config.get_initial_spec().build()
    free = run_config.get('free_hamiltonian')
    samples = xs.trajectory(state0, coeffs, run_config.get('tau_max'), run_config.get('samples'))
    taus = [tau for tau, _ in samples]
    data = gk.build_gkls(coeffs)
    dense = gk.integrate_samples(gk.x_to_dense(state0), data, taus, run_config.get('dt'), free)

    deviations = [gk.x_deviation(rho, state, free) for rho, (_, state) in zip(dense, samples)]
    columns = {
        'tau': taus,
        'deviation': deviations,
        'c_x': [cc.concurrence_x(state).c for _, state in samples],
        'c_dense': [cc.concurrence_general(rho) for rho in dense],
    }
    worst = float(np.max(deviations))
    con.error(f'Largest X-state/oracle deviation: {worst:.3g}.')
    meta = _echo(run_config, max_deviation=worst,
                 completely_positive=gk.is_completely_positive(data))
    return out.Table(columns, meta)


_COMMANDS = {
    'coeffs': _execute_coeffs,
    'evolve': _execute_evolve,
    'rate': _execute_rate,
    'region': _execute_region,
    'sweep': _execute_sweep,
    'maxc': _execute_maxc,
    'steady': _execute_steady,
    'oracle': _execute_oracle,
}


def run_config_command(run_config: cfg.RunConfig) -> out.Table:
    """Compute the artifact of a validated RunConfig."""
    return _COMMANDS[run_config.get_command()](run_config)


def main(argv) -> int:
    """Main function."""
    try:
        run_config = parse_cli(argv)
        table = run_config_command(run_config)
        path = run_config.get_output_path()
        out.emit(table, run_config.get_format(), path)
        if run_config.get('gnuplot_hint'):
            out.gnuplot_hint(table, path, run_config.get_format())
    except SimulationError as e:
        con.trace(f'{type(e).__name__} raised.')
        con.fatal(f'error: {e}')
        return e.exit_code
    return 0


def execute():
    """Begin execution."""
    argv = sys.argv[1:]
    # Search for a config file when none is given.
    if '--config' not in argv:
        config_file = cfg.search_for_config_file(os.getcwd())
        if config_file != '':
            argv = argv + ['--config', config_file]

    # Execute main function and return exit code to system.
    sys.exit(main(argv))
