"""Testing the command line."""

import json
import pytest
import unruh_pair.config as cfg
import unruh_pair.console as con
import unruh_pair.main as up_main
import unruh_pair.output as out


@pytest.fixture(name='quiet', autouse=True)
def fixture_quiet():
    """Restore the default verbosity after each run."""
    yield
    con.set_verbosity(con.Verbosity.INFO)


def _read_csv(path):
    lines = path.read_text(encoding='utf-8').strip().split('\n')
    return lines[0].split(','), [line.split(',') for line in lines[1:]]


def test_evolve_csv(tmp_path):
    """evolve writes the trajectory columns."""
    path = tmp_path / 'evolve.csv'
    code = up_main.main(['evolve', '--accel', '0.1', '--sep', '0.5', '--tau-max', '5',
                         '--samples', '11', '--out', str(path), '-v', '0'])
    assert code == 0, 'Must succeed.'
    header, rows = _read_csv(path)
    assert header == list(out.TRAJECTORY_COLUMNS), 'Wrong header.'
    assert len(rows) == 11, 'One row per sample.'
    assert float(rows[-1][0]) == 5.0, 'Last sample at tau_max.'


def test_json_echo(tmp_path):
    """JSON meta echoes every setting; it rebuilds the same RunConfig."""
    path = tmp_path / 'evolve.json'
    argv = ['evolve', '--accel', '1', '--sep', '2', '--samples', '4', '--no-d',
            '--format', 'json', '--out', str(path), '-v', '0']
    assert up_main.main(argv) == 0, 'Must succeed.'
    document = json.loads(path.read_text(encoding='utf-8'))
    meta = document['meta']
    assert meta['with_d'] is False, 'Switch must be echoed.'
    assert meta['d'] == 0.0, 'D must be dropped.'
    echo = {key: value for key, value in meta.items() if key in cfg.default_config}
    assert cfg.RunConfig(echo) == up_main.parse_cli(argv), 'Echo must reproduce the run.'


def test_coeffs(tmp_path):
    """coeffs writes one record with the rate constants."""
    path = tmp_path / 'coeffs.csv'
    assert up_main.main(['coeffs', '--accel', '1', '--sep', '1', '--out', str(path)]) == 0, \
        'Must succeed.'
    header, rows = _read_csv(path)
    assert header[:6] == ['a1', 'a2', 'b1', 'b2', 'd', 'f'], 'Wrong header.'
    assert 'unruh_temperature' in header, 'Temperature must be reported.'
    assert len(rows) == 1, 'One record.'
    assert float(rows[0][2]) == 0.25, 'B1 is gamma0/4.'


def test_rate(tmp_path):
    """rate reports both switches."""
    path = tmp_path / 'rate.csv'
    assert up_main.main(['rate', '--accel', '1', '--sep', '0.3', '--out', str(path)]) == 0, \
        'Must succeed.'
    header, rows = _read_csv(path)
    assert header == ['include_interaction', 'analytic', 'clamped', 'numerical', 'source'], \
        'Wrong header.'
    assert [row[0] for row in rows] == ['1', '0'], 'D on, then off.'
    assert float(rows[0][2]) == pytest.approx(float(rows[0][3]), abs=1e-6), \
        'Analytic and numerical rates must agree.'


def test_steady(tmp_path):
    """steady writes the Gibbs state."""
    path = tmp_path / 'steady.json'
    assert up_main.main(['steady', '--accel', '2', '--sep', '1', '--format', 'json',
                         '--out', str(path)]) == 0, 'Must succeed.'
    data = json.loads(path.read_text(encoding='utf-8'))['data']
    populations = [data[key][0] for key in ('p_gg', 'p_ee', 'p_aa', 'p_ss')]
    assert sum(populations) == pytest.approx(1.0, abs=1e-12), 'Trace must be one.'
    assert data['c'][0] == 0.0, 'Steady state is separable.'


def test_oracle(tmp_path):
    """oracle agrees with the X-state evolution."""
    path = tmp_path / 'oracle.json'
    assert up_main.main(['oracle', '--accel', '1', '--sep', '1', '--tau-max', '1',
                         '--samples', '3', '--format', 'json', '--out', str(path)]) == 0, \
        'Must succeed.'
    document = json.loads(path.read_text(encoding='utf-8'))
    assert document['meta']['max_deviation'] < 1e-8, 'Oracle must match.'
    assert document['meta']['completely_positive'], 'Generator must be CP.'
    assert len(document['data']['tau']) == 3, 'One row per sample.'


def test_figure_panel(tmp_path):
    """figure 4 panel 2 is the evolution without D."""
    path = tmp_path / 'fig4.json'
    assert up_main.main(['figure', '4', '--panel', '2', '--samples', '5', '--format', 'json',
                         '--out', str(path)]) == 0, 'Must succeed.'
    meta = json.loads(path.read_text(encoding='utf-8'))['meta']
    assert meta['command'] == 'evolve', 'Preset command must run.'
    assert meta['with_d'] is False, 'Panel 2 drops D.'
    assert meta['samples'] == 5, 'User flags override the preset.'
    assert (meta['figure'], meta['panel']) == (4, 2), 'Figure must be recorded.'


def test_config_precedence(tmp_path):
    """Flags override the config file, which overrides defaults."""
    config_file = tmp_path / 'run.yml'
    config_file.write_text('accel: 0.5\nsep: 2.0\ntau_max: 3.0\n', encoding='utf-8')
    run_config = up_main.parse_cli(['evolve', '--sep', '1', '--config', str(config_file)])
    assert run_config.get('accel') == 0.5, 'File value expected.'
    assert run_config.get('sep') == 1.0, 'Flag must win.'
    assert run_config.get('tau_max') == 3.0, 'File value expected.'
    assert run_config.get('samples') == 201, 'Default expected.'


def test_gnuplot_hint(tmp_path, capsys):
    """--gnuplot-hint prints plot commands as comments."""
    path = tmp_path / 'evolve.csv'
    assert up_main.main(['evolve', '--accel', '0.1', '--sep', '0.5', '--samples', '3',
                         '--out', str(path), '--gnuplot-hint']) == 0, 'Must succeed.'
    assert '# plot' in capsys.readouterr().out, 'Hint expected.'


def test_stdout(capsys):
    """Without --out the artifact goes to stdout."""
    assert up_main.main(['coeffs', '--accel', '0', '--sep', '1', '-v', '0']) == 0, \
        'Must succeed.'
    assert capsys.readouterr().out.startswith('a1,a2,b1,b2,d,f'), 'CSV on stdout expected.'


@pytest.mark.parametrize('argv, exit_code, code', [
    (['evolve', '--accel', '1', '--sep', '0'], 4, 'separation-nonpositive'),
    (['evolve', '--accel', '-1', '--sep', '1'], 4, 'accel-negative'),
    (['evolve', '--accel', '1', '--sep', '1', '--bogus'], 2, 'usage'),
    (['evolve', '--accel', '1', '--sep', '1', '--with-d', '--no-d'], 2, 'usage'),
    (['evolve', '--accel', '1'], 2, 'missing-parameter'),
    (['evolve', '--accel', '1', '--sep', '1', '--theta', '0.3'], 2, 'conflicting-flags'),
    (['figure', '9'], 2, 'figure-unknown'),
    (['figure', '4', '--panel', '3'], 2, 'panel-unknown'),
    (['evolve', '--config', 'missing.yml'], 2, 'config-not-found'),
])
def test_errors(capsys, argv, exit_code, code):
    """Failures map to exit codes and a single error line."""
    assert up_main.main(argv + ['-v', '0']) == exit_code, 'Wrong exit code.'
    assert capsys.readouterr().err.startswith(f'error: {code}'), 'Wrong error line.'


def test_unwritable_output(tmp_path, capsys):
    """Output failures exit with 1."""
    path = tmp_path / 'missing' / 'out.csv'
    assert up_main.main(['coeffs', '--accel', '1', '--sep', '1', '--out', str(path)]) == 1, \
        'Output errors exit with 1.'
    assert 'output-unwritable' in capsys.readouterr().err, 'Error code expected.'


@pytest.mark.parametrize('text', [
    'init: x-state\nx_state: [a, 0, 0, 0, 0, 0, 0, 0]\n',
    'init: x-state\nx_state: 5\n',
    'with_d: "false"\n',
])
def test_malformed_config(tmp_path, capsys, text):
    """Badly typed config values are usage errors, not crashes."""
    config_file = tmp_path / 'run.yml'
    config_file.write_text(text, encoding='utf-8')
    argv = ['evolve', '--accel', '1', '--sep', '1', '--config', str(config_file), '-v', '0']
    assert up_main.main(argv) == 2, 'Usage errors exit with 2.'
    assert capsys.readouterr().err.startswith('error: config-invalid'), 'Wrong error line.'


def test_superposition_without_angles(capsys):
    """A superposition start needs both angles."""
    argv = ['evolve', '--accel', '1', '--sep', '1', '--init', 'superposition', '--theta', '0.5']
    assert up_main.main(argv) == 2, 'Usage errors exit with 2.'
    assert capsys.readouterr().err.startswith('error: missing-parameter'), 'Wrong error line.'


def test_no_gnuplot_hint_for_json(tmp_path, capsys):
    """The plot hint is only printed for CSV output."""
    path = tmp_path / 'evolve.json'
    assert up_main.main(['evolve', '--accel', '0.1', '--sep', '0.5', '--samples', '3',
                         '--format', 'json', '--out', str(path), '--gnuplot-hint']) == 0, \
        'Must succeed.'
    captured = capsys.readouterr()
    assert '# plot' not in captured.out, 'No CSV plot command for JSON.'
    assert 'No plot hint for json output.' in captured.err, 'Skipping must be reported.'
