"""Testing artifact writers."""

import json
import math
import numpy as np
import pytest
from unruh_pair.coefficients import SimConfig, coefficients
from unruh_pair.errors import OutputError
from unruh_pair.xstate import InitialSpec
import unruh_pair.output as out
import unruh_pair.sweep as sw
import unruh_pair.xstate as xs


@pytest.fixture(name='trajectory')
def fixture_trajectory():
    """Short |10> trajectory."""
    coeffs = coefficients(SimConfig(0.1, 0.5))
    return xs.trajectory(xs.initial_product_eg(), coeffs, 2.0, 5)


def test_trajectory_csv(trajectory):
    """Header, one row per sample, 17 significant digits."""
    text = out.render_csv(out.trajectory_table(trajectory))
    lines = text.split('\n')
    assert lines[0] == ','.join(out.TRAJECTORY_COLUMNS), 'Wrong header.'
    assert lines[-1] == '', 'Text must end with a newline.'
    assert '\r' not in text, 'Line endings must be LF.'
    assert len(lines) == 7, 'Header plus five rows.'
    tau, c_value = (float(v) for v in lines[3].split(',')[:2])
    assert tau == trajectory[2][0], 'tau must round-trip exactly.'
    state = trajectory[2][1]
    assert float(lines[3].split(',')[4]) == state.p_gg, 'Values must round-trip exactly.'
    assert c_value > 0.0, 'Concurrence is generated.'


def test_sweep_csv():
    """Sweep columns follow the x, value_with_d, value_without_d layout."""
    sweep = sw.rate_sweep('sep', 3.0, (0.1, 10.0), 8, InitialSpec())
    table = out.sweep_table(sweep)
    assert table.get_names() == list(out.SWEEP_COLUMNS), 'Wrong columns.'
    raw = out.sweep_table(sweep, 'raw_')
    assert raw.get_column('value_with_d') == sweep.column('raw_with_d').tolist(), \
        'Prefix must select the raw columns.'
    assert table.get_meta()['axis'] == 'accel', 'Axis must be recorded.'


def test_region_csv():
    """Region rows cover every node with 0/1 verdicts."""
    mask = sw.region_scan((0.1, 1.0), (0.5, 2.0), (3, 4))
    text = out.render_csv(out.region_table(mask))
    lines = text.strip().split('\n')
    assert lines[0] == ','.join(out.REGION_COLUMNS), 'Wrong header.'
    assert len(lines) == 1 + 12, 'One row per node.'
    assert {line.split(',')[2] for line in lines[1:]} <= {'0', '1'}, 'Verdicts are 0/1.'


def test_json_layout(trajectory):
    """JSON has meta and column-oriented data; equal inputs give equal bytes."""
    table = out.trajectory_table(trajectory, {'command': 'evolve', 'accel': 0.1})
    text = out.render_json(table)
    document = json.loads(text)
    assert document['meta']['artifact_version'] == out.ARTIFACT_VERSION, 'Version missing.'
    assert document['meta']['command'] == 'evolve', 'Meta must echo the run.'
    assert list(document['data']) == list(out.TRAJECTORY_COLUMNS), 'Wrong columns.'
    assert document['data']['tau'][-1] == 2.0, 'Wrong tau column.'
    assert out.render_json(out.trajectory_table(trajectory, {'command': 'evolve', 'accel': 0.1})) \
        == text, 'JSON must be byte-stable.'


def test_emit_file(tmp_path, trajectory):
    """emit writes the rendered text."""
    path = tmp_path / 'evolve.csv'
    table = out.trajectory_table(trajectory)
    out.emit(table, 'csv', str(path))
    assert path.read_text(encoding='utf-8') == out.render_csv(table), 'File must hold the CSV.'


def test_emit_errors(tmp_path, trajectory):
    """Unwritable paths and unknown formats are output errors."""
    table = out.trajectory_table(trajectory)
    with pytest.raises(OutputError) as info:
        out.emit(table, 'csv', str(tmp_path / 'missing' / 'evolve.csv'))
    assert info.value.exit_code == 1, 'Output failures exit with 1.'
    with pytest.raises(OutputError):
        out.render(table, 'xml')


def test_table_validation():
    """Columns must have equal lengths; numpy scalars become plain values."""
    with pytest.raises(OutputError):
        out.Table({'a': [1.0, 2.0], 'b': [1.0]})
    table = out.Table({'x': np.array([0.5, math.pi]), 'flag': np.array([True, False])})
    assert table.rows() == [(0.5, True), (math.pi, False)], 'Rows must be plain values.'
    assert out.render_csv(table).split('\n')[2] == '3.1415926535897931,0', \
        'Seventeen significant digits expected.'


def test_record_table():
    """Mappings become one row each."""
    table = out.record_table([{'a1': 0.25, 'source': 'numerical'}])
    assert out.render_csv(table) == 'a1,source\n0.25,numerical\n', 'Wrong record CSV.'


def test_gnuplot_hint(capsys, trajectory):
    """Plot commands name every data column; other formats get none."""
    table = out.trajectory_table(trajectory)
    out.gnuplot_hint(table, 'evolve.csv')
    lines = capsys.readouterr().out.strip().split('\n')
    assert lines[0] == '# set datafile separator ","', 'CSV separator expected.'
    assert lines[1].count("'evolve.csv' using 1:") == len(out.TRAJECTORY_COLUMNS) - 1, \
        'One series per data column.'
    out.gnuplot_hint(table, 'evolve.json', 'json')
    assert capsys.readouterr().out == '', 'No hint for JSON.'
