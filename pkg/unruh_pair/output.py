"""Tabular artifacts: CSV and JSON writers for trajectories, sweeps and region masks."""
import csv
import io
import json

import numpy as np

from unruh_pair.errors import OutputError
import unruh_pair.concurrence as cc
import unruh_pair.console as con

ARTIFACT_VERSION = 1

TRAJECTORY_COLUMNS = ('tau', 'c', 'k1', 'k2', 'p_gg', 'p_ee', 'p_aa', 'p_ss', 're_as', 'im_as')
SWEEP_COLUMNS = ('x', 'value_with_d', 'value_without_d')
REGION_COLUMNS = ('omega_l', 'a_over_omega', 'with_d', 'without_d')


class Table:
    """Named columns of equal length plus metadata."""

    def __init__(self, columns: dict, meta: dict = None):
        lengths = {len(values) for values in columns.values()}
        if len(lengths) > 1:
            raise OutputError('table-ragged',
                              f'Columns have different lengths: {sorted(lengths)}.')
        self._columns = {name: [_plain(value) for value in values]
                         for name, values in columns.items()}
        self._meta = dict(meta or {})

    def __len__(self):
        return len(next(iter(self._columns.values()), []))

    def get_names(self):
        """Column names in order."""
        return list(self._columns)

    def get_column(self, name):
        """One column."""
        return self._columns[name]

    def get_meta(self):
        """Metadata."""
        return self._meta

    def rows(self):
        """Row tuples in column order."""
        return list(zip(*self._columns.values()))


def _plain(value):
    """numpy scalars to Python scalars; booleans stay booleans."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


def _cell(value):
    if isinstance(value, bool):
        return '1' if value else '0'
    if isinstance(value, float):
        return f'{value:.17g}'
    return str(value)


def trajectory_table(samples, meta: dict = None) -> Table:
    """tau, concurrence breakdown and X-state elements per sample."""
    columns = {name: [] for name in TRAJECTORY_COLUMNS}
    for tau, state in samples:
        breakdown = cc.concurrence_x(state)
        row = (tau, breakdown.c, breakdown.k1, breakdown.k2, state.p_gg, state.p_ee,
               state.p_aa, state.p_ss, state.c_as.real, state.c_as.imag)
        for name, value in zip(TRAJECTORY_COLUMNS, row):
            columns[name].append(value)
    return Table(columns, meta)


def sweep_table(sweep, prefix: str = '', meta: dict = None) -> Table:
    """x, value_with_d, value_without_d; prefix selects e.g. the raw rate columns."""
    columns = {
        'x': sweep.axis,
        'value_with_d': sweep.column(prefix + 'with_d'),
        'value_without_d': sweep.column(prefix + 'without_d'),
    }
    merged = dict(sweep.meta)
    merged['axis'] = sweep.axis_name
    merged.update(meta or {})
    return Table(columns, merged)


def region_table(mask, meta: dict = None) -> Table:
    """One row per grid node, omega L varying fastest."""
    accel, sep = np.meshgrid(mask.a_over_omega, mask.omega_l, indexing='ij')
    columns = {
        'omega_l': sep.ravel(),
        'a_over_omega': accel.ravel(),
        'with_d': mask.with_d.ravel(),
        'without_d': mask.without_d.ravel(),
    }
    merged = dict(mask.meta)
    merged['enlargement'] = mask.enlargement()
    merged.update(meta or {})
    return Table(columns, merged)


def record_table(records, meta: dict = None) -> Table:
    """Rows given as a list of mappings sharing their keys."""
    if not records:
        return Table({}, meta)
    names = list(records[0])
    return Table({name: [record[name] for record in records] for name in names}, meta)


def render_csv(table: Table) -> str:
    """Header row, then one row per sample; 17 significant digits, LF endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(table.get_names())
    for row in table.rows():
        writer.writerow([_cell(value) for value in row])
    return buffer.getvalue()


def render_json(table: Table) -> str:
    """{"meta": ..., "data": {column: [values]}}; byte-stable for equal inputs."""
    meta = {'artifact_version': ARTIFACT_VERSION}
    meta.update({key: _plain(value) for key, value in table.get_meta().items()})
    document = {'meta': meta,
                'data': {name: table.get_column(name) for name in table.get_names()}}
    try:
        return json.dumps(document, indent=2, allow_nan=False) + '\n'
    except (TypeError, ValueError) as e:
        raise OutputError('json-unserializable', f'Cannot encode artifact: {e}.') from e


def render(table: Table, fmt: str) -> str:
    """Text of the artifact in csv or json."""
    if fmt == 'csv':
        return render_csv(table)
    if fmt == 'json':
        return render_json(table)
    raise OutputError('format-unknown', f'Unknown output format {fmt!r}.')


def emit(table: Table, fmt: str, path=None):
    """Write the artifact to path, or to stdout when path is None."""
    text = render(table, fmt)
    if path is None:
        con.out(text, end='')
        return

    try:
        with open(path, 'w', encoding='utf-8', newline='\n') as output_file:
            output_file.write(text)

    except (FileNotFoundError, PermissionError, IsADirectoryError) as e:
        con.trace('Error opening file.')
        raise OutputError('output-unwritable', f'Cannot open {path}: {e}.') from e

    except OSError as e:
        con.trace('Error writing file.')
        raise OutputError('output-write-failed', f'Cannot write {path}: {e}.') from e

    con.trace(f'Wrote {len(table)} rows to {path}.')


def gnuplot_hint(table: Table, path=None, fmt: str = 'csv'):
    """Plot command for a CSV artifact, as comment lines."""
    if fmt != 'csv':
        con.error(f'No plot hint for {fmt} output.')
        return
    source = path if path is not None else '-'
    names = table.get_names()
    if len(names) < 2:
        return
    series = [f"'{source}' using 1:{index + 1} with lines title '{name}'"
              for index, name in enumerate(names) if index > 0]
    con.hint('set datafile separator ","', 'plot ' + ', '.join(series))
