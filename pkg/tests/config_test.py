"""Test cases for config file."""

import os
import pytest
import yaml
from unruh_pair.errors import InvalidStateError, UsageError
import unruh_pair.config as cfg


@pytest.fixture(name='yaml_config')
def fixture_yaml_config():
    """Simple yaml config."""
    yaml_string = '''
    command: evolve
    accel: 0.5
    sep: 0.3
    init: superposition
    theta: 0.5235987755982988
    phi: -0.7853981633974483
    tau_max: 10
    format: json
    '''
    return yaml.safe_load(yaml_string)


@pytest.fixture(name='yaml_empty_config')
def fixture_yaml_empty_config():
    """A config with every value left empty."""
    yaml_string = '''
    command: coeffs
    accel:
    sep:
    gamma0:
    format:
    '''
    return yaml.safe_load(yaml_string)


@pytest.fixture(name='file_in_nested_directory')
def fixture_file_in_nested_directory():
    """File in nested directory."""
    cwd = os.getcwd()
    return os.path.join(cwd, 'tests/deep/nested/directory/for/testing.txt')


@pytest.fixture(name='nested_directory')
def fixture_nested_directory():
    """Nested directory."""
    cwd = os.getcwd()
    return os.path.join(cwd, 'tests/deep/nested/directory/for/')


@pytest.fixture(name='directory_not_exist')
def fixture_directory_not_exist():
    """Unexisting directory."""
    cwd = os.getcwd()
    return os.path.join(cwd, 'tests/not_exist')


def config_yml_file_path():
    """Helper functions to fetch config file."""
    cwd = os.getcwd()
    return os.path.join(cwd, 'tests/deep/unruh_pair.yml')


def test_run_config(yaml_config):
    """Values from a mapping."""
    config = cfg.RunConfig(yaml_config)
    assert config.get_command() == 'evolve', 'Wrong command.'
    assert config.get('tau_max') == 10.0, 'tau_max must be converted to float.'
    assert config.get_format() == 'json', 'Wrong format.'
    sim_config = config.get_sim_config()
    assert (sim_config.accel_ratio, sim_config.separation) == (0.5, 0.3), 'Wrong point.'
    assert sim_config.include_interaction, 'Interaction is on by default.'
    spec = config.get_initial_spec()
    assert spec.kind == 'superposition' and spec.phi < 0.0, 'Wrong initial state.'


def test_empty_values_use_defaults(yaml_empty_config):
    """Null values fall back to the defaults."""
    config = cfg.RunConfig(yaml_empty_config)
    assert config.get('gamma0') == 1.0, 'gamma0 defaults to 1.'
    assert config.get_format() == 'csv', 'Format defaults to csv.'
    assert config.get('accel') is None, 'accel has no default.'
    with pytest.raises(UsageError) as info:
        config.get_sim_config()
    assert info.value.code == 'missing-parameter', 'Expected missing-parameter.'


def test_round_trip(yaml_config):
    """RunConfig(config.to_dict()) reproduces the config."""
    config = cfg.RunConfig(yaml_config)
    assert cfg.RunConfig(config.to_dict()) == config, 'Round trip must be the identity.'
    x_config = cfg.RunConfig({'command': 'evolve', 'init': 'x-state',
                              'x_state': [0.25, 0.25, 0.25, 0.25, 0.0, 0.0, 0.1, 0.0]})
    assert cfg.RunConfig(x_config.to_dict()) == x_config, 'x_state must survive the trip.'
    assert x_config.get_initial_spec().build().c_ge == 0.1, 'x_state must be used.'


def test_merge_precedence():
    """Flags override the file, the file overrides defaults."""
    merged = cfg.merge({'accel': 1.0, 'sep': 2.0, 'format': 'json'}, {'accel': 3.0})
    assert merged['accel'] == 3.0, 'Flag must win.'
    assert merged['sep'] == 2.0, 'File must fill gaps.'
    assert merged['samples'] == cfg.default_config['samples'], 'Default must fill the rest.'


def test_conflicting_flags():
    """Angles without a superposition are rejected."""
    with pytest.raises(UsageError) as info:
        cfg.RunConfig({'command': 'evolve', 'theta': 0.3})
    assert info.value.code == 'conflicting-flags', 'Expected conflicting-flags.'
    with pytest.raises(UsageError):
        cfg.RunConfig({'command': 'evolve', 'init': 'x-state'})


def test_invalid_values():
    """Invalid physics and usage values."""
    with pytest.raises(InvalidStateError) as info:
        cfg.RunConfig({'command': 'coeffs', 'accel': 1.0, 'sep': 0.0})
    assert info.value.code == 'separation-nonpositive', 'Expected separation-nonpositive.'
    with pytest.raises(UsageError):
        cfg.RunConfig({'command': 'coeffs', 'format': 'xml'})
    with pytest.raises(UsageError):
        cfg.RunConfig({'command': 'coeffs', 'samples': 'many'})
    with pytest.raises(UsageError):
        cfg.RunConfig({'command': 'figure', 'figure': 9})
    with pytest.raises(UsageError):
        cfg.RunConfig({})


def test_load(tmp_path):
    """YAML and JSON files load; unknown keys are refused."""
    yaml_file = tmp_path / 'run.yml'
    yaml_file.write_text('command: rate\naccel: 1\nsep: 3\n', encoding='utf-8')
    assert cfg.load(yaml_file)['sep'] == 3, 'YAML must load.'

    json_file = tmp_path / 'run.json'
    json_file.write_text('{"command": "rate", "accel": 1, "sep": 3}', encoding='utf-8')
    assert cfg.load(json_file)['accel'] == 1, 'JSON must load.'

    empty_file = tmp_path / 'empty.yml'
    empty_file.write_text('', encoding='utf-8')
    assert cfg.load(empty_file) == {}, 'Empty file gives an empty mapping.'

    bad_file = tmp_path / 'bad.yml'
    bad_file.write_text('command: rate\nspeed: 3\n', encoding='utf-8')
    with pytest.raises(UsageError) as info:
        cfg.load(bad_file)
    assert info.value.code == 'config-unknown-key', 'Expected config-unknown-key.'

    with pytest.raises(UsageError) as info:
        cfg.load(tmp_path / 'missing.yml')
    assert info.value.code == 'config-not-found', 'Expected config-not-found.'

    for text in ('init: x-state\nx_state: [a, 0, 0, 0, 0, 0, 0, 0]\n',
                 'init: x-state\nx_state: 5\n',
                 'init: x-state\nx_state: {p_gg: 1, p_ee: 0, p_aa: 0, p_ss: 0, re_as: 0,'
                 ' im_as: 0, re_ge: 0, im_ge: [0]}\n',
                 'with_d: "false"\n',
                 '{"raw": "yes"}\n'):
        typed_file = tmp_path / 'typed.yml'
        typed_file.write_text(text, encoding='utf-8')
        with pytest.raises(UsageError) as info:
            cfg.RunConfig(cfg.merge(cfg.load(typed_file), {'command': 'evolve'}))
        assert info.value.code == 'config-invalid', f'Expected config-invalid for {text!r}.'


def test_figure_presets():
    """Every figure has at least one panel."""
    assert sorted(cfg.FIGURE_PRESETS) == list(range(1, 9)), 'Figures 1 to 8.'
    assert len(cfg.FIGURE_PRESETS[7]) == 12, 'Two phases on two axes at three values.'
    assert len(cfg.FIGURE_PRESETS[8]) == 4, 'Two phases with and without D.'
    for panels in cfg.FIGURE_PRESETS.values():
        for argv in panels:
            assert argv[0] in cfg.COMMANDS, f'Unknown command in {argv}.'


def test_search_for_config(nested_directory):
    """Finding unruh_pair.yml on nested directory."""
    config_path = cfg.search_for_config_file(nested_directory)
    config_yml_path = config_yml_file_path()
    assert config_path == config_yml_path, 'Must find unruh_pair.yml.'


def test_search_for_config_using_file(file_in_nested_directory):
    """Find unruh_pair.yml when using file."""
    config_path = cfg.search_for_config_file(file_in_nested_directory)
    config_yml_path = config_yml_file_path()
    assert config_path == config_yml_path, 'Must find unruh_pair.yml.'


def test_search_for_config_not_exist(directory_not_exist):
    """Search for non-existed directory."""
    config_path = cfg.search_for_config_file(directory_not_exist)
    assert config_path == '', 'Must be an empty string.'


def test_superposition_needs_angles():
    """A superposition start names both angles."""
    for angles in ({}, {'theta': 0.3}, {'phi': 0.3}):
        with pytest.raises(UsageError) as info:
            cfg.RunConfig({'command': 'evolve', 'init': 'superposition', **angles})
        assert info.value.code == 'missing-parameter', f'Expected missing-parameter for {angles}.'
    run_config = cfg.RunConfig({'command': 'evolve', 'init': 'superposition',
                                'theta': 0.0, 'phi': 0.0})
    assert run_config.get_initial_spec().theta == 0.0, 'Explicit zero angles are allowed.'


def test_flags_are_booleans():
    """Switch values must be true or false."""
    assert cfg.RunConfig({'command': 'evolve', 'with_d': False}).get('with_d') is False, \
        'False must be kept.'
    for key in ('with_d', 'raw', 'free_hamiltonian', 'gnuplot_hint'):
        with pytest.raises(UsageError) as info:
            cfg.RunConfig({'command': 'evolve', key: 'false'})
        assert info.value.code == 'config-invalid', f'{key} must reject strings.'
