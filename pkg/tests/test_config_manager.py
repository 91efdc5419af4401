import json
import os

import pytest

from config_manager import ConfigError, ConfigManager, SuiteConfig


def test_defaults(clean_env):
    manager = ConfigManager()
    assert (manager.config['p'], manager.config['n'], manager.config['N']) == (3, 2, 6)
    assert manager.get_seed() == 20240601
    assert manager.get_reports_directory() == './reports'
    assert manager.get_report_formats() == ['json']
    assert manager.get_logging_config()['level'] == 'WARNING'


def test_file_values_merge_over_defaults(clean_env):
    path = clean_env / 'coleman.json'
    path.write_text(json.dumps({'p': 5, 'samples': 10, 'reports': {'formats': ['json', 'csv']}}))
    manager = ConfigManager(str(path))
    assert manager.config['p'] == 5
    assert manager.config['samples'] == 10
    assert manager.get_report_formats() == ['json', 'csv']
    assert manager.get_reports_directory() == './reports'


def test_missing_and_malformed_files(clean_env):
    with pytest.raises(ConfigError):
        ConfigManager(str(clean_env / 'absent.json'))
    broken = clean_env / 'broken.json'
    broken.write_text('{"p": ')
    with pytest.raises(ConfigError):
        ConfigManager(str(broken))


def test_environment_overrides(clean_env, monkeypatch):
    monkeypatch.setenv('COLEMAN_P', '7')
    monkeypatch.setenv('COLEMAN_PRECISION', '8')
    monkeypatch.setenv('COLEMAN_REPORTS_DIR', str(clean_env / 'out'))
    monkeypatch.setenv('COLEMAN_LOG_LEVEL', 'debug')
    manager = ConfigManager()
    assert manager.config['p'] == 7
    assert manager.config['N'] == 8
    assert manager.get_reports_directory() == str(clean_env / 'out')
    assert manager.get_logging_config()['level'] == 'DEBUG'


def test_dotenv_file_is_read(clean_env):
    (clean_env / '.env').write_text('COLEMAN_SEED=99\n')
    try:
        assert ConfigManager().get_seed() == 99
    finally:
        os.environ.pop('COLEMAN_SEED', None)


def test_malformed_environment_value_is_ignored(clean_env, monkeypatch):
    monkeypatch.setenv('COLEMAN_BUDGET', 'lots')
    assert ConfigManager().get_budget() == 200000


def test_composite_p_rejected(clean_env, monkeypatch):
    monkeypatch.setenv('COLEMAN_P', '4')
    with pytest.raises(ConfigError):
        ConfigManager()


@pytest.mark.parametrize('updates', [
    {'m': 3, 't': 3},
    {'m': 1, 'k': 1},
    {'k': 2},
    {'r': 6},
    {'n': 0},
    {'n': True},
    {'samples': 0},
    {'suites': ['preimages', 'everything']},
])
def test_invalid_updates_are_rejected(clean_env, updates):
    manager = ConfigManager()
    before = manager.get_full_config()
    with pytest.raises(ConfigError):
        manager.update_config(updates)
    assert manager.config == before


def test_valid_update(clean_env):
    manager = ConfigManager()
    manager.update_config({'m': 2, 'k': 1, 't': 4, 'suites': ['slopes']})
    config = manager.suite_config()
    assert isinstance(config, SuiteConfig)
    assert (config.m, config.k, config.t, config.suites) == (2, 1, 4, ('slopes',))
    assert config.to_params()['t'] == 4


def test_save_config(clean_env):
    manager = ConfigManager()
    target = clean_env / 'saved.json'
    manager.save_config(str(target))
    assert json.loads(target.read_text()) == manager.config
    with pytest.raises(ConfigError):
        manager.save_config()
