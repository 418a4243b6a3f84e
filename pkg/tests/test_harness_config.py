import copy
from pathlib import Path

import pytest
import yaml

from src.core.errors import ConfigValidationError, ConfigurationError
from src.harness.config import ExperimentConfig, ExperimentKind
from src.policies.base import PolicyKind

EXPERIMENTS_DIR = Path(__file__).resolve().parent.parent / 'experiments'


def _mutate(data, path, value):
    data = copy.deepcopy(data)
    target = data
    for key in path[:-1]:
        target = target[key]
    target[path[-1]] = value
    return data


def test_base_config_is_valid(gaussian_config_data):
    config = ExperimentConfig.from_dict(gaussian_config_data)
    assert config.validate() == []
    assert config.experiment_kind is ExperimentKind.GAUSSIAN_MAB
    assert config.checkpoint_grid == [10, 32, 100]
    assert config.num_arms() == 2
    assert config.coverage_functional == 'margin'


@pytest.mark.parametrize('path, value', [
    (('kind',), 'nonsense'),
    (('replicates',), 0),
    (('master_seed',), -1),
    (('horizon',), 0),
    (('checkpoints',), [10, 5]),
    (('checkpoints',), [10, 1000]),
    (('tv_samples',), 1),
    (('environment', 'sigma2'), -1.0),
    (('environment', 'means'), []),
    (('policy', 'kind'), 'thompson-bernoulli'),
    (('policy', 'kind'), 'nope'),
    (('policy', 'c'), -1.0),
    (('prior', 'variance'), 0.0),
    (('prior', 'kind'), 'beta'),
    (('coverage', 'level'), 1.5),
    (('coverage', 'functional'), 'median'),
])
def test_each_violation_is_reported(gaussian_config_data, path, value):
    config = ExperimentConfig.from_dict(_mutate(gaussian_config_data, path, value))
    assert config.validate()
    with pytest.raises(ConfigValidationError):
        config.check()


def test_policy_kind_is_case_insensitive(gaussian_config_data):
    data = _mutate(gaussian_config_data, ('policy', 'kind'), 'UCB')
    assert ExperimentConfig.from_dict(data).policy_kind is PolicyKind.UCB
    data = _mutate(gaussian_config_data, ('policy', 'kind'), 'nope')
    config = ExperimentConfig.from_dict(data)
    with pytest.raises(ConfigurationError):
        config.policy_kind
    assert "policy.kind desconhecido: nope" in config.validate()


def test_coordinate_index_is_one_based(gaussian_config_data):
    data = _mutate(gaussian_config_data, ('coverage',), {'functional': 'coordinate', 'index': 0})
    assert ExperimentConfig.from_dict(data).validate()
    data['coverage']['index'] = 2
    config = ExperimentConfig.from_dict(data)
    assert config.validate() == []
    assert config.coverage_index == 1


def test_all_violations_are_listed_at_once(gaussian_config_data):
    data = _mutate(gaussian_config_data, ('replicates',), 0)
    data = _mutate(data, ('master_seed',), -1)
    data = _mutate(data, ('policy', 'c'), -1.0)
    with pytest.raises(ConfigValidationError) as info:
        ExperimentConfig.from_dict(data).check()
    assert len(info.value.violations) >= 3


def test_family_specific_violations():
    bernoulli = ExperimentConfig.from_dict({
        'name': 'b', 'kind': 'bernoulli-mab', 'horizon': 10, 'replicates': 1, 'master_seed': 0,
        'environment': {'means': [0.0, 0.5]}, 'policy': {'kind': 'ucb'}, 'prior': {'kind': 'beta'},
    })
    assert any('Bernoulli' in v for v in bernoulli.validate())

    batched = ExperimentConfig.from_dict({
        'name': 'bt', 'kind': 'batched', 'horizon': 6, 'replicates': 1, 'master_seed': 0,
        'environment': {'means': [0.0, 1.0], 'sigma2': 1.0, 'batch_size': 3},
        'policy': {'kind': 'batched-thompson'},
    })
    assert any('batch_size' in v for v in batched.validate())

    lai_wei = ExperimentConfig.from_dict({
        'name': 'lw', 'kind': 'lai-wei', 'horizon': 10, 'replicates': 1, 'master_seed': 0,
        'environment': {'beta0': 1.0, 'sigma2': 1.0}, 'policy': {'kind': 'lai-wei'},
        'coverage': {'functional': 'margin', 'level': 0.95},
    })
    assert any('margin' in v for v in lai_wei.validate())


def test_missing_and_unknown_fields(gaussian_config_data):
    data = dict(gaussian_config_data)
    del data['policy']
    with pytest.raises(ConfigValidationError):
        ExperimentConfig.from_dict(data)
    with pytest.raises(ConfigValidationError):
        ExperimentConfig.from_dict({**gaussian_config_data, 'surprise': 1})


def test_batched_horizon_defaults_to_two_batches():
    config = ExperimentConfig.from_dict({
        'name': 'bt', 'kind': 'batched', 'replicates': 1, 'master_seed': 0,
        'environment': {'means': [0.0, 1.0], 'sigma2': 1.0, 'batch_size': 50},
        'policy': {'kind': 'batched-thompson'},
    })
    assert config.horizon == 100
    assert config.validate() == []


def test_overrides_copy_the_config(gaussian_config_data):
    config = ExperimentConfig.from_dict(gaussian_config_data)
    changed = config.with_overrides(seed=7, replicates=3, tv_samples=500, output='out')
    assert (changed.master_seed, changed.replicates, changed.tv_samples) == (7, 3, 500)
    assert changed.output_dir == Path('out')
    assert config.master_seed == 42


def test_yaml_roundtrip(tmp_path, gaussian_config_data):
    path = tmp_path / 'experiment.yaml'
    path.write_text(yaml.safe_dump(gaussian_config_data))
    assert ExperimentConfig.from_yaml(path).to_dict() == ExperimentConfig.from_dict(gaussian_config_data).to_dict()
    with pytest.raises(ConfigurationError):
        ExperimentConfig.from_yaml(tmp_path / 'missing.yaml')


def test_shipped_experiments_are_valid():
    paths = sorted(EXPERIMENTS_DIR.glob('*.yaml'))
    assert len(paths) >= 20
    for path in paths:
        assert ExperimentConfig.from_yaml(path).validate() == [], path.name
