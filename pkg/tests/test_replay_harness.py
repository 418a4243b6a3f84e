import pandas as pd
import pytest

from src.core.errors import ConfigurationError, LogFormatError
from src.harness.config import ExperimentConfig
from src.harness.replay import load_bernoulli_log, run_replay, synthesize_replay_log

REPLAY_CONFIG = {
    'name': 'replay_uniform',
    'kind': 'replay',
    'replicates': 1,
    'master_seed': 0,
    'tv_samples': 20000,
    'tv_max_samples': 20000,
    'environment': {'log': 'placeholder.csv'},
    'policy': {'kind': 'replay'},
    'prior': {'kind': 'beta', 'a': 1.0, 'b': 1.0},
}


def test_synthesized_log_is_contiguous(tmp_path):
    path = synthesize_replay_log(tmp_path / 'logs' / 'uniform.csv', [0.5, 0.5], 100)
    log = load_bernoulli_log(path)
    assert len(log) == 100
    assert [arm for arm, _ in log[:4]] == [1, 2, 1, 2]
    assert {reward for _, reward in log} <= {0.0, 1.0}


def test_replay_tv_decreases(tmp_path):
    log_path = synthesize_replay_log(tmp_path / 'logs' / 'uniform.csv', [0.5, 0.5], 10000, seed=11)
    config = ExperimentConfig.from_dict(REPLAY_CONFIG)
    path = run_replay(log_path, config, checkpoints=[100, 10000], workers=1, output_dir=tmp_path / 'out')

    assert path.parent == tmp_path / 'out'
    frame = pd.read_csv(path)
    assert frame['n'].tolist() == [100, 10000]
    assert frame['excluded'].eq(0).all()
    assert frame['covered'].isna().all()
    assert frame.loc[1, 'tv'] < frame.loc[0, 'tv']


def test_replay_defaults_to_log_name(tmp_path):
    log_path = synthesize_replay_log(tmp_path / 'ucb_log.csv', [0.3, 0.7], 200, rule='ucb')
    path = run_replay(log_path, checkpoints=[50, 200, 5000], workers=1, output_dir=tmp_path / 'out')

    assert path.name == 'ucb_log.csv'
    assert pd.read_csv(path)['n'].tolist() == [50, 200]


def test_replay_without_checkpoints_in_range(tmp_path):
    log_path = synthesize_replay_log(tmp_path / 'short.csv', [0.5, 0.5], 20)
    with pytest.raises(ConfigurationError):
        run_replay(log_path, checkpoints=[100, 1000], workers=1, output_dir=tmp_path)


@pytest.mark.parametrize('content', [
    '',
    'step,arm,reward\n',
    'step,arm,reward\n1,0,1\n',
    'step,arm,reward\n1,1,0.5\n',
])
def test_bad_replay_logs(tmp_path, content):
    path = tmp_path / 'bad.csv'
    path.write_text(content)
    with pytest.raises(LogFormatError):
        run_replay(path, workers=1, output_dir=tmp_path)


def test_replay_rejects_other_kinds(tmp_path, gaussian_config_data):
    log_path = synthesize_replay_log(tmp_path / 'log.csv', [0.5, 0.5], 20)
    with pytest.raises(ConfigurationError):
        run_replay(log_path, ExperimentConfig.from_dict(gaussian_config_data), workers=1, output_dir=tmp_path)
