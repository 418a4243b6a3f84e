import numpy as np
import pandas as pd
import pytest
import yaml

import src.harness.simulation as simulation
from src.harness.config import ExperimentConfig
from src.harness.runner import (RESULT_COLUMNS, SUMMARY_COLUMNS, results_frame, run_experiment, run_replicates,
                                summary_frame)
from src.harness.simulation import run_replicate


def _read_meta(path):
    with open(path, 'r', encoding='utf-8') as f:
        return yaml.safe_load(f)


def test_run_replicate_is_deterministic(gaussian_config_data):
    config = ExperimentConfig.from_dict(gaussian_config_data)
    first = run_replicate(config, 1)
    second = run_replicate(config, 1)
    assert [row.tv for row in first.rows] == [row.tv for row in second.rows]
    assert [row.n for row in first.rows] == config.checkpoint_grid
    assert first.failure is None


def test_replicates_differ(gaussian_config_data):
    config = ExperimentConfig.from_dict(gaussian_config_data)
    assert [row.tv for row in run_replicate(config, 0).rows] != [row.tv for row in run_replicate(config, 1).rows]


def test_output_files_do_not_depend_on_workers(tmp_path, gaussian_config_data):
    config = ExperimentConfig.from_dict({**gaussian_config_data, 'replicates': 4})
    serial = run_experiment(config, workers=1, output_dir=tmp_path / 'serial')
    parallel = run_experiment(config, workers=2, output_dir=tmp_path / 'parallel')

    for suffix in ('.csv', '.summary.csv', '.meta.yaml'):
        name = config.name + suffix
        assert (tmp_path / 'serial' / name).read_bytes() == (tmp_path / 'parallel' / name).read_bytes()
    assert serial.name == parallel.name == 'ucb_gaussian_test.csv'


def test_result_files_layout(tmp_path, gaussian_config_data):
    config = ExperimentConfig.from_dict(gaussian_config_data)
    path = run_experiment(config, workers=1, output_dir=tmp_path)

    assert path.read_text().splitlines()[0] == ','.join(RESULT_COLUMNS)
    frame = pd.read_csv(path)
    assert len(frame) == config.replicates * len(config.checkpoint_grid)
    assert frame['replicate'].tolist() == [0, 0, 0, 1, 1, 1]

    summary = pd.read_csv(tmp_path / 'ucb_gaussian_test.summary.csv')
    assert list(summary.columns) == SUMMARY_COLUMNS
    assert summary['n'].tolist() == [10, 32, 100]

    meta = _read_meta(tmp_path / 'ucb_gaussian_test.meta.yaml')
    assert meta['master_seed'] == 42
    assert meta['config']['name'] == 'ucb_gaussian_test'
    assert meta['checkpoints'] == [10, 32, 100]
    assert meta['failed_replicates'] == 0
    assert meta['policy']['kind'] == 'ucb'


def test_bernoulli_exclusions_are_counted(tmp_path):
    config = ExperimentConfig.from_dict({
        'name': 'bernoulli_edges', 'kind': 'bernoulli-mab', 'horizon': 10, 'checkpoints': [1, 10],
        'replicates': 4, 'master_seed': 3, 'tv_samples': 1000, 'tv_max_samples': 4000,
        'environment': {'means': [0.01, 0.99]}, 'policy': {'kind': 'uniform'},
        'prior': {'kind': 'beta', 'a': 1.0, 'b': 1.0},
    })
    path = run_experiment(config, workers=1, output_dir=tmp_path)
    frame = pd.read_csv(path)
    meta = _read_meta(tmp_path / 'bernoulli_edges.meta.yaml')

    # n=1: um braço ainda sem observações
    assert frame.loc[frame['n'] == 1, 'excluded'].eq(1).all()
    assert meta['excluded_rows'] == int(frame['excluded'].sum())
    assert sum(meta['exclusion_reasons'].values()) == meta['excluded_rows']
    assert 'boundary_mle' in meta['exclusion_reasons']
    assert frame.loc[frame['excluded'] == 1, 'tv'].isna().all()


def test_failed_replicate_does_not_abort(tmp_path, gaussian_config_data, monkeypatch):
    def explode(config, source):
        raise FloatingPointError("overflow encountered")

    monkeypatch.setattr(simulation, 'simulate_replicate', explode)
    config = ExperimentConfig.from_dict(gaussian_config_data)
    path = run_experiment(config, workers=1, output_dir=tmp_path)

    frame = pd.read_csv(path)
    meta = _read_meta(tmp_path / 'ucb_gaussian_test.meta.yaml')
    assert frame['excluded'].eq(1).all()
    assert meta['failed_replicates'] == 2
    assert meta['exclusion_reasons'] == {'overflow': 6}


def test_lqr_and_contextual_metadata(tmp_path):
    lqr = ExperimentConfig.from_dict({
        'name': 'lqr_tiny', 'kind': 'lqr', 'horizon': 60, 'checkpoints': [30, 60], 'replicates': 1,
        'master_seed': 5, 'tv_samples': 1000, 'tv_max_samples': 2000,
        'environment': {'preset': 'stabilizable', 'noise_sigma2': 1.0},
        'policy': {'kind': 'ncec', 'warmup': 10},
    })
    run_experiment(lqr, workers=1, output_dir=tmp_path)
    meta = _read_meta(tmp_path / 'lqr_tiny.meta.yaml')
    assert 'riccati_failures' in meta
    assert meta['failed_replicates'] == 0

    contextual = ExperimentConfig.from_dict({
        'name': 'linucb_tiny', 'kind': 'contextual', 'horizon': 60, 'checkpoints': [30, 60], 'replicates': 2,
        'master_seed': 6, 'tv_samples': 1000, 'tv_max_samples': 2000,
        'environment': {'preset': 'undominated', 'sigma2': 1.0},
        'policy': {'kind': 'lin-ucb'},
    })
    run_experiment(contextual, workers=1, output_dir=tmp_path)
    meta = _read_meta(tmp_path / 'linucb_tiny.meta.yaml')
    assert sorted(meta['block_lambda_min']) == ['30', '60']
    assert len(meta['block_lambda_min']['60']) == contextual.num_arms()


def test_summary_frame_statistics():
    frame = pd.DataFrame({
        'replicate': [0, 1, 2, 3],
        'n': [10, 10, 10, 10],
        'tv': [0.1, 0.3, np.nan, 0.2],
        'tv_se': [0.01, 0.01, np.nan, 0.01],
        'lambda_min': [1.0, 1.0, np.nan, 1.0],
        'lambda_max': [2.0, 2.0, np.nan, 2.0],
        'covered': pd.array([1, 0, pd.NA, 1], dtype='Int64'),
        'excluded': [0, 0, 1, 0],
    })
    summary = summary_frame(frame).iloc[0]
    assert summary['mean_tv'] == pytest.approx(0.2)
    assert summary['tv_se'] == pytest.approx(0.1 / np.sqrt(3))
    assert summary['coverage'] == pytest.approx(2 / 3)
    assert summary['coverage_se'] == pytest.approx(np.sqrt(2 / 3 * 1 / 3 / 3))
    assert (summary['included'], summary['excluded']) == (3, 1)


def test_results_frame_orders_rows(gaussian_config_data):
    config = ExperimentConfig.from_dict({**gaussian_config_data, 'replicates': 3})
    results = run_replicates(config, workers=1)
    frame = results_frame(list(reversed(results)))
    assert frame['replicate'].tolist() == [0, 0, 0, 1, 1, 1, 2, 2, 2]
    assert str(frame['covered'].dtype) == 'Int64'
