import numpy as np
import pytest

from src.core.errors import ConfigurationError
from src.core.random_source import RandomSource
from src.harness.config import ExperimentConfig
from src.inference.distributions import GaussianDistribution
from src.metrics.coverage import CoverageRecord, binomial_coverage, coverage_experiment, coverage_record

REPLICATES = 400


def _uniform_config(gaussian_config_data, **coverage):
    data = dict(gaussian_config_data)
    data.update(horizon=50, policy={'kind': 'uniform'},
                prior={'kind': 'gaussian', 'mean': 0.0, 'variance': 1e12},
                coverage={'functional': 'margin', 'level': 0.95, **coverage})
    return ExperimentConfig.from_dict(data).check()


def test_coverage_record():
    posterior = GaussianDistribution([0.0, 0.0], np.eye(2))
    hit = coverage_record(posterior, 'margin', None, [0.5, 0.2], 0.95)
    assert hit.covered
    assert hit.target == pytest.approx(0.3)
    assert hit.interval[0] == pytest.approx(-1.959964 * np.sqrt(2.0), abs=1e-5)
    assert not coverage_record(posterior, 'margin', None, [5.0, 0.0], 0.95).covered
    assert coverage_record(posterior, 'coordinate', 1, [0.0, 1.5], 0.95).covered


def test_binomial_coverage_standard_error():
    records = [CoverageRecord(i < 95, (0.0, 1.0), 0.5, 0.95) for i in range(100)] + [None] * 3
    estimate = binomial_coverage(records)
    assert estimate.coverage == pytest.approx(0.95)
    assert estimate.std_error == pytest.approx(np.sqrt(0.95 * 0.05 / 100))
    assert (estimate.included, estimate.excluded) == (100, 3)


def test_coverage_requires_enough_replicates(gaussian_config_data):
    with pytest.raises(ConfigurationError):
        coverage_experiment(_uniform_config(gaussian_config_data), 50, RandomSource(0))


def test_coverage_requires_functional(gaussian_config_data):
    config = _uniform_config(gaussian_config_data, functional='none')
    with pytest.raises(ConfigurationError):
        coverage_experiment(config, 100, RandomSource(0))


def test_non_adaptive_coverage_is_nominal(gaussian_config_data):
    coverage, se = coverage_experiment(_uniform_config(gaussian_config_data), REPLICATES, RandomSource(2024))
    assert se == pytest.approx(np.sqrt(coverage * (1.0 - coverage) / REPLICATES))
    assert abs(coverage - 0.95) <= 4 * np.sqrt(0.95 * 0.05 / REPLICATES)
