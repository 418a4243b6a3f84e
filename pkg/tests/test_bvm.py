import numpy as np
import pytest
from scipy import stats

from src.core.errors import ConfigurationError
from src.core.random_source import RandomSource
from src.core.trajectory import Trajectory, basis_vector
from src.inference.gaussian import gaussian_prior
from src.inference.models import InferenceModel, ModelKind
from src.metrics.bvm import bvm_tv_curve, iter_bvm_checkpoints, mean_tv_curve, worst_case_tv_curve
from src.metrics.tv_distance import TvEstimate, tv_gaussian_oracle_1d, tv_quadrature_1d


def _gaussian_model(dimension, variance=1.0):
    return InferenceModel(ModelKind.GAUSSIAN, dimension, gaussian_prior(0.0, variance, dimension), sigma2=1.0)


def _bandit_trajectory(arms, rewards, num_arms=2):
    traj = Trajectory(num_arms)
    for arm, reward in zip(arms, rewards):
        traj.append(basis_vector(arm, num_arms), reward)
    return traj


def test_single_observation_tv():
    # posterior N(0, 1/2) contra normal representativa N(0, 1)
    traj = Trajectory(1).append([1.0], 0.0)
    curve = bvm_tv_curve(traj, [1], _gaussian_model(1), RandomSource(0),
                         num_samples=100_000, max_samples=100_000)
    n, estimate = curve[0]
    oracle = tv_gaussian_oracle_1d(0.0, np.sqrt(0.5), 0.0, 1.0)
    assert n == 1
    assert oracle == pytest.approx(0.1661, abs=1e-3)
    assert oracle == pytest.approx(tv_quadrature_1d(stats.norm(0.0, np.sqrt(0.5)), stats.norm(0.0, 1.0)), abs=1e-6)
    assert abs(estimate.value - oracle) <= 4 * estimate.std_error


def test_flat_prior_tv_is_negligible():
    rng = RandomSource(12)
    arms = [step % 2 for step in range(1000)]
    rewards = [arm + rng.standard_normal() for arm in arms]
    curve = bvm_tv_curve(_bandit_trajectory(arms, rewards), [1000], _gaussian_model(2, 1e12), RandomSource(1),
                         num_samples=10_000, max_samples=20_000)
    assert curve[0][1].value <= 0.005


def test_singular_gram_checkpoint_is_excluded():
    traj = _bandit_trajectory([0] * 5 + [1] * 5, np.zeros(10))
    curve = bvm_tv_curve(traj, [5, 10], _gaussian_model(2), RandomSource(2), num_samples=2000, max_samples=2000)
    assert curve[0][1].excluded_replicate
    assert curve[0][1].reason == 'singular_gram'
    assert not curve[1][1].excluded_replicate


def test_bernoulli_boundary_checkpoint_is_excluded():
    arms = [0, 0, 0, 0, 0, 1, 0, 1, 0, 1]
    rewards = [1, 0, 1, 0, 1, 0, 0, 1, 1, 0]
    model = InferenceModel(ModelKind.BERNOULLI, 2, prior_hyper=(1.0, 1.0))
    curve = bvm_tv_curve(_bandit_trajectory(arms, rewards), [3, 10], model, RandomSource(3),
                         num_samples=2000, max_samples=2000)
    assert curve[0][1].excluded_replicate
    assert curve[0][1].reason == 'boundary_mle'
    assert not curve[1][1].excluded_replicate
    assert 0.0 <= curve[1][1].value <= 1.0


def test_checkpoints_beyond_trajectory_are_skipped():
    traj = _bandit_trajectory([0, 1] * 5, np.zeros(10))
    checkpoints = [c.n for c in iter_bvm_checkpoints(traj, [2, 10, 20], _gaussian_model(2))]
    assert checkpoints == [2, 10]
    with pytest.raises(ConfigurationError):
        list(iter_bvm_checkpoints(traj, [10, 5], _gaussian_model(2)))


def test_tv_decreases_with_uniform_allocation():
    rng = RandomSource(13)
    arms = [step % 2 for step in range(1000)]
    rewards = [arm + rng.standard_normal() for arm in arms]
    curve = bvm_tv_curve(_bandit_trajectory(arms, rewards), [10, 1000], _gaussian_model(2), RandomSource(4),
                         num_samples=10_000, max_samples=100_000)
    assert curve[1][1].value < curve[0][1].value


def test_mean_curve_ignores_excluded_points():
    curves = [
        [(10, TvEstimate(0.2, 0.01, 100)), (100, TvEstimate(0.1, 0.01, 100))],
        [(10, TvEstimate(0.4, 0.01, 100)), (100, TvEstimate.excluded('singular_gram'))],
    ]
    summary = mean_tv_curve(curves)
    assert [n for n, _, _ in summary] == [10, 100]
    assert summary[0][1] == pytest.approx(0.3)
    assert summary[1][1] == pytest.approx(0.1)
    assert np.isnan(summary[1][2])


def test_worst_case_curve():
    worst = worst_case_tv_curve({
        'ucb': [(10, 0.3, 0.01), (100, 0.1, 0.01)],
        'uniform': [(10, 0.2, 0.01), (100, 0.15, 0.01)],
    })
    assert worst == [(10, 0.3, 'ucb'), (100, 0.15, 'uniform')]
    with pytest.raises(ConfigurationError):
        worst_case_tv_curve({'a': [(10, 0.1, 0.0)], 'b': [(20, 0.1, 0.0)]})
