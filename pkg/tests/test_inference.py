import numpy as np
import pytest
from scipy import stats

from src.core.errors import BoundaryMLEError, ConfigurationError, DimensionError, SingularMatrixError
from src.core.random_source import RandomSource
from src.core.trajectory import GramAccumulator, Trajectory, basis_vector
from src.inference.distributions import DifferenceDistribution, GaussianDistribution, ProductDistribution
from src.inference.exp_family import (beta_grid_posterior, expfam_anchor_normal, expfam_conjugate_posterior,
                                      expfam_mle, expfam_representative_normal, gamma_grid_posterior)
from src.inference.gaussian import (gaussian_conjugate_posterior, gaussian_prior, mle, representative_normal)
from src.inference.intervals import credible_interval, functional_marginal, functional_value
from src.inference.models import InferenceModel, ModelKind
from src.policies.base import ArmCounts

BERNOULLI_OUTCOMES = [1, 0, 1, 1, 0, 0, 0, 1, 1, 1, 0, 1]
POISSON_OUTCOMES = [3, 0, 2, 5, 1, 4, 2, 2, 1, 0]


def _single_step(x, y):
    acc = GramAccumulator(len(x))
    acc.update(x, y)
    return acc


def test_representative_normal_single_observation():
    rep = representative_normal(_single_step([1.0], 2.0), 1.0)
    assert rep.mean.tolist() == [2.0]
    assert rep.covariance.tolist() == [[1.0]]


def test_conjugate_posterior_single_observation():
    post = gaussian_conjugate_posterior(gaussian_prior(0.0, 1.0, 1), _single_step([1.0], 0.0), 1.0)
    assert post.mean[0] == pytest.approx(0.0)
    assert post.covariance[0, 0] == pytest.approx(0.5)


def test_conjugate_posterior_without_data_is_prior():
    prior = gaussian_prior(0.0, 2.0, 3)
    assert gaussian_conjugate_posterior(prior, GramAccumulator(3), 1.0) is prior


def test_gaussian_posterior_ignores_step_order():
    rng = RandomSource(41)
    steps = []
    for _ in range(200):
        # covariável escolhida a partir do último resultado
        previous = steps[-1][1] if steps else 1.0
        x = np.r_[1.0, previous, rng.standard_normal()]
        steps.append((x, float(x @ [0.5, -0.3, 1.0] + rng.standard_normal())))

    prior = gaussian_prior(0.0, 2.0, 3)
    order = rng.generator.permutation(len(steps))
    forward, shuffled = GramAccumulator(3), GramAccumulator(3)
    for x, y in steps:
        forward.update(x, y)
    for i in order:
        shuffled.update(*steps[i])

    a = gaussian_conjugate_posterior(prior, forward, 1.0)
    b = gaussian_conjugate_posterior(prior, shuffled, 1.0)
    assert np.allclose(a.mean, b.mean, rtol=0.0, atol=1e-10)
    assert np.allclose(a.covariance, b.covariance, rtol=0.0, atol=1e-12)


@pytest.mark.parametrize('family, outcomes', [
    ('bernoulli', BERNOULLI_OUTCOMES),
    ('poisson', POISSON_OUTCOMES),
])
def test_expfam_posterior_ignores_step_order(family, outcomes):
    # braço escolhido pelo resultado anterior
    arms = [0] + [int(y > 0) for y in outcomes[:-1]]
    steps = list(zip(arms, outcomes))

    forward, shuffled = ArmCounts(2), ArmCounts(2)
    for arm, y in steps:
        forward.record(arm, y)
    for i in RandomSource(42).generator.permutation(len(steps)):
        shuffled.record(*steps[i])

    a = expfam_conjugate_posterior(family, (1.0, 1.0), forward)
    b = expfam_conjugate_posterior(family, (1.0, 1.0), shuffled)
    assert np.allclose(a.mean, b.mean, rtol=0.0, atol=1e-12)
    assert np.allclose(a.variances, b.variances, rtol=0.0, atol=1e-12)


def test_mle_requires_nonsingular_gram():
    acc = GramAccumulator(2)
    for _ in range(5):
        acc.update([1.0, 0.0], 1.0)
    with pytest.raises(SingularMatrixError):
        mle(acc)


def test_flat_prior_posterior_approaches_representative():
    rng = RandomSource(11)
    acc = GramAccumulator(2)
    for step in range(1000):
        arm = step % 2
        acc.update(basis_vector(arm, 2), float(arm) + rng.standard_normal())
    post = gaussian_conjugate_posterior(gaussian_prior(0.0, 1e12, 2), acc, 1.0)
    rep = representative_normal(acc, 1.0)
    assert np.allclose(post.mean, rep.mean, atol=1e-8)
    assert np.allclose(post.covariance, rep.covariance, atol=1e-12)


def test_gaussian_distribution_logpdf_matches_scipy():
    dist = GaussianDistribution([1.0, -1.0], [[2.0, 0.3], [0.3, 1.0]])
    X = dist.sample(20, RandomSource(4))
    expected = stats.multivariate_normal(dist.mean, dist.covariance).logpdf(X)
    assert np.allclose(dist.logpdf(X), expected, atol=1e-10)


def test_gaussian_distribution_rejects_singular_covariance():
    with pytest.raises(SingularMatrixError):
        GaussianDistribution([0.0, 0.0], [[1.0, 1.0], [1.0, 1.0]])


def test_beta_posterior_matches_grid():
    counts = ArmCounts.from_arrays([len(BERNOULLI_OUTCOMES)], [sum(BERNOULLI_OUTCOMES)])
    posterior = expfam_conjugate_posterior('bernoulli', (2.0, 3.0), counts)
    grid, density = beta_grid_posterior(2.0, 3.0, BERNOULLI_OUTCOMES)
    assert np.max(np.abs(posterior.marginal(0).pdf(grid) - density)) <= 1e-4


def test_gamma_posterior_matches_grid():
    counts = ArmCounts.from_arrays([len(POISSON_OUTCOMES)], [sum(POISSON_OUTCOMES)])
    posterior = expfam_conjugate_posterior('poisson', (2.0, 1.0), counts)
    grid, density = gamma_grid_posterior(2.0, 1.0, POISSON_OUTCOMES)
    assert np.max(np.abs(posterior.marginal(0).pdf(grid) - density)) <= 1e-4


def test_expfam_representative_normal():
    counts = ArmCounts.from_arrays([100, 50], [40, 10])
    rep = expfam_representative_normal('bernoulli', counts)
    assert rep.mean.tolist() == pytest.approx([0.4, 0.2])
    assert rep.variances.tolist() == pytest.approx([0.4 * 0.6 / 100, 0.2 * 0.8 / 50])

    poisson = expfam_representative_normal('poisson', ArmCounts.from_arrays([10], [25]))
    assert poisson.variances.tolist() == pytest.approx([0.25])


def test_boundary_mle_is_reported():
    with pytest.raises(BoundaryMLEError) as info:
        expfam_representative_normal('bernoulli', ArmCounts.from_arrays([3, 2], [3, 1]))
    assert info.value.arms == [0]

    with pytest.raises(BoundaryMLEError) as info:
        expfam_representative_normal('bernoulli', ArmCounts.from_arrays([0, 2], [0, 1]))
    assert info.value.arms == [0]

    with pytest.raises(BoundaryMLEError):
        expfam_mle('poisson', ArmCounts.from_arrays([4], [0]))


def test_anchor_normal_at_mle():
    counts = ArmCounts.from_arrays([100], [200])
    anchored = expfam_anchor_normal('poisson', counts, [np.log(2.0)])
    assert anchored.mean[0] == pytest.approx(np.log(2.0))
    assert anchored.covariance[0, 0] == pytest.approx(1.0 / 200.0)


def test_credible_interval():
    lo, hi = credible_interval(stats.norm(0.0, 1.0), 0.95)
    assert lo == pytest.approx(-1.959964, abs=1e-6)
    assert hi == pytest.approx(1.959964, abs=1e-6)
    with pytest.raises(ConfigurationError):
        credible_interval(stats.norm(0.0, 1.0), 1.0)


def test_margin_of_gaussian():
    dist = GaussianDistribution([1.0, 0.0], np.diag([1.0, 2.0]))
    margin = functional_marginal(dist, 'margin')
    assert margin.mean() == pytest.approx(1.0)
    assert margin.var() == pytest.approx(3.0)
    assert functional_marginal(dist, 'coordinate', 1).var() == pytest.approx(2.0)
    with pytest.raises(DimensionError):
        functional_marginal(dist, 'coordinate', 2)
    assert functional_value([3.0, 1.0], 'margin') == 2.0


def test_difference_distribution_matches_normal_difference():
    difference = DifferenceDistribution(stats.norm(1.0, 1.0), stats.norm(0.0, 2.0))
    exact = stats.norm(1.0, np.sqrt(5.0))
    for t in (-2.0, 0.5, 3.0):
        assert difference.cdf(t) == pytest.approx(exact.cdf(t), abs=1e-6)
    assert difference.ppf(0.975) == pytest.approx(exact.ppf(0.975), abs=1e-5)


def test_margin_of_beta_product():
    dist = ProductDistribution([stats.beta(2.0, 2.0), stats.beta(2.0, 2.0)])
    margin = functional_marginal(dist, 'margin')
    assert isinstance(margin, DifferenceDistribution)
    assert margin.cdf(0.0) == pytest.approx(0.5, abs=1e-6)
    lo, hi = credible_interval(margin, 0.95)
    assert lo == pytest.approx(-hi, abs=1e-5)


def test_heteroskedastic_model_uses_weighted_gram():
    prior = gaussian_prior(0.0, 1.0, 2)
    model = InferenceModel(ModelKind.HETEROSKEDASTIC, 2, prior, variances=np.array([1.0, 4.0]))
    stats_ = model.statistics()
    traj = Trajectory(2)
    for arm, y in [(0, 0.5), (1, 2.0), (1, -1.0), (0, 0.1)]:
        traj.append(basis_vector(arm, 2), y)
        stats_.observe(basis_vector(arm, 2), y)

    assert stats_.weighted.gram.tolist() == [[2.0, 0.0], [0.0, 0.5]]
    post = model.posterior(stats_)
    assert np.allclose(post.covariance, np.diag([1.0 / 3.0, 1.0 / 1.5]))


def test_model_rejects_prior_dimension_mismatch():
    with pytest.raises(DimensionError):
        InferenceModel(ModelKind.GAUSSIAN, 3, gaussian_prior(0.0, 1.0, 2))
    with pytest.raises(ConfigurationError):
        InferenceModel(ModelKind.GAUSSIAN, 2)
