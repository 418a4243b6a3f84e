import numpy as np
import pytest
from scipy import stats

from src.core.errors import ConfigurationError, DataError
from src.core.random_source import RandomSource
from src.inference.distributions import GaussianDistribution, ProductDistribution
from src.metrics.tv_distance import (positive_part_integral, tv_gaussian_oracle_1d, tv_monte_carlo,
                                     tv_quadrature_1d, tv_with_quality_gate)

PAIRS = [
    (0.0, 1.0, 0.0, 2.0),
    (0.0, 1.0, 1.0, 1.0),
    (0.3, 0.5, -0.2, 1.7),
    (2.0, 1.0, -1.0, 0.3),
    (0.0, 1.0, 0.05, 1.1),
]


def _random_pairs(count, seed):
    rng = RandomSource(seed)
    means = rng.generator.uniform(-2.0, 2.0, size=(count, 2))
    scales = rng.generator.uniform(0.3, 2.0, size=(count, 2))
    return [(m1, s1, m2, s2) for (m1, m2), (s1, s2) in zip(means.tolist(), scales.tolist())]


RANDOM_PAIRS = _random_pairs(20, 51)


def _normal(mu, sigma):
    return GaussianDistribution([mu], [[sigma ** 2]])


class _BrokenDensity:
    dimension = 1

    def __init__(self, value):
        self.value = value

    def sample(self, n, rng):
        return np.zeros((n, 1))

    def logpdf(self, X):
        return np.full(np.asarray(X).shape[0], self.value)


def test_identical_distributions_have_zero_tv():
    P = _normal(0.0, 1.0)
    estimate = tv_monte_carlo(P, P, 1000, RandomSource(0))
    assert estimate.value == 0.0
    assert estimate.std_error == 0.0


def test_monte_carlo_agrees_with_oracle():
    estimate = tv_monte_carlo(_normal(0.0, 1.0), _normal(1.0, 1.0), 100_000, RandomSource(1))
    oracle = tv_gaussian_oracle_1d(0.0, 1.0, 1.0, 1.0)
    assert oracle == pytest.approx(0.382925, abs=1e-6)
    assert abs(estimate.value - oracle) <= 4 * estimate.std_error


@pytest.mark.parametrize('mu1, s1, mu2, s2', PAIRS)
def test_oracle_agrees_with_quadrature(mu1, s1, mu2, s2):
    oracle = tv_gaussian_oracle_1d(mu1, s1, mu2, s2)
    quadrature = tv_quadrature_1d(stats.norm(mu1, s1), stats.norm(mu2, s2))
    assert oracle == pytest.approx(quadrature, abs=1e-6)


@pytest.mark.parametrize('index, pair', list(enumerate(PAIRS)))
def test_monte_carlo_within_four_standard_errors(index, pair):
    mu1, s1, mu2, s2 = pair
    estimate = tv_monte_carlo(_normal(mu1, s1), _normal(mu2, s2), 10_000, RandomSource(100).spawn(index))
    assert abs(estimate.value - tv_gaussian_oracle_1d(mu1, s1, mu2, s2)) <= 4 * estimate.std_error


def test_grand_mean_is_unbiased():
    P, Q = _normal(0.0, 1.0), _normal(0.5, 1.2)
    estimates = [tv_monte_carlo(P, Q, 2000, RandomSource(7).spawn(i)) for i in range(40)]
    grand_mean = np.mean([e.value for e in estimates])
    grand_se = np.sqrt(np.sum([e.std_error ** 2 for e in estimates])) / len(estimates)
    assert abs(grand_mean - tv_gaussian_oracle_1d(0.0, 1.0, 0.5, 1.2)) <= 4 * grand_se


@pytest.mark.parametrize('mu1, s1, mu2, s2', PAIRS)
def test_scaled_positive_part_bounds_tv(mu1, s1, mu2, s2):
    p, q = stats.norm(mu1, s1), stats.norm(mu2, s2)
    tv = tv_quadrature_1d(p, q)
    for c in (1.0, 1.5, 3.0):
        assert positive_part_integral(p, q, c) >= tv - 1e-7
    # para c < 1 a cota vale com os papéis trocados: ∫(q − c·p)_+ = c·∫(q/c − p)_+
    for c in (0.5, 0.9):
        assert c * positive_part_integral(q, p, 1.0 / c) >= tv - 1e-7


@pytest.mark.parametrize('mu1, s1, mu2, s2', RANDOM_PAIRS)
@pytest.mark.parametrize('c', [0.5, 1.0, 2.0])
def test_positive_part_bound_on_random_pairs(mu1, s1, mu2, s2, c):
    p, q = stats.norm(mu1, s1), stats.norm(mu2, s2)
    tv = tv_quadrature_1d(p, q)
    bound = positive_part_integral(p, q, c) if c >= 1.0 else c * positive_part_integral(q, p, 1.0 / c)
    assert bound >= tv - 1e-6
    if c == 1.0:
        assert bound == pytest.approx(tv, abs=1e-6)


def test_unscaled_positive_part_can_fall_below_tv():
    p, q = stats.norm(0.0, 1.0), stats.norm(10.0, 1.0)
    assert positive_part_integral(p, q, 0.5) < tv_quadrature_1d(p, q)


def test_disjoint_support_counts_as_full_mass():
    P = ProductDistribution([stats.norm(0.5, 10.0)])
    Q = ProductDistribution([stats.beta(2.0, 2.0)])
    estimate = tv_monte_carlo(P, Q, 5000, RandomSource(2))
    assert 0.9 < estimate.value <= 1.0


def test_non_finite_own_density_is_an_error():
    with pytest.raises(DataError):
        tv_monte_carlo(_BrokenDensity(-np.inf), _normal(0.0, 1.0), 100, RandomSource(0))
    with pytest.raises(DataError):
        tv_monte_carlo(_normal(0.0, 1.0), _BrokenDensity(np.nan), 100, RandomSource(0))
    with pytest.raises(ConfigurationError):
        tv_monte_carlo(_normal(0.0, 1.0), _normal(0.0, 1.0), 1, RandomSource(0))


def test_quality_gate_passes_for_large_tv():
    estimate = tv_with_quality_gate(_normal(0.0, 1.0), _normal(1.0, 1.0), RandomSource(3), num_samples=10_000)
    assert estimate.gate_passed
    assert estimate.num_samples == 10_000


def test_quality_gate_doubles_then_flags():
    P, Q = _normal(0.0, 1.0), _normal(0.001, 1.0)
    capped = tv_with_quality_gate(P, Q, RandomSource(4), num_samples=16, max_samples=64, se_ratio=0.1)
    assert capped.num_samples == 64
    assert not capped.gate_passed

    relaxed = tv_with_quality_gate(P, Q, RandomSource(4), num_samples=16, max_samples=65_536, se_ratio=0.1)
    assert relaxed.gate_passed
    assert relaxed.std_error <= 0.1 * relaxed.value
