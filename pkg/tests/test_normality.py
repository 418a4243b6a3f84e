import numpy as np
import pytest

from src.core.errors import ConfigurationError, DimensionError
from src.core.random_source import RandomSource
from src.core.trajectory import GramAccumulator, basis_vector
from src.metrics.normality import mle_normality_probe, studentized_margin, studentized_mle

PROBES = 200
VALUES_PER_PROBE = 500
NULL_SAMPLES = 999


def test_anderson_darling_single_value():
    probe = mle_normality_probe([0.0], min_values=1, mc_samples=99)
    assert probe.statistic == pytest.approx(-1.0 + 2.0 * np.log(2.0))
    assert 0.0 < probe.pvalue <= 1.0
    assert probe.num_values == 1


def test_probe_is_calibrated_under_the_null():
    rejections = sum(
        mle_normality_probe(RandomSource(11).spawn(i).standard_normal(VALUES_PER_PROBE),
                            mc_samples=NULL_SAMPLES, rng=RandomSource(13).spawn(i)).reject
        for i in range(PROBES)
    )
    # nível 1%: esperadas 2 rejeições em 200
    assert rejections <= 0.04 * PROBES


def test_probe_rejects_shifted_values():
    values = 0.5 + RandomSource(12).standard_normal(VALUES_PER_PROBE)
    probe = mle_normality_probe(values)
    assert probe.reject
    assert probe.pvalue < probe.level
    # N(0.5, 1) com 500 valores: A² muito acima do quantil 99% da nula (≈ 3.86)
    assert probe.statistic > 3.857


def test_null_distribution_is_seeded():
    values = RandomSource(14).standard_normal(VALUES_PER_PROBE)
    first = mle_normality_probe(values, mc_samples=NULL_SAMPLES)
    second = mle_normality_probe(values, mc_samples=NULL_SAMPLES)
    assert (first.statistic, first.pvalue) == (second.statistic, second.pvalue)


def test_probe_requires_enough_values():
    with pytest.raises(ConfigurationError):
        mle_normality_probe(np.zeros(VALUES_PER_PROBE - 1))
    with pytest.raises(ConfigurationError):
        mle_normality_probe(np.zeros(VALUES_PER_PROBE), level=1.5)
    with pytest.raises(ConfigurationError):
        mle_normality_probe(np.r_[np.zeros(VALUES_PER_PROBE - 1), np.nan])


def test_studentized_mle():
    acc = GramAccumulator(1)
    acc.update([2.0], 3.0)
    # β̂ = 1.5, √(Σx²) = 2
    assert studentized_mle(acc, 1.0, 1.0) == pytest.approx(1.0)
    with pytest.raises(DimensionError):
        studentized_mle(GramAccumulator(2), 1.0, 1.0)


def test_studentized_margin():
    acc = GramAccumulator(2)
    acc.update(basis_vector(0, 2), 1.0)
    acc.update(basis_vector(1, 2), 0.0)
    # margem estimada 1, verdadeira 0, sd √2
    assert studentized_margin(acc, [0.0, 0.0], 1.0) == pytest.approx(1.0 / np.sqrt(2.0))
