"""
MLE Normality Probe
===================

Anderson–Darling contra N(0, 1) totalmente especificada, aplicado ao MLE
studentizado √(Σx²)(β̂ − β₀)/σ de réplicas independentes. O p-valor vem da
distribuição nula de Monte Carlo de scipy.stats.goodness_of_fit.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats

from config.settings import HARNESS_CONFIG
from src.core.errors import ConfigurationError, DimensionError
from src.core.random_source import RandomSource
from src.core.trajectory import GramAccumulator
from src.inference.gaussian import mle, representative_normal

logger = logging.getLogger(__name__)


@dataclass
class NormalityProbe:
    statistic: float
    pvalue: float
    level: float
    reject: bool
    num_values: int


def mle_normality_probe(values: Sequence[float], level: float = None, min_values: int = None,
                        mc_samples: int = None, rng: RandomSource = None) -> NormalityProbe:
    """
    Testa normalidade padrão dos MLEs studentizados.

    Args:
        values: Um valor studentizado por réplica
        level: Nível do teste (padrão 1%)
        min_values: Mínimo de réplicas exigido (padrão 500)
        mc_samples: Amostras da distribuição nula (padrão 9999)
        rng: Fonte aleatória da distribuição nula (padrão semente fixa da configuração)

    Returns:
        NormalityProbe com estatística A², p-valor e decisão
    """
    level = level or HARNESS_CONFIG['normality_level']
    min_values = min_values or HARNESS_CONFIG['min_normality_replicates']
    mc_samples = mc_samples or HARNESS_CONFIG['normality_mc_samples']
    if not 0.0 < level < 1.0:
        raise ConfigurationError(f"Nível do teste deve estar em (0, 1), recebido {level}")
    values = np.asarray(values, dtype=float)
    if values.shape[0] < min_values:
        raise ConfigurationError(f"Teste de normalidade exige >= {min_values} réplicas, recebido {values.shape[0]}")
    if not np.all(np.isfinite(values)):
        raise ConfigurationError("Valores studentizados não finitos")

    rng = rng or RandomSource(HARNESS_CONFIG['normality_mc_seed'])
    result = stats.goodness_of_fit(stats.norm, values, known_params={'loc': 0.0, 'scale': 1.0},
                                   statistic='ad', n_mc_samples=mc_samples, random_state=rng.generator)
    statistic, pvalue = float(result.statistic), float(result.pvalue)
    logger.debug(f"Anderson–Darling: A²={statistic:.4f}, p={pvalue:.4f} ({values.shape[0]} valores)")
    return NormalityProbe(statistic, pvalue, level, pvalue < level, values.shape[0])


def studentized_mle(acc: GramAccumulator, beta0: float, sigma2: float) -> float:
    """√(Σx²)(β̂ − β₀)/σ para o modelo escalar."""
    if acc.dimension != 1:
        raise DimensionError(f"MLE studentizado escalar exige p=1, recebido p={acc.dimension}")
    beta_hat = float(mle(acc)[0])
    return float(np.sqrt(acc.gram[0, 0]) * (beta_hat - beta0) / np.sqrt(sigma2))


def studentized_margin(acc: GramAccumulator, beta0, sigma2: float) -> float:
    """(m̂ − m)/sd da margem β₁ − β₂ sob a normal representativa."""
    marginal = representative_normal(acc, sigma2).linear_marginal(
        np.r_[1.0, -1.0, np.zeros(acc.dimension - 2)]
    )
    beta0 = np.asarray(beta0, dtype=float)
    return float((marginal.mean() - (beta0[0] - beta0[1])) / marginal.std())
