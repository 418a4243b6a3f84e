"""
Total Variation Distance
========================

Estimador Monte Carlo ‖P − Q‖_TV = E_{X∼P}[max(0, 1 − Q(X)/P(X))] em
espaço log, com erro padrão, portão de qualidade SE ≤ razão × estimativa
e oráculos 1-D (forma fechada e quadratura).
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate
from scipy.stats import norm

from config.settings import TV_CONFIG
from src.core.errors import ConfigurationError, DataError
from src.core.random_source import RandomSource

logger = logging.getLogger(__name__)


@dataclass
class TvEstimate:
    value: float
    std_error: float
    num_samples: int
    excluded_replicate: bool = False
    gate_passed: bool = True
    reason: Optional[str] = None

    @classmethod
    def excluded(cls, reason: str) -> "TvEstimate":
        return cls(float('nan'), float('nan'), 0, excluded_replicate=True, gate_passed=False, reason=reason)


def tv_integrand(P, Q, num_samples: int, rng: RandomSource) -> np.ndarray:
    """
    Valores max(0, 1 − exp(log Q − log P)) em amostras X ~ P.

    Raises:
        DataError: log P não finito na própria amostra ou log Q indefinido
    """
    X = P.sample(num_samples, rng)
    log_p = P.logpdf(X)
    log_q = Q.logpdf(X)
    if not np.all(np.isfinite(log_p)):
        raise DataError(f"Densidade de P não finita em {int(np.sum(~np.isfinite(log_p)))} amostras próprias")
    if np.any(np.isnan(log_q)):
        raise DataError("Densidade de Q indefinida (NaN)")
    # log Q = −inf contribui 1; razão > 1 contribui 0
    return -np.expm1(np.minimum(log_q - log_p, 0.0))


def _estimate(values: np.ndarray) -> TvEstimate:
    n = values.shape[0]
    value = float(np.clip(values.mean(), 0.0, 1.0))
    std_error = float(values.std(ddof=1) / np.sqrt(n)) if n > 1 else float('inf')
    return TvEstimate(value, std_error, n)


def tv_monte_carlo(P, Q, num_samples: int, rng: RandomSource) -> TvEstimate:
    """
    Estimativa Monte Carlo da distância TV entre P e Q.

    Args:
        P: Distribuição amostrável e avaliável
        Q: Distribuição avaliável
        num_samples: Número de amostras de P
        rng: Fonte aleatória

    Returns:
        TvEstimate
    """
    if num_samples < 2:
        raise ConfigurationError(f"num_samples deve ser >= 2, recebido {num_samples}")
    return _estimate(tv_integrand(P, Q, num_samples, rng))


def tv_with_quality_gate(P, Q, rng: RandomSource, num_samples: int = None,
                         max_samples: int = None, se_ratio: float = None) -> TvEstimate:
    """
    TV com duplicação adaptativa até SE ≤ se_ratio × estimativa.

    As amostras são acumuladas entre rodadas; ao atingir max_samples sem
    passar no portão, a estimativa é marcada com gate_passed=False.
    """
    num_samples = num_samples or TV_CONFIG['num_samples']
    max_samples = max_samples or TV_CONFIG['max_samples']
    se_ratio = se_ratio or TV_CONFIG['se_ratio']

    values = tv_integrand(P, Q, num_samples, rng)
    estimate = _estimate(values)
    while estimate.std_error > se_ratio * estimate.value and values.shape[0] < max_samples:
        extra = min(values.shape[0], max_samples - values.shape[0])
        values = np.concatenate([values, tv_integrand(P, Q, extra, rng)])
        estimate = _estimate(values)

    if estimate.std_error > se_ratio * estimate.value:
        estimate.gate_passed = False
        logger.debug(f"Portão de qualidade TV não atingido: TV={estimate.value:.3e}, "
                     f"SE={estimate.std_error:.3e}, n={estimate.num_samples}")
    return estimate


def tv_gaussian_oracle_1d(mu1: float, sigma1: float, mu2: float, sigma2: float) -> float:
    """
    TV exata entre N(μ₁, σ₁²) e N(μ₂, σ₂²) pelos pontos de cruzamento.

    Para σ₁ = σ₂ retorna 2Φ(|μ₁ − μ₂|/(2σ)) − 1.
    """
    if sigma1 <= 0.0 or sigma2 <= 0.0:
        raise ConfigurationError(f"Desvios devem ser positivos: {sigma1}, {sigma2}")
    if np.isclose(sigma1, sigma2, rtol=1e-14, atol=0.0):
        return float(2.0 * norm.cdf(abs(mu1 - mu2) / (2.0 * sigma1)) - 1.0)

    a = 1.0 / (2.0 * sigma2 ** 2) - 1.0 / (2.0 * sigma1 ** 2)
    b = mu1 / sigma1 ** 2 - mu2 / sigma2 ** 2
    c = mu2 ** 2 / (2.0 * sigma2 ** 2) - mu1 ** 2 / (2.0 * sigma1 ** 2) + np.log(sigma2 / sigma1)
    r1, r2 = np.sort(np.roots([a, b, c]).real)

    mass1 = norm.cdf(r2, mu1, sigma1) - norm.cdf(r1, mu1, sigma1)
    mass2 = norm.cdf(r2, mu2, sigma2) - norm.cdf(r1, mu2, sigma2)
    return float(abs(mass1 - mass2))


def _integration_range(p, q):
    lo = min(p.ppf(1e-15), q.ppf(1e-15))
    hi = max(p.isf(1e-15), q.isf(1e-15))
    return float(lo), float(hi)


def tv_quadrature_1d(p, q) -> float:
    """½∫|p − q| por quadratura adaptativa (distribuições scipy congeladas)."""
    lo, hi = _integration_range(p, q)
    value, _ = integrate.quad(lambda x: abs(p.pdf(x) - q.pdf(x)), lo, hi,
                              limit=500, epsabs=1e-12, epsrel=1e-10)
    return 0.5 * float(value)


def positive_part_integral(p, q, c: float) -> float:
    """∫(c·p − q)_+ por quadratura."""
    lo, hi = _integration_range(p, q)
    value, _ = integrate.quad(lambda x: max(c * p.pdf(x) - q.pdf(x), 0.0), lo, hi,
                              limit=500, epsabs=1e-12, epsrel=1e-10)
    return float(value)
