"""
Gaussian Inference
==================

MLE, normal representativa N(β̂_n, σ²(XᵀX)⁻¹) e posterior conjugada exata
do modelo linear gaussiano com σ² conhecido.
"""

import logging
from typing import Sequence

import numpy as np

from src.core.errors import ConfigurationError, DimensionError
from src.core.linalg import solve_spd, spd_inverse
from src.core.trajectory import GramAccumulator, Trajectory, basis_index
from .distributions import GaussianDistribution

logger = logging.getLogger(__name__)


def _check_sigma2(sigma2: float) -> float:
    if not np.isfinite(sigma2) or sigma2 <= 0.0:
        raise ConfigurationError(f"sigma2 deve ser positivo, recebido {sigma2}")
    return float(sigma2)


def mle(acc: GramAccumulator) -> np.ndarray:
    """
    β̂_n = (XᵀX)⁻¹Xᵀy.

    Raises:
        SingularMatrixError: Gram singular (sem regularização silenciosa)
    """
    return solve_spd(acc.gram, acc.xty)


def representative_normal(acc: GramAccumulator, sigma2: float) -> GaussianDistribution:
    """
    Normal representativa N(β̂_n, σ²(XᵀX)⁻¹).

    Args:
        acc: Acumulador de Gram da trajetória
        sigma2: Variância conhecida dos resultados

    Returns:
        GaussianDistribution
    """
    sigma2 = _check_sigma2(sigma2)
    return GaussianDistribution(mle(acc), sigma2 * spd_inverse(acc.gram))


def gaussian_prior(mean, variance, dimension: int) -> GaussianDistribution:
    """Priori N(m·1, v·I) (escalares) ou com média/covariância explícitas."""
    mean = np.broadcast_to(np.asarray(mean, dtype=float), (dimension,))
    variance = np.asarray(variance, dtype=float)
    if variance.ndim == 0:
        covariance = variance * np.eye(dimension)
    elif variance.ndim == 1:
        covariance = np.diag(variance)
    else:
        covariance = variance
    return GaussianDistribution(mean, covariance)


def gaussian_conjugate_posterior(prior: GaussianDistribution, acc: GramAccumulator,
                                 sigma2: float) -> GaussianDistribution:
    """
    Posterior exata sob priori gaussiana.

    Σ_post = (Σ₀⁻¹ + XᵀX/σ²)⁻¹, μ_post = Σ_post(Σ₀⁻¹μ₀ + Xᵀy/σ²).

    Args:
        prior: Priori N(μ₀, Σ₀)
        acc: Acumulador de Gram
        sigma2: Variância conhecida

    Returns:
        GaussianDistribution posterior
    """
    sigma2 = _check_sigma2(sigma2)
    if prior.dimension != acc.dimension:
        raise DimensionError(f"Priori com p={prior.dimension}, acumulador com p={acc.dimension}")
    if acc.count == 0:
        return prior
    precision = prior.precision + acc.gram / sigma2
    rhs = prior.precision @ prior.mean + acc.xty / sigma2
    return GaussianDistribution(solve_spd(precision, rhs), spd_inverse(precision))


def heteroskedastic_accumulator(traj: Trajectory, variances: Sequence[float]) -> GramAccumulator:
    """Acumulador com pesos 1/σ_i² (covariáveis canônicas)."""
    variances = np.asarray(variances, dtype=float)
    if variances.shape[0] != traj.dimension:
        raise DimensionError(f"{variances.shape[0]} variâncias para p={traj.dimension}")
    acc = GramAccumulator(traj.dimension)
    for x, y in traj:
        acc.update(x, y, weight=1.0 / variances[basis_index(x)])
    return acc


def heteroskedastic_conjugate_posterior(prior: GaussianDistribution, traj: Trajectory,
                                        variances: Sequence[float]) -> GaussianDistribution:
    """Posterior direta do bandit heterocedástico (verossimilhança ponderada)."""
    return gaussian_conjugate_posterior(prior, heteroskedastic_accumulator(traj, variances), 1.0)
