"""
Heteroskedastic Gaussian Bandits
================================

Braços B_i = N(β_i, σ_i²) e o reescalonamento para uma instância
homocedástica de variância unitária (β̃_i = β_i / σ_i).
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.core.errors import ConfigurationError, DimensionError
from src.core.random_source import RandomSource
from src.core.trajectory import Trajectory, as_covariate, basis_index
from src.inference.distributions import GaussianDistribution
from .linear_gaussian import LinearGaussianEnv

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HeteroskedasticEnv:
    means: np.ndarray
    variances: np.ndarray

    def __post_init__(self):
        means = as_covariate(self.means)
        variances = as_covariate(self.variances, means.shape[0])
        if np.any(variances <= 0.0):
            raise ConfigurationError(f"Variâncias devem ser positivas: {variances}")
        object.__setattr__(self, 'means', means)
        object.__setattr__(self, 'variances', variances)

    @property
    def num_arms(self) -> int:
        return self.means.shape[0]

    @property
    def scales(self) -> np.ndarray:
        return np.sqrt(self.variances)


def sample_heteroskedastic_reward(env: HeteroskedasticEnv, arm: int, rng: RandomSource) -> float:
    """Recompensa do braço `arm` (0-based): N(β_arm, σ_arm²)."""
    return float(env.means[arm] + env.scales[arm] * rng.standard_normal())


def rescale_heteroskedastic(env: HeteroskedasticEnv, traj: Trajectory) -> Tuple[Trajectory, LinearGaussianEnv]:
    """
    Reescala a trajetória para o problema homocedástico de variância 1.

    Resultados do braço i são divididos por σ_i; as covariáveis canônicas
    permanecem e o parâmetro alvo passa a ser β̃_i = β_i / σ_i.

    Args:
        env: Ambiente heterocedástico
        traj: Trajetória com covariáveis da base canônica

    Returns:
        (trajetória reescalada, ambiente linear gaussiano equivalente)
    """
    if traj.dimension != env.num_arms:
        raise DimensionError(f"Trajetória com p={traj.dimension}, ambiente com {env.num_arms} braços")
    scales = env.scales
    rescaled = Trajectory(traj.dimension)
    for x, y in traj:
        rescaled.append(x, y / scales[basis_index(x)])
    return rescaled, LinearGaussianEnv(env.means / scales, 1.0)


def invert_rescaled_trajectory(env: HeteroskedasticEnv, traj: Trajectory) -> Trajectory:
    """Inverso de rescale_heteroskedastic: multiplica os resultados por σ_i."""
    scales = env.scales
    original = Trajectory(traj.dimension)
    for x, y in traj:
        original.append(x, y * scales[basis_index(x)])
    return original


def rescale_prior(env: HeteroskedasticEnv, prior: GaussianDistribution) -> GaussianDistribution:
    """Priori induzida em β̃ = D⁻¹β, com D = diag(σ_i)."""
    inv = 1.0 / env.scales
    return GaussianDistribution(prior.mean * inv, prior.covariance * np.outer(inv, inv))


def invert_rescaled_posterior(env: HeteroskedasticEnv, dist: GaussianDistribution) -> GaussianDistribution:
    """Leva uma distribuição em β̃ de volta para β (multiplicação por σ_i)."""
    scales = env.scales
    return GaussianDistribution(dist.mean * scales, dist.covariance * np.outer(scales, scales))
