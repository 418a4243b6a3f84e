"""
Linear Gaussian Environment
===========================

Resultados y ~ N(xᵀβ₀, σ²) do procedimento adaptativo linear gaussiano.
"""

import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np

from src.core.errors import ConfigurationError
from src.core.random_source import RandomSource
from src.core.trajectory import as_covariate, basis_vector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinearGaussianEnv:
    """
    Ambiente linear gaussiano com β₀ verdadeiro e variância σ² conhecida.
    """

    beta0: np.ndarray
    sigma2: float

    def __post_init__(self):
        beta0 = as_covariate(self.beta0)
        object.__setattr__(self, 'beta0', beta0)
        if not np.isfinite(self.sigma2) or self.sigma2 <= 0.0:
            raise ConfigurationError(f"sigma2 deve ser positivo, recebido {self.sigma2}")

    @property
    def dimension(self) -> int:
        return self.beta0.shape[0]

    @property
    def sigma(self) -> float:
        return float(np.sqrt(self.sigma2))


def sample_outcome(env: LinearGaussianEnv, x, rng: RandomSource) -> float:
    """
    Amostra y ~ N(xᵀβ₀, σ²).

    Args:
        env: Ambiente linear gaussiano
        x: Covariável de dimensão p
        rng: Fonte aleatória

    Returns:
        Resultado amostrado
    """
    x = as_covariate(x, env.dimension)
    return float(x @ env.beta0 + env.sigma * rng.standard_normal())


class ArmRewardStreams:
    """
    Recompensas serializadas por braço.

    O j-ésimo pull do braço i consome sempre a j-ésima amostra do stream i,
    de modo que políticas distintas rodando na mesma réplica veem as mesmas
    sequências de recompensas por braço.
    """

    def __init__(self, source: RandomSource, num_arms: int):
        self.streams: List[RandomSource] = [source.spawn(arm) for arm in range(num_arms)]
        self.pulls = np.zeros(num_arms, dtype=int)

    def stream(self, arm: int) -> RandomSource:
        self.pulls[arm] += 1
        return self.streams[arm]


def sample_arm(env: LinearGaussianEnv, arm: int, streams: ArmRewardStreams) -> float:
    """Recompensa do braço `arm` (0-based) num bandit gaussiano."""
    return sample_outcome(env, basis_vector(arm, env.dimension), streams.stream(arm))
