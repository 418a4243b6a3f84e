"""
Exponential Family Arms
=======================

Braços Bernoulli (logit) e Poisson (log-taxa) parametrizados pelo parâmetro
natural η, densidade exp(η y − b(η)) h(y).
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np
from scipy.special import expit, logit

from src.core.errors import ConfigurationError, DomainError
from src.core.random_source import RandomSource

logger = logging.getLogger(__name__)


class Family(str, Enum):
    BERNOULLI = 'bernoulli-logit'
    POISSON = 'poisson-log'


_FAMILY_ALIASES = {
    'bernoulli': Family.BERNOULLI,
    'bernoulli-logit': Family.BERNOULLI,
    'poisson': Family.POISSON,
    'poisson-log': Family.POISSON,
}


def resolve_family(family: Union[str, Family]) -> Family:
    """Normaliza o nome da família; nomes desconhecidos são erro de configuração."""
    if isinstance(family, Family):
        return family
    try:
        return _FAMILY_ALIASES[str(family).lower()]
    except KeyError:
        raise ConfigurationError(f"Família desconhecida: {family}") from None


def mean_function(family, eta):
    """b′(η), o parâmetro de média."""
    family = resolve_family(family)
    eta = np.asarray(eta, dtype=float)
    if family is Family.BERNOULLI:
        return expit(eta)
    return np.exp(eta)


def variance_function(family, eta):
    """b″(η), a curvatura."""
    family = resolve_family(family)
    eta = np.asarray(eta, dtype=float)
    if family is Family.BERNOULLI:
        p = expit(eta)
        return p * (1.0 - p)
    return np.exp(eta)


def natural_to_mean(family, eta):
    return mean_function(family, eta)


def mean_to_natural(family, mean):
    """
    Inversa de b′: logit para Bernoulli, log para Poisson.

    Raises:
        DomainError: média fora do domínio da família
    """
    family = resolve_family(family)
    mean = np.asarray(mean, dtype=float)
    if family is Family.BERNOULLI:
        if np.any((mean <= 0.0) | (mean >= 1.0)):
            raise DomainError(f"Média Bernoulli fora de (0, 1): {mean}")
        return logit(mean)
    if np.any(mean <= 0.0):
        raise DomainError(f"Taxa Poisson deve ser positiva: {mean}")
    return np.log(mean)


def check_interior(family, eta) -> np.ndarray:
    """Garante η no interior do espaço natural (finito, para ambas as famílias)."""
    resolve_family(family)
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    if not np.all(np.isfinite(eta)):
        raise DomainError(f"Parâmetro natural fora do interior do espaço: {eta}")
    return eta


@dataclass(frozen=True)
class ExpFamilyArmEnv:
    """
    Bandit de família exponencial com um parâmetro natural por braço.
    """

    family: Family
    natural_params: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'family', resolve_family(self.family))
        try:
            eta = check_interior(self.family, self.natural_params)
        except DomainError as e:
            raise ConfigurationError(str(e)) from e
        object.__setattr__(self, 'natural_params', eta)

    @classmethod
    def from_means(cls, family, means) -> "ExpFamilyArmEnv":
        """Constrói o ambiente a partir de médias (probabilidades ou taxas)."""
        family = resolve_family(family)
        try:
            eta = mean_to_natural(family, means)
        except DomainError as e:
            raise ConfigurationError(str(e)) from e
        return cls(family, eta)

    @property
    def num_arms(self) -> int:
        return self.natural_params.shape[0]

    @property
    def mean_params(self) -> np.ndarray:
        return mean_function(self.family, self.natural_params)


def sample_expfam_reward(env: ExpFamilyArmEnv, arm: int, rng: RandomSource) -> float:
    """
    Amostra a recompensa do braço `arm` (0-based).

    Args:
        env: Ambiente de família exponencial
        arm: Índice do braço
        rng: Fonte aleatória (stream do braço)

    Returns:
        0/1 para Bernoulli, inteiro não negativo para Poisson
    """
    if not 0 <= arm < env.num_arms:
        raise ConfigurationError(f"Braço {arm} fora de [0, {env.num_arms})")
    mean = float(env.mean_params[arm])
    if env.family is Family.BERNOULLI:
        return float(rng.generator.binomial(1, mean))
    if env.family is Family.POISSON:
        return float(rng.generator.poisson(mean))
    raise ConfigurationError(f"Família desconhecida: {env.family}")
