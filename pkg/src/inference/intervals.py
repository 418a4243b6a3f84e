"""
Credible Intervals
==================

Intervalos de caudas iguais a partir da função quantil da marginal 1-D.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from src.core.errors import ConfigurationError, DimensionError
from .distributions import DifferenceDistribution, GaussianDistribution, ProductDistribution

logger = logging.getLogger(__name__)

FUNCTIONALS = ('coordinate', 'margin')


def credible_interval(dist, level: float) -> Tuple[float, float]:
    """
    Intervalo de caudas iguais [F⁻¹(α/2), F⁻¹(1 − α/2)].

    Args:
        dist: Marginal 1-D com método ppf (scipy congelada ou DifferenceDistribution)
        level: Nível 1 − α em (0, 1)

    Returns:
        (lo, hi)
    """
    if not 0.0 < level < 1.0:
        raise ConfigurationError(f"Nível deve estar em (0, 1), recebido {level}")
    alpha = 1.0 - level
    return float(dist.ppf(alpha / 2.0)), float(dist.ppf(1.0 - alpha / 2.0))


def functional_marginal(dist, functional: str, index: Optional[int] = None):
    """
    Marginal 1-D de uma coordenada β_index ou da margem β₁ − β₂.

    Args:
        dist: GaussianDistribution ou ProductDistribution
        functional: 'coordinate' ou 'margin'
        index: Coordenada (0-based) quando functional='coordinate'

    Returns:
        Objeto com ppf/cdf/mean
    """
    if functional not in FUNCTIONALS:
        raise ConfigurationError(f"Funcional desconhecido: {functional}")

    if functional == 'coordinate':
        if index is None or not 0 <= index < dist.dimension:
            raise DimensionError(f"Coordenada {index} fora de [0, {dist.dimension})")
        return dist.marginal(index)

    if dist.dimension < 2:
        raise DimensionError("Margem exige ao menos duas coordenadas")
    if isinstance(dist, GaussianDistribution):
        weights = np.zeros(dist.dimension)
        weights[0], weights[1] = 1.0, -1.0
        return dist.linear_marginal(weights)
    if isinstance(dist, ProductDistribution):
        first, second = dist.marginal(0), dist.marginal(1)
        if dist.families[0] == dist.families[1] == 'norm':
            return GaussianDistribution(
                [first.mean(), second.mean()], np.diag([first.var(), second.var()])
            ).linear_marginal([1.0, -1.0])
        return DifferenceDistribution(first, second)
    raise ConfigurationError(f"Distribuição sem marginal definida: {type(dist).__name__}")


def functional_value(beta, functional: str, index: Optional[int] = None) -> float:
    """Valor verdadeiro do funcional para o parâmetro β."""
    beta = np.asarray(beta, dtype=float)
    if functional == 'coordinate':
        return float(beta[index])
    if functional == 'margin':
        return float(beta[0] - beta[1])
    raise ConfigurationError(f"Funcional desconhecido: {functional}")
