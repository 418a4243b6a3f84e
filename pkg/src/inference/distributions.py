"""
Distributions
=============

Distribuições com densidade avaliável e amostragem explícita, usadas como
posteriores e normais representativas.

Contrato comum:
    sample(n, rng) -> array (n, p)
    logpdf(X)      -> array (n,)
"""

import logging
from functools import cached_property
from typing import List, Sequence

import numpy as np
from scipy import integrate, linalg, optimize, stats

from src.core.errors import ConfigurationError, DimensionError
from src.core.linalg import spd_factor
from src.core.random_source import RandomSource
from src.core.trajectory import as_covariate

logger = logging.getLogger(__name__)

_LOG_2PI = float(np.log(2.0 * np.pi))

# Famílias aceitas como componentes de ProductDistribution
COMPONENT_FAMILIES = ('norm', 'beta', 'gamma')


class GaussianDistribution:
    """
    Normal multivariada N(mean, covariance) com Cholesky em cache.
    """

    def __init__(self, mean, covariance):
        self.mean = as_covariate(mean)
        covariance = np.atleast_2d(np.asarray(covariance, dtype=float))
        if covariance.shape != (self.dimension, self.dimension):
            raise DimensionError(f"Covariância com shape {covariance.shape}, esperado p={self.dimension}")
        self.covariance = 0.5 * (covariance + covariance.T)
        # valida SPD já na construção
        self._factor = np.tril(spd_factor(self.covariance)[0])

    @property
    def dimension(self) -> int:
        return self.mean.shape[0]

    @property
    def cholesky(self) -> np.ndarray:
        return self._factor

    @cached_property
    def log_det(self) -> float:
        return 2.0 * float(np.sum(np.log(np.diag(self._factor))))

    @cached_property
    def precision(self) -> np.ndarray:
        inverse_factor = linalg.solve_triangular(self._factor, np.eye(self.dimension), lower=True)
        precision = inverse_factor.T @ inverse_factor
        return 0.5 * (precision + precision.T)

    def sample(self, n: int, rng: RandomSource) -> np.ndarray:
        z = rng.standard_normal((int(n), self.dimension))
        return self.mean + z @ self._factor.T

    def logpdf(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float).reshape(-1, self.dimension)
        z = linalg.solve_triangular(self._factor, (X - self.mean).T, lower=True)
        return -0.5 * np.sum(z * z, axis=0) - 0.5 * (self.dimension * _LOG_2PI + self.log_det)

    def linear_marginal(self, weights):
        """Marginal 1-D de wᵀβ, como `scipy.stats.norm` congelada."""
        weights = as_covariate(weights, self.dimension)
        variance = float(weights @ self.covariance @ weights)
        return stats.norm(loc=float(weights @ self.mean), scale=np.sqrt(variance))

    def marginal(self, index: int):
        return stats.norm(loc=float(self.mean[index]), scale=float(np.sqrt(self.covariance[index, index])))

    def __repr__(self) -> str:
        return f"GaussianDistribution(p={self.dimension}, mean={np.round(self.mean, 4)})"


class ProductDistribution:
    """
    Produto de distribuições 1-D independentes (normal, beta ou gamma).

    Os componentes são objetos congelados de `scipy.stats`; a densidade
    conjunta é o produto das densidades dos componentes.
    """

    def __init__(self, components: Sequence):
        if not components:
            raise ConfigurationError("ProductDistribution exige ao menos um componente")
        for component in components:
            name = getattr(getattr(component, 'dist', None), 'name', None)
            if name not in COMPONENT_FAMILIES:
                raise ConfigurationError(f"Componente não suportado: {name}")
        self.components: List = list(components)

    @property
    def dimension(self) -> int:
        return len(self.components)

    @property
    def families(self) -> List[str]:
        return [component.dist.name for component in self.components]

    @property
    def mean(self) -> np.ndarray:
        return np.array([component.mean() for component in self.components])

    @property
    def variances(self) -> np.ndarray:
        return np.array([component.var() for component in self.components])

    def sample(self, n: int, rng: RandomSource) -> np.ndarray:
        columns = [component.rvs(size=int(n), random_state=rng.generator) for component in self.components]
        return np.column_stack(columns).astype(float)

    def logpdf(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float).reshape(-1, self.dimension)
        total = np.zeros(X.shape[0])
        for i, component in enumerate(self.components):
            total += component.logpdf(X[:, i])
        return total

    def marginal(self, index: int):
        return self.components[index]

    def __repr__(self) -> str:
        return f"ProductDistribution({', '.join(self.families)})"


class DifferenceDistribution:
    """
    Distribuição de X₁ − X₂ para componentes independentes quaisquer.

    A CDF é obtida por quadratura, F(t) = ∫ f₁(x) S₂(x − t) dx, e os quantis
    por inversão numérica (brentq).
    """

    def __init__(self, first, second):
        self.first = first
        self.second = second

    def mean(self) -> float:
        return float(self.first.mean() - self.second.mean())

    def var(self) -> float:
        return float(self.first.var() + self.second.var())

    def cdf(self, t: float) -> float:
        lo, hi = self.first.ppf([1e-12, 1.0 - 1e-12])
        value, _ = integrate.quad(
            lambda x: self.first.pdf(x) * self.second.sf(x - t),
            lo, hi, limit=200,
        )
        return float(np.clip(value, 0.0, 1.0))

    def ppf(self, q: float) -> float:
        spread = 10.0 * np.sqrt(self.var()) + 1e-12
        lo, hi = self.mean() - spread, self.mean() + spread
        # expande o intervalo até conter o quantil
        while self.cdf(lo) > q:
            lo -= spread
        while self.cdf(hi) < q:
            hi += spread
        return float(optimize.brentq(lambda t: self.cdf(t) - q, lo, hi, xtol=1e-10))
