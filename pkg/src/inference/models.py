"""
Inference Models
================

Associa um tipo de modelo (gaussiano, heterocedástico, Bernoulli, Poisson)
à sua priori e aos parâmetros conhecidos, e constrói posterior e normal
representativa a partir de estatísticas suficientes mantidas passo a passo.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from src.core.errors import ConfigurationError, DimensionError
from src.core.trajectory import GramAccumulator, as_covariate, basis_index
from src.policies.base import ArmCounts
from .distributions import GaussianDistribution
from .exp_family import expfam_conjugate_posterior, expfam_representative_normal
from .gaussian import gaussian_conjugate_posterior, representative_normal

logger = logging.getLogger(__name__)


class ModelKind(str, Enum):
    GAUSSIAN = 'gaussian'
    HETEROSKEDASTIC = 'heteroskedastic'
    BERNOULLI = 'bernoulli'
    POISSON = 'poisson'


class SufficientStatistics:
    """
    Estatísticas de uma réplica: Gram não ponderado (diagnósticos), Gram
    ponderado por 1/σ_i² (heterocedástico) e contagens por braço.
    """

    def __init__(self, model: "InferenceModel"):
        self.model = model
        self.gram = GramAccumulator(model.dimension)
        self.weighted = GramAccumulator(model.dimension) if model.kind is ModelKind.HETEROSKEDASTIC else None
        self.counts = ArmCounts(model.dimension) if model.is_bandit else None

    @property
    def count(self) -> int:
        return self.gram.count

    def observe(self, x, y: float) -> "SufficientStatistics":
        x = as_covariate(x, self.model.dimension)
        self.gram.update(x, y)
        if self.counts is not None:
            arm = basis_index(x)
            self.counts.record(arm, y)
            if self.weighted is not None:
                self.weighted.update(x, y, weight=1.0 / self.model.variances[arm])
        return self


@dataclass(frozen=True)
class InferenceModel:
    kind: ModelKind
    dimension: int
    prior: Optional[GaussianDistribution] = None
    sigma2: float = 1.0
    variances: Optional[np.ndarray] = None
    prior_hyper: Tuple[float, float] = (1.0, 1.0)

    def __post_init__(self):
        object.__setattr__(self, 'kind', ModelKind(self.kind))
        if self.kind in (ModelKind.GAUSSIAN, ModelKind.HETEROSKEDASTIC):
            if self.prior is None:
                raise ConfigurationError(f"Modelo {self.kind.value} exige priori gaussiana")
            if self.prior.dimension != self.dimension:
                raise DimensionError(f"Priori com p={self.prior.dimension}, modelo com p={self.dimension}")
        if self.kind is ModelKind.HETEROSKEDASTIC:
            variances = as_covariate(self.variances, self.dimension)
            if np.any(variances <= 0.0):
                raise ConfigurationError(f"Variâncias devem ser positivas: {variances}")
            object.__setattr__(self, 'variances', variances)
        if self.kind is ModelKind.GAUSSIAN and (not np.isfinite(self.sigma2) or self.sigma2 <= 0.0):
            raise ConfigurationError(f"sigma2 deve ser positivo, recebido {self.sigma2}")

    @property
    def is_bandit(self) -> bool:
        """Modelos cujas covariáveis são vetores canônicos (braços)."""
        return self.kind is not ModelKind.GAUSSIAN

    @property
    def family(self) -> Optional[str]:
        return self.kind.value if self.kind in (ModelKind.BERNOULLI, ModelKind.POISSON) else None

    def statistics(self) -> SufficientStatistics:
        return SufficientStatistics(self)

    def posterior(self, stats: SufficientStatistics):
        """Posterior exata: gaussiana ou produto Beta/Gamma."""
        if self.kind is ModelKind.GAUSSIAN:
            return gaussian_conjugate_posterior(self.prior, stats.gram, self.sigma2)
        if self.kind is ModelKind.HETEROSKEDASTIC:
            return gaussian_conjugate_posterior(self.prior, stats.weighted, 1.0)
        return expfam_conjugate_posterior(self.family, self.prior_hyper, stats.counts)

    def representative_normal(self, stats: SufficientStatistics):
        """
        Normal representativa correspondente.

        Raises:
            SingularMatrixError: Gram singular (modelos gaussianos)
            BoundaryMLEError: MLE na fronteira (famílias exponenciais)
        """
        if self.kind is ModelKind.GAUSSIAN:
            return representative_normal(stats.gram, self.sigma2)
        if self.kind is ModelKind.HETEROSKEDASTIC:
            return representative_normal(stats.weighted, 1.0)
        return expfam_representative_normal(self.family, stats.counts)
