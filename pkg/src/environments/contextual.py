"""
Contextual Embedding
====================

Mergulho (contexto x′, braço i) → covariável de dimensão m·d com x′ no
bloco i e zeros nos demais, empilhando θ₁, …, θ_m verticalmente.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from config.settings import ENVIRONMENT_CONFIG
from src.core.errors import ConfigurationError, DimensionError
from src.core.random_source import RandomSource
from src.core.trajectory import as_covariate

logger = logging.getLogger(__name__)


def standard_normal_contexts(context_dim: int) -> Callable[[RandomSource], np.ndarray]:
    """Distribuição de contextos padrão N(0, I_d)."""
    def sampler(rng: RandomSource) -> np.ndarray:
        return rng.standard_normal(context_dim)
    return sampler


@dataclass(frozen=True)
class ContextualEmbedding:
    num_arms: int
    context_dim: int
    context_distribution: Optional[Callable[[RandomSource], np.ndarray]] = None

    def __post_init__(self):
        if self.num_arms < 1 or self.context_dim < 1:
            raise ConfigurationError(f"Dimensões contextuais inválidas: m={self.num_arms}, d={self.context_dim}")
        if self.context_distribution is None:
            object.__setattr__(self, 'context_distribution', standard_normal_contexts(self.context_dim))

    @property
    def dimension(self) -> int:
        return self.num_arms * self.context_dim

    def sample_context(self, rng: RandomSource) -> np.ndarray:
        return as_covariate(self.context_distribution(rng), self.context_dim)


def embed_context(emb: ContextualEmbedding, context, arm: int) -> np.ndarray:
    """
    Coloca o contexto no bloco do braço `arm` (0-based).

    Args:
        emb: Mergulho contextual
        context: Vetor de contexto de dimensão d
        arm: Índice do braço

    Returns:
        Covariável de dimensão m·d
    """
    if not 0 <= arm < emb.num_arms:
        raise DimensionError(f"Braço {arm} fora de [0, {emb.num_arms})")
    context = as_covariate(context, emb.context_dim)
    x = np.zeros(emb.dimension)
    x[arm * emb.context_dim:(arm + 1) * emb.context_dim] = context
    return x


def contextual_parameters(thetas=None, preset: Optional[str] = None) -> np.ndarray:
    """
    Matriz m×d de parâmetros θ_i, explícita ou de um preset nomeado.

    Returns:
        Array m×d
    """
    if thetas is None:
        presets = ENVIRONMENT_CONFIG['contextual_presets']
        if preset not in presets:
            raise ConfigurationError(f"Preset contextual desconhecido: {preset}")
        thetas = presets[preset]
    thetas = np.asarray(thetas, dtype=float)
    if thetas.ndim != 2:
        raise ConfigurationError(f"thetas deve ser uma matriz m×d, recebido shape {thetas.shape}")
    return thetas
