"""
LQR Environment
===============

Dinâmica linear x_{j+1} = A x_j + B u_j + ε_j e a serialização de cada
transição em k linhas (covariável, resultado) do modelo linear gaussiano,
com parâmetro vec([A B]) em ordem row-major.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from config.settings import ENVIRONMENT_CONFIG
from src.core.errors import ConfigurationError, DimensionError
from src.core.random_source import RandomSource
from src.core.trajectory import GramAccumulator, as_covariate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LqrEnv:
    """
    Sistema linear com ruído gaussiano isotrópico de variância σ².
    """

    A: np.ndarray
    B: np.ndarray
    noise_sigma2: float

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        B = np.atleast_2d(np.asarray(self.B, dtype=float))
        if A.shape[0] != A.shape[1]:
            raise ConfigurationError(f"A deve ser quadrada, recebido shape {A.shape}")
        if B.shape[0] != A.shape[0] or B.shape[1] < 1:
            raise ConfigurationError(f"B com shape {B.shape} incompatível com A {A.shape}")
        if not np.all(np.isfinite(A)) or not np.all(np.isfinite(B)):
            raise ConfigurationError("A e B devem ser finitas")
        if not np.isfinite(self.noise_sigma2) or self.noise_sigma2 <= 0.0:
            raise ConfigurationError(f"noise_sigma2 deve ser positivo, recebido {self.noise_sigma2}")
        object.__setattr__(self, 'A', A)
        object.__setattr__(self, 'B', B)

    @property
    def state_dim(self) -> int:
        return self.A.shape[0]

    @property
    def action_dim(self) -> int:
        return self.B.shape[1]

    @property
    def block_dim(self) -> int:
        return self.state_dim + self.action_dim

    @property
    def dimension(self) -> int:
        """Dimensão da covariável serializada, k·(k+d)."""
        return self.state_dim * self.block_dim

    @property
    def beta0(self) -> np.ndarray:
        """Parâmetro verdadeiro vec([A B]) em ordem row-major."""
        return np.hstack([self.A, self.B]).ravel()

    @property
    def noise_sigma(self) -> float:
        return float(np.sqrt(self.noise_sigma2))

    def initial_state(self) -> np.ndarray:
        return np.zeros(self.state_dim)


def lqr_preset(name: str, noise_sigma2: Optional[float] = None) -> LqrEnv:
    """
    Constrói um dos presets documentados em ENVIRONMENT_CONFIG.

    Args:
        name: 'determined', 'stabilizable' ou 'unstabilizable'
        noise_sigma2: Variância do ruído (padrão da configuração)

    Returns:
        LqrEnv correspondente
    """
    presets = ENVIRONMENT_CONFIG['lqr_presets']
    if name not in presets:
        raise ConfigurationError(f"Preset LQR desconhecido: {name}")
    preset = presets[name]
    noise = ENVIRONMENT_CONFIG['lqr_noise_sigma2'] if noise_sigma2 is None else noise_sigma2
    return LqrEnv(preset['A'], preset['B'], noise)


def serialize_transition(env: LqrEnv, state: np.ndarray, action: np.ndarray,
                         next_state: np.ndarray) -> List[Tuple[np.ndarray, float]]:
    """Uma linha por coordenada do estado: z = (x, u) no bloco i, resultado next_i."""
    z = np.concatenate([state, action])
    size = env.block_dim
    rows = []
    for i in range(env.state_dim):
        x = np.zeros(env.dimension)
        x[i * size:(i + 1) * size] = z
        rows.append((x, float(next_state[i])))
    return rows


def lqr_transition(env: LqrEnv, state, action, rng: RandomSource) -> Tuple[np.ndarray, List[Tuple[np.ndarray, float]]]:
    """
    Avança o sistema um passo e serializa a transição.

    Args:
        env: Ambiente LQR
        state: Estado atual (k)
        action: Ação (d)
        rng: Fonte aleatória do ruído

    Returns:
        (próximo estado, k linhas serializadas)
    """
    state = as_covariate(state, env.state_dim)
    action = as_covariate(action, env.action_dim)
    noise = env.noise_sigma * rng.standard_normal(env.state_dim)
    next_state = env.A @ state + env.B @ action + noise
    return next_state, serialize_transition(env, state, action, next_state)


def lqr_gram_identity(env: LqrEnv, acc: GramAccumulator, block_gram: np.ndarray) -> float:
    """
    Desvio relativo entre XᵀX serializado e I_k ⊗ G_n.

    Args:
        env: Ambiente LQR
        acc: Acumulador das linhas serializadas
        block_gram: G_n, Gram dos vetores (estado, ação) empilhados

    Returns:
        max |XᵀX − I_k ⊗ G_n| / max(1, max |G_n|)
    """
    block_gram = np.asarray(block_gram, dtype=float)
    if block_gram.shape != (env.block_dim, env.block_dim):
        raise DimensionError(f"G_n com shape {block_gram.shape}, esperado {(env.block_dim, env.block_dim)}")
    expected = np.kron(np.eye(env.state_dim), block_gram)
    scale = max(1.0, float(np.max(np.abs(block_gram))))
    return float(np.max(np.abs(acc.gram - expected)) / scale)
