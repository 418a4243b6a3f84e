"""
Lin-UCB
=======

Lin-UCB para bandits contextuais lineares com um θ_i por braço.
"""

import logging
from typing import Optional

import numpy as np

from config.settings import POLICY_CONFIG
from src.core.errors import ConfigurationError, DimensionError
from src.core.linalg import solve_spd
from src.core.random_source import RandomSource
from src.core.trajectory import as_covariate
from .base import ArmCounts, Policy, PolicyKind

logger = logging.getLogger(__name__)


def lin_ucb_select(block_grams, block_xty, context, alpha: float, ridge: float) -> int:
    """
    argmax_i [x′ᵀθ̂_i + α·√(x′ᵀ(I_{n,i} + ridge·I)⁻¹x′)], empates no menor índice.

    Args:
        block_grams: Array (m, d, d) com os blocos I_{n,i}
        block_xty: Array (m, d) com os vetores de resposta
        context: Contexto x′ de dimensão d
        alpha: Multiplicador da largura
        ridge: Regularização usada apenas na seleção

    Returns:
        Braço escolhido (0-based)
    """
    if ridge <= 0.0:
        raise ConfigurationError(f"ridge deve ser positivo, recebido {ridge}")
    block_grams = np.asarray(block_grams, dtype=float)
    block_xty = np.asarray(block_xty, dtype=float)
    num_arms, dim = block_xty.shape
    if block_grams.shape != (num_arms, dim, dim):
        raise DimensionError(f"Blocos de Gram com shape {block_grams.shape}, esperado {(num_arms, dim, dim)}")
    context = as_covariate(context, dim)

    scores = np.empty(num_arms)
    for i in range(num_arms):
        regularized = block_grams[i] + ridge * np.eye(dim)
        solved = solve_spd(regularized, np.column_stack([block_xty[i], context]))
        theta_hat, inv_context = solved[:, 0], solved[:, 1]
        scores[i] = context @ theta_hat + alpha * np.sqrt(max(context @ inv_context, 0.0))
    return int(np.argmax(scores))


class LinUcbPolicy(Policy):
    """
    Lin-UCB com round robin forçado nos primeiros m·d passos.
    """

    kind = PolicyKind.LIN_UCB

    def __init__(self, num_arms: int, context_dim: int, alpha: float = None,
                 ridge: float = None, horizon: Optional[int] = None):
        super().__init__(horizon)
        config = POLICY_CONFIG['lin_ucb']
        self.num_arms = num_arms
        self.context_dim = context_dim
        self.alpha = alpha if alpha is not None else config['alpha']
        self.ridge = ridge or config['ridge']
        self.block_grams = np.zeros((num_arms, context_dim, context_dim))
        self.block_xty = np.zeros((num_arms, context_dim))
        self.counts = ArmCounts(num_arms)

    @property
    def warmup_steps(self) -> int:
        return self.num_arms * self.context_dim

    def select_arm(self, context, rng: RandomSource) -> int:
        if self.step < self.warmup_steps:
            return self.step % self.num_arms
        return lin_ucb_select(self.block_grams, self.block_xty, context, self.alpha, self.ridge)

    def observe(self, arm: int, context, reward: float) -> None:
        context = as_covariate(context, self.context_dim)
        self.block_grams[arm] += np.outer(context, context)
        self.block_xty[arm] += reward * context
        self.counts.record(arm, reward)
        self.step += 1

    def metadata(self):
        return {**super().metadata(), 'alpha': self.alpha, 'ridge': self.ridge,
                'forced_round_robin': self.warmup_steps}
