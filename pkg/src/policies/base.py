"""
Policy Base
===========

Tipos comuns das regras de amostragem adaptativa: o enum de políticas,
as contagens por braço N_{i,n} e a interface base.

Índices de braço são 0-based internamente; o log de replay e o CLI usam
1-based.
"""

import logging
from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from src.core.errors import ConfigurationError, InternalError
from src.core.random_source import RandomSource
from src.core.trajectory import Trajectory, basis_index

logger = logging.getLogger(__name__)


class PolicyKind(str, Enum):
    UCB = 'ucb'
    THOMPSON_GAUSSIAN = 'thompson-gaussian'
    THOMPSON_BERNOULLI = 'thompson-bernoulli'
    BATCHED_THOMPSON = 'batched-thompson'
    LIN_UCB = 'lin-ucb'
    NCEC = 'ncec'
    LAI_WEI = 'lai-wei'
    UNIFORM = 'uniform'
    REPLAY = 'replay'


def resolve_policy_kind(kind) -> PolicyKind:
    try:
        return PolicyKind(str(kind).lower())
    except ValueError:
        raise ConfigurationError(f"Política desconhecida: {kind}") from None


class ArmCounts:
    """
    Contagens N_{i,n}, somas dos resultados e médias amostrais μ̂_i por braço.
    """

    def __init__(self, num_arms: int):
        if num_arms < 1:
            raise ConfigurationError(f"Número de braços inválido: {num_arms}")
        self.counts = np.zeros(num_arms, dtype=int)
        self.sums = np.zeros(num_arms)

    @classmethod
    def from_arrays(cls, counts, sums) -> "ArmCounts":
        counts = np.asarray(counts)
        arm_counts = cls(counts.shape[0])
        arm_counts.counts = counts.astype(int)
        arm_counts.sums = np.asarray(sums, dtype=float).copy()
        arm_counts.validate()
        return arm_counts

    @classmethod
    def from_trajectory(cls, traj: Trajectory) -> "ArmCounts":
        """Contagem offline de uma trajetória de bandit (covariáveis canônicas)."""
        arm_counts = cls(traj.dimension)
        for x, y in traj:
            arm_counts.record(basis_index(x), y)
        return arm_counts

    @property
    def num_arms(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def means(self) -> np.ndarray:
        """Médias amostrais; braços sem pulls ficam com 0."""
        return np.divide(self.sums, self.counts, out=np.zeros(self.num_arms), where=self.counts > 0)

    def record(self, arm: int, outcome: float) -> "ArmCounts":
        if not 0 <= arm < self.num_arms:
            raise InternalError(f"Braço {arm} fora de [0, {self.num_arms})")
        self.counts[arm] += 1
        self.sums[arm] += outcome
        return self

    def validate(self) -> "ArmCounts":
        if np.any(self.counts < 0):
            raise InternalError(f"Contagens negativas: {self.counts}")
        return self

    def copy(self) -> "ArmCounts":
        return ArmCounts.from_arrays(self.counts.copy(), self.sums.copy())

    def __repr__(self) -> str:
        return f"ArmCounts(counts={self.counts.tolist()}, means={np.round(self.means, 4).tolist()})"


class Policy(ABC):
    """
    Regra de amostragem Λ com estado próprio.

    A seleção depende apenas do estado, do histórico, do horizonte e da
    aleatoriedade; parâmetros verdadeiros do ambiente nunca chegam aqui.
    """

    kind: PolicyKind

    def __init__(self, horizon: Optional[int] = None):
        self.horizon = horizon
        self.step = 0

    @abstractmethod
    def observe(self, *args) -> None:
        """Registra o resultado do passo atual."""

    def metadata(self) -> Dict[str, Any]:
        return {'kind': self.kind.value, 'horizon': self.horizon}


class BanditPolicy(Policy):
    """Política de bandit com braços discretos e ArmCounts como estado."""

    def __init__(self, num_arms: int, horizon: Optional[int] = None):
        super().__init__(horizon)
        self.counts = ArmCounts(num_arms)

    @property
    def num_arms(self) -> int:
        return self.counts.num_arms

    @abstractmethod
    def select_arm(self, rng: RandomSource) -> int:
        """Próximo braço (0-based)."""

    def observe(self, arm: int, reward: float) -> None:
        self.counts.record(arm, reward)
        self.step += 1
