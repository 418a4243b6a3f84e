"""
Lai–Wei Autoregressive Design
=============================

Desenho determinístico x_1 fixo e x_i = y_{i−1}: o MLE é consistente mas
assintoticamente não normal quando β₀ = 1.
"""

import logging
from typing import Optional

import numpy as np

from config.settings import POLICY_CONFIG
from src.core.errors import DimensionError
from src.core.trajectory import Trajectory
from .base import Policy, PolicyKind

logger = logging.getLogger(__name__)


def lai_wei_select(history: Trajectory, x1: float) -> np.ndarray:
    """x1 no primeiro passo, depois o resultado anterior y_{i−1}."""
    if history.dimension != 1:
        raise DimensionError(f"Desenho Lai–Wei exige p=1, recebido p={history.dimension}")
    if len(history) == 0:
        return np.array([float(x1)])
    return np.array([history.last_outcome])


class LaiWeiPolicy(Policy):
    kind = PolicyKind.LAI_WEI

    def __init__(self, x1: float = None, horizon: Optional[int] = None):
        super().__init__(horizon)
        self.x1 = x1 if x1 is not None else POLICY_CONFIG['lai_wei']['x1']

    def select_covariate(self, history: Trajectory) -> np.ndarray:
        return lai_wei_select(history, self.x1)

    def observe(self, x, y: float) -> None:
        self.step += 1

    def metadata(self):
        return {**super().metadata(), 'x1': self.x1}
