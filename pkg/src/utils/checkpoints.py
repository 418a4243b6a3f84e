"""
Checkpoint Utilities
====================

Grades de checkpoints geométricas (potências de 10 e meias-décadas).
"""

import logging
from typing import List

from src.core.errors import ConfigurationError

logger = logging.getLogger(__name__)


def geometric_checkpoints(horizon: int, start: int = 10) -> List[int]:
    """
    Checkpoints 10^k e round(10^(k+1/2)) até o horizonte, que sempre entra.

    Args:
        horizon: Último n
        start: Primeiro checkpoint candidato

    Returns:
        Lista estritamente crescente terminando em `horizon`
    """
    if horizon < 1:
        raise ConfigurationError(f"Horizonte inválido: {horizon}")
    grid = []
    exponent = 0.0
    while True:
        value = int(round(10 ** exponent))
        if value >= horizon:
            break
        if value >= start and (not grid or value > grid[-1]):
            grid.append(value)
        exponent += 0.5
    grid.append(int(horizon))
    return grid


def decades(checkpoints: List[int]) -> List[int]:
    """Subconjunto dos checkpoints que são potências de 10 (e o último)."""
    selected = [n for n in checkpoints if str(n).rstrip('0') == '1']
    if checkpoints and checkpoints[-1] not in selected:
        selected.append(checkpoints[-1])
    return selected
