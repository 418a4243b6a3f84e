"""
Stability Diagnostics
=====================

Extremos espectrais de XᵀX e a estatística log(λ_max)/λ_min em cada
checkpoint, com variantes por bloco I_{n,i} para bandits contextuais.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.core.errors import SingularMatrixError
from src.core.trajectory import GramAccumulator, Trajectory, eigen_extremes
from .bvm import check_checkpoints

logger = logging.getLogger(__name__)


@dataclass
class StabilityDiagnostics:
    n: int
    lambda_min: float
    lambda_max: float
    ratio_stat: float
    block: Optional[int] = None


def ratio_statistic(lambda_min: float, lambda_max: float) -> float:
    """log(λ_max)/λ_min; infinito quando λ_min = 0."""
    if lambda_max <= 0.0:
        return float('nan')
    if lambda_min <= 0.0:
        return float('inf')
    return float(np.log(lambda_max) / lambda_min)


def diagnose(n: int, acc: GramAccumulator, block: Optional[int] = None) -> StabilityDiagnostics:
    try:
        lambda_min, lambda_max = eigen_extremes(acc)
    except SingularMatrixError:
        lambda_min, lambda_max = 0.0, 0.0
    return StabilityDiagnostics(n, lambda_min, lambda_max, ratio_statistic(lambda_min, lambda_max), block)


def stability_report(snapshots: Sequence[Tuple[int, GramAccumulator]],
                     block_size: Optional[int] = None) -> List[StabilityDiagnostics]:
    """
    Diagnósticos por checkpoint.

    Args:
        snapshots: Pares (n, acumulador) nos checkpoints
        block_size: d para diagnósticos por bloco I_{n,i} (contextual)

    Returns:
        Um StabilityDiagnostics por (checkpoint[, bloco])
    """
    report = []
    for n, acc in snapshots:
        if block_size is None:
            report.append(diagnose(n, acc))
            continue
        for block in range(acc.dimension // block_size):
            report.append(diagnose(n, acc.block(block, block_size), block))
    return report


def trajectory_snapshots(trajectory: Trajectory, checkpoints: Sequence[int],
                         steps_per_round: int = 1) -> List[Tuple[int, GramAccumulator]]:
    """Cópias do acumulador de Gram em cada checkpoint da trajetória."""
    checkpoints = check_checkpoints(checkpoints)
    acc = GramAccumulator(trajectory.dimension)
    snapshots = []
    position = 0
    for n in checkpoints:
        target = n * steps_per_round
        if target > len(trajectory):
            break
        while position < target:
            x, y = trajectory[position]
            acc.update(x, y)
            position += 1
        snapshots.append((n, acc.copy()))
    return snapshots
