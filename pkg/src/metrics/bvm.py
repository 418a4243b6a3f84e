"""
BvM Curves
==========

Distância TV entre a posterior exata e a normal representativa ao longo
dos checkpoints de uma trajetória.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.core.errors import ConfigurationError, DataError, SimulationError, classify_replicate_error
from src.core.random_source import RandomSource
from src.core.trajectory import Trajectory
from src.inference.models import InferenceModel, SufficientStatistics
from .tv_distance import TvEstimate, tv_with_quality_gate

logger = logging.getLogger(__name__)


@dataclass
class BvmCheckpoint:
    """
    Estado da inferência em um checkpoint n (em rodadas).
    """

    n: int
    stats: SufficientStatistics
    posterior: Optional[object] = None
    representative: Optional[object] = None
    error: Optional[Exception] = None

    @property
    def excluded(self) -> bool:
        return self.error is not None

    @property
    def reason(self) -> Optional[str]:
        return classify_replicate_error(self.error) if self.error is not None else None


def check_checkpoints(checkpoints: Sequence[int]) -> List[int]:
    checkpoints = [int(n) for n in checkpoints]
    if not checkpoints or checkpoints[0] < 1 or any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
        raise ConfigurationError(f"Checkpoints devem ser positivos e estritamente crescentes: {checkpoints}")
    return checkpoints


def iter_bvm_checkpoints(trajectory: Trajectory, checkpoints: Sequence[int], model: InferenceModel,
                         steps_per_round: int = 1) -> Iterator[BvmCheckpoint]:
    """
    Percorre a trajetória atualizando as estatísticas suficientes e produz
    posterior e normal representativa em cada checkpoint.

    Args:
        trajectory: Trajetória da réplica
        checkpoints: n crescentes, em rodadas
        model: Modelo de inferência
        steps_per_round: Passos da trajetória por rodada (k no LQR serializado)

    Yields:
        BvmCheckpoint; falhas (Gram singular, MLE na fronteira) vêm em `error`.
        `stats` é o objeto em uso: leia-o antes de avançar o iterador.
    """
    checkpoints = check_checkpoints(checkpoints)
    stats = model.statistics()
    rounds_available = len(trajectory) // steps_per_round
    if checkpoints[-1] > rounds_available:
        logger.warning(f"Checkpoints acima de {rounds_available} rodadas serão ignorados")

    position = 0
    for n in checkpoints:
        if n > rounds_available:
            break
        target = n * steps_per_round
        while position < target:
            x, y = trajectory[position]
            stats.observe(x, y)
            position += 1

        checkpoint = BvmCheckpoint(n=n, stats=stats)
        try:
            checkpoint.posterior = model.posterior(stats)
            checkpoint.representative = model.representative_normal(stats)
        except (SimulationError, ArithmeticError) as e:
            checkpoint.error = e
            logger.debug(f"Checkpoint n={n} excluído: {e}")
        yield checkpoint


def checkpoint_tv(checkpoint: BvmCheckpoint, rng: RandomSource, **gate) -> TvEstimate:
    """TV(posterior, normal representativa) com portão de qualidade, ou exclusão."""
    if checkpoint.excluded:
        return TvEstimate.excluded(checkpoint.reason)
    try:
        return tv_with_quality_gate(checkpoint.posterior, checkpoint.representative, rng, **gate)
    except DataError as e:
        logger.debug(f"TV não finita em n={checkpoint.n}: {e}")
        return TvEstimate.excluded(classify_replicate_error(e))


def bvm_tv_curve(trajectory: Trajectory, checkpoints: Sequence[int], model: InferenceModel,
                 rng: RandomSource, steps_per_round: int = 1, num_samples: int = None,
                 max_samples: int = None, se_ratio: float = None) -> List[Tuple[int, TvEstimate]]:
    """
    Curva TV-vs-n de uma réplica.

    Args:
        trajectory: Trajetória da réplica
        checkpoints: n crescentes
        model: Modelo com priori e conhecidos
        rng: Fonte aleatória da TV (um filho por checkpoint)
        steps_per_round: Passos por rodada
        num_samples: Amostras iniciais por ponto
        max_samples: Teto do portão de qualidade
        se_ratio: Razão SE/estimativa exigida

    Returns:
        Lista de (n, TvEstimate)
    """
    gate = dict(num_samples=num_samples, max_samples=max_samples, se_ratio=se_ratio)
    return [
        (checkpoint.n, checkpoint_tv(checkpoint, rng.spawn(index), **gate))
        for index, checkpoint in enumerate(iter_bvm_checkpoints(trajectory, checkpoints, model, steps_per_round))
    ]


def mean_tv_curve(curves: Sequence[List[Tuple[int, TvEstimate]]]) -> List[Tuple[int, float, float]]:
    """
    Média entre réplicas por checkpoint, ignorando pontos excluídos.

    Returns:
        Lista de (n, TV média, erro padrão da média)
    """
    by_n: Dict[int, List[float]] = {}
    for curve in curves:
        for n, estimate in curve:
            if not estimate.excluded_replicate:
                by_n.setdefault(n, []).append(estimate.value)
    summary = []
    for n in sorted(by_n):
        values = np.asarray(by_n[n])
        se = float(values.std(ddof=1) / np.sqrt(values.size)) if values.size > 1 else float('nan')
        summary.append((n, float(values.mean()), se))
    return summary


def worst_case_tv_curve(curves: Dict[str, List[Tuple[int, float, float]]]) -> List[Tuple[int, float, str]]:
    """
    Pior TV média por checkpoint numa família de regras de amostragem.

    Args:
        curves: rótulo da regra → saída de mean_tv_curve

    Returns:
        Lista de (n, TV média máxima, rótulo da regra que a atinge)
    """
    grids = {label: [n for n, _, _ in curve] for label, curve in curves.items()}
    reference = next(iter(grids.values()), [])
    if any(grid != reference for grid in grids.values()):
        raise ConfigurationError("Curvas com grades de checkpoints diferentes")
    worst = []
    for position, n in enumerate(reference):
        label, value = max(((label, curve[position][1]) for label, curve in curves.items()), key=lambda t: t[1])
        worst.append((n, value, label))
    return worst
