"""
Credible Interval Coverage
==========================

Cobertura frequentista de intervalos de credibilidade: um CoverageRecord
por réplica e a proporção binomial entre réplicas.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from config.settings import HARNESS_CONFIG
from src.core.errors import ConfigurationError, SimulationError
from src.core.random_source import RandomSource
from src.inference.intervals import credible_interval, functional_marginal, functional_value

logger = logging.getLogger(__name__)


@dataclass
class CoverageRecord:
    covered: bool
    interval: Tuple[float, float]
    target: float
    level: float


@dataclass
class CoverageEstimate:
    coverage: float
    std_error: float
    included: int
    excluded: int


def coverage_record(posterior, functional: str, index: Optional[int], truth, level: float) -> CoverageRecord:
    """
    Intervalo de caudas iguais do funcional e se ele contém o valor verdadeiro.

    Args:
        posterior: Posterior exata (gaussiana ou produto Beta/Gamma)
        functional: 'coordinate' ou 'margin'
        index: Coordenada 0-based (apenas 'coordinate')
        truth: Parâmetro verdadeiro β₀
        level: Nível de credibilidade

    Returns:
        CoverageRecord
    """
    lo, hi = credible_interval(functional_marginal(posterior, functional, index), level)
    target = functional_value(truth, functional, index)
    return CoverageRecord(covered=bool(lo <= target <= hi), interval=(lo, hi), target=target, level=level)


def binomial_coverage(records: Sequence[Optional[CoverageRecord]]) -> CoverageEstimate:
    """Proporção de cobertura com SE √(ĉ(1−ĉ)/R); None conta como excluído."""
    included = [record for record in records if record is not None]
    excluded = len(records) - len(included)
    if not included:
        return CoverageEstimate(float('nan'), float('nan'), 0, excluded)
    hits = np.array([record.covered for record in included], dtype=float)
    coverage = float(hits.mean())
    return CoverageEstimate(coverage, float(np.sqrt(coverage * (1.0 - coverage) / hits.size)),
                            hits.size, excluded)


def coverage_experiment(config, replicates: int, rng: RandomSource) -> Tuple[float, float]:
    """
    Cobertura do intervalo de credibilidade no último checkpoint, em R réplicas.

    Args:
        config: ExperimentConfig com bloco `coverage`
        replicates: Número de réplicas R (>= 100)
        rng: Fonte raiz; a réplica r usa rng.spawn(r)

    Returns:
        (cobertura, erro padrão binomial)
    """
    from src.harness.simulation import final_posterior, simulate_replicate, true_parameter

    minimum = HARNESS_CONFIG['min_coverage_replicates']
    if replicates < minimum:
        raise ConfigurationError(f"Cobertura exige >= {minimum} réplicas, recebido {replicates}")
    functional = config.coverage_functional
    if functional is None:
        raise ConfigurationError("Configuração sem bloco coverage")

    truth = true_parameter(config)
    records = []
    for replicate in range(replicates):
        source = rng.spawn(replicate)
        try:
            posterior = final_posterior(config, simulate_replicate(config, source))
            records.append(coverage_record(posterior, functional, config.coverage_index, truth,
                                           config.coverage_level))
        except (SimulationError, ArithmeticError) as e:
            logger.debug(f"Réplica {replicate} excluída da cobertura: {e}")
            records.append(None)

    estimate = binomial_coverage(records)
    if estimate.excluded:
        logger.warning(f"{estimate.excluded} réplicas excluídas da cobertura")
    logger.info(f"Cobertura {functional}: {estimate.coverage:.4f} ± {estimate.std_error:.4f} "
                f"({estimate.included} réplicas)")
    return estimate.coverage, estimate.std_error
