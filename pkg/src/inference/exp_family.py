"""
Exponential Family Inference
============================

Posteriores conjugadas Beta-Bernoulli e Gamma-Poisson (escala de média),
MLE local e informação de Fisher empírica na escala natural, e a normal
representativa por braço.
"""

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy import integrate, special, stats

from src.core.errors import BoundaryMLEError, ConfigurationError, DomainError, InternalError
from src.environments.exp_family import Family, check_interior, mean_function, resolve_family, variance_function
from src.policies.base import ArmCounts
from .distributions import GaussianDistribution, ProductDistribution

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExpFamFisherInfo:
    """
    I_n = diag{N_{n,i}·b″(η_i)}.
    """

    counts: np.ndarray
    curvature: np.ndarray

    @property
    def diagonal(self) -> np.ndarray:
        return self.counts * self.curvature

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.diagonal)


def _hyperparameters(prior_hyper, num_arms: int) -> Tuple[np.ndarray, np.ndarray]:
    hyper = np.asarray(prior_hyper, dtype=float)
    if hyper.ndim == 1:
        hyper = np.tile(hyper, (num_arms, 1))
    if hyper.shape != (num_arms, 2):
        raise ConfigurationError(f"Hiperparâmetros com shape {hyper.shape}, esperado ({num_arms}, 2)")
    if np.any(hyper <= 0.0) or not np.all(np.isfinite(hyper)):
        raise ConfigurationError(f"Hiperparâmetros devem ser positivos: {hyper.tolist()}")
    return hyper[:, 0], hyper[:, 1]


def expfam_conjugate_posterior(family, prior_hyper, counts: ArmCounts) -> ProductDistribution:
    """
    Posterior conjugada exata por braço, na escala de média.

    Bernoulli: Beta(a + sucessos, b + fracassos).
    Poisson: Gamma(a + soma, taxa b + N).

    Args:
        family: Família do bandit
        prior_hyper: (a, b) comum ou um par por braço
        counts: Contagens e somas por braço

    Returns:
        ProductDistribution de Beta ou Gamma
    """
    family = resolve_family(family)
    if np.any(counts.counts < 0):
        raise InternalError(f"Contagens negativas: {counts.counts}")
    a, b = _hyperparameters(prior_hyper, counts.num_arms)

    if family is Family.BERNOULLI:
        failures = counts.counts - counts.sums
        if np.any(counts.sums < 0) or np.any(failures < 0):
            raise InternalError(f"Sucessos fora de [0, N]: {counts.sums}")
        components = [stats.beta(a[i] + counts.sums[i], b[i] + failures[i]) for i in range(counts.num_arms)]
    else:
        components = [stats.gamma(a[i] + counts.sums[i], scale=1.0 / (b[i] + counts.counts[i]))
                      for i in range(counts.num_arms)]
    return ProductDistribution(components)


def _check_pulled(counts: ArmCounts):
    unpulled = np.flatnonzero(counts.counts < 1)
    if unpulled.size:
        raise BoundaryMLEError("Braços sem observações", unpulled.tolist())


def expfam_local_mle(family, counts: ArmCounts, anchor) -> Tuple[np.ndarray, ExpFamFisherInfo]:
    """
    MLE local β̂_i = η_i + (Ȳ_i − b′(η_i))/b″(η_i) ancorado em η.

    Args:
        family: Família do bandit
        counts: Contagens (todas ≥ 1)
        anchor: Parâmetros naturais de ancoragem (interiores)

    Returns:
        (MLE local, ExpFamFisherInfo com curvatura no anchor)
    """
    family = resolve_family(family)
    anchor = check_interior(family, anchor)
    if anchor.shape[0] != counts.num_arms:
        raise DomainError(f"Anchor com {anchor.shape[0]} entradas para {counts.num_arms} braços")
    _check_pulled(counts)
    curvature = variance_function(family, anchor)
    if np.any(curvature <= 0.0):
        raise DomainError(f"Curvatura nula no anchor (fronteira numérica): {anchor}")
    local = anchor + (counts.means - mean_function(family, anchor)) / curvature
    return local, ExpFamFisherInfo(counts.counts.astype(float), curvature)


def expfam_representative_normal(family, counts: ArmCounts) -> ProductDistribution:
    """
    Normal representativa por braço na escala de média.

    Bernoulli: N(p̂_i, p̂_i(1 − p̂_i)/N_i). Poisson: N(λ̂_i, λ̂_i/N_i).

    Raises:
        BoundaryMLEError: braço sem pulls ou com MLE na fronteira
    """
    family = resolve_family(family)
    _check_pulled(counts)
    means = counts.means
    if family is Family.BERNOULLI:
        boundary = np.flatnonzero((means <= 0.0) | (means >= 1.0))
        variances = means * (1.0 - means) / counts.counts
    else:
        boundary = np.flatnonzero(means <= 0.0)
        variances = means / counts.counts
    if boundary.size:
        raise BoundaryMLEError("MLE na fronteira", boundary.tolist())
    return ProductDistribution([stats.norm(loc=m, scale=np.sqrt(v)) for m, v in zip(means, variances)])


def expfam_anchor_normal(family, counts: ArmCounts, anchor) -> GaussianDistribution:
    """N(MLE local, I_n⁻¹) na escala natural, com curvatura no anchor."""
    local, info = expfam_local_mle(family, counts, anchor)
    return GaussianDistribution(local, np.diag(1.0 / info.diagonal))


def expfam_mle(family, counts: ArmCounts) -> np.ndarray:
    """MLE na escala natural (logit p̂ ou log λ̂); exige MLE interior."""
    family = resolve_family(family)
    _check_pulled(counts)
    means = counts.means
    if family is Family.BERNOULLI:
        if np.any((means <= 0.0) | (means >= 1.0)):
            raise BoundaryMLEError("MLE na fronteira", np.flatnonzero((means <= 0.0) | (means >= 1.0)).tolist())
        return np.log(means / (1.0 - means))
    if np.any(means <= 0.0):
        raise BoundaryMLEError("MLE na fronteira", np.flatnonzero(means <= 0.0).tolist())
    return np.log(means)


def beta_grid_posterior(prior_a: float, prior_b: float, outcomes: Sequence[float], grid_size: int = 100_000):
    """
    Posterior Beta-Bernoulli por normalização numérica de priori × verossimilhança.

    Returns:
        (grade, densidade normalizada pela regra do trapézio)
    """
    outcomes = np.asarray(outcomes, dtype=float)
    grid = np.linspace(0.0, 1.0, grid_size)
    successes = outcomes.sum()
    failures = outcomes.size - successes
    log_unnormalized = (stats.beta(prior_a, prior_b).logpdf(grid)
                        + special.xlogy(successes, grid) + special.xlog1py(failures, -grid))
    unnormalized = np.exp(log_unnormalized - log_unnormalized.max())
    return grid, unnormalized / integrate.trapezoid(unnormalized, grid)


def gamma_grid_posterior(prior_a: float, prior_b: float, outcomes: Sequence[float],
                         grid_size: int = 100_000, upper: float = None):
    """Posterior Gamma-Poisson por normalização numérica em [0, upper]."""
    outcomes = np.asarray(outcomes, dtype=float)
    total = outcomes.sum()
    upper = upper or 10.0 * (prior_a + total + 10.0) / (prior_b + outcomes.size)
    grid = np.linspace(0.0, upper, grid_size)
    log_unnormalized = (stats.gamma(prior_a, scale=1.0 / prior_b).logpdf(grid)
                        + special.xlogy(total, grid) - outcomes.size * grid)
    unnormalized = np.exp(log_unnormalized - log_unnormalized.max())
    return grid, unnormalized / integrate.trapezoid(unnormalized, grid)
