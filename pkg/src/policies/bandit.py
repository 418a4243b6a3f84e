"""
Bandit Policies
===============

UCB, Thompson sampling (gaussiano e Bernoulli), Thompson em dois lotes e
alocação uniforme para bandits de braços discretos.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy.stats import norm

from config.settings import POLICY_CONFIG
from src.core.errors import ConfigurationError, InternalError
from src.core.random_source import RandomSource
from .base import ArmCounts, BanditPolicy, PolicyKind

logger = logging.getLogger(__name__)


def ucb_select(counts: ArmCounts, step: int, sigma: Union[float, np.ndarray], c: float) -> int:
    """
    Seleção UCB com bônus c·σ·√(2 ln n / N_i).

    Braços sem pulls são escolhidos primeiro (o de menor índice); empates no
    argmax vão para o menor índice.

    Args:
        counts: Contagens e somas por braço
        step: n, número de passos já executados
        sigma: Desvio conhecido (escalar ou um por braço)
        c: Constante de exploração

    Returns:
        Braço escolhido (0-based)
    """
    unpulled = np.flatnonzero(counts.counts == 0)
    if unpulled.size:
        return int(unpulled[0])
    if step < 1:
        raise ConfigurationError(f"UCB exige step >= 1, recebido {step}")
    bonus = c * np.asarray(sigma, dtype=float) * np.sqrt(2.0 * np.log(step) / counts.counts)
    return int(np.argmax(counts.means + bonus))


def gaussian_arm_posterior(counts: ArmCounts, prior_mean: float, prior_variance: float,
                           sigma2: Union[float, np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Posterior normal por braço sob priori N(m₀, v₀) e variância conhecida.

    Returns:
        (médias, variâncias) por braço
    """
    prior_precision = 0.0 if np.isinf(prior_variance) else 1.0 / prior_variance
    precision = prior_precision + counts.counts / np.asarray(sigma2, dtype=float)
    if np.any(precision <= 0.0):
        raise ConfigurationError("Posterior imprópria: braço sem dados e priori plana")
    means = (prior_precision * prior_mean + counts.sums / np.asarray(sigma2, dtype=float)) / precision
    return means, 1.0 / precision


def thompson_gaussian_select(means, variances, rng: RandomSource) -> int:
    """
    Uma amostra da posterior de cada braço; retorna o argmax.

    Args:
        means: Médias posteriores por braço
        variances: Variâncias posteriores por braço
        rng: Fonte aleatória da política

    Returns:
        Braço escolhido (0-based)
    """
    means = np.asarray(means, dtype=float)
    variances = np.asarray(variances, dtype=float)
    if not (np.all(np.isfinite(means)) and np.all(np.isfinite(variances))):
        raise ConfigurationError("Parâmetros posteriores não finitos")
    draws = means + np.sqrt(variances) * rng.standard_normal(means.shape[0])
    return int(np.argmax(draws))


def thompson_bernoulli_select(counts: ArmCounts, prior_a: float, prior_b: float, rng: RandomSource) -> int:
    """Thompson com posteriores Beta(a + sucessos, b + fracassos)."""
    successes = counts.sums
    failures = counts.counts - counts.sums
    draws = rng.generator.beta(prior_a + successes, prior_b + failures)
    return int(np.argmax(draws))


def clip_allocation(pi_hat: float, pi_min: float) -> float:
    """Restringe a probabilidade de alocação a [π_min, 1 − π_min]."""
    if not 0.0 <= pi_min < 0.5:
        raise ConfigurationError(f"pi_min deve estar em [0, 0.5), recebido {pi_min}")
    return float(np.clip(pi_hat, pi_min, 1.0 - pi_min))


@dataclass
class BatchPlan:
    """Alocação do segundo lote."""
    pi_hat: float
    pi_clipped: float
    arms: np.ndarray


def batched_thompson_plan(batch1: ArmCounts, prior_mean: float, prior_variance: float,
                          batch_size: int, rng: RandomSource, pi_min: Optional[float] = None,
                          sigma2: float = 1.0) -> BatchPlan:
    """
    Planeja o lote 2 do Thompson em dois lotes com dois braços.

    π̂ = P(μ₁ > μ₂ | lote 1) = Φ((m₁ − m₂)/√(v₁ + v₂)); cada pull do lote 2
    vai para o primeiro braço com probabilidade clip(π̂, π_min, 1 − π_min),
    de forma independente.

    Args:
        batch1: Contagens do lote 1
        prior_mean: Média da priori da política
        prior_variance: Variância da priori da política
        batch_size: Tamanho de cada lote (par)
        rng: Fonte aleatória da política
        pi_min: Probabilidade mínima de alocação
        sigma2: Variância conhecida das recompensas

    Returns:
        BatchPlan com π̂, π clipado e os braços do lote 2
    """
    if batch1.num_arms != 2:
        raise ConfigurationError(f"Thompson em lotes exige 2 braços, recebido {batch1.num_arms}")
    if batch_size < 2 or batch_size % 2:
        raise ConfigurationError(f"batch_size deve ser par e positivo, recebido {batch_size}")
    pi_min = POLICY_CONFIG['batched_thompson']['pi_min'] if pi_min is None else pi_min

    means, variances = gaussian_arm_posterior(batch1, prior_mean, prior_variance, sigma2)
    pi_hat = float(norm.cdf((means[0] - means[1]) / np.sqrt(variances[0] + variances[1])))
    pi_clipped = clip_allocation(pi_hat, pi_min)
    arms = np.where(rng.uniform(batch_size) < pi_clipped, 0, 1)
    return BatchPlan(pi_hat=pi_hat, pi_clipped=pi_clipped, arms=arms)


class UniformPolicy(BanditPolicy):
    """Alternância determinística 0, 1, …, p−1, 0, 1, …"""

    kind = PolicyKind.UNIFORM

    def select_arm(self, rng: RandomSource) -> int:
        return self.step % self.num_arms


class UcbPolicy(BanditPolicy):
    """
    UCB com σ conhecido.
    """

    kind = PolicyKind.UCB

    def __init__(self, num_arms: int, sigma: Union[float, np.ndarray] = 1.0,
                 c: float = None, horizon: Optional[int] = None):
        super().__init__(num_arms, horizon)
        self.sigma = sigma
        self.c = c if c is not None else POLICY_CONFIG['ucb']['c']
        logger.debug(f"UCB configurado: {num_arms} braços, c={self.c}")

    def select_arm(self, rng: RandomSource) -> int:
        return ucb_select(self.counts, self.counts.total, self.sigma, self.c)

    def metadata(self):
        return {**super().metadata(), 'c': self.c, 'sigma': np.asarray(self.sigma).tolist()}


class ThompsonGaussianPolicy(BanditPolicy):
    kind = PolicyKind.THOMPSON_GAUSSIAN

    def __init__(self, num_arms: int, sigma2: float = 1.0, prior_mean: float = None,
                 prior_variance: float = None, horizon: Optional[int] = None):
        super().__init__(num_arms, horizon)
        config = POLICY_CONFIG['thompson_gaussian']
        self.sigma2 = sigma2
        self.prior_mean = prior_mean if prior_mean is not None else config['prior_mean']
        self.prior_variance = prior_variance or config['prior_variance']

    def select_arm(self, rng: RandomSource) -> int:
        means, variances = gaussian_arm_posterior(self.counts, self.prior_mean, self.prior_variance, self.sigma2)
        return thompson_gaussian_select(means, variances, rng)

    def metadata(self):
        return {**super().metadata(), 'prior_mean': self.prior_mean, 'prior_variance': self.prior_variance}


class ThompsonBernoulliPolicy(BanditPolicy):
    kind = PolicyKind.THOMPSON_BERNOULLI

    def __init__(self, num_arms: int, prior_a: float = None, prior_b: float = None,
                 horizon: Optional[int] = None):
        super().__init__(num_arms, horizon)
        config = POLICY_CONFIG['thompson_bernoulli']
        self.prior_a = prior_a or config['prior_a']
        self.prior_b = prior_b or config['prior_b']

    def select_arm(self, rng: RandomSource) -> int:
        return thompson_bernoulli_select(self.counts, self.prior_a, self.prior_b, rng)

    def metadata(self):
        return {**super().metadata(), 'prior_a': self.prior_a, 'prior_b': self.prior_b}


class BatchedThompsonPolicy(BanditPolicy):
    """
    Thompson em dois lotes, dois braços.

    Lote 1 alterna os braços (metade cada); lote 2 segue o BatchPlan
    calculado ao fim do lote 1. Horizonte = 2·batch_size.
    """

    kind = PolicyKind.BATCHED_THOMPSON

    def __init__(self, batch_size: int, sigma2: float = 1.0, pi_min: float = None,
                 prior_mean: float = None, prior_variance: float = None):
        if batch_size < 2 or batch_size % 2:
            raise ConfigurationError(f"batch_size deve ser par e positivo, recebido {batch_size}")
        super().__init__(2, 2 * batch_size)
        config = POLICY_CONFIG['batched_thompson']
        self.batch_size = batch_size
        self.sigma2 = sigma2
        self.pi_min = pi_min if pi_min is not None else config['pi_min']
        self.prior_mean = prior_mean if prior_mean is not None else config['prior_mean']
        self.prior_variance = prior_variance or config['prior_variance']
        self.plan: Optional[BatchPlan] = None

    def select_arm(self, rng: RandomSource) -> int:
        if self.step < self.batch_size:
            return self.step % 2
        if self.step >= 2 * self.batch_size:
            raise InternalError(f"Thompson em lotes esgotado após {self.step} passos")
        if self.plan is None:
            self.plan = batched_thompson_plan(
                self.counts.copy(), self.prior_mean, self.prior_variance,
                self.batch_size, rng, self.pi_min, self.sigma2,
            )
            logger.debug(f"Lote 2 planejado: pi_hat={self.plan.pi_hat:.4f}, clipado={self.plan.pi_clipped:.4f}")
        return int(self.plan.arms[self.step - self.batch_size])

    def metadata(self):
        meta = {**super().metadata(), 'batch_size': self.batch_size, 'pi_min': self.pi_min,
                'allocation': 'independent-per-pull, clipped'}
        if self.plan is not None:
            meta['pi_hat'] = self.plan.pi_hat
            meta['pi_clipped'] = self.plan.pi_clipped
        return meta
