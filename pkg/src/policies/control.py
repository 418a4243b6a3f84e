"""
Noisy Certainty-Equivalent Control
==================================

Controle LQR por equivalência à certeza com ruído de exploração
decrescente: ganho da Riccati discreta para (Â, B̂) estimados por mínimos
quadrados, mais w ~ N(0, τ²·n^{β−1}·log^α(n+1)·I_d).
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from config.settings import POLICY_CONFIG
from src.core.errors import ConfigurationError, SingularMatrixError
from src.core.linalg import solve_spd
from src.core.random_source import RandomSource
from src.core.trajectory import as_covariate
from .base import Policy, PolicyKind

logger = logging.getLogger(__name__)


@dataclass
class RiccatiResult:
    P: np.ndarray
    K: np.ndarray
    converged: bool
    iterations: int


def lqr_gain(A: np.ndarray, B: np.ndarray, P: np.ndarray, R: np.ndarray) -> np.ndarray:
    """K = −(R + BᵀPB)⁻¹BᵀPA, com u = K x."""
    return -np.linalg.solve(R + B.T @ P @ B, B.T @ P @ A)


def solve_riccati(A, B, Q=None, R=None, tol: float = None, max_iter: int = None,
                  P0: Optional[np.ndarray] = None, divergence_threshold: float = None) -> RiccatiResult:
    """
    Iteração de ponto fixo da equação algébrica de Riccati discreta.

    P ← Q + AᵀPA − AᵀPB(R + BᵀPB)⁻¹BᵀPA até a variação relativa máxima
    ficar abaixo de `tol`. A iteração para cedo se P explodir.

    Args:
        A: Matriz k×k
        B: Matriz k×d
        Q: Custo de estado (padrão I_k)
        R: Custo de ação (padrão I_d)
        tol: Tolerância relativa
        max_iter: Limite de iterações
        P0: Ponto de partida (warm start); padrão Q
        divergence_threshold: Limite de max|P| que caracteriza divergência

    Returns:
        RiccatiResult com P, K, flag de convergência e iterações
    """
    config = POLICY_CONFIG['ncec']
    tol = tol or config['riccati_tol']
    max_iter = max_iter or config['riccati_max_iter']
    divergence_threshold = divergence_threshold or config['divergence_threshold']

    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    Q = np.eye(A.shape[0]) if Q is None else np.asarray(Q, dtype=float)
    R = np.eye(B.shape[1]) if R is None else np.asarray(R, dtype=float)
    P = Q.copy() if P0 is None else np.asarray(P0, dtype=float).copy()

    for iteration in range(1, max_iter + 1):
        BtPA = B.T @ P @ A
        P_next = Q + A.T @ P @ A - BtPA.T @ np.linalg.solve(R + B.T @ P @ B, BtPA)
        P_next = 0.5 * (P_next + P_next.T)

        if not np.all(np.isfinite(P_next)) or np.max(np.abs(P_next)) > divergence_threshold:
            logger.debug(f"Riccati divergiu na iteração {iteration}")
            return RiccatiResult(P, lqr_gain(A, B, P, R), False, iteration)

        delta = np.max(np.abs(P_next - P))
        P = P_next
        if delta <= tol * max(1.0, float(np.max(np.abs(P)))):
            return RiccatiResult(P, lqr_gain(A, B, P, R), True, iteration)

    logger.debug(f"Riccati não convergiu em {max_iter} iterações")
    return RiccatiResult(P, lqr_gain(A, B, P, R), False, max_iter)


def exploration_variance(step: int, tau2: float, beta_exp: float, alpha_exp: float) -> float:
    """τ²·n^{β−1}·log^α(n+1)"""
    return float(tau2 * step ** (beta_exp - 1.0) * np.log(step + 1.0) ** alpha_exp)


def exploration_noise(step: int, action_dim: int, tau2: float, beta_exp: float, alpha_exp: float,
                      rng: RandomSource) -> np.ndarray:
    """w ~ N(0, exploration_variance(n)·I_d)"""
    return np.sqrt(exploration_variance(step, tau2, beta_exp, alpha_exp)) * rng.standard_normal(action_dim)


@dataclass
class NcecDecision:
    action: np.ndarray
    gain: Optional[np.ndarray]
    converged: bool
    P: Optional[np.ndarray] = None


def ncec_select(A_hat, B_hat, state, step: int, tau2: float, beta_exp: float, alpha_exp: float,
                rng: RandomSource, warmup: int = None, previous_gain: Optional[np.ndarray] = None,
                P0: Optional[np.ndarray] = None) -> NcecDecision:
    """
    Ação NCEC para o passo n.

    Durante o aquecimento (n ≤ n₀) ou sem estimativas, a ação é ruído puro.
    Se a Riccati não convergir, reutiliza o ganho anterior e sinaliza.

    Args:
        A_hat: Estimativa de A (ou None)
        B_hat: Estimativa de B (define a dimensão da ação)
        state: Estado atual
        step: n ≥ 1
        tau2: Escala do ruído
        beta_exp: Expoente β em [1/2, 1)
        alpha_exp: Expoente α > 0
        rng: Fonte aleatória da política
        warmup: n₀
        previous_gain: Ganho usado no passo anterior
        P0: Warm start da Riccati

    Returns:
        NcecDecision
    """
    if step < 1:
        raise ConfigurationError(f"NCEC exige step >= 1, recebido {step}")
    if not 0.5 <= beta_exp < 1.0:
        raise ConfigurationError(f"beta_exp deve estar em [1/2, 1), recebido {beta_exp}")
    if alpha_exp <= 0.0 or tau2 < 0.0:
        raise ConfigurationError(f"Hiperparâmetros NCEC inválidos: tau2={tau2}, alpha={alpha_exp}")
    warmup = POLICY_CONFIG['ncec']['warmup'] if warmup is None else warmup

    state = as_covariate(state)
    if B_hat is None:
        raise ConfigurationError("B_hat é necessário para a dimensão da ação")
    B_hat = np.atleast_2d(np.asarray(B_hat, dtype=float))
    action_dim = B_hat.shape[1]
    noise = exploration_noise(step, action_dim, tau2, beta_exp, alpha_exp, rng)

    if step <= warmup or A_hat is None:
        return NcecDecision(action=noise, gain=None, converged=True)

    result = solve_riccati(A_hat, B_hat, P0=P0)
    if result.converged:
        gain = result.K
    else:
        gain = previous_gain if previous_gain is not None else np.zeros((action_dim, state.shape[0]))
    return NcecDecision(action=gain @ state + noise, gain=gain, converged=result.converged,
                        P=result.P if result.converged else None)


class NcecController(Policy):
    """
    Controlador NCEC com estimativa de (Â, B̂) pelo Gram próprio dos (x, u).

    Após uma Riccati não convergente, as próximas resoluções são adiadas
    por um intervalo que dobra a cada falha consecutiva.
    """

    kind = PolicyKind.NCEC

    def __init__(self, state_dim: int, action_dim: int, tau2: float = None, beta_exp: float = None,
                 alpha_exp: float = None, warmup: int = None, horizon: Optional[int] = None):
        super().__init__(horizon)
        config = POLICY_CONFIG['ncec']
        self.state_dim = state_dim
        self.action_dim = action_dim
        self.tau2 = tau2 if tau2 is not None else config['tau2']
        self.beta_exp = beta_exp or config['beta_exp']
        self.alpha_exp = alpha_exp or config['alpha_exp']
        self.warmup = warmup if warmup is not None else config['warmup']

        size = state_dim + action_dim
        self.block_gram = np.zeros((size, size))
        self.cross = np.zeros((size, state_dim))
        self.gain: Optional[np.ndarray] = None
        self.P: Optional[np.ndarray] = None
        self.riccati_failures = 0
        self._backoff = 0
        self._skip_until = 0

    def estimates(self):
        """(Â, B̂) por mínimos quadrados, ou (None, None) se o Gram for singular."""
        try:
            theta = solve_spd(self.block_gram, self.cross)
        except SingularMatrixError:
            return None, None
        AB = theta.T
        return AB[:, :self.state_dim], AB[:, self.state_dim:]

    def select_action(self, state, rng: RandomSource) -> np.ndarray:
        step = self.step + 1
        state = as_covariate(state, self.state_dim)
        A_hat, B_hat = self.estimates() if step > self.warmup else (None, None)
        if A_hat is None:
            return exploration_noise(step, self.action_dim, self.tau2, self.beta_exp, self.alpha_exp, rng)
        if step < self._skip_until:
            # em backoff: mantém o ganho anterior sem resolver a Riccati
            return self.gain @ state + exploration_noise(step, self.action_dim, self.tau2,
                                                         self.beta_exp, self.alpha_exp, rng)

        decision = ncec_select(A_hat, B_hat, state, step, self.tau2, self.beta_exp, self.alpha_exp,
                               rng, self.warmup, self.gain, self.P)
        self.gain = decision.gain
        if decision.converged:
            self.P = decision.P
            self._backoff = 0
        else:
            self.riccati_failures += 1
            self._backoff = max(1, 2 * self._backoff)
            self._skip_until = step + self._backoff
            logger.warning(f"Riccati não convergiu no passo {step}; ganho anterior mantido, "
                           f"próxima tentativa em {self._backoff} passos")
        return decision.action

    def observe(self, state, action, next_state) -> None:
        z = np.concatenate([as_covariate(state, self.state_dim), as_covariate(action, self.action_dim)])
        self.block_gram += np.outer(z, z)
        self.cross += np.outer(z, as_covariate(next_state, self.state_dim))
        self.step += 1

    def metadata(self):
        return {**super().metadata(), 'tau2': self.tau2, 'beta_exp': self.beta_exp,
                'alpha_exp': self.alpha_exp, 'warmup': self.warmup,
                'riccati_failures': self.riccati_failures}
