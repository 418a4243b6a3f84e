"""
Replicate Simulation
====================

Executa uma réplica (ambiente + política) a partir da configuração e avalia
a trajetória nos checkpoints: TV, extremos espectrais e cobertura.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from config.settings import ENVIRONMENT_CONFIG, POLICY_CONFIG
from src.core.errors import classify_replicate_error
from src.core.random_source import (CONTEXT_STREAM, ENVIRONMENT_STREAM, POLICY_STREAM, TV_STREAM, RandomSource,
                                    replicate_source)
from src.core.trajectory import Trajectory, basis_vector
from src.environments.contextual import ContextualEmbedding, contextual_parameters, embed_context
from src.environments.exp_family import ExpFamilyArmEnv, sample_expfam_reward
from src.environments.heteroskedastic import HeteroskedasticEnv, sample_heteroskedastic_reward
from src.environments.linear_gaussian import ArmRewardStreams, LinearGaussianEnv, sample_arm, sample_outcome
from src.environments.lqr import LqrEnv, lqr_transition
from src.inference.gaussian import gaussian_prior
from src.inference.models import InferenceModel, ModelKind
from src.metrics.bvm import checkpoint_tv, iter_bvm_checkpoints
from src.metrics.coverage import coverage_record
from src.metrics.normality import studentized_mle
from src.metrics.stability import diagnose, stability_report
from src.policies.bandit import (BatchedThompsonPolicy, ThompsonBernoulliPolicy, ThompsonGaussianPolicy,
                                 UcbPolicy, UniformPolicy)
from src.policies.base import Policy, PolicyKind
from src.policies.contextual import LinUcbPolicy
from src.policies.control import NcecController
from src.policies.lai_wei import LaiWeiPolicy
from src.policies.replay import ReplayPolicy
from .config import ExperimentConfig, ExperimentKind
from .replay import load_bernoulli_log

logger = logging.getLogger(__name__)

_BANDIT_KINDS = (ExperimentKind.GAUSSIAN_MAB, ExperimentKind.BERNOULLI_MAB, ExperimentKind.POISSON_MAB,
                 ExperimentKind.HETERO_MAB, ExperimentKind.BATCHED, ExperimentKind.REPLAY)


@dataclass
class ReplicateTrace:
    trajectory: Trajectory
    steps_per_round: int
    policy: Policy


@dataclass
class ResultRow:
    """
    Uma linha por (réplica, checkpoint).

    `covered` é None quando a configuração não pede cobertura ou a posterior
    não pôde ser formada; `block_lambda_min` só existe no contextual.
    """

    replicate: int
    n: int
    tv: float
    tv_se: float
    lambda_min: float
    lambda_max: float
    covered: Optional[bool]
    excluded: bool
    reason: Optional[str] = None
    gate_passed: bool = True
    block_lambda_min: Optional[List[float]] = None


@dataclass
class ReplicateResult:
    replicate: int
    rows: List[ResultRow]
    metadata: Dict[str, Any] = field(default_factory=dict)
    studentized: Optional[float] = None
    failure: Optional[str] = None


# ----------------------------------------------------------------------
# Construção a partir da configuração
# ----------------------------------------------------------------------
def _sigma2(config: ExperimentConfig) -> float:
    return float(config.environment.get('sigma2', 1.0))


def _lqr_env(config: ExperimentConfig) -> LqrEnv:
    A, B = config.lqr_matrices()
    return LqrEnv(A, B, config.environment.get('noise_sigma2', ENVIRONMENT_CONFIG['lqr_noise_sigma2']))


def true_parameter(config: ExperimentConfig) -> Optional[np.ndarray]:
    """β₀ na escala em que a posterior é formada; None no replay."""
    kind = config.experiment_kind
    env = config.environment
    if kind is ExperimentKind.CONTEXTUAL:
        return contextual_parameters(env.get('thetas'), env.get('preset')).ravel()
    if kind is ExperimentKind.LQR:
        return _lqr_env(config).beta0
    if kind is ExperimentKind.LAI_WEI:
        return np.array([float(env.get('beta0', 1.0))])
    if kind is ExperimentKind.REPLAY:
        return None
    return np.asarray(env['means'], dtype=float)


def build_policy(config: ExperimentConfig, num_arms: Optional[int] = None) -> Policy:
    """
    Instancia a política descrita em `config.policy`.

    Args:
        config: Configuração validada
        num_arms: Número de braços (replay: vem do log)

    Returns:
        Política com estado inicial
    """
    p = config.policy
    kind = config.policy_kind
    env = config.environment
    horizon = config.horizon
    num_arms = num_arms or config.num_arms()

    if kind is PolicyKind.UNIFORM:
        return UniformPolicy(num_arms, horizon)
    if kind is PolicyKind.UCB:
        experiment = config.experiment_kind
        if experiment is ExperimentKind.BERNOULLI_MAB:
            sigma = POLICY_CONFIG['ucb']['sigma']['bernoulli']
        elif experiment is ExperimentKind.POISSON_MAB:
            sigma = POLICY_CONFIG['ucb']['sigma']['poisson']
        elif experiment is ExperimentKind.HETERO_MAB:
            sigma = np.sqrt(np.asarray(env['variances'], dtype=float))
        else:
            sigma = float(np.sqrt(_sigma2(config)))
        return UcbPolicy(num_arms, p.get('sigma', sigma), p.get('c'), horizon)
    if kind is PolicyKind.THOMPSON_GAUSSIAN:
        return ThompsonGaussianPolicy(num_arms, _sigma2(config), p.get('prior_mean'), p.get('prior_variance'), horizon)
    if kind is PolicyKind.THOMPSON_BERNOULLI:
        return ThompsonBernoulliPolicy(num_arms, p.get('prior_a'), p.get('prior_b'), horizon)
    if kind is PolicyKind.BATCHED_THOMPSON:
        return BatchedThompsonPolicy(env['batch_size'], _sigma2(config), p.get('pi_min'),
                                     p.get('prior_mean'), p.get('prior_variance'))
    if kind is PolicyKind.LIN_UCB:
        thetas = contextual_parameters(env.get('thetas'), env.get('preset'))
        return LinUcbPolicy(thetas.shape[0], thetas.shape[1], p.get('alpha'), p.get('ridge'), horizon)
    if kind is PolicyKind.NCEC:
        lqr = _lqr_env(config)
        return NcecController(lqr.state_dim, lqr.action_dim, p.get('tau2'), p.get('beta_exp'),
                              p.get('alpha_exp'), p.get('warmup'), horizon)
    if kind is PolicyKind.LAI_WEI:
        return LaiWeiPolicy(p.get('x1'), horizon)
    if kind is PolicyKind.REPLAY:
        return ReplayPolicy(load_bernoulli_log(env['log']))
    raise ValueError(f"Política sem construtor: {kind}")


def build_model(config: ExperimentConfig, dimension: Optional[int] = None) -> InferenceModel:
    """Modelo de inferência (priori + conhecidos) para a configuração."""
    kind = config.experiment_kind
    prior = config.prior or {}
    dimension = dimension or config.dimension()

    if kind in (ExperimentKind.BERNOULLI_MAB, ExperimentKind.POISSON_MAB, ExperimentKind.REPLAY):
        model_kind = ModelKind.POISSON if kind is ExperimentKind.POISSON_MAB else ModelKind.BERNOULLI
        return InferenceModel(model_kind, dimension, prior_hyper=(prior.get('a', 1.0), prior.get('b', 1.0)))

    gaussian = gaussian_prior(prior.get('mean', 0.0), prior.get('variance', 1.0), dimension)
    if kind is ExperimentKind.HETERO_MAB:
        return InferenceModel(ModelKind.HETEROSKEDASTIC, dimension, gaussian,
                              variances=np.asarray(config.environment['variances'], dtype=float))
    if kind is ExperimentKind.LQR:
        return InferenceModel(ModelKind.GAUSSIAN, dimension, gaussian, sigma2=_lqr_env(config).noise_sigma2)
    return InferenceModel(ModelKind.GAUSSIAN, dimension, gaussian, sigma2=_sigma2(config))


# ----------------------------------------------------------------------
# Simulação
# ----------------------------------------------------------------------
def _reward_sampler(config: ExperimentConfig, streams: ArmRewardStreams):
    """Amostrador braço → recompensa, com um stream por braço."""
    kind = config.experiment_kind
    env = config.environment
    if kind in (ExperimentKind.BERNOULLI_MAB, ExperimentKind.POISSON_MAB):
        family = 'bernoulli' if kind is ExperimentKind.BERNOULLI_MAB else 'poisson'
        arms = ExpFamilyArmEnv.from_means(family, env['means'])
        return lambda a: sample_expfam_reward(arms, a, streams.stream(a))
    if kind is ExperimentKind.HETERO_MAB:
        arms = HeteroskedasticEnv(np.asarray(env['means'], dtype=float), np.asarray(env['variances'], dtype=float))
        return lambda a: sample_heteroskedastic_reward(arms, a, streams.stream(a))
    arms = LinearGaussianEnv(np.asarray(env['means'], dtype=float), _sigma2(config))
    return lambda a: sample_arm(arms, a, streams)


def _simulate_bandit(config: ExperimentConfig, source: RandomSource) -> ReplicateTrace:
    policy_rng = source.spawn(POLICY_STREAM)
    if config.experiment_kind is ExperimentKind.REPLAY:
        policy = build_policy(config)
        trajectory = Trajectory(policy.num_arms)
        for _ in range(len(policy.log)):
            arm, reward = policy.next_logged()
            trajectory.append(basis_vector(arm, policy.num_arms), reward)
            policy.observe(arm, reward)
        return ReplicateTrace(trajectory, 1, policy)

    policy = build_policy(config)
    num_arms = policy.num_arms
    streams = ArmRewardStreams(source.spawn(ENVIRONMENT_STREAM), num_arms)
    reward = _reward_sampler(config, streams)
    trajectory = Trajectory(num_arms)
    for _ in range(config.horizon):
        arm = policy.select_arm(policy_rng)
        y = reward(arm)
        trajectory.append(basis_vector(arm, num_arms), y)
        policy.observe(arm, y)
    return ReplicateTrace(trajectory, 1, policy)


def _simulate_contextual(config: ExperimentConfig, source: RandomSource) -> ReplicateTrace:
    thetas = contextual_parameters(config.environment.get('thetas'), config.environment.get('preset'))
    embedding = ContextualEmbedding(thetas.shape[0], thetas.shape[1])
    env = LinearGaussianEnv(thetas.ravel(), _sigma2(config))
    policy = build_policy(config)
    policy_rng = source.spawn(POLICY_STREAM)
    env_rng = source.spawn(ENVIRONMENT_STREAM)
    context_rng = source.spawn(CONTEXT_STREAM)

    trajectory = Trajectory(embedding.dimension)
    for _ in range(config.horizon):
        context = embedding.sample_context(context_rng)
        arm = policy.select_arm(context, policy_rng)
        x = embed_context(embedding, context, arm)
        y = sample_outcome(env, x, env_rng)
        trajectory.append(x, y)
        policy.observe(arm, context, y)
    return ReplicateTrace(trajectory, 1, policy)


def _simulate_lqr(config: ExperimentConfig, source: RandomSource) -> ReplicateTrace:
    env = _lqr_env(config)
    controller = build_policy(config)
    policy_rng = source.spawn(POLICY_STREAM)
    env_rng = source.spawn(ENVIRONMENT_STREAM)

    trajectory = Trajectory(env.dimension)
    state = env.initial_state()
    for _ in range(config.horizon):
        action = controller.select_action(state, policy_rng)
        next_state, rows = lqr_transition(env, state, action, env_rng)
        for x, y in rows:
            trajectory.append(x, y)
        controller.observe(state, action, next_state)
        state = next_state
    return ReplicateTrace(trajectory, env.state_dim, controller)


def _simulate_lai_wei(config: ExperimentConfig, source: RandomSource) -> ReplicateTrace:
    env = LinearGaussianEnv(true_parameter(config), _sigma2(config))
    policy = build_policy(config)
    env_rng = source.spawn(ENVIRONMENT_STREAM)

    trajectory = Trajectory(1)
    for _ in range(config.horizon):
        x = policy.select_covariate(trajectory)
        y = sample_outcome(env, x, env_rng)
        trajectory.append(x, y)
        policy.observe(x, y)
    return ReplicateTrace(trajectory, 1, policy)


def simulate_replicate(config: ExperimentConfig, source: RandomSource) -> ReplicateTrace:
    """
    Executa uma réplica completa.

    Política, ambiente e contextos consomem sub-streams próprios da fonte
    da réplica; overflow numérico vira FloatingPointError.

    Args:
        config: Configuração validada
        source: Fonte aleatória da réplica

    Returns:
        ReplicateTrace com a trajetória serializada
    """
    kind = config.experiment_kind
    with np.errstate(over='raise'):
        if kind in _BANDIT_KINDS:
            return _simulate_bandit(config, source)
        if kind is ExperimentKind.CONTEXTUAL:
            return _simulate_contextual(config, source)
        if kind is ExperimentKind.LQR:
            return _simulate_lqr(config, source)
        return _simulate_lai_wei(config, source)


def final_posterior(config: ExperimentConfig, trace: ReplicateTrace):
    """Posterior exata após a trajetória completa."""
    model = build_model(config, trace.trajectory.dimension)
    stats = model.statistics()
    for x, y in trace.trajectory:
        stats.observe(x, y)
    return model.posterior(stats)


# ----------------------------------------------------------------------
# Avaliação
# ----------------------------------------------------------------------
def evaluate_replicate(config: ExperimentConfig, trace: ReplicateTrace, source: RandomSource,
                       replicate: int = 0) -> ReplicateResult:
    """
    Linhas de resultado nos checkpoints de uma réplica.

    Args:
        config: Configuração validada
        trace: Saída de simulate_replicate
        source: Fonte aleatória da réplica (usa o sub-stream TV)
        replicate: Índice da réplica

    Returns:
        ReplicateResult com uma linha por checkpoint alcançado
    """
    model = build_model(config, trace.trajectory.dimension)
    truth = true_parameter(config)
    functional = config.coverage_functional
    block_size = None
    if config.experiment_kind is ExperimentKind.CONTEXTUAL:
        block_size = trace.policy.context_dim
    tv_rng = source.spawn(TV_STREAM)

    rows: List[ResultRow] = []
    last_stats = None
    for index, checkpoint in enumerate(iter_bvm_checkpoints(trace.trajectory, config.checkpoint_grid,
                                                            model, trace.steps_per_round)):
        diagnostics = diagnose(checkpoint.n, checkpoint.stats.gram)
        blocks = None
        if block_size is not None:
            blocks = [d.lambda_min for d in stability_report([(checkpoint.n, checkpoint.stats.gram)], block_size)]
        estimate = checkpoint_tv(checkpoint, tv_rng.spawn(index), **config.tv_gate)

        covered = None
        if functional is not None and checkpoint.posterior is not None and truth is not None:
            try:
                covered = coverage_record(checkpoint.posterior, functional, config.coverage_index,
                                          truth, config.coverage_level).covered
            except (ArithmeticError, RuntimeError) as e:
                logger.debug(f"Cobertura indefinida em n={checkpoint.n}: {e}")

        rows.append(ResultRow(
            replicate=replicate,
            n=checkpoint.n,
            tv=estimate.value,
            tv_se=estimate.std_error,
            lambda_min=diagnostics.lambda_min,
            lambda_max=diagnostics.lambda_max,
            covered=covered,
            excluded=estimate.excluded_replicate,
            reason=estimate.reason,
            gate_passed=estimate.gate_passed,
            block_lambda_min=blocks,
        ))
        last_stats = checkpoint.stats

    result = ReplicateResult(replicate, rows, trace.policy.metadata())
    if config.experiment_kind is ExperimentKind.LAI_WEI and last_stats is not None and last_stats.gram.count:
        result.studentized = studentized_mle(last_stats.gram, float(truth[0]), _sigma2(config))
    return result


def run_replicate(config: ExperimentConfig, replicate: int) -> ReplicateResult:
    """Simula e avalia a réplica `replicate`; falhas viram linhas excluídas."""
    source = replicate_source(config.master_seed, replicate)
    try:
        trace = simulate_replicate(config, source)
        return evaluate_replicate(config, trace, source, replicate)
    except Exception as e:
        reason = classify_replicate_error(e)
        logger.warning(f"Réplica {replicate} excluída ({reason}): {e}")
        rows = [
            ResultRow(replicate, n, float('nan'), float('nan'), float('nan'), float('nan'),
                      None, True, reason, False)
            for n in config.checkpoint_grid
        ]
        return ReplicateResult(replicate, rows, failure=reason)
