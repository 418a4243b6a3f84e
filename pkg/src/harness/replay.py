"""
Replay Path
===========

Reprodução de logs Bernoulli pelo mesmo caminho de inferência dos
experimentos, e geração de logs sintéticos para testes.
"""

import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from config.settings import POLICY_CONFIG
from src.core.errors import ConfigurationError, LogFormatError
from src.core.random_source import RandomSource
from src.policies.bandit import ucb_select
from src.policies.base import ArmCounts
from src.policies.replay import REPLAY_HEADER, LoggedStep, load_replay_log

logger = logging.getLogger(__name__)


def load_bernoulli_log(path: Union[str, Path]) -> List[LoggedStep]:
    """Log de replay com recompensas restritas a {0, 1}."""
    log = load_replay_log(path)
    for offset, (_, reward) in enumerate(log):
        if reward not in (0.0, 1.0):
            raise LogFormatError(f"Recompensa {reward} não é Bernoulli (0 ou 1)", offset + 2)
    return log


def run_replay(log_path: Union[str, Path], config=None, checkpoints: Optional[Sequence[int]] = None,
               workers: Optional[int] = None, output_dir: Optional[Union[str, Path]] = None) -> Path:
    """
    Reproduz um log pelo caminho de inferência Bernoulli.

    Args:
        log_path: CSV `step,arm,reward`
        config: ExperimentConfig do tipo replay (prior, checkpoints); padrão Beta(1, 1)
        checkpoints: Grade explícita (substitui a da configuração)
        workers: Processos paralelos
        output_dir: Diretório de saída

    Returns:
        Caminho do CSV de resultados
    """
    from .config import ExperimentConfig
    from .runner import run_experiment
    from src.utils.checkpoints import geometric_checkpoints

    log_path = Path(log_path)
    log = load_bernoulli_log(log_path)
    horizon = len(log)

    data = config.to_dict() if config is not None else {
        'name': log_path.stem,
        'kind': 'replay',
        'replicates': 1,
        'master_seed': 0,
        'policy': {'kind': 'replay'},
        'prior': {'kind': 'beta', 'a': 1.0, 'b': 1.0},
    }
    if data.get('kind') != 'replay':
        raise ConfigurationError(f"run_replay exige configuração do tipo replay, recebido {data.get('kind')}")
    data['environment'] = {**data.get('environment', {}), 'log': str(log_path)}
    data['horizon'] = horizon

    grid = list(checkpoints) if checkpoints is not None else data.get('checkpoints') or geometric_checkpoints(horizon)
    kept = [int(n) for n in grid if int(n) <= horizon]
    if not kept:
        raise ConfigurationError(f"Nenhum checkpoint dentro do log de {horizon} passos: {grid}")
    if len(kept) < len(grid):
        logger.warning(f"Checkpoints acima de {horizon} passos ignorados: {grid[len(kept):]}")
    data['checkpoints'] = kept

    replay_config = ExperimentConfig.from_dict(data).check()
    return run_experiment(replay_config, workers=workers, output_dir=output_dir)


def synthesize_replay_log(path: Union[str, Path], means: Sequence[float], horizon: int,
                          rule: str = 'uniform', seed: int = 0) -> Path:
    """
    Escreve um log sintético de braços Bernoulli.

    Args:
        path: Destino do CSV
        means: Probabilidades de sucesso por braço
        horizon: Número de passos
        rule: 'uniform' (alternância) ou 'ucb'
        seed: Semente das recompensas

    Returns:
        Caminho escrito
    """
    means = np.asarray(means, dtype=float)
    if np.any((means < 0.0) | (means > 1.0)):
        raise ConfigurationError(f"Probabilidades fora de [0, 1]: {means.tolist()}")
    if rule not in ('uniform', 'ucb'):
        raise ConfigurationError(f"Regra desconhecida: {rule}")

    rng = RandomSource(seed)
    counts = ArmCounts(means.shape[0])
    arms, rewards = [], []
    for step in range(horizon):
        if rule == 'uniform':
            arm = step % means.shape[0]
        else:
            arm = ucb_select(counts, counts.total, POLICY_CONFIG['ucb']['sigma']['bernoulli'],
                             POLICY_CONFIG['ucb']['c'])
        reward = int(rng.uniform() < means[arm])
        counts.record(arm, reward)
        arms.append(arm + 1)
        rewards.append(reward)

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame({'step': np.arange(1, horizon + 1), 'arm': arms, 'reward': rewards},
                         columns=REPLAY_HEADER)
    frame.to_csv(path, index=False, lineterminator='\n')
    logger.info(f"Log sintético escrito: {path} ({horizon} passos, regra {rule})")
    return path
