"""
Logged-Data Replay
==================

Reprodução de logs `step,arm,reward` no lugar da amostragem do ambiente.
"""

import logging
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
import pandas as pd

from src.core.errors import EndOfData, LogFormatError
from .base import ArmCounts, BanditPolicy, PolicyKind

logger = logging.getLogger(__name__)

REPLAY_HEADER = ['step', 'arm', 'reward']

LoggedStep = Tuple[int, float]


def load_replay_log(path: Union[str, Path]) -> List[LoggedStep]:
    """
    Lê e valida um log de replay.

    Braços são 1-based no arquivo e devem formar o conjunto contíguo 1..p;
    recompensas devem ser reais finitos. Linhas reportadas nos erros contam
    o cabeçalho como linha 1.

    Args:
        path: Caminho do CSV

    Returns:
        Lista de (braço 1-based, recompensa)
    """
    path = Path(path)
    if not path.exists():
        raise LogFormatError(f"Log não encontrado: {path}")
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise LogFormatError("Log vazio", 1) from None
    except pd.errors.ParserError as e:
        raise LogFormatError(f"CSV malformado: {e}") from e

    if list(frame.columns) != REPLAY_HEADER:
        raise LogFormatError(f"Cabeçalho esperado {','.join(REPLAY_HEADER)}, recebido {','.join(frame.columns)}", 1)
    if frame.empty:
        raise LogFormatError("Log sem passos", 2)

    steps: List[LoggedStep] = []
    for offset, row in enumerate(frame.itertuples(index=False)):
        line = offset + 2
        try:
            step = int(row.step)
            arm = int(row.arm)
            reward = float(row.reward)
        except ValueError:
            raise LogFormatError(f"Valores inválidos: {row.step},{row.arm},{row.reward}", line) from None
        if step != offset + 1:
            raise LogFormatError(f"Passo {step} fora de ordem, esperado {offset + 1}", line)
        if arm < 1:
            raise LogFormatError(f"Braço {arm} inválido (índices são 1-based)", line)
        if not np.isfinite(reward):
            raise LogFormatError(f"Recompensa não finita: {row.reward}", line)
        steps.append((arm, reward))

    arms = sorted({arm for arm, _ in steps})
    if arms != list(range(1, len(arms) + 1)):
        raise LogFormatError(f"Braços devem formar o conjunto contíguo 1..p, recebido {arms}")
    logger.info(f"Log de replay carregado: {len(steps)} passos, {len(arms)} braços ({path.name})")
    return steps


def replay_select(log: List[LoggedStep], cursor: int) -> LoggedStep:
    """
    Par (braço 1-based, recompensa) na posição `cursor`.

    Raises:
        EndOfData: cursor além do fim do log
    """
    if not 0 <= cursor < len(log):
        raise EndOfData(f"Log esgotado no cursor {cursor} (tamanho {len(log)})")
    return log[cursor]


def log_num_arms(log: List[LoggedStep]) -> int:
    return max(arm for arm, _ in log)


class ReplayPolicy(BanditPolicy):
    """
    Política que devolve os braços do log; a recompensa logada substitui a
    amostragem do ambiente.
    """

    kind = PolicyKind.REPLAY

    def __init__(self, log: List[LoggedStep]):
        super().__init__(log_num_arms(log), len(log))
        self.log = log
        self.cursor = 0

    def next_logged(self) -> Tuple[int, float]:
        """(braço 0-based, recompensa logada) e avança o cursor."""
        arm, reward = replay_select(self.log, self.cursor)
        self.cursor += 1
        return arm - 1, reward

    def select_arm(self, rng=None) -> int:
        arm, _ = replay_select(self.log, self.cursor)
        return arm - 1

    @staticmethod
    def offline_tally(log: List[LoggedStep]) -> ArmCounts:
        counts = ArmCounts(log_num_arms(log))
        for arm, reward in log:
            counts.record(arm - 1, reward)
        return counts
