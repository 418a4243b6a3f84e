"""
Random Source
=============

Fontes aleatórias reprodutíveis derivadas de (semente, stream-id).
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np

from .errors import ConfigurationError

_UINT64_LIMIT = 2 ** 64


@dataclass(frozen=True)
class RandomSource:
    """
    Stream de números aleatórios identificado por (seed, stream_id, path).

    O mesmo trio produz sempre a mesma sequência; stream-ids distintos
    produzem streams independentes (SeedSequence do numpy). O gerador em si
    é estado mutável e pertence a uma única réplica.
    """

    seed: int
    stream_id: int = 0
    path: Tuple[int, ...] = ()

    def __post_init__(self):
        for label, value in (('seed', self.seed), ('stream_id', self.stream_id)):
            if not 0 <= int(value) < _UINT64_LIMIT:
                raise ConfigurationError(f"{label} fora do intervalo de 64 bits: {value}")

    @cached_property
    def generator(self) -> np.random.Generator:
        sequence = np.random.SeedSequence(
            entropy=int(self.seed),
            spawn_key=(int(self.stream_id),) + tuple(int(k) for k in self.path),
        )
        return np.random.Generator(np.random.PCG64(sequence))

    def spawn(self, key: int) -> "RandomSource":
        """Deriva um stream filho independente, identificado por `key`."""
        return RandomSource(self.seed, self.stream_id, self.path + (int(key),))

    # Atalhos usados pelos ambientes e políticas
    def normal(self, loc=0.0, scale=1.0, size=None):
        return self.generator.normal(loc, scale, size)

    def standard_normal(self, size=None):
        return self.generator.standard_normal(size)

    def uniform(self, size=None):
        return self.generator.random(size)


# Sub-streams fixos de uma réplica
POLICY_STREAM = 0
ENVIRONMENT_STREAM = 1
TV_STREAM = 2
CONTEXT_STREAM = 3


def replicate_source(master_seed: int, replicate: int) -> RandomSource:
    """
    Fonte aleatória de uma réplica (semente mestre + índice como stream-id).

    Args:
        master_seed: Semente mestre do experimento
        replicate: Índice da réplica

    Returns:
        RandomSource da réplica
    """
    return RandomSource(master_seed, replicate)
