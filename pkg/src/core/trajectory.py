"""
Trajectory & Gram Accumulator
=============================

Histórico H_n de pares (covariável, resultado) e as estatísticas
suficientes X_nᵀX_n e X_nᵀy_n mantidas por atualizações de posto um.
"""

import logging
from typing import Iterator, List, Optional, Tuple

import numpy as np

from .errors import DimensionError, DataError, SingularMatrixError
from .linalg import symmetric_eigen_extremes

logger = logging.getLogger(__name__)


def as_covariate(values, dimension: Optional[int] = None) -> np.ndarray:
    """
    Converte valores em uma covariável (vetor real finito).

    Args:
        values: Sequência ou array de números
        dimension: Dimensão esperada p (opcional)

    Returns:
        Vetor numpy 1-D de floats
    """
    x = np.atleast_1d(np.asarray(values, dtype=float))
    if x.ndim != 1:
        raise DimensionError(f"Covariável deve ser um vetor, recebido shape {x.shape}")
    if dimension is not None and x.shape[0] != dimension:
        raise DimensionError(f"Covariável com dimensão {x.shape[0]}, esperado {dimension}")
    if not np.all(np.isfinite(x)):
        raise DataError("Covariável com entradas não finitas")
    return x


def basis_vector(index: int, dimension: int) -> np.ndarray:
    """Vetor canônico e_index (0-based) de dimensão p."""
    x = np.zeros(dimension)
    x[index] = 1.0
    return x


def basis_index(x: np.ndarray) -> int:
    """
    Índice (0-based) do braço representado por uma covariável canônica.

    Raises:
        DimensionError: se x não for um vetor da base canônica
    """
    x = np.asarray(x)
    nonzero = np.flatnonzero(x)
    if nonzero.size != 1 or x[nonzero[0]] != 1.0:
        raise DimensionError("Covariável não é um vetor da base canônica")
    return int(nonzero[0])


class Trajectory:
    """
    Histórico ordenado de passos (covariável, resultado) de dimensão fixa p.
    """

    def __init__(self, dimension: int):
        if dimension < 1:
            raise DimensionError(f"Dimensão inválida: {dimension}")
        self.dimension = int(dimension)
        self._covariates: List[np.ndarray] = []
        self._outcomes: List[float] = []

    def append(self, x, y: float) -> "Trajectory":
        x = as_covariate(x, self.dimension)
        if not np.isfinite(y):
            raise DataError(f"Resultado não finito: {y}")
        self._covariates.append(x)
        self._outcomes.append(float(y))
        return self

    def __len__(self) -> int:
        return len(self._outcomes)

    def __iter__(self) -> Iterator[Tuple[np.ndarray, float]]:
        return iter(zip(self._covariates, self._outcomes))

    def __getitem__(self, index: int) -> Tuple[np.ndarray, float]:
        return self._covariates[index], self._outcomes[index]

    @property
    def covariates(self) -> np.ndarray:
        if not self._covariates:
            return np.zeros((0, self.dimension))
        return np.vstack(self._covariates)

    @property
    def outcomes(self) -> np.ndarray:
        return np.asarray(self._outcomes, dtype=float)

    @property
    def last_outcome(self) -> Optional[float]:
        return self._outcomes[-1] if self._outcomes else None

    def copy(self) -> "Trajectory":
        clone = Trajectory(self.dimension)
        clone._covariates = list(self._covariates)
        clone._outcomes = list(self._outcomes)
        return clone


class GramAccumulator:
    """
    Estatísticas suficientes X_nᵀX_n, X_nᵀy_n e n sob atualizações de posto um.

    O peso opcional de cada passo permite a verossimilhança heterocedástica
    (peso 1/σ_i²) sem reescalar a trajetória.
    """

    def __init__(self, dimension: int):
        if dimension < 1:
            raise DimensionError(f"Dimensão inválida: {dimension}")
        self.dimension = int(dimension)
        self.gram = np.zeros((dimension, dimension))
        self.xty = np.zeros(dimension)
        self.count = 0

    def update(self, x, y: float, weight: float = 1.0) -> "GramAccumulator":
        x = as_covariate(x, self.dimension)
        self.gram += weight * np.outer(x, x)
        self.xty += weight * y * x
        self.count += 1
        return self

    @classmethod
    def from_trajectory(cls, trajectory: Trajectory) -> "GramAccumulator":
        """Recalcula o acumulador do zero (usado como oráculo nos testes)."""
        acc = cls(trajectory.dimension)
        X = trajectory.covariates
        acc.gram = X.T @ X
        acc.xty = X.T @ trajectory.outcomes
        acc.count = len(trajectory)
        return acc

    def eigen_extremes(self) -> Tuple[float, float]:
        return eigen_extremes(self)

    def block(self, index: int, size: int) -> "GramAccumulator":
        """
        Bloco diagonal `index` (0-based) de tamanho `size`, ex. I_{n,i} contextual.
        """
        start, stop = index * size, (index + 1) * size
        if stop > self.dimension:
            raise DimensionError(f"Bloco {index} de tamanho {size} excede dimensão {self.dimension}")
        sub = GramAccumulator(size)
        sub.gram = self.gram[start:stop, start:stop].copy()
        sub.xty = self.xty[start:stop].copy()
        sub.count = self.count
        return sub

    def copy(self) -> "GramAccumulator":
        clone = GramAccumulator(self.dimension)
        clone.gram = self.gram.copy()
        clone.xty = self.xty.copy()
        clone.count = self.count
        return clone


def append_step(traj: Trajectory, acc: GramAccumulator, x, y: float) -> Tuple[Trajectory, GramAccumulator]:
    """
    Acrescenta um passo à trajetória e atualiza o acumulador de Gram.

    Args:
        traj: Trajetória da réplica
        acc: Acumulador correspondente
        x: Covariável de dimensão p
        y: Resultado observado

    Returns:
        (trajetória, acumulador) atualizados
    """
    if traj.dimension != acc.dimension:
        raise DimensionError(f"Trajetória (p={traj.dimension}) e acumulador (p={acc.dimension}) incompatíveis")
    x = as_covariate(x, traj.dimension)
    traj.append(x, y)
    acc.update(x, y)
    return traj, acc


def eigen_extremes(acc: GramAccumulator) -> Tuple[float, float]:
    """
    Menor e maior autovalor de X_nᵀX_n.

    Raises:
        SingularMatrixError: acumulador vazio (count = 0)
    """
    if acc.count < 1:
        raise SingularMatrixError("Acumulador de Gram vazio", 0.0)
    lambda_min, lambda_max = symmetric_eigen_extremes(acc.gram)
    # arredondamento pode produzir -1e-17 em matrizes semidefinidas
    return max(lambda_min, 0.0), max(lambda_max, 0.0)
