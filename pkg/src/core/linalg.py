"""
Linear Algebra Helpers
======================

Resoluções SPD e extremos espectrais usados pelo MLE e pelas posteriores.
"""

import logging
from typing import Tuple

import numpy as np
from scipy import linalg

from config.settings import NUMERIC_CONFIG
from .errors import DimensionError, SingularMatrixError

logger = logging.getLogger(__name__)


def symmetric_eigen_extremes(matrix: np.ndarray) -> Tuple[float, float]:
    """
    Menor e maior autovalor de uma matriz simétrica.

    Args:
        matrix: Matriz p×p simétrica

    Returns:
        (lambda_min, lambda_max)
    """
    eigenvalues = np.linalg.eigvalsh(np.asarray(matrix, dtype=float))
    return float(eigenvalues[0]), float(eigenvalues[-1])


def _check_square(matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"Matriz não quadrada: shape {matrix.shape}")
    tolerance = NUMERIC_CONFIG['symmetry_tolerance'] * max(1.0, float(np.max(np.abs(matrix))))
    if not np.allclose(matrix, matrix.T, rtol=0.0, atol=tolerance):
        raise DimensionError("Matriz não simétrica")
    return 0.5 * (matrix + matrix.T)


def spd_factor(matrix: np.ndarray):
    """
    Fatoração de Cholesky com teste de definição positiva.

    A matriz é rejeitada quando lambda_min <= tolerância * lambda_max.

    Returns:
        Fator no formato de scipy.linalg.cho_factor
    """
    matrix = _check_square(matrix)
    lambda_min, lambda_max = symmetric_eigen_extremes(matrix)
    if lambda_max <= 0.0 or lambda_min <= NUMERIC_CONFIG['spd_tolerance'] * lambda_max:
        raise SingularMatrixError("Matriz singular ou indefinida", lambda_min)
    try:
        return linalg.cho_factor(matrix, lower=True, check_finite=True)
    except (linalg.LinAlgError, ValueError) as e:
        raise SingularMatrixError(f"Falha na fatoração de Cholesky: {e}", lambda_min) from e


def solve_spd(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """
    Resolve matrix · v = rhs para matriz simétrica definida positiva.

    Args:
        matrix: Matriz p×p SPD
        rhs: Vetor (ou matriz) do lado direito

    Returns:
        Solução v
    """
    rhs = np.asarray(rhs, dtype=float)
    factor = spd_factor(matrix)
    if rhs.shape[0] != factor[0].shape[0]:
        raise DimensionError(f"Lado direito com dimensão {rhs.shape[0]}, esperado {factor[0].shape[0]}")

    solution = linalg.cho_solve(factor, rhs)

    # Um passo de refinamento iterativo quando o resíduo sai da tolerância
    matrix = np.asarray(matrix, dtype=float)
    residual = rhs - matrix @ solution
    scale = max(float(np.linalg.norm(rhs)), np.finfo(float).tiny)
    if np.linalg.norm(residual) / scale > NUMERIC_CONFIG['solve_residual']:
        solution = solution + linalg.cho_solve(factor, residual)
        residual = rhs - matrix @ solution
        if np.linalg.norm(residual) / scale > NUMERIC_CONFIG['solve_residual']:
            logger.warning(f"Resíduo relativo alto em solve_spd: {np.linalg.norm(residual) / scale:.2e}")
    return solution


def spd_inverse(matrix: np.ndarray) -> np.ndarray:
    """Inversa simétrica de uma matriz SPD."""
    size = np.asarray(matrix).shape[0]
    inverse = solve_spd(matrix, np.eye(size))
    return 0.5 * (inverse + inverse.T)
