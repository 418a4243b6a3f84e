"""
Erros da Simulação
==================

Hierarquia de exceções compartilhada por todos os módulos.
"""

from typing import List, Optional, Sequence


class SimulationError(Exception):
    """Erro base da biblioteca."""


class DimensionError(SimulationError, ValueError):
    """Dimensão de covariável ou matriz incompatível."""


class SingularMatrixError(SimulationError, ArithmeticError):
    """Matriz singular ou indefinida em uma resolução SPD."""

    def __init__(self, message: str, lambda_min: float):
        super().__init__(f"{message} (lambda_min={lambda_min:.3e})")
        self.lambda_min = lambda_min


class ConfigurationError(SimulationError, ValueError):
    """Parâmetro de configuração inválido."""


class DomainError(SimulationError, ValueError):
    """Parâmetro fora do espaço natural da família exponencial."""


class BoundaryMLEError(DomainError):
    """MLE na fronteira (ex.: braço com todos sucessos)."""

    def __init__(self, message: str, arms: Sequence[int]):
        super().__init__(f"{message}: braços {list(arms)}")
        self.arms = list(arms)


class DataError(SimulationError):
    """Valor não finito onde o dado deveria ser válido."""


class EndOfData(SimulationError):
    """Log de replay esgotado."""


class InternalError(SimulationError):
    """Invariante interno violado (contagens negativas etc.)."""


class ConfigValidationError(ConfigurationError):
    """Configuração de experimento com uma ou mais violações."""

    def __init__(self, violations: List[str]):
        joined = "; ".join(violations)
        super().__init__(f"{len(violations)} violação(ões) de configuração: {joined}")
        self.violations = list(violations)


class LogFormatError(ConfigurationError):
    """Linha malformada em um log de replay."""

    def __init__(self, message: str, line: Optional[int] = None):
        prefix = f"linha {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")
        self.line = line


def classify_replicate_error(error: Exception) -> str:
    """
    Classifica a falha de uma réplica para a contabilidade de exclusões.

    Args:
        error: Exceção capturada

    Returns:
        Motivo curto usado no sidecar de metadados
    """
    if isinstance(error, SingularMatrixError):
        return "singular_gram"
    if isinstance(error, BoundaryMLEError):
        return "boundary_mle"
    if isinstance(error, DataError):
        return "non_finite_density"
    if isinstance(error, EndOfData):
        return "end_of_data"
    if isinstance(error, (FloatingPointError, OverflowError)):
        return "overflow"
    return "unknown_error"
