"""
Result Summaries
================

Junta resultados de várias configurações numa tabela longa para gráficos
externos (uma linha por configuração e checkpoint).
"""

import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union

import pandas as pd

from config.settings import HARNESS_CONFIG
from src.core.errors import ConfigurationError
from .runner import RESULT_COLUMNS, summary_frame

logger = logging.getLogger(__name__)

SUMMARY_TABLE_COLUMNS = ['config_label', 'n', 'mean_tv', 'se', 'coverage', 'coverage_se']


def _label(path: Path) -> str:
    return path.name[:-len('.csv')] if path.name.endswith('.csv') else path.stem


def load_results(path: Union[str, Path]) -> pd.DataFrame:
    """Lê um CSV de resultados e confere o cabeçalho."""
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"Arquivo de resultados não encontrado: {path}")
    frame = pd.read_csv(path)
    if list(frame.columns) != RESULT_COLUMNS:
        raise ConfigurationError(f"Cabeçalho inesperado em {path.name}: {','.join(frame.columns)}")
    frame['covered'] = frame['covered'].astype('Int64')
    return frame


def summarize(paths: Sequence[Union[str, Path]], output: Optional[Union[str, Path]] = None) -> pd.DataFrame:
    """
    Tabela comparativa (config_label, n, mean_tv, se, coverage, coverage_se).

    Args:
        paths: CSVs de resultados (um por configuração)
        output: CSV de destino opcional

    Returns:
        DataFrame em formato longo

    Raises:
        ConfigurationError: entradas com grades de checkpoints diferentes
    """
    if not paths:
        raise ConfigurationError("Nenhum arquivo de resultados informado")

    tables: List[pd.DataFrame] = []
    reference = None
    for path in map(Path, paths):
        summary = summary_frame(load_results(path))
        grid = summary['n'].tolist()
        if reference is None:
            reference = grid
        elif grid != reference:
            raise ConfigurationError(f"Grade de checkpoints de {path.name} ({grid}) difere da primeira ({reference})")
        summary.insert(0, 'config_label', _label(path))
        tables.append(summary.rename(columns={'tv_se': 'se'})[SUMMARY_TABLE_COLUMNS])

    table = pd.concat(tables, ignore_index=True)
    if output is not None:
        output = Path(output)
        output.parent.mkdir(parents=True, exist_ok=True)
        table.to_csv(output, index=False, float_format=HARNESS_CONFIG['float_format'], na_rep='',
                     lineterminator='\n')
        logger.info(f"Resumo comparativo gravado em {output}")
    return table
