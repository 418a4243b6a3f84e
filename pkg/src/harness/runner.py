"""
Experiment Runner
=================

Distribui as réplicas entre processos, junta os resultados em ordem de
réplica e grava a tabela completa, o resumo por checkpoint e o sidecar
de metadados.
"""

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd
import yaml

import src
from config.settings import HARNESS_CONFIG
from src.core.errors import ConfigurationError
from .config import ExperimentConfig, ExperimentKind
from .simulation import ReplicateResult, run_replicate

logger = logging.getLogger(__name__)

RESULT_COLUMNS = ['replicate', 'n', 'tv', 'tv_se', 'lambda_min', 'lambda_max', 'covered', 'excluded']
SUMMARY_COLUMNS = ['n', 'mean_tv', 'tv_se', 'coverage', 'coverage_se', 'included', 'excluded']


def _run_shard(config: ExperimentConfig, indices: List[int]) -> List[ReplicateResult]:
    """Executa um bloco de réplicas num processo de trabalho."""
    return [run_replicate(config, replicate) for replicate in indices]


def _shards(replicates: int, workers: int) -> List[List[int]]:
    """Índices 0..R−1 divididos em blocos intercalados, um por worker."""
    return [list(range(start, replicates, workers)) for start in range(min(workers, replicates))]


def run_replicates(config: ExperimentConfig, workers: Optional[int] = None) -> List[ReplicateResult]:
    """
    Executa todas as réplicas, em paralelo quando workers > 1.

    Args:
        config: Configuração validada
        workers: Número de processos (padrão HARNESS_CONFIG)

    Returns:
        Resultados ordenados por índice de réplica
    """
    workers = max(1, int(workers or HARNESS_CONFIG['workers']))
    if workers == 1 or config.replicates == 1:
        return [run_replicate(config, replicate) for replicate in range(config.replicates)]

    results: List[ReplicateResult] = []
    with ProcessPoolExecutor(max_workers=workers) as executor:
        future_to_shard = {
            executor.submit(_run_shard, config, shard): shard
            for shard in _shards(config.replicates, workers)
        }
        for future in as_completed(future_to_shard):
            shard = future_to_shard[future]
            results.extend(future.result())
            logger.debug(f"Bloco concluído: {len(shard)} réplicas")
    return sorted(results, key=lambda result: result.replicate)


def results_frame(results: List[ReplicateResult]) -> pd.DataFrame:
    """Tabela longa (réplica, n) com as colunas do CSV de resultados."""
    records = [
        {
            'replicate': row.replicate,
            'n': row.n,
            'tv': row.tv,
            'tv_se': row.tv_se,
            'lambda_min': row.lambda_min,
            'lambda_max': row.lambda_max,
            'covered': None if row.covered is None else int(row.covered),
            'excluded': int(row.excluded),
        }
        for result in results for row in result.rows
    ]
    frame = pd.DataFrame.from_records(records, columns=RESULT_COLUMNS)
    frame['covered'] = frame['covered'].astype('Int64')
    return frame.sort_values(['replicate', 'n'], kind='mergesort').reset_index(drop=True)


def summary_frame(frame: pd.DataFrame) -> pd.DataFrame:
    """
    Resumo por checkpoint: TV média e SE (linhas incluídas), cobertura e SE binomial.
    """
    rows = []
    for n, group in frame.groupby('n', sort=True):
        included = group[group['excluded'] == 0]
        tv = included['tv'].to_numpy(dtype=float)
        mean_tv = float(tv.mean()) if tv.size else float('nan')
        tv_se = float(tv.std(ddof=1) / np.sqrt(tv.size)) if tv.size > 1 else float('nan')

        covered = group['covered'].dropna().to_numpy(dtype=float)
        coverage = float(covered.mean()) if covered.size else float('nan')
        coverage_se = float(np.sqrt(coverage * (1.0 - coverage) / covered.size)) if covered.size else float('nan')
        rows.append({
            'n': int(n), 'mean_tv': mean_tv, 'tv_se': tv_se, 'coverage': coverage,
            'coverage_se': coverage_se, 'included': len(included), 'excluded': len(group) - len(included),
        })
    return pd.DataFrame.from_records(rows, columns=SUMMARY_COLUMNS)


def _plain(value: Any) -> Any:
    """Converte tipos numpy em tipos nativos para o YAML."""
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    return value


def metadata_record(config: ExperimentConfig, results: List[ReplicateResult]) -> Dict[str, Any]:
    """
    Sidecar de metadados: eco da configuração, semente, versão, metadados da
    política, contabilidade de exclusões e diagnósticos específicos do tipo.
    """
    rows = [row for result in results for row in result.rows]
    reasons = Counter(row.reason or 'unknown_error' for row in rows if row.excluded)
    meta: Dict[str, Any] = {
        'config': config.to_dict(),
        'master_seed': config.master_seed,
        'version': src.__version__,
        'replicates': len(results),
        'checkpoints': config.checkpoint_grid,
        'excluded_rows': sum(reasons.values()),
        'exclusion_reasons': dict(sorted(reasons.items())),
        'failed_replicates': sum(1 for result in results if result.failure is not None),
        'tv_gate_failures': sum(1 for row in rows if not row.excluded and not row.gate_passed),
    }
    policy_meta = next((result.metadata for result in results if result.metadata), {})
    meta['policy'] = policy_meta

    kind = config.experiment_kind
    if kind is ExperimentKind.LQR:
        meta['riccati_failures'] = sum(int(result.metadata.get('riccati_failures', 0)) for result in results)
    if kind is ExperimentKind.BATCHED:
        clipped = [result.metadata['pi_clipped'] for result in results if 'pi_clipped' in result.metadata]
        if clipped:
            meta['pi_clipped_mean'] = float(np.mean(clipped))
    if kind is ExperimentKind.CONTEXTUAL:
        meta['block_lambda_min'] = _block_summary(results)
    if kind is ExperimentKind.LAI_WEI:
        meta['normality_probe'] = _normality_summary(results)
    return _plain(meta)


def _block_summary(results: List[ReplicateResult]) -> Dict[int, List[float]]:
    """λ_min médio por bloco I_{n,i} em cada checkpoint."""
    by_n: Dict[int, List[List[float]]] = {}
    for result in results:
        for row in result.rows:
            if row.block_lambda_min is not None:
                by_n.setdefault(row.n, []).append(row.block_lambda_min)
    return {n: np.mean(np.asarray(values), axis=0).tolist() for n, values in sorted(by_n.items())}


def _normality_summary(results: List[ReplicateResult]) -> Optional[Dict[str, Any]]:
    from src.metrics.normality import mle_normality_probe

    values = [result.studentized for result in results if result.studentized is not None]
    if len(values) < HARNESS_CONFIG['min_normality_replicates']:
        logger.info(f"Teste de normalidade omitido: {len(values)} réplicas "
                    f"(mínimo {HARNESS_CONFIG['min_normality_replicates']})")
        return None
    probe = mle_normality_probe(values)
    return {'statistic': probe.statistic, 'pvalue': probe.pvalue, 'level': probe.level,
            'reject': bool(probe.reject), 'num_values': probe.num_values}


def write_outputs(config: ExperimentConfig, results: List[ReplicateResult],
                  output_dir: Union[str, Path]) -> Path:
    """Grava `<name>.csv`, `<name>.summary.csv` e `<name>.meta.yaml`."""
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    float_format = HARNESS_CONFIG['float_format']

    frame = results_frame(results)
    result_path = output_dir / f"{config.name}.csv"
    frame.to_csv(result_path, index=False, float_format=float_format, na_rep='', lineterminator='\n')

    summary_path = output_dir / f"{config.name}.summary.csv"
    summary_frame(frame).to_csv(summary_path, index=False, float_format=float_format, na_rep='',
                                lineterminator='\n')

    meta_path = output_dir / f"{config.name}.meta.yaml"
    with open(meta_path, 'w', encoding='utf-8') as f:
        yaml.safe_dump(metadata_record(config, results), f, sort_keys=True, allow_unicode=True)

    logger.info(f"Resultados gravados em {result_path}")
    return result_path


def run_experiment(config: ExperimentConfig, workers: Optional[int] = None,
                   output_dir: Optional[Union[str, Path]] = None) -> Path:
    """
    Executa um experimento completo.

    Args:
        config: Configuração (validada aqui antes de qualquer réplica)
        workers: Processos paralelos (padrão: paralelismo disponível)
        output_dir: Diretório de saída (padrão: config.output ou HARNESS_CONFIG)

    Returns:
        Caminho do CSV de resultados
    """
    config.check()
    if config.experiment_kind is ExperimentKind.REPLAY and config.horizon < 1:
        raise ConfigurationError("Experimento de replay sem horizonte: use run_replay com o log")

    logger.info(f"Iniciando experimento {config.name}: {config.kind}, {config.replicates} réplicas, "
                f"horizonte {config.horizon}")
    results = run_replicates(config, workers)
    failed = sum(1 for result in results if result.failure is not None)
    if failed:
        logger.warning(f"{failed} réplicas falharam e foram registradas como excluídas")
    return write_outputs(config, results, output_dir or config.output_dir)
