"""
Simulação BvM - Entrada Principal
=================================

Execute este arquivo para rodar experimentos a partir de configurações YAML.

Opções de uso:
- python run_system.py run experiments/ucb_gaussian_equal.yaml      # Experimento completo
- python run_system.py replay log.csv experiments/replay.yaml         # Replay de log Bernoulli
- python run_system.py summarize results/a.csv results/b.csv          # Tabela comparativa
- python run_system.py validate experiments/batched_margin_1.yaml     # Só valida a configuração
- python run_system.py --help                                         # Ajuda
"""

import sys
import logging
import argparse
from pathlib import Path

# Adiciona o diretório atual ao Python path
current_dir = Path(__file__).parent
sys.path.insert(0, str(current_dir))

from config.settings import setup_logging


def load_config(path, args):
    """Carrega a configuração e aplica os overrides do CLI."""
    from src.harness.config import ExperimentConfig

    config = ExperimentConfig.from_yaml(path)
    return config.with_overrides(
        seed=args.seed,
        replicates=args.replicates,
        tv_samples=args.tv_samples,
        output=args.out,
    )


def command_run(args):
    from src.harness.replay import run_replay
    from src.harness.runner import run_experiment

    config = load_config(args.config, args)
    print(f"🧪 Experimento: {config.name} ({config.kind})")
    print(f"🔁 Réplicas: {config.replicates} | Horizonte: {config.horizon} | Semente: {config.master_seed}")
    if config.kind == 'replay':
        path = run_replay(config.environment['log'], config, workers=args.workers)
    else:
        path = run_experiment(config, workers=args.workers)
    print(f"✅ Resultados salvos em: {path}")


def command_replay(args):
    from src.harness.replay import run_replay

    config = load_config(args.config, args) if args.config else None
    print(f"📼 Replay do log: {args.log}")
    path = run_replay(args.log, config, workers=args.workers, output_dir=args.out)
    print(f"✅ Resultados salvos em: {path}")


def command_summarize(args):
    from src.harness.summary import summarize

    output = args.out or 'summary.csv'
    table = summarize(args.files, output)
    print(f"📊 {table['config_label'].nunique()} configurações, {table['n'].nunique()} checkpoints")
    print(f"✅ Resumo salvo em: {output}")


def command_validate(args):
    config = load_config(args.config, args)
    violations = config.validate()
    if violations:
        print(f"❌ {len(violations)} violação(ões) em {args.config}:")
        for violation in violations:
            print(f"   - {violation}")
        return 1
    print(f"✅ Configuração válida: {config.name} ({config.kind})")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        description="Simulações BvM com dados coletados adaptativamente",
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="Semente mestre (substitui master_seed)")
    common.add_argument("--workers", type=int, help="Processos paralelos (padrão: CPUs disponíveis)")
    common.add_argument("--out", help="Diretório (ou arquivo, no summarize) de saída")
    common.add_argument("--tv-samples", type=int, dest="tv_samples", help="Amostras Monte Carlo por ponto TV")
    common.add_argument("--replicates", type=int, help="Número de réplicas")

    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", parents=[common], help="Executa um experimento")
    run.add_argument("config", help="Arquivo YAML do experimento")
    run.set_defaults(handler=command_run)

    replay = subparsers.add_parser("replay", parents=[common], help="Reproduz um log step,arm,reward")
    replay.add_argument("log", help="CSV do log")
    replay.add_argument("config", nargs="?", help="Arquivo YAML do tipo replay (opcional)")
    replay.set_defaults(handler=command_replay)

    summary = subparsers.add_parser("summarize", parents=[common], help="Junta resultados de várias configurações")
    summary.add_argument("files", nargs="+", help="CSVs de resultados")
    summary.set_defaults(handler=command_summarize)

    validate = subparsers.add_parser("validate", parents=[common], help="Valida uma configuração")
    validate.add_argument("config", help="Arquivo YAML do experimento")
    validate.set_defaults(handler=command_validate)
    return parser


def main(argv=None):
    """Função principal do sistema."""
    args = build_parser().parse_args(argv)

    # Configurar logging
    setup_logging()
    logger = logging.getLogger(__name__)

    print("🚀 Simulação BvM")
    print("=" * 50)
    logger.info(f"Comando: {args.command}")

    from src.core.errors import ConfigValidationError, SimulationError

    try:
        return args.handler(args) or 0
    except ConfigValidationError as e:
        print(f"❌ Configuração inválida ({len(e.violations)} violação(ões)):")
        for violation in e.violations:
            print(f"   - {violation}")
        logger.error(f"Configuração inválida: {e}")
        return 2
    except SimulationError as e:
        print(f"❌ Erro: {e}")
        logger.error(f"Erro na execução: {e}")
        return 2
    except KeyboardInterrupt:
        print("\n👋 Execução interrompida pelo usuário")
        logger.info("Execução interrompida pelo usuário")
        return 130


if __name__ == "__main__":
    sys.exit(main())
