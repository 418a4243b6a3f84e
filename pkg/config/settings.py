"""
Configurações do Sistema
========================

Arquivo central de configurações da biblioteca de simulação BvM.
"""

import os
import logging

from dotenv import load_dotenv

# Variáveis de ambiente (.env) sobrescrevem os padrões abaixo
load_dotenv()

# Configurações de logging
LOGGING_CONFIG = {
    'level': getattr(logging, os.environ.get('BVM_LOG_LEVEL', 'INFO').upper(), logging.INFO),
    'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    'filename': os.environ.get('BVM_LOG_FILE', 'bvm_simulation.log')
}

# Tolerâncias numéricas
NUMERIC_CONFIG = {
    'spd_tolerance': 1e-12,      # relativo a lambda_max
    'solve_residual': 1e-10,     # resíduo relativo máximo aceito em solve_spd
    'symmetry_tolerance': 1e-8,
}

# Configurações padrão das políticas
POLICY_CONFIG = {
    'ucb': {
        'c': 1.0,
        'sigma': {
            'bernoulli': 0.5,    # desvio máximo de uma Bernoulli
            'poisson': 1.0,
        },
    },
    'thompson_gaussian': {
        'prior_mean': 0.0,
        'prior_variance': 1.0,
    },
    'thompson_bernoulli': {
        'prior_a': 1.0,
        'prior_b': 1.0,
    },
    'batched_thompson': {
        'pi_min': 0.05,
        'prior_mean': 0.0,
        'prior_variance': 1.0,
    },
    'lin_ucb': {
        'alpha': 1.0,
        'ridge': 1.0,
    },
    'ncec': {
        'tau2': 1.0,
        'beta_exp': 0.5,
        'alpha_exp': 1.0,
        'warmup': 20,
        'riccati_tol': 1e-9,
        'riccati_max_iter': 10_000,
        'divergence_threshold': 1e8,
    },
    'lai_wei': {
        'x1': 1.0,
    },
}

# Estimador Monte Carlo da distância TV
TV_CONFIG = {
    'num_samples': 10_000,
    'max_samples': 1_000_000,
    'se_ratio': 0.1,
}

# Presets dos ambientes
ENVIRONMENT_CONFIG = {
    'contextual_presets': {
        # cada braço é ótimo para algum contexto
        'undominated': [[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]],
        # o terceiro braço é combinação convexa dos outros dois
        'dominated': [[1.0, 0.0], [0.0, 1.0], [0.5, 0.5]],
        # dois braços com os mesmos parâmetros
        'duplicate': [[1.0, 0.0], [0.0, 1.0], [0.0, 1.0]],
    },
    'lqr_presets': {
        'determined': {
            'A': [[1.0, 0.2], [0.0, 0.9]],
            'B': [[1.0, 0.0], [0.0, 1.0]],
        },
        'stabilizable': {
            'A': [[1.1, 0.3], [0.0, 0.7]],
            'B': [[1.0], [0.0]],
        },
        'unstabilizable': {
            'A': [[1.0, 0.2], [0.0, 1.01]],
            'B': [[1.0], [0.0]],
        },
    },
    'lqr_noise_sigma2': 1.0,
    'context_dim': 2,
}

# Orquestração dos experimentos
HARNESS_CONFIG = {
    'workers': int(os.environ.get('BVM_WORKERS', os.cpu_count() or 1)),
    'output_dir': os.environ.get('BVM_OUTPUT_DIR', 'results'),
    'min_coverage_replicates': 100,
    'min_normality_replicates': 500,
    'normality_level': 0.01,
    'normality_mc_samples': 9999,
    'normality_mc_seed': 0,
    'float_format': '%.10g',
}

def setup_logging():
    """Configura o sistema de logging."""
    logging.basicConfig(
        level=LOGGING_CONFIG['level'],
        format=LOGGING_CONFIG['format'],
        handlers=[
            logging.FileHandler(LOGGING_CONFIG['filename']),
            logging.StreamHandler()
        ]
    )
