import sys
from pathlib import Path

import pytest

# Adiciona a raiz do repositório ao Python path
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))


@pytest.fixture
def gaussian_config_data():
    return {
        'name': 'ucb_gaussian_test',
        'kind': 'gaussian-mab',
        'horizon': 100,
        'replicates': 2,
        'master_seed': 42,
        'tv_samples': 2000,
        'tv_max_samples': 8000,
        'environment': {'means': [0.0, 1.0], 'sigma2': 1.0},
        'policy': {'kind': 'ucb', 'c': 1.0},
        'prior': {'kind': 'gaussian', 'mean': 0.0, 'variance': 1.0},
        'coverage': {'functional': 'margin', 'level': 0.95},
    }
