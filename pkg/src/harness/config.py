"""
Experiment Configuration
========================

Descrição declarativa de um experimento (arquivo YAML) e sua validação
completa antes de qualquer execução.

Esquema:
    name, kind, horizon, replicates, master_seed, checkpoints?,
    tv_samples?, tv_max_samples?, tv_se_ratio?, output?,
    environment{...}, policy{kind, ...}, prior{kind, ...},
    coverage{functional, index?, level}?
"""

import copy
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import yaml

from config.settings import ENVIRONMENT_CONFIG, HARNESS_CONFIG, TV_CONFIG
from src.core.errors import ConfigValidationError, ConfigurationError
from src.policies.base import PolicyKind, resolve_policy_kind
from src.utils.checkpoints import geometric_checkpoints

logger = logging.getLogger(__name__)

_UINT64_LIMIT = 2 ** 64


class ExperimentKind(str, Enum):
    GAUSSIAN_MAB = 'gaussian-mab'
    BERNOULLI_MAB = 'bernoulli-mab'
    POISSON_MAB = 'poisson-mab'
    HETERO_MAB = 'hetero-mab'
    CONTEXTUAL = 'contextual'
    LQR = 'lqr'
    BATCHED = 'batched'
    LAI_WEI = 'lai-wei'
    REPLAY = 'replay'


# Políticas aceitas por tipo de experimento
ALLOWED_POLICIES = {
    ExperimentKind.GAUSSIAN_MAB: {PolicyKind.UCB, PolicyKind.THOMPSON_GAUSSIAN, PolicyKind.UNIFORM},
    ExperimentKind.BERNOULLI_MAB: {PolicyKind.UCB, PolicyKind.THOMPSON_BERNOULLI, PolicyKind.UNIFORM},
    ExperimentKind.POISSON_MAB: {PolicyKind.UCB, PolicyKind.UNIFORM},
    ExperimentKind.HETERO_MAB: {PolicyKind.UCB, PolicyKind.UNIFORM},
    ExperimentKind.CONTEXTUAL: {PolicyKind.LIN_UCB},
    ExperimentKind.LQR: {PolicyKind.NCEC},
    ExperimentKind.BATCHED: {PolicyKind.BATCHED_THOMPSON},
    ExperimentKind.LAI_WEI: {PolicyKind.LAI_WEI},
    ExperimentKind.REPLAY: {PolicyKind.REPLAY},
}

# Priori exigida por tipo de experimento
PRIOR_KINDS = {
    ExperimentKind.BERNOULLI_MAB: 'beta',
    ExperimentKind.POISSON_MAB: 'gamma',
    ExperimentKind.REPLAY: 'beta',
}


@dataclass
class ExperimentConfig:
    name: str
    kind: str
    horizon: int
    replicates: int
    master_seed: int
    environment: Dict[str, Any]
    policy: Dict[str, Any]
    prior: Dict[str, Any] = field(default_factory=dict)
    checkpoints: Optional[List[int]] = None
    tv_samples: Optional[int] = None
    tv_max_samples: Optional[int] = None
    tv_se_ratio: Optional[float] = None
    output: Optional[str] = None
    coverage: Optional[Dict[str, Any]] = None

    # ------------------------------------------------------------------
    # Construção
    # ------------------------------------------------------------------
    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        data = copy.deepcopy(data or {})
        missing = [key for key in ('name', 'kind', 'replicates', 'master_seed', 'environment', 'policy')
                   if key not in data]
        if missing:
            raise ConfigValidationError([f"campo obrigatório ausente: {key}" for key in missing])
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigValidationError([f"campo desconhecido: {key}" for key in unknown])

        data.setdefault('prior', {})
        if 'horizon' not in data:
            batch_size = (data.get('environment') or {}).get('batch_size')
            if data.get('kind') == ExperimentKind.BATCHED.value and isinstance(batch_size, int):
                data['horizon'] = 2 * batch_size
            elif data.get('kind') == ExperimentKind.REPLAY.value:
                data['horizon'] = 0
            else:
                raise ConfigValidationError(["campo obrigatório ausente: horizon"])
        return cls(**data)

    @classmethod
    def from_yaml(cls, path: Union[str, Path]) -> "ExperimentConfig":
        path = Path(path)
        if not path.exists():
            raise ConfigurationError(f"Arquivo de configuração não encontrado: {path}")
        with open(path, 'r', encoding='utf-8') as f:
            try:
                data = yaml.safe_load(f)
            except yaml.YAMLError as e:
                raise ConfigValidationError([f"YAML inválido: {e}"]) from e
        if not isinstance(data, dict):
            raise ConfigValidationError(["o arquivo deve conter um mapeamento YAML"])
        return cls.from_dict(data)

    def to_dict(self) -> Dict[str, Any]:
        data = {name: copy.deepcopy(getattr(self, name)) for name in self.__dataclass_fields__}
        return {key: value for key, value in data.items() if value is not None}

    def with_overrides(self, seed: Optional[int] = None, replicates: Optional[int] = None,
                       tv_samples: Optional[int] = None, output: Optional[str] = None) -> "ExperimentConfig":
        """Cópia com os overrides do CLI aplicados."""
        data = self.to_dict()
        if seed is not None:
            data['master_seed'] = seed
        if replicates is not None:
            data['replicates'] = replicates
        if tv_samples is not None:
            data['tv_samples'] = tv_samples
        if output is not None:
            data['output'] = output
        return ExperimentConfig.from_dict(data)

    # ------------------------------------------------------------------
    # Valores derivados
    # ------------------------------------------------------------------
    @property
    def experiment_kind(self) -> ExperimentKind:
        return ExperimentKind(self.kind)

    @property
    def policy_kind(self) -> PolicyKind:
        return resolve_policy_kind(self.policy.get('kind'))

    @property
    def label(self) -> str:
        return self.name

    @property
    def checkpoint_grid(self) -> List[int]:
        if self.checkpoints:
            return [int(n) for n in self.checkpoints]
        return geometric_checkpoints(self.horizon)

    @property
    def tv_gate(self) -> Dict[str, Any]:
        return {
            'num_samples': self.tv_samples or TV_CONFIG['num_samples'],
            'max_samples': self.tv_max_samples or TV_CONFIG['max_samples'],
            'se_ratio': self.tv_se_ratio or TV_CONFIG['se_ratio'],
        }

    @property
    def output_dir(self) -> Path:
        return Path(self.output or HARNESS_CONFIG['output_dir'])

    def num_arms(self) -> Optional[int]:
        env = self.environment
        kind = self.experiment_kind
        if kind in (ExperimentKind.GAUSSIAN_MAB, ExperimentKind.BERNOULLI_MAB, ExperimentKind.POISSON_MAB,
                    ExperimentKind.HETERO_MAB, ExperimentKind.BATCHED):
            return len(env.get('means') or [])
        if kind is ExperimentKind.CONTEXTUAL:
            thetas = env.get('thetas') or ENVIRONMENT_CONFIG['contextual_presets'].get(env.get('preset'), [])
            return len(thetas)
        return None

    def dimension(self) -> Optional[int]:
        """Dimensão p do parâmetro inferido (None quando indeterminada)."""
        kind = self.experiment_kind
        env = self.environment
        if kind is ExperimentKind.CONTEXTUAL:
            thetas = env.get('thetas') or ENVIRONMENT_CONFIG['contextual_presets'].get(env.get('preset'))
            return int(np.asarray(thetas).size) if thetas else None
        if kind is ExperimentKind.LQR:
            A, B = self.lqr_matrices()
            return None if A is None else A.shape[0] * (A.shape[0] + B.shape[1])
        if kind is ExperimentKind.LAI_WEI:
            return 1
        if kind is ExperimentKind.REPLAY:
            return None
        return self.num_arms()

    def lqr_matrices(self):
        env = self.environment
        if 'preset' in env:
            preset = ENVIRONMENT_CONFIG['lqr_presets'].get(env['preset'])
            if preset is None:
                return None, None
            return np.asarray(preset['A'], dtype=float), np.atleast_2d(np.asarray(preset['B'], dtype=float))
        if 'A' in env and 'B' in env:
            return np.atleast_2d(np.asarray(env['A'], dtype=float)), np.atleast_2d(np.asarray(env['B'], dtype=float))
        return None, None

    # ------------------------------------------------------------------
    # Validação
    # ------------------------------------------------------------------
    def validate(self) -> List[str]:
        """
        Lista todas as violações de pré-condição alcançáveis pela configuração.

        Returns:
            Lista (vazia quando a configuração é válida)
        """
        violations: List[str] = []
        try:
            kind = self.experiment_kind
        except ValueError:
            return [f"kind desconhecido: {self.kind}"]

        if not isinstance(self.replicates, int) or self.replicates < 1:
            violations.append(f"replicates deve ser inteiro >= 1: {self.replicates}")
        if not isinstance(self.master_seed, int) or not 0 <= self.master_seed < _UINT64_LIMIT:
            violations.append(f"master_seed deve ser inteiro de 64 bits sem sinal: {self.master_seed}")
        if kind is not ExperimentKind.REPLAY and (not isinstance(self.horizon, int) or self.horizon < 1):
            violations.append(f"horizon deve ser inteiro >= 1: {self.horizon}")
        if self.tv_samples is not None and (not isinstance(self.tv_samples, int) or self.tv_samples < 2):
            violations.append(f"tv_samples deve ser inteiro >= 2: {self.tv_samples}")
        if self.tv_max_samples is not None and self.tv_max_samples < (self.tv_samples or TV_CONFIG['num_samples']):
            violations.append(f"tv_max_samples menor que tv_samples: {self.tv_max_samples}")
        if self.tv_se_ratio is not None and self.tv_se_ratio <= 0.0:
            violations.append(f"tv_se_ratio deve ser positivo: {self.tv_se_ratio}")
        violations += self._validate_checkpoints(kind)
        violations += self._validate_environment(kind)
        violations += self._validate_policy(kind)
        violations += self._validate_prior(kind)
        violations += self._validate_coverage(kind)
        return violations

    def check(self) -> "ExperimentConfig":
        """Levanta ConfigValidationError com todas as violações, se houver."""
        violations = self.validate()
        if violations:
            raise ConfigValidationError(violations)
        return self

    def _validate_checkpoints(self, kind) -> List[str]:
        if self.checkpoints is None:
            return []
        if not isinstance(self.checkpoints, list) or not self.checkpoints:
            return ["checkpoints deve ser uma lista não vazia"]
        values = self.checkpoints
        if any(not isinstance(n, int) or n < 1 for n in values):
            return [f"checkpoints devem ser inteiros positivos: {values}"]
        violations = []
        if any(b <= a for a, b in zip(values, values[1:])):
            violations.append(f"checkpoints devem ser estritamente crescentes: {values}")
        if kind is not ExperimentKind.REPLAY and isinstance(self.horizon, int) and values[-1] > self.horizon:
            violations.append(f"checkpoint {values[-1]} acima do horizonte {self.horizon}")
        return violations

    def _validate_environment(self, kind) -> List[str]:
        env = self.environment if isinstance(self.environment, dict) else {}
        if not isinstance(self.environment, dict):
            return ["environment deve ser um mapeamento"]
        violations = []

        def positive(key, default=1.0):
            value = env.get(key, default)
            if not isinstance(value, (int, float)) or not np.isfinite(value) or value <= 0:
                violations.append(f"environment.{key} deve ser positivo: {value}")

        if kind in (ExperimentKind.GAUSSIAN_MAB, ExperimentKind.BERNOULLI_MAB, ExperimentKind.POISSON_MAB,
                    ExperimentKind.HETERO_MAB, ExperimentKind.BATCHED):
            means = env.get('means')
            if not isinstance(means, list) or not means:
                violations.append("environment.means deve ser uma lista não vazia")
                return violations
            means = np.asarray(means, dtype=float)
            if not np.all(np.isfinite(means)):
                violations.append(f"environment.means não finitas: {means.tolist()}")
            if kind is ExperimentKind.BERNOULLI_MAB and np.any((means <= 0.0) | (means >= 1.0)):
                violations.append(f"probabilidades Bernoulli devem estar em (0, 1): {means.tolist()}")
            if kind is ExperimentKind.POISSON_MAB and np.any(means <= 0.0):
                violations.append(f"taxas Poisson devem ser positivas: {means.tolist()}")
            if kind in (ExperimentKind.GAUSSIAN_MAB, ExperimentKind.BATCHED):
                positive('sigma2')
            if kind is ExperimentKind.HETERO_MAB:
                variances = env.get('variances')
                if not isinstance(variances, list) or len(variances) != means.shape[0]:
                    violations.append("environment.variances deve ter uma entrada por braço")
                elif np.any(np.asarray(variances, dtype=float) <= 0.0):
                    violations.append(f"variâncias devem ser positivas: {variances}")
            if kind is ExperimentKind.BATCHED:
                batch_size = env.get('batch_size')
                if means.shape[0] != 2:
                    violations.append("Thompson em lotes exige exatamente 2 braços")
                if not isinstance(batch_size, int) or batch_size < 2 or batch_size % 2:
                    violations.append(f"environment.batch_size deve ser inteiro par >= 2: {batch_size}")
                elif isinstance(self.horizon, int) and self.horizon != 2 * batch_size:
                    violations.append(f"horizon deve ser 2·batch_size = {2 * batch_size}: {self.horizon}")

        elif kind is ExperimentKind.CONTEXTUAL:
            presets = ENVIRONMENT_CONFIG['contextual_presets']
            if 'thetas' in env:
                thetas = np.asarray(env['thetas'], dtype=float)
                if thetas.ndim != 2 or thetas.size == 0:
                    violations.append("environment.thetas deve ser uma matriz m×d")
            elif env.get('preset') not in presets:
                violations.append(f"environment.preset contextual desconhecido: {env.get('preset')}")
            positive('sigma2')

        elif kind is ExperimentKind.LQR:
            A, B = self.lqr_matrices()
            if A is None:
                violations.append(f"environment.preset LQR desconhecido ou A/B ausentes: {env.get('preset')}")
            elif A.shape[0] != A.shape[1] or B.shape[0] != A.shape[0]:
                violations.append(f"dimensões LQR incompatíveis: A {A.shape}, B {B.shape}")
            positive('noise_sigma2', ENVIRONMENT_CONFIG['lqr_noise_sigma2'])

        elif kind is ExperimentKind.LAI_WEI:
            beta0 = env.get('beta0', 1.0)
            if not isinstance(beta0, (int, float)) or not np.isfinite(beta0):
                violations.append(f"environment.beta0 deve ser real finito: {beta0}")
            positive('sigma2')

        elif kind is ExperimentKind.REPLAY:
            if not env.get('log'):
                violations.append("environment.log (caminho do log de replay) é obrigatório")
        return violations

    def _validate_policy(self, kind) -> List[str]:
        if not isinstance(self.policy, dict) or 'kind' not in self.policy:
            return ["policy.kind é obrigatório"]
        try:
            policy_kind = self.policy_kind
        except ConfigurationError:
            return [f"policy.kind desconhecido: {self.policy.get('kind')}"]
        violations = []
        if policy_kind not in ALLOWED_POLICIES[kind]:
            allowed = sorted(p.value for p in ALLOWED_POLICIES[kind])
            violations.append(f"política {policy_kind.value} não suportada em {kind.value} (aceitas: {allowed})")

        p = self.policy
        if 'c' in p and (not isinstance(p['c'], (int, float)) or p['c'] < 0):
            violations.append(f"policy.c deve ser >= 0: {p['c']}")
        if 'pi_min' in p and not (isinstance(p['pi_min'], (int, float)) and 0.0 <= p['pi_min'] < 0.5):
            violations.append(f"policy.pi_min deve estar em [0, 0.5): {p['pi_min']}")
        if 'ridge' in p and not (isinstance(p['ridge'], (int, float)) and p['ridge'] > 0):
            violations.append(f"policy.ridge deve ser positivo: {p['ridge']}")
        if 'alpha' in p and not (isinstance(p['alpha'], (int, float)) and p['alpha'] >= 0):
            violations.append(f"policy.alpha deve ser >= 0: {p['alpha']}")
        if 'tau2' in p and not (isinstance(p['tau2'], (int, float)) and p['tau2'] >= 0):
            violations.append(f"policy.tau2 deve ser >= 0: {p['tau2']}")
        if 'beta_exp' in p and not (isinstance(p['beta_exp'], (int, float)) and 0.5 <= p['beta_exp'] < 1.0):
            violations.append(f"policy.beta_exp deve estar em [1/2, 1): {p['beta_exp']}")
        if 'alpha_exp' in p and not (isinstance(p['alpha_exp'], (int, float)) and p['alpha_exp'] > 0):
            violations.append(f"policy.alpha_exp deve ser positivo: {p['alpha_exp']}")
        if 'warmup' in p and not (isinstance(p['warmup'], int) and p['warmup'] >= 0):
            violations.append(f"policy.warmup deve ser inteiro >= 0: {p['warmup']}")
        for key in ('prior_variance', 'prior_a', 'prior_b'):
            if key in p and not (isinstance(p[key], (int, float)) and p[key] > 0):
                violations.append(f"policy.{key} deve ser positivo: {p[key]}")
        return violations

    def _validate_prior(self, kind) -> List[str]:
        prior = self.prior if isinstance(self.prior, dict) else None
        if prior is None:
            return ["prior deve ser um mapeamento"]
        expected = PRIOR_KINDS.get(kind, 'gaussian')
        prior_kind = prior.get('kind', expected)
        violations = []
        if prior_kind != expected:
            violations.append(f"prior.kind deve ser {expected} para {kind.value}: {prior_kind}")
        if expected == 'gaussian':
            variance = prior.get('variance', 1.0)
            if not isinstance(variance, (int, float)) or variance <= 0:
                violations.append(f"prior.variance deve ser positivo: {variance}")
            mean = prior.get('mean', 0.0)
            if not isinstance(mean, (int, float)) or not np.isfinite(mean):
                violations.append(f"prior.mean deve ser real finito: {mean}")
        else:
            for key in ('a', 'b'):
                value = prior.get(key, 1.0)
                if not isinstance(value, (int, float)) or value <= 0:
                    violations.append(f"prior.{key} deve ser positivo: {value}")
        return violations

    def _validate_coverage(self, kind) -> List[str]:
        if self.coverage is None:
            return []
        if not isinstance(self.coverage, dict):
            return ["coverage deve ser um mapeamento"]
        violations = []
        if kind is ExperimentKind.REPLAY:
            violations.append("coverage não se aplica a replay (parâmetro verdadeiro desconhecido)")
        functional = self.coverage.get('functional', 'margin')
        level = self.coverage.get('level', 0.95)
        if functional not in ('none', 'coordinate', 'margin'):
            violations.append(f"coverage.functional desconhecido: {functional}")
        if not isinstance(level, (int, float)) or not 0.0 < level < 1.0:
            violations.append(f"coverage.level deve estar em (0, 1): {level}")
        dimension = self.dimension()
        if functional == 'margin' and dimension is not None and dimension < 2:
            violations.append("coverage.functional=margin exige p >= 2")
        if functional == 'coordinate':
            index = self.coverage.get('index')
            if not isinstance(index, int) or index < 1 or (dimension is not None and index > dimension):
                violations.append(f"coverage.index deve estar em 1..{dimension}: {index}")
        return violations

    @property
    def coverage_functional(self) -> Optional[str]:
        if not self.coverage:
            return None
        functional = self.coverage.get('functional', 'margin')
        return None if functional == 'none' else functional

    @property
    def coverage_index(self) -> Optional[int]:
        """Índice 0-based da coordenada (o arquivo usa 1-based)."""
        index = (self.coverage or {}).get('index')
        return index - 1 if isinstance(index, int) else None

    @property
    def coverage_level(self) -> float:
        return float((self.coverage or {}).get('level', 0.95))
