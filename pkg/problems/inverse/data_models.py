"""
Modelos de datos del problema inverso.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from core.errors import ConfigError
from problems.adjoint.data_models import ObservedSeries
from problems.forward.config import SolverConfig
from problems.forward.data_models import InitialProfile, ModelParams

# U_ad del protocolo experimental
DEFAULT_BOUNDS = (0.0, 20.0)
MAX_EVALUATIONS = 100


@dataclass(frozen=True)
class EstimationProblem:
    data: ObservedSeries
    fixed_params: ModelParams
    config: SolverConfig
    delta1_init: float
    bounds: tuple[float, float] = DEFAULT_BOUNDS
    profile: InitialProfile = field(default_factory=InitialProfile.gaussian_seed)
    max_evaluations: int = MAX_EVALUATIONS
    # gtol = 1e-8·max(gtol_floor, |J̃′(δ₁⁰)|)
    gtol_floor: float = 1.0

    def __post_init__(self):
        lo, hi = self.bounds
        if not (0.0 <= lo < hi):
            raise ConfigError(f"Intervalo admisible inválido: [{lo}, {hi}]")
        if not lo <= self.delta1_init <= hi:
            raise ConfigError(f"δ₁⁰ = {self.delta1_init} fuera de U_ad = [{lo}, {hi}]")
        if self.max_evaluations < 1:
            raise ConfigError("max_evaluations debe ser >= 1")
        if self.gtol_floor < 0:
            raise ConfigError("gtol_floor no puede ser negativo")


@dataclass(frozen=True)
class IterationRecord:
    delta1: float
    objective: float
    gradient: float


@dataclass
class EstimationResult:
    delta1_star: float
    objective_value: float
    gradient_value: float
    iterations: int
    evaluations: int
    history: list[IterationRecord]
    stop_reason: str = ""


@dataclass
class RecoverySummary:
    """Fila de tabla: media δ̄₁, desviación típica S y error relativo."""

    true_delta1: float
    sigma: float
    n_runs: int
    mean: float
    std: float
    rel_error: float
    failures: int
    estimates: list[float] = field(default_factory=list)
    error: Optional[str] = None

    def as_row(self) -> dict[str, float]:
        return {
            "true_delta1": self.true_delta1,
            "sigma": self.sigma,
            "n_runs": self.n_runs,
            "mean": self.mean,
            "std": self.std,
            "rel_error": self.rel_error,
            "failures": self.failures,
        }
