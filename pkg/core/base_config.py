"""
Configuración base reutilizable para cualquier comando.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional
import os

from core.errors import ConfigError

WORKERS_ENV = "ACIDFRONT_WORKERS"


@dataclass
class LinearSolverConfig:
    """Límites de los métodos de Krylov."""

    cg_maxiter_factor: int = 10
    adjoint_rtol: float = 1e-12
    adjoint_restart: int = 200


@dataclass
class BaseConfig:
    """
    Configuración común.

    Cada comando extiende esta clase con sus parámetros numéricos y de experimento.
    """

    dir_output: Path = Path("runs")
    dir_logs: Path = Path("logs")

    # None => ACIDFRONT_WORKERS o número de núcleos
    workers: Optional[int] = None
    seed: int = 0
    log_level: str = "INFO"

    linear: LinearSolverConfig = field(default_factory=LinearSolverConfig)

    def ensure_directories(self) -> None:
        self.dir_output.mkdir(parents=True, exist_ok=True)
        self.dir_logs.mkdir(parents=True, exist_ok=True)

    def resolve_workers(self) -> int:
        """Precedencia: flag/config explícito > variable de entorno > núcleos disponibles."""
        if self.workers is not None:
            value = self.workers
        else:
            raw = (os.getenv(WORKERS_ENV) or "").strip()
            if raw:
                try:
                    value = int(raw)
                except ValueError as e:
                    raise ConfigError(f"{WORKERS_ENV} debe ser un entero, no '{raw}'") from e
            else:
                value = os.cpu_count() or 1
        if value < 1:
            raise ConfigError(f"El número de workers debe ser >= 1 (recibido {value})")
        return value
