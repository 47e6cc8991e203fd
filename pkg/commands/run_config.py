"""
Configuración de ejecución de la CLI.

Formato: texto plano `clave = valor`, una por línea, comentarios con `#` y listas
separadas por comas. La tabla de claves está en docs/CONFIG.md.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

from core.base_config import BaseConfig
from core.errors import ConfigError
from problems.forward.config import SolverConfig
from problems.forward.data_models import InitialProfile, ModelParams

RANDOM_START = "random"


def _float(raw: str) -> float:
    return float(raw)


def _int(raw: str) -> int:
    value = float(raw)
    if value != int(value):
        raise ValueError(f"'{raw}' no es entero")
    return int(value)


def _optional_int(raw: str) -> Optional[int]:
    return None if raw == "" else _int(raw)


def _optional_path(raw: str) -> Optional[Path]:
    return None if raw == "" else Path(raw)


def _float_list(raw: str) -> list[float]:
    return [float(v) for v in raw.split(",") if v.strip()]


def _int_list(raw: str) -> list[int]:
    return [_int(v.strip()) for v in raw.split(",") if v.strip()]


def _start(raw: str) -> str:
    if raw != RANDOM_START:
        float(raw)
    return raw


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    if isinstance(value, list):
        return ", ".join(_fmt(v) for v in value)
    return str(value)


@dataclass
class RunConfig(BaseConfig):
    # Problema directo
    tau: float = 0.1
    T_final: float = 10.0
    eps_tol: float = 1e-5
    theta: float = 0.5
    reaction_abs_tol: float = 1e-8
    reaction_rel_tol: float = 1e-6
    max_refines_per_step: int = 10
    max_nodes: int = 20000
    cg_tol: float = 1e-10
    coarse_n: int = 16

    # Modelo
    delta1: float = 12.5
    rho2: float = 1.0
    D2: float = 4e-5
    delta3: float = 1.0
    initial: str = "gaussian-seed(0.5, 0.5, 0.01)"

    # Estimación
    data: Optional[Path] = None
    bounds_lo: float = 0.0
    bounds_hi: float = 20.0
    delta1_init: float = 8.0
    max_evaluations: int = 100
    gtol_floor: float = 1.0

    # Experimentos
    true_delta1: list[float] = field(default_factory=lambda: [12.5])
    sigmas: list[float] = field(default_factory=lambda: [0.0])
    n_runs: int = 10
    start: str = RANDOM_START

    # simulate: repetir la resolución con estos números de workers y medir tiempos
    timing_workers: list[int] = field(default_factory=list)

    # sweep / gradcheck
    sweep_lo: float = 0.0
    sweep_hi: float = 20.0
    sweep_points: int = 41
    gradcheck_points: list[float] = field(default_factory=lambda: [2.0, 8.0, 14.0])
    fd_step: float = 1e-3

    # ------------------------------------------------------------------
    # Conversión desde/hacia texto
    # ------------------------------------------------------------------

    @classmethod
    def key_parsers(cls) -> dict[str, Callable[[str], Any]]:
        return {
            "dir_output": Path,
            "dir_logs": Path,
            "workers": _optional_int,
            "seed": _int,
            "log_level": str.upper,
            "tau": _float,
            "T_final": _float,
            "eps_tol": _float,
            "theta": _float,
            "reaction_abs_tol": _float,
            "reaction_rel_tol": _float,
            "max_refines_per_step": _int,
            "max_nodes": _int,
            "cg_tol": _float,
            "coarse_n": _int,
            "delta1": _float,
            "rho2": _float,
            "D2": _float,
            "delta3": _float,
            "initial": str,
            "data": _optional_path,
            "bounds_lo": _float,
            "bounds_hi": _float,
            "delta1_init": _float,
            "max_evaluations": _int,
            "gtol_floor": _float,
            "true_delta1": _float_list,
            "sigmas": _float_list,
            "n_runs": _int,
            "start": _start,
            "timing_workers": _int_list,
            "sweep_lo": _float,
            "sweep_hi": _float,
            "sweep_points": _int,
            "gradcheck_points": _float_list,
            "fd_step": _float,
        }

    @classmethod
    def parse_text(cls, text: str, source: str = "<texto>") -> "RunConfig":
        parsers = cls.key_parsers()
        values: dict[str, Any] = {}
        for lineno, raw_line in enumerate(text.splitlines(), start=1):
            line = raw_line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{source}:{lineno}: se esperaba 'clave = valor'")
            key, raw = (part.strip() for part in line.split("=", 1))
            if key not in parsers:
                raise ConfigError(f"{source}:{lineno}: clave desconocida '{key}'")
            if key in values:
                raise ConfigError(f"{source}:{lineno}: clave repetida '{key}'")
            try:
                values[key] = parsers[key](raw)
            except (ValueError, TypeError) as e:
                raise ConfigError(f"{source}:{lineno}: valor inválido para '{key}': '{raw}'") from e
        return cls(**values).validate()

    @classmethod
    def from_file(cls, path: Path) -> "RunConfig":
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"No existe el fichero de configuración: {path}")
        return cls.parse_text(path.read_text(encoding="utf-8"), source=str(path))

    def to_text(self) -> str:
        return "".join(f"{key} = {_fmt(getattr(self, key))}\n" for key in self.key_parsers())

    def with_overrides(self, **overrides: Any) -> "RunConfig":
        """Aplica los flags de la CLI que no sean None."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        return dataclasses.replace(self, **changes).validate() if changes else self

    # ------------------------------------------------------------------
    # Vistas tipadas
    # ------------------------------------------------------------------

    @property
    def bounds(self) -> tuple[float, float]:
        return (self.bounds_lo, self.bounds_hi)

    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            tau=self.tau,
            T_final=self.T_final,
            eps_tol=self.eps_tol,
            theta=self.theta,
            reaction_abs_tol=self.reaction_abs_tol,
            reaction_rel_tol=self.reaction_rel_tol,
            max_refines_per_step=self.max_refines_per_step,
            max_nodes=self.max_nodes,
            cg_tol=self.cg_tol,
            coarse_n=self.coarse_n,
        )

    def model_params(self) -> ModelParams:
        return ModelParams(delta1=self.delta1, rho2=self.rho2, D2=self.D2, delta3=self.delta3)

    def initial_profile(self) -> InitialProfile:
        return InitialProfile.parse(self.initial)

    def start_value(self) -> str | float:
        return self.start if self.start == RANDOM_START else float(self.start)

    def validate(self) -> "RunConfig":
        self.solver_config().validate()
        self.model_params()
        self.initial_profile()
        lo, hi = self.bounds
        if not 0.0 <= lo < hi:
            raise ConfigError(f"U_ad inválido: [{lo}, {hi}]")
        if not lo <= self.delta1_init <= hi:
            raise ConfigError(f"delta1_init = {self.delta1_init} fuera de U_ad = [{lo}, {hi}]")
        if self.start != RANDOM_START and not lo <= float(self.start) <= hi:
            raise ConfigError(f"start = {self.start} fuera de U_ad = [{lo}, {hi}]")
        if any(s < 0 for s in self.sigmas):
            raise ConfigError("Todos los σ deben ser >= 0")
        if self.n_runs < 1:
            raise ConfigError("n_runs debe ser >= 1")
        if self.max_evaluations < 1:
            raise ConfigError("max_evaluations debe ser >= 1")
        if self.workers is not None and self.workers < 1:
            raise ConfigError("workers debe ser >= 1")
        if any(w < 1 for w in self.timing_workers):
            raise ConfigError("timing_workers solo admite valores >= 1")
        if self.sweep_points < 1 or self.sweep_lo > self.sweep_hi:
            raise ConfigError("Rejilla de barrido inválida")
        if not self.fd_step > 0:
            raise ConfigError("fd_step debe ser > 0")
        if self.log_level not in ("DEBUG", "INFO", "WARNING", "ERROR"):
            raise ConfigError(f"log_level desconocido: {self.log_level}")
        return self
