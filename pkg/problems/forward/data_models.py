"""
Modelos de datos del problema directo.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np

from core.errors import ConfigError, DataError
from core.mesh import Mesh

FIELD_NAMES = ("u1", "u2", "u3")


@dataclass(frozen=True)
class ModelParams:
    """Los cuatro parámetros adimensionales del modelo."""

    delta1: float = 12.5
    rho2: float = 1.0
    D2: float = 4e-5
    delta3: float = 1.0

    def __post_init__(self):
        for name in ("delta1", "rho2", "D2", "delta3"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ConfigError(f"El parámetro {name} debe ser finito y >= 0 (recibido {value})")

    def with_delta1(self, delta1: float) -> "ModelParams":
        return replace(self, delta1=float(delta1))

    def as_dict(self) -> dict[str, float]:
        return {"delta1": self.delta1, "rho2": self.rho2, "D2": self.D2, "delta3": self.delta3}


class ProfileKind(Enum):
    GAUSSIAN_SEED = "gaussian-seed"
    UNIFORM = "uniform"
    FILE = "file"


_PROFILE_RE = re.compile(r"^\s*([a-z\-]+)\s*(?:\((.*)\))?\s*$")


@dataclass(frozen=True)
class InitialProfile:
    """
    Perfil inicial con nombre.

    - gaussian-seed(cx, cy, w2): u₂⁰ = exp(−|x−c|²/w²), u₁⁰ = 1 − u₂⁰, u₃⁰ = u₂⁰
    - uniform(u1, u2, u3): valores constantes
    - file(dir): directorio con u1.field, u2.field y u3.field sobre la malla gruesa
    """

    kind: ProfileKind = ProfileKind.GAUSSIAN_SEED
    center: tuple[float, float] = (0.5, 0.5)
    width2: float = 0.01
    values: tuple[float, float, float] = (1.0, 0.0, 0.0)
    path: Optional[Path] = None

    @classmethod
    def gaussian_seed(cls, center: tuple[float, float] = (0.5, 0.5), width2: float = 0.01) -> "InitialProfile":
        if not width2 > 0:
            raise ConfigError(f"La anchura w² del perfil gaussiano debe ser > 0 (recibido {width2})")
        return cls(kind=ProfileKind.GAUSSIAN_SEED, center=(float(center[0]), float(center[1])), width2=float(width2))

    @classmethod
    def uniform(cls, u1: float, u2: float, u3: float) -> "InitialProfile":
        return cls(kind=ProfileKind.UNIFORM, values=(float(u1), float(u2), float(u3)))

    @classmethod
    def from_dir(cls, path: Path) -> "InitialProfile":
        return cls(kind=ProfileKind.FILE, path=Path(path))

    @classmethod
    def parse(cls, text: str) -> "InitialProfile":
        """Lee la forma textual usada en los ficheros de configuración y en el manifest."""
        match = _PROFILE_RE.match(text)
        if not match:
            raise ConfigError(f"Perfil inicial no reconocido: '{text}'")
        name, raw_args = match.group(1), (match.group(2) or "").strip()
        try:
            kind = ProfileKind(name)
        except ValueError as e:
            raise ConfigError(f"Perfil inicial desconocido: '{name}'") from e

        if kind is ProfileKind.FILE:
            if not raw_args:
                raise ConfigError("El perfil file(...) necesita un directorio")
            return cls.from_dir(Path(raw_args))

        try:
            args = [float(a) for a in raw_args.split(",")] if raw_args else []
        except ValueError as e:
            raise ConfigError(f"Argumentos no numéricos en el perfil '{text}'") from e
        if kind is ProfileKind.GAUSSIAN_SEED:
            if not args:
                return cls.gaussian_seed()
            if len(args) != 3:
                raise ConfigError("gaussian-seed espera (cx, cy, w2)")
            return cls.gaussian_seed((args[0], args[1]), args[2])
        if len(args) != 3:
            raise ConfigError("uniform espera (u1, u2, u3)")
        return cls.uniform(*args)

    def to_text(self) -> str:
        if self.kind is ProfileKind.GAUSSIAN_SEED:
            cx, cy = self.center
            return f"gaussian-seed({cx:.17g}, {cy:.17g}, {self.width2:.17g})"
        if self.kind is ProfileKind.UNIFORM:
            return "uniform({:.17g}, {:.17g}, {:.17g})".format(*self.values)
        return f"file({self.path})"


@dataclass(frozen=True)
class StateField:
    """(u₁, u₂, u₃) nodales sobre una malla en un instante."""

    mesh: Mesh
    u1: np.ndarray
    u2: np.ndarray
    u3: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        for name in FIELD_NAMES:
            values = getattr(self, name)
            if values.shape != (self.mesh.n_nodes,):
                raise DataError(f"{name} tiene {values.size} valores y la malla {self.mesh.n_nodes} nodos")
            if not np.all(np.isfinite(values)):
                raise DataError(f"{name} contiene valores no finitos en t = {self.time}")

    @classmethod
    def from_stack(cls, mesh: Mesh, stacked: np.ndarray, time: float) -> "StateField":
        """`stacked` con forma (N, 3), columnas u₁, u₂, u₃."""
        stacked = np.asarray(stacked, dtype=float)
        return cls(mesh, stacked[:, 0].copy(), stacked[:, 1].copy(), stacked[:, 2].copy(), float(time))

    def stack(self) -> np.ndarray:
        return np.stack([self.u1, self.u2, self.u3], axis=1)

    def fields(self) -> dict[str, np.ndarray]:
        return {"u1": self.u1, "u2": self.u2, "u3": self.u3}

    def at_time(self, time: float) -> "StateField":
        return replace(self, time=float(time))


@dataclass(frozen=True)
class ErrorIndicators:
    """η(T) por triángulo, η(S) por arista (las de frontera incluidas) y η(Ω)."""

    per_element: np.ndarray
    per_edge: np.ndarray
    eta_omega: float


@dataclass(frozen=True)
class StepReport:
    """Resumen de un paso temporal aceptado."""

    t: float
    refines: int
    eta_omega: float
    nodes: int
    warning: Optional[str] = None
    reaction_seconds: float = 0.0


@dataclass
class Trajectory:
    """Solución directa registrada en la malla gruesa en t₀..t_N."""

    coarse_mesh: Mesh
    tau: float
    states: list[StateField]
    params: ModelParams
    profile: InitialProfile
    reports: list[StepReport] = field(default_factory=list)

    def __post_init__(self):
        if not self.states:
            raise DataError("Una trayectoria necesita al menos el nivel inicial")
        for n, state in enumerate(self.states):
            if state.mesh.mesh_id != self.coarse_mesh.mesh_id:
                raise DataError(f"El nivel {n} no está registrado en la malla gruesa")
            if abs(state.time - n * self.tau) > 1e-12 * max(1.0, n):
                raise DataError(f"El nivel {n} tiene t = {state.time}, se esperaba {n * self.tau}")

    @property
    def n_steps(self) -> int:
        return len(self.states) - 1

    @property
    def times(self) -> np.ndarray:
        return np.array([s.time for s in self.states])

    @property
    def T_final(self) -> float:
        return self.states[-1].time

    def series(self, name: str) -> np.ndarray:
        """Serie de un campo con forma (N+1, nodos)."""
        if name not in FIELD_NAMES:
            raise KeyError(f"Campo desconocido: {name}")
        return np.stack([getattr(s, name) for s in self.states])

    @property
    def total_refines(self) -> int:
        return sum(r.refines for r in self.reports)

    @property
    def reaction_seconds(self) -> float:
        return sum(r.reaction_seconds for r in self.reports)
