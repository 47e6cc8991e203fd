"""
Configuración numérica del problema directo.

Valores por defecto: τ = 0.1, T = 10, malla gruesa 16×16 (512 triángulos),
ε_TOL = 1e-5, θ = 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from core.errors import ConfigError


@dataclass(frozen=True)
class SolverConfig:
    tau: float = 0.1
    T_final: float = 10.0
    eps_tol: float = 1e-5
    theta: float = 0.5

    # RK45 (Dormand-Prince) por nodo
    reaction_abs_tol: float = 1e-8
    reaction_rel_tol: float = 1e-6

    max_refines_per_step: int = 10
    # Presupuesto de nodos de la malla de trabajo adaptativa
    max_nodes: int = 20000

    cg_tol: float = 1e-10
    coarse_n: int = 16

    @classmethod
    def full(cls) -> "SolverConfig":
        return cls()

    @classmethod
    def desk(cls) -> "SolverConfig":
        """
        Escala de escritorio: malla 8×8 fija, T = 2 y tolerancias estrictas para que
        J̃(δ₁) sea suave y las diferencias finitas tengan sentido.
        """
        return cls(
            T_final=2.0,
            coarse_n=8,
            max_refines_per_step=0,
            cg_tol=1e-12,
            reaction_abs_tol=1e-12,
            reaction_rel_tol=1e-10,
        )

    def with_changes(self, **changes) -> "SolverConfig":
        return replace(self, **changes).validate()

    @property
    def n_steps(self) -> int:
        return int(round(self.T_final / self.tau))

    def validate(self) -> "SolverConfig":
        if not self.tau > 0:
            raise ConfigError(f"tau debe ser > 0 (recibido {self.tau})")
        if not self.T_final > 0:
            raise ConfigError(f"T_final debe ser > 0 (recibido {self.T_final})")
        steps = self.T_final / self.tau
        if round(steps) < 1 or not math.isclose(steps, round(steps), rel_tol=0.0, abs_tol=1e-9):
            raise ConfigError(f"T_final = {self.T_final} no es múltiplo entero de tau = {self.tau}")
        if not 0.0 <= self.theta <= 1.0:
            raise ConfigError(f"theta debe estar en [0, 1] (recibido {self.theta})")
        for name in ("eps_tol", "reaction_abs_tol", "reaction_rel_tol", "cg_tol"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} debe ser > 0 (recibido {getattr(self, name)})")
        if self.max_refines_per_step < 0:
            raise ConfigError("max_refines_per_step no puede ser negativo")
        if self.coarse_n < 1:
            raise ConfigError(f"coarse_n debe ser >= 1 (recibido {self.coarse_n})")
        if self.max_nodes < (self.coarse_n + 1) ** 2:
            raise ConfigError("max_nodes es menor que el número de nodos de la malla gruesa")
        return self
