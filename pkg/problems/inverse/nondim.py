"""
Adimensionalización: δ₁ = d₁r₃K₂/(d₃r₁), ρ₂ = r₂/r₁, D₂ = D_N₂/D_N₃, δ₃ = d₃/r₁.
"""

from __future__ import annotations

from core.errors import ConfigError
from problems.forward.data_models import ModelParams


def nondimensionalize(
    d1: float,
    r1: float,
    r2: float,
    r3: float,
    d3: float,
    K2: float,
    DN2: float,
    DN3: float,
) -> ModelParams:
    for name, value in (("r1", r1), ("d3", d3), ("DN3", DN3)):
        if value == 0:
            raise ConfigError(f"{name} no puede ser cero")
        if value < 0:
            raise ConfigError(f"{name} debe ser positivo (recibido {value})")
    return ModelParams(
        delta1=d1 * r3 * K2 / (d3 * r1),
        rho2=r2 / r1,
        D2=DN2 / DN3,
        delta3=d3 / r1,
    )
