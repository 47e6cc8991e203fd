"""
Registro simple de subcomandos.
"""

from __future__ import annotations

import importlib
from dataclasses import dataclass
from typing import Type

from core.base_runner import BaseRunner


@dataclass(frozen=True)
class CommandDefinition:
    name: str
    runner_path: str  # "module:ClassName"
    help: str


COMMANDS: dict[str, CommandDefinition] = {
    "simulate": CommandDefinition(
        name="simulate",
        runner_path="commands.simulate:SimulateRunner",
        help="Resuelve el problema directo y vuelca la trayectoria.",
    ),
    "estimate": CommandDefinition(
        name="estimate",
        runner_path="commands.estimate:EstimateRunner",
        help="Estima δ₁ a partir de datos û₃ (--data).",
    ),
    "experiment": CommandDefinition(
        name="experiment",
        runner_path="commands.experiment:ExperimentRunner",
        help="Tabla de recuperación por (δ̂₁, σ) con datos sintéticos.",
    ),
    "sweep": CommandDefinition(
        name="sweep",
        runner_path="commands.sweep:SweepRunner",
        help="Perfil J̃(δ₁) sobre una rejilla.",
    ),
    "gradcheck": CommandDefinition(
        name="gradcheck",
        runner_path="commands.gradcheck:GradcheckRunner",
        help="Gradiente adjunto frente a diferencias finitas.",
    ),
}


def list_commands() -> list[str]:
    return sorted(COMMANDS.keys())


def get_command(name: str) -> Type[BaseRunner]:
    if name not in COMMANDS:
        raise KeyError(f"Comando desconocido: {name}. Disponibles: {', '.join(list_commands())}")

    module_path, class_name = COMMANDS[name].runner_path.split(":", 1)
    module = importlib.import_module(module_path)
    return getattr(module, class_name)
