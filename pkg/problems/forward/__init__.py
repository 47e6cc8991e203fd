"""
Problema directo: splitting reacción-difusión con FEM adaptativo.
"""

from problems.forward.analysis import GapReport, hypocellular_gap
from problems.forward.config import SolverConfig
from problems.forward.data_models import (
    ErrorIndicators,
    InitialProfile,
    ModelParams,
    ProfileKind,
    StateField,
    StepReport,
    Trajectory,
)
from problems.forward.solver import solve_direct, transfer_state
from problems.forward.storage import dump_trajectory, load_trajectory

__all__ = [
    "ErrorIndicators",
    "GapReport",
    "InitialProfile",
    "ModelParams",
    "ProfileKind",
    "SolverConfig",
    "StateField",
    "StepReport",
    "Trajectory",
    "dump_trajectory",
    "hypocellular_gap",
    "load_trajectory",
    "solve_direct",
    "transfer_state",
]
