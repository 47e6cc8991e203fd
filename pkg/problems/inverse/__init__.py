"""
Problema inverso: estimación de δ₁ por minimización del funcional reducido.
"""

from problems.inverse.data_models import (
    DEFAULT_BOUNDS,
    EstimationProblem,
    EstimationResult,
    IterationRecord,
    RecoverySummary,
)
from problems.inverse.experiment import (
    GradientCheck,
    gradient_check,
    objective_sweep,
    recovery_experiment,
    synthetic_data,
)
from problems.inverse.minimizer import minimize
from problems.inverse.noise import add_noise, derive_seed, draw_starts, make_rng, spawn_seeds
from problems.inverse.nondim import nondimensionalize
from problems.inverse.reduced import ReducedObjective

__all__ = [
    "DEFAULT_BOUNDS",
    "EstimationProblem",
    "EstimationResult",
    "GradientCheck",
    "IterationRecord",
    "RecoverySummary",
    "ReducedObjective",
    "add_noise",
    "derive_seed",
    "draw_starts",
    "gradient_check",
    "make_rng",
    "minimize",
    "nondimensionalize",
    "objective_sweep",
    "recovery_experiment",
    "spawn_seeds",
    "synthetic_data",
]
