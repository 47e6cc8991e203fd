"""
Problema adjunto y gradiente reducido.
"""

from problems.adjoint.data_models import AdjointTrajectory, ObservedSeries
from problems.adjoint.functionals import objective, reduced_gradient, trapezoid_weights
from problems.adjoint.solver import solve_adjoint
from problems.adjoint.step import adjoint_operator, adjoint_step, assemble_adjoint_system

__all__ = [
    "AdjointTrajectory",
    "ObservedSeries",
    "adjoint_operator",
    "adjoint_step",
    "assemble_adjoint_system",
    "objective",
    "reduced_gradient",
    "solve_adjoint",
    "trapezoid_weights",
]
