"""
Subpasos del problema directo: condición inicial, reacción, difusión y estimador.
"""

from problems.forward.flows.diffusion import diffusion_step, mesh_operators
from problems.forward.flows.estimator import estimate_error
from problems.forward.flows.initial import initial_condition
from problems.forward.flows.reaction import reaction_step

__all__ = [
    "diffusion_step",
    "estimate_error",
    "initial_condition",
    "mesh_operators",
    "reaction_step",
]
