"""
Funcional de desajuste J y gradiente reducido J̃′(δ₁), ambos con trapecios en el
tiempo y matriz de masa en el espacio.
"""

from __future__ import annotations

import numpy as np

from core.errors import GridMismatchError
from problems.adjoint.data_models import AdjointTrajectory, ObservedSeries
from problems.forward.data_models import Trajectory
from problems.forward.flows.diffusion import mesh_operators


def trapezoid_weights(n_steps: int, tau: float) -> np.ndarray:
    """w₀ = w_N = τ/2 y τ en el resto; con un solo nivel el peso es 0."""
    weights = np.full(n_steps + 1, float(tau))
    weights[0] = weights[-1] = 0.5 * tau
    if n_steps == 0:
        weights[0] = 0.0
    return weights


def objective(trajectory: Trajectory, data: ObservedSeries) -> float:
    """J = ½ Σₙ wₙ eₙᵀ M eₙ con e = u₃ − û₃."""
    data.check_compatible(trajectory)
    M, _ = mesh_operators(trajectory.coarse_mesh)
    weights = trapezoid_weights(trajectory.n_steps, trajectory.tau)
    errors = trajectory.series("u3") - data.values
    per_level = np.einsum("ni,ni->n", errors, (M @ errors.T).T)
    return 0.5 * float(weights @ per_level)


def reduced_gradient(trajectory: Trajectory, adjoint: AdjointTrajectory) -> float:
    """J̃′(δ₁) = Σₙ wₙ (u₁∘u₃)ᵀ M λ₁ⁿ."""
    if adjoint.lambdas.shape[0] != len(trajectory.states) or adjoint.coarse_mesh.mesh_id != trajectory.coarse_mesh.mesh_id:
        raise GridMismatchError("El adjunto no comparte malla o rejilla temporal con la trayectoria")
    M, _ = mesh_operators(trajectory.coarse_mesh)
    weights = trapezoid_weights(trajectory.n_steps, trajectory.tau)
    products = trajectory.series("u1") * trajectory.series("u3")
    per_level = np.einsum("ni,ni->n", products, (M @ adjoint.lambda1.T).T)
    return float(weights @ per_level)
