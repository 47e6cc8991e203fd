"""
Marcha hacia atrás del adjunto en la malla gruesa, desde λᴺ = 0.
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from core.base_config import LinearSolverConfig
from problems.adjoint.data_models import AdjointTrajectory, ObservedSeries
from problems.adjoint.functionals import trapezoid_weights
from problems.adjoint.step import adjoint_step
from problems.forward.data_models import ModelParams, Trajectory

logger = logging.getLogger("acidfront.adjoint")


def solve_adjoint(
    trajectory: Trajectory,
    data: ObservedSeries,
    params: Optional[ModelParams] = None,
    linear: Optional[LinearSolverConfig] = None,
) -> AdjointTrajectory:
    data.check_compatible(trajectory)
    params = params or trajectory.params
    mesh = trajectory.coarse_mesh
    n_steps = trajectory.n_steps
    weights = trapezoid_weights(n_steps, trajectory.tau)

    lambdas = np.zeros((n_steps + 1, 3, mesh.n_nodes))
    for n in range(n_steps, 0, -1):
        lambdas[n - 1] = adjoint_step(
            lambdas[n],
            trajectory.states[n - 1],
            data.values[n - 1],
            params,
            trajectory.tau,
            weight=weights[n - 1],
            linear=linear,
            time_level=n - 1,
        )
    logger.debug(f"Adjunto resuelto: {n_steps} pasos, max|λ₁|={np.abs(lambdas[:, 0]).max():.3e}")
    return AdjointTrajectory(coarse_mesh=mesh, times=trajectory.times, lambdas=lambdas)
