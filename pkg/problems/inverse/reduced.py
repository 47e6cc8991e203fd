"""
Funcional reducido J̃(δ₁) = J(u(δ₁)) con caché de trayectorias directas.
"""

from __future__ import annotations

import logging
from collections import OrderedDict
from typing import Optional

from core.base_config import LinearSolverConfig
from core.errors import EvaluationError, NumericalError
from core.workers import WorkerPool
from problems.adjoint import objective, reduced_gradient, solve_adjoint
from problems.forward.data_models import Trajectory
from problems.forward.solver import solve_direct
from problems.inverse.data_models import EstimationProblem

logger = logging.getLogger("acidfront.inverse")

CACHE_SIZE = 4


class ReducedObjective:
    """
    J̃ se evalúa solo con el problema directo; J̃′ añade un adjunto sobre la misma
    trayectoria. `forward_solves` cuenta las resoluciones directas realizadas.
    """

    def __init__(
        self,
        problem: EstimationProblem,
        pool: Optional[WorkerPool] = None,
        linear: Optional[LinearSolverConfig] = None,
    ):
        self.problem = problem
        self.pool = pool
        self.linear = linear
        self.forward_solves = 0
        self.adjoint_solves = 0
        self._trajectories: OrderedDict[float, Trajectory] = OrderedDict()

    def trajectory(self, delta1: float) -> Trajectory:
        delta1 = float(delta1)
        if delta1 in self._trajectories:
            self._trajectories.move_to_end(delta1)
            return self._trajectories[delta1]
        params = self.problem.fixed_params.with_delta1(delta1)
        try:
            trajectory = solve_direct(params, self.problem.config, self.problem.profile, self.pool)
        except NumericalError as e:
            raise EvaluationError(delta1, e) from e
        self.forward_solves += 1
        self._trajectories[delta1] = trajectory
        while len(self._trajectories) > CACHE_SIZE:
            self._trajectories.popitem(last=False)
        return trajectory

    def value(self, delta1: float) -> float:
        return objective(self.trajectory(delta1), self.problem.data)

    def gradient(self, delta1: float) -> float:
        trajectory = self.trajectory(delta1)
        try:
            adjoint = solve_adjoint(trajectory, self.problem.data, trajectory.params, self.linear)
        except NumericalError as e:
            raise EvaluationError(float(delta1), e) from e
        self.adjoint_solves += 1
        return reduced_gradient(trajectory, adjoint)

    def value_and_gradient(self, delta1: float) -> tuple[float, float]:
        return self.value(delta1), self.gradient(delta1)
