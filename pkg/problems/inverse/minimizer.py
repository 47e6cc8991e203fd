"""
Minimizador escalar con cotas: Newton proyectado con curvatura secante y
backtracking de Armijo sobre J̃.
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from core.workers import WorkerPool
from problems.inverse.data_models import EstimationProblem, EstimationResult, IterationRecord
from problems.inverse.reduced import ReducedObjective

logger = logging.getLogger("acidfront.inverse")

ARMIJO_C1 = 1e-4
BACKTRACK = 0.5
MIN_STEP = 1e-10
GTOL_FACTOR = 1e-8
# El primer paso recorre esta fracción de U_ad
FIRST_STEP_FRACTION = 0.1


def projected_gradient(x: float, g: float, lo: float, hi: float) -> float:
    if (x <= lo and g > 0.0) or (x >= hi and g < 0.0):
        return 0.0
    return g


def minimize(
    problem: EstimationProblem,
    pool: Optional[WorkerPool] = None,
    reduced: Optional[ReducedObjective] = None,
) -> EstimationResult:
    f = reduced or ReducedObjective(problem, pool)
    lo, hi = problem.bounds
    cap = problem.max_evaluations

    x = float(np.clip(problem.delta1_init, lo, hi))
    J, g = f.value_and_gradient(x)
    history = [IterationRecord(x, J, g)]
    gtol = GTOL_FACTOR * max(problem.gtol_floor, abs(g))
    curvature = abs(g) / (FIRST_STEP_FRACTION * (hi - lo)) if g != 0.0 else 1.0
    iterations = 0
    logger.info(f"Minimización desde δ₁⁰={x:.6g}: J̃={J:.6e} J̃′={g:.6e} (gtol={gtol:.1e})")

    while True:
        if abs(projected_gradient(x, g, lo, hi)) <= gtol:
            reason = "gradiente proyectado bajo tolerancia"
            break
        if f.forward_solves >= cap:
            reason = f"límite de {cap} evaluaciones"
            break

        step = float(np.clip(x - g / curvature, lo, hi)) - x
        if abs(step) < MIN_STEP:
            reason = "paso por debajo de 1e-10"
            break

        accepted = False
        while f.forward_solves < cap:
            trial = x + step
            J_trial = f.value(trial)
            if J_trial <= J + ARMIJO_C1 * g * step:
                accepted = True
                break
            step *= BACKTRACK
            if abs(step) < MIN_STEP:
                break
        if not accepted:
            reason = "búsqueda lineal sin descenso suficiente" if f.forward_solves < cap else f"límite de {cap} evaluaciones"
            break

        g_trial = f.gradient(trial)
        s, y = trial - x, g_trial - g
        if s * y > 0.0:
            curvature = y / s
        x, J, g = trial, J_trial, g_trial
        iterations += 1
        history.append(IterationRecord(x, J, g))
        logger.debug(f"Iteración {iterations}: δ₁={x:.10g} J̃={J:.6e} J̃′={g:.6e}")

    logger.info(
        f"δ₁*={x:.10g} J̃={J:.6e} J̃′={g:.6e} | {iterations} iteraciones, "
        f"{f.forward_solves} evaluaciones directas ({reason})"
    )
    return EstimationResult(
        delta1_star=x,
        objective_value=J,
        gradient_value=g,
        iterations=iterations,
        evaluations=f.forward_solves,
        history=history,
        stop_reason=reason,
    )
