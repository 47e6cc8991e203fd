"""
Experimentos con datos sintéticos: recuperación de δ₁ con y sin ruido, barrido de J̃
y comprobación del gradiente adjunto frente a diferencias finitas.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd

from core.errors import NumericalError
from core.workers import WorkerPool
from problems.adjoint.data_models import ObservedSeries
from problems.forward.config import SolverConfig
from problems.forward.data_models import InitialProfile, ModelParams
from problems.forward.solver import solve_direct
from problems.inverse.data_models import (
    DEFAULT_BOUNDS,
    MAX_EVALUATIONS,
    EstimationProblem,
    EstimationResult,
    RecoverySummary,
)
from problems.inverse.minimizer import minimize
from problems.inverse.noise import add_noise, draw_starts, spawn_seeds
from problems.inverse.reduced import ReducedObjective

logger = logging.getLogger("acidfront.inverse")

RANDOM_START = "random"


def synthetic_data(
    true_delta1: float,
    params: ModelParams,
    config: SolverConfig,
    profile: Optional[InitialProfile] = None,
    pool: Optional[WorkerPool] = None,
) -> ObservedSeries:
    trajectory = solve_direct(params.with_delta1(true_delta1), config, profile, pool)
    return ObservedSeries.from_trajectory(trajectory)


@dataclass(frozen=True)
class RecoveryJob:
    """Una ejecución independiente; se envía tal cual a un proceso del pool."""

    index: int
    clean: ObservedSeries
    sigma: float
    seed: np.random.SeedSequence
    delta1_init: float
    params: ModelParams
    config: SolverConfig
    profile: InitialProfile
    bounds: tuple[float, float]
    max_evaluations: int
    gtol_floor: float = 1.0


def run_recovery(job: RecoveryJob) -> EstimationResult:
    data = add_noise(job.clean, job.sigma, job.seed)
    problem = EstimationProblem(
        data=data,
        fixed_params=job.params,
        config=job.config,
        delta1_init=job.delta1_init,
        bounds=job.bounds,
        profile=job.profile,
        max_evaluations=job.max_evaluations,
        gtol_floor=job.gtol_floor,
    )
    return minimize(problem)


def summarize(true_delta1: float, sigma: float, n_runs: int, estimates: Sequence[float], failures: int) -> RecoverySummary:
    values = np.asarray(estimates, dtype=float)
    if values.size == 0:
        return RecoverySummary(true_delta1, sigma, n_runs, np.nan, np.nan, np.nan, failures, [])
    mean = float(values.mean())
    std = float(values.std(ddof=1)) if values.size > 1 else 0.0
    scale = abs(true_delta1) if true_delta1 != 0 else 1.0
    return RecoverySummary(
        true_delta1=true_delta1,
        sigma=sigma,
        n_runs=n_runs,
        mean=mean,
        std=std,
        rel_error=abs(mean - true_delta1) / scale,
        failures=failures,
        estimates=values.tolist(),
    )


def recovery_experiment(
    true_delta1: float,
    sigma: float,
    n_runs: int,
    seed: int,
    config: SolverConfig,
    params: Optional[ModelParams] = None,
    profile: Optional[InitialProfile] = None,
    start: Union[str, float] = RANDOM_START,
    bounds: tuple[float, float] = DEFAULT_BOUNDS,
    max_evaluations: int = MAX_EVALUATIONS,
    gtol_floor: float = 1.0,
    pool: Optional[WorkerPool] = None,
) -> RecoverySummary:
    """
    Genera datos en `true_delta1`, los perturba en cada ejecución con una semilla
    derivada de `seed` y minimiza. `start` es "random" (uniforme en U_ad) o un δ₁⁰ fijo.
    Las ejecuciones que fallan se excluyen y se cuentan.
    """
    if n_runs < 1:
        raise ValueError(f"n_runs debe ser >= 1 (recibido {n_runs})")
    params = params or ModelParams()
    profile = profile or InitialProfile.gaussian_seed()

    logger.info("\n" + "=" * 80)
    logger.info(f"RECUPERACIÓN: δ̂₁={true_delta1:.6g} σ={sigma:.6g} ejecuciones={n_runs}")
    logger.info("=" * 80)

    clean = synthetic_data(true_delta1, params, config, profile, pool)
    noise_seeds = spawn_seeds(seed, n_runs + 1)
    if start == RANDOM_START:
        starts = draw_starts(bounds, n_runs, noise_seeds[-1])
    else:
        starts = np.full(n_runs, float(start))

    jobs = [
        RecoveryJob(
            k, clean, sigma, noise_seeds[k], float(starts[k]), params, config, profile, bounds, max_evaluations, gtol_floor
        )
        for k in range(n_runs)
    ]
    futures = pool.map(run_recovery, jobs) if pool else WorkerPool(1).map(run_recovery, jobs)

    estimates: list[float] = []
    failures = 0
    for job, future in zip(jobs, futures):
        try:
            result = future.result()
        except NumericalError as e:
            failures += 1
            logger.error(f"Ejecución {job.index} (δ₁⁰={job.delta1_init:.6g}) fallida: {e}")
            continue
        estimates.append(result.delta1_star)
        logger.info(f"Ejecución {job.index}: δ₁⁰={job.delta1_init:.6g} -> δ₁*={result.delta1_star:.10g}")

    summary = summarize(true_delta1, sigma, n_runs, estimates, failures)
    logger.info(f"δ̄₁={summary.mean:.6g} S={summary.std:.6g} e={summary.rel_error:.6g} fallos={failures}")
    return summary


def objective_sweep(
    data: ObservedSeries,
    params: ModelParams,
    config: SolverConfig,
    grid: Sequence[float],
    profile: Optional[InitialProfile] = None,
    pool: Optional[WorkerPool] = None,
) -> pd.DataFrame:
    """J̃(δ₁) sobre una rejilla de valores de δ₁."""
    problem = EstimationProblem(
        data=data,
        fixed_params=params,
        config=config,
        delta1_init=float(grid[0]) if len(grid) else 0.0,
        bounds=(0.0, max([*grid, 1.0])),
        profile=profile or InitialProfile.gaussian_seed(),
    )
    reduced = ReducedObjective(problem, pool)
    rows = [{"delta1": float(d), "objective": reduced.value(d)} for d in grid]
    return pd.DataFrame(rows, columns=["delta1", "objective"])


@dataclass(frozen=True)
class GradientCheck:
    delta1: float
    h: float
    adjoint: float
    finite_difference: float

    @property
    def abs_error(self) -> float:
        return abs(self.adjoint - self.finite_difference)

    @property
    def rel_error(self) -> float:
        scale = abs(self.finite_difference)
        return self.abs_error / scale if scale > 0 else self.abs_error


def gradient_check(
    problem: EstimationProblem,
    delta1: float,
    h: float = 1e-3,
    pool: Optional[WorkerPool] = None,
) -> GradientCheck:
    """Gradiente adjunto frente a la diferencia central del J̃ discreto."""
    reduced = ReducedObjective(problem, pool)
    adjoint = reduced.gradient(delta1)
    fd = (reduced.value(delta1 + h) - reduced.value(delta1 - h)) / (2.0 * h)
    check = GradientCheck(delta1=delta1, h=h, adjoint=adjoint, finite_difference=fd)
    logger.info(f"δ₁={delta1:.6g}: adjunto={adjoint:.10e} DF={fd:.10e} error relativo={check.rel_error:.3e}")
    return check
