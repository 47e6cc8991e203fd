"""
Comando `estimate`: minimiza J̃(δ₁) contra los datos û₃ de `--data`.
"""

from __future__ import annotations

from pathlib import Path

import pandas as pd

from commands.run_config import RunConfig
from core.base_runner import BaseRunner
from core.errors import ConfigError
from core.mesh import make_uniform_mesh
from core.reporting import ReportRenderer
from problems.adjoint import ObservedSeries
from problems.forward.storage import CSV_FLOAT_FORMAT
from problems.inverse import EstimationProblem, EstimationResult, minimize

RESULT_FILE = "result.csv"
HISTORY_FILE = "history.csv"
REPORT_FILE = "report.md"


def load_observed(cfg: RunConfig) -> ObservedSeries:
    """Lee û₃ y comprueba que vive en la malla gruesa y la rejilla temporal configuradas."""
    if cfg.data is None:
        raise ConfigError("Falta el directorio de datos (--data o clave 'data')")
    data = ObservedSeries.load(cfg.data)
    solver = cfg.solver_config()
    data.check_grid(make_uniform_mesh(solver.coarse_n), solver.n_steps + 1, solver.tau)
    return data


def result_frames(result: EstimationResult) -> tuple[pd.DataFrame, pd.DataFrame]:
    summary = pd.DataFrame(
        [
            {
                "delta1_star": result.delta1_star,
                "objective": result.objective_value,
                "gradient": result.gradient_value,
                "iterations": result.iterations,
                "evaluations": result.evaluations,
                "stop_reason": result.stop_reason,
            }
        ]
    )
    history = pd.DataFrame(
        [
            {"iteration": k, "delta1": r.delta1, "objective": r.objective, "gradient": r.gradient}
            for k, r in enumerate(result.history)
        ]
    )
    return summary, history


class EstimateRunner(BaseRunner):
    command = "estimate"

    def __init__(self, config: RunConfig):
        super().__init__(config)
        self.config: RunConfig = config

    def run(self) -> Path:
        cfg = self.config
        data = load_observed(cfg)

        self.banner(f"ESTIMACIÓN DE δ₁ EN U_ad = [{cfg.bounds_lo:.6g}, {cfg.bounds_hi:.6g}]")
        problem = EstimationProblem(
            data=data,
            fixed_params=cfg.model_params(),
            config=cfg.solver_config(),
            delta1_init=cfg.delta1_init,
            bounds=cfg.bounds,
            profile=cfg.initial_profile(),
            max_evaluations=cfg.max_evaluations,
            gtol_floor=cfg.gtol_floor,
        )
        result = minimize(problem, self.pool)

        for k, record in enumerate(result.history):
            self.logger.info(f"  {k:3d}  δ₁={record.delta1:.10g}  J̃={record.objective:.6e}  J̃′={record.gradient:.6e}")
        self.logger.info(
            f"δ₁* = {result.delta1_star:.10g} | J̃ = {result.objective_value:.6e} | J̃′ = {result.gradient_value:.6e}"
        )

        run_dir = self.run_dir
        summary, history = result_frames(result)
        summary.to_csv(run_dir / RESULT_FILE, index=False, float_format=CSV_FLOAT_FORMAT)
        history.to_csv(run_dir / HISTORY_FILE, index=False, float_format=CSV_FLOAT_FORMAT)
        ReportRenderer().render(
            "estimate_report.md.j2",
            run_dir / REPORT_FILE,
            data_dir=str(cfg.data),
            bounds=cfg.bounds,
            delta1_init=cfg.delta1_init,
            result=result,
        )
        return run_dir
