"""
Comando `experiment`: tabla de recuperación de δ₁ por celda (δ̂₁, σ).
"""

from __future__ import annotations

import traceback
from pathlib import Path

import numpy as np
import pandas as pd

from commands.run_config import RunConfig
from core.base_runner import BaseRunner
from core.errors import NumericalError
from core.reporting import ReportRenderer
from problems.forward.storage import CSV_FLOAT_FORMAT
from problems.inverse import RecoverySummary, derive_seed, recovery_experiment

TABLE_FILE = "table.csv"
REPORT_FILE = "report.md"
TABLE_COLUMNS = ["true_delta1", "sigma", "n_runs", "mean", "std", "rel_error", "failures"]


class ExperimentRunner(BaseRunner):
    command = "experiment"

    def __init__(self, config: RunConfig):
        super().__init__(config)
        self.config: RunConfig = config

    def run(self) -> Path:
        cfg = self.config
        cells = [(d, s) for d in cfg.true_delta1 for s in cfg.sigmas]
        summaries: list[RecoverySummary] = []

        for index, (true_delta1, sigma) in enumerate(cells):
            try:
                summary = recovery_experiment(
                    true_delta1=true_delta1,
                    sigma=sigma,
                    n_runs=cfg.n_runs,
                    seed=derive_seed(cfg.seed, index),
                    config=cfg.solver_config(),
                    params=cfg.model_params(),
                    profile=cfg.initial_profile(),
                    start=cfg.start_value(),
                    bounds=cfg.bounds,
                    max_evaluations=cfg.max_evaluations,
                    gtol_floor=cfg.gtol_floor,
                    pool=self.pool,
                )
            except NumericalError as e:
                self.logger.error(f"Celda δ̂₁={true_delta1:.6g}, σ={sigma:.6g} fallida: {e}")
                self.logger.error(traceback.format_exc())
                summary = RecoverySummary(
                    true_delta1, sigma, cfg.n_runs, np.nan, np.nan, np.nan, cfg.n_runs, error=str(e)
                )
            summaries.append(summary)

        run_dir = self.run_dir
        table = pd.DataFrame([s.as_row() for s in summaries], columns=TABLE_COLUMNS)
        table.to_csv(run_dir / TABLE_FILE, index=False, float_format=CSV_FLOAT_FORMAT)
        ReportRenderer().render(
            "experiment_report.md.j2",
            run_dir / REPORT_FILE,
            summaries=summaries,
            start=cfg.start,
            bounds=cfg.bounds,
        )
        self.logger.info(f"Tabla con {len(summaries)} celdas en {run_dir / TABLE_FILE}")
        return run_dir
