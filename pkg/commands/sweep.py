"""
Comando `sweep`: J̃(δ₁) sobre una rejilla uniforme. Sin `--data`, los datos se generan
en el δ₁ de la configuración.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from commands.estimate import load_observed
from commands.run_config import RunConfig
from core.base_runner import BaseRunner
from problems.adjoint import ObservedSeries
from problems.forward.storage import CSV_FLOAT_FORMAT
from problems.inverse import objective_sweep, synthetic_data

SWEEP_FILE = "sweep.csv"


def observed_or_synthetic(cfg: RunConfig, runner: BaseRunner) -> ObservedSeries:
    if cfg.data is not None:
        return load_observed(cfg)
    runner.logger.info(f"Datos sintéticos generados con δ₁ = {cfg.delta1:.6g}")
    return synthetic_data(cfg.delta1, cfg.model_params(), cfg.solver_config(), cfg.initial_profile(), runner.pool)


class SweepRunner(BaseRunner):
    command = "sweep"

    def __init__(self, config: RunConfig):
        super().__init__(config)
        self.config: RunConfig = config

    def run(self) -> Path:
        cfg = self.config
        data = observed_or_synthetic(cfg, self)
        grid = np.linspace(cfg.sweep_lo, cfg.sweep_hi, cfg.sweep_points)

        self.banner(f"BARRIDO DE J̃ EN {cfg.sweep_points} PUNTOS")
        frame = objective_sweep(data, cfg.model_params(), cfg.solver_config(), grid, cfg.initial_profile(), self.pool)
        best = frame.loc[frame["objective"].idxmin()]
        self.logger.info(f"Mínimo de la rejilla: δ₁ = {best['delta1']:.6g}, J̃ = {best['objective']:.6e}")

        run_dir = self.run_dir
        frame.to_csv(run_dir / SWEEP_FILE, index=False, float_format=CSV_FLOAT_FORMAT)
        return run_dir
