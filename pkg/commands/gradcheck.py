"""
Comando `gradcheck`: gradiente adjunto frente a la diferencia central del J̃ discreto.
"""

from __future__ import annotations

from pathlib import Path

import pandas as pd

from commands.run_config import RunConfig
from commands.sweep import observed_or_synthetic
from core.base_runner import BaseRunner
from problems.forward.storage import CSV_FLOAT_FORMAT
from problems.inverse import EstimationProblem, gradient_check

GRADCHECK_FILE = "gradcheck.csv"


class GradcheckRunner(BaseRunner):
    command = "gradcheck"

    def __init__(self, config: RunConfig):
        super().__init__(config)
        self.config: RunConfig = config

    def run(self) -> Path:
        cfg = self.config
        data = observed_or_synthetic(cfg, self)

        self.banner(f"COMPROBACIÓN DEL GRADIENTE (h = {cfg.fd_step:.1e})")
        rows = []
        for delta1 in cfg.gradcheck_points:
            problem = EstimationProblem(
                data=data,
                fixed_params=cfg.model_params(),
                config=cfg.solver_config(),
                delta1_init=min(max(delta1, cfg.bounds_lo), cfg.bounds_hi),
                bounds=cfg.bounds,
                profile=cfg.initial_profile(),
            )
            check = gradient_check(problem, delta1, cfg.fd_step, self.pool)
            rows.append(
                {
                    "delta1": check.delta1,
                    "h": check.h,
                    "adjoint": check.adjoint,
                    "finite_difference": check.finite_difference,
                    "rel_error": check.rel_error,
                }
            )

        run_dir = self.run_dir
        pd.DataFrame(rows).to_csv(run_dir / GRADCHECK_FILE, index=False, float_format=CSV_FLOAT_FORMAT)
        return run_dir
