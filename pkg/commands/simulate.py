"""
Comando `simulate`: problema directo, volcado de la trayectoria y, opcionalmente,
tiempos de la fase de reacción por número de workers.
"""

from __future__ import annotations

import time
from pathlib import Path

import numpy as np
import pandas as pd

from commands.run_config import RunConfig
from core.base_runner import BaseRunner
from core.workers import WorkerPool
from problems.forward import dump_trajectory, hypocellular_gap, solve_direct
from problems.forward.data_models import FIELD_NAMES, Trajectory
from problems.forward.storage import CSV_FLOAT_FORMAT

CONFIG_COPY = "config.cfg"
TIMING_FILE = "timing.csv"


def same_trajectory(a: Trajectory, b: Trajectory) -> bool:
    return all(np.array_equal(a.series(name), b.series(name)) for name in FIELD_NAMES)


class SimulateRunner(BaseRunner):
    command = "simulate"

    def __init__(self, config: RunConfig):
        super().__init__(config)
        self.config: RunConfig = config

    def run(self) -> Path:
        cfg = self.config
        solver = cfg.solver_config()
        params = cfg.model_params()
        profile = cfg.initial_profile()

        self.banner("PROBLEMA DIRECTO")
        trajectory = solve_direct(params, solver, profile, self.pool)

        run_dir = self.run_dir
        (run_dir / CONFIG_COPY).write_text(cfg.to_text(), encoding="utf-8")
        dump_trajectory(trajectory, run_dir)

        gap = hypocellular_gap(trajectory.states[-1])
        self.logger.info(
            f"t={trajectory.T_final:.6g}: banda hipocelular {gap.gap_area:.6g}, separadora {gap.separating_area:.6g} "
            f"(tumor {gap.tumor_area:.6g}, sano {gap.host_area:.6g}, umbral {gap.threshold})"
        )

        if cfg.timing_workers:
            self._timing(trajectory, run_dir)
        return run_dir

    def _timing(self, reference: Trajectory, run_dir: Path) -> Path:
        cfg = self.config
        self.banner(f"TIEMPOS DE REACCIÓN: workers = {', '.join(map(str, cfg.timing_workers))}")
        rows = []
        for workers in cfg.timing_workers:
            with WorkerPool(workers) as pool:
                started = time.perf_counter()
                trajectory = solve_direct(cfg.model_params(), cfg.solver_config(), cfg.initial_profile(), pool)
                total = time.perf_counter() - started
            identical = same_trajectory(reference, trajectory)
            if not identical:
                self.logger.warning(f"La trayectoria con {workers} workers difiere de la de referencia")
            rows.append(
                {
                    "workers": workers,
                    "reaction_seconds": trajectory.reaction_seconds,
                    "total_seconds": total,
                    "identical": identical,
                }
            )
            self.logger.info(f"{workers} workers: reacción {trajectory.reaction_seconds:.3f}s, total {total:.3f}s")

        frame = pd.DataFrame(rows)
        base = frame.loc[frame["workers"].idxmin(), "reaction_seconds"]
        frame["speedup"] = base / frame["reaction_seconds"]
        frame = frame[["workers", "reaction_seconds", "total_seconds", "speedup", "identical"]]
        path = run_dir / TIMING_FILE
        frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
        return path
