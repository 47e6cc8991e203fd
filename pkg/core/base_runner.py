"""
BaseRunner: orquestador reusable de los comandos (logger, directorio de ejecución y
pool de workers).
"""

from __future__ import annotations

import logging
import os
from datetime import datetime
from pathlib import Path
from typing import Optional

from core.base_config import BaseConfig
from core.workers import WorkerPool

ROOT_LOGGER = "acidfront"
LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


class BaseRunner:
    """
    Cada comando hereda de esta clase e implementa `run()`.

    Uso:
        with SimulateRunner(config) as runner:
            run_dir = runner.run()
    """

    command: str = "base"

    def __init__(self, config: BaseConfig):
        self.config = config
        self.logger = self._create_logger()
        self.workers = config.resolve_workers()
        self.pool: Optional[WorkerPool] = None
        self._run_dir: Optional[Path] = None

    def _create_logger(self) -> logging.Logger:
        self.config.ensure_directories()
        logger = logging.getLogger(ROOT_LOGGER)
        logger.setLevel(getattr(logging, self.config.log_level, logging.INFO))

        if not logger.handlers:
            log_file = self.config.dir_logs / f"{self.command}.log"
            formatter = logging.Formatter(LOG_FORMAT)

            fh = logging.FileHandler(log_file, encoding="utf-8")
            fh.setFormatter(formatter)

            sh = logging.StreamHandler()
            sh.setFormatter(formatter)

            logger.addHandler(fh)
            logger.addHandler(sh)

        return logger

    def __enter__(self) -> "BaseRunner":
        self.pool = WorkerPool(self.workers)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        if self.pool is not None:
            self.pool.close()
            self.pool = None

    @property
    def run_dir(self) -> Path:
        """Directorio único `<comando>-<fecha>-<pid>[-k]` bajo dir_output, creado al primer uso."""
        if self._run_dir is None:
            stamp = datetime.now().strftime("%Y%m%d-%H%M%S")
            base = self.config.dir_output / f"{self.command}-{stamp}-{os.getpid()}"
            candidate, k = base, 0
            while True:
                try:
                    candidate.mkdir(parents=True, exist_ok=False)
                    break
                except FileExistsError:
                    k += 1
                    candidate = base.with_name(f"{base.name}-{k}")
            self._run_dir = candidate
            self.logger.info(f"Directorio de ejecución: {candidate}")
        return self._run_dir

    def banner(self, title: str) -> None:
        self.logger.info("\n" + "=" * 80)
        self.logger.info(title)
        self.logger.info("=" * 80)

    def run(self) -> Path:
        raise NotImplementedError
