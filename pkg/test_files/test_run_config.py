import os
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

from commands.run_config import RunConfig
from core.base_config import WORKERS_ENV
from core.errors import ConfigError
from problems.forward import InitialProfile, ModelParams, SolverConfig


class TestRunConfig(unittest.TestCase):
    def test_defaults(self):
        cfg = RunConfig().validate()
        self.assertEqual(cfg.solver_config(), SolverConfig.full())
        self.assertEqual(cfg.model_params(), ModelParams())
        self.assertEqual(cfg.initial_profile(), InitialProfile.gaussian_seed())
        self.assertEqual(cfg.bounds, (0.0, 20.0))
        self.assertEqual(cfg.start_value(), "random")

    def test_text_round_trip(self):
        text = """
        # comentario
        tau = 0.05
        T_final = 1
        coarse_n = 8
        delta1 = 4          # comentario al final
        true_delta1 = 4, 12.5, 16
        sigmas = 0, 0.1
        timing_workers = 1, 2
        start = 6.5
        data = runs/datos
        """
        cfg = RunConfig.parse_text(text)
        self.assertEqual(cfg.tau, 0.05)
        self.assertEqual(cfg.coarse_n, 8)
        self.assertEqual(cfg.true_delta1, [4.0, 12.5, 16.0])
        self.assertEqual(cfg.timing_workers, [1, 2])
        self.assertEqual(cfg.start_value(), 6.5)
        self.assertEqual(cfg.data, Path("runs/datos"))
        self.assertEqual(RunConfig.parse_text(cfg.to_text()), cfg)

    def test_empty_list(self):
        self.assertEqual(RunConfig.parse_text("true_delta1 =").true_delta1, [])

    def test_unknown_key(self):
        with self.assertRaises(ConfigError) as ctx:
            RunConfig.parse_text("tau = 0.1\nalpha = 3")
        self.assertIn(":2:", str(ctx.exception))

    def test_repeated_key(self):
        with self.assertRaises(ConfigError):
            RunConfig.parse_text("tau = 0.1\ntau = 0.2")

    def test_invalid_values(self):
        for text in ("tau = rápido", "coarse_n = 2.5", "start = pronto", "missing separator"):
            with self.assertRaises(ConfigError, msg=text):
                RunConfig.parse_text(text)

    def test_start_outside_admissible_set(self):
        with self.assertRaises(ConfigError):
            RunConfig.parse_text("delta1_init = 25")
        with self.assertRaises(ConfigError):
            RunConfig.parse_text("bounds_hi = 10\nstart = 12")

    def test_rejects_bad_experiment_settings(self):
        for text in ("n_runs = 0", "sigmas = 0, -0.1", "timing_workers = 0", "log_level = verbose"):
            with self.assertRaises(ConfigError, msg=text):
                RunConfig.parse_text(text)

    def test_overrides_skip_none(self):
        cfg = RunConfig()
        same = cfg.with_overrides(dir_output=None, workers=None, seed=None)
        self.assertIs(same, cfg)
        changed = cfg.with_overrides(seed=7, workers=2, dir_output=Path("otra"))
        self.assertEqual((changed.seed, changed.workers, changed.dir_output), (7, 2, Path("otra")))
        with self.assertRaises(ConfigError):
            cfg.with_overrides(workers=0)

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            RunConfig.from_file(Path("no/existe.cfg"))

    def test_shipped_configs_parse(self):
        root = Path(__file__).resolve().parent.parent / "configs"
        full = RunConfig.from_file(root / "full.cfg")
        self.assertEqual(full.solver_config(), SolverConfig.full())
        self.assertEqual(full.sigmas, [0.0, 0.1, 0.15, 0.2])
        self.assertEqual(full.gtol_floor, 0.0)
        desk = RunConfig.from_file(root / "desk.cfg")
        self.assertEqual(desk.solver_config(), SolverConfig.desk())
        self.assertEqual(desk.gtol_floor, 0.0)

    def test_from_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "run.cfg"
            path.write_text("seed = 99\n", encoding="utf-8")
            self.assertEqual(RunConfig.from_file(path).seed, 99)


class TestWorkerResolution(unittest.TestCase):
    def test_explicit_value_wins(self):
        with patch.dict(os.environ, {WORKERS_ENV: "3"}):
            self.assertEqual(RunConfig(workers=2).resolve_workers(), 2)

    def test_environment(self):
        with patch.dict(os.environ, {WORKERS_ENV: "3"}):
            self.assertEqual(RunConfig().resolve_workers(), 3)

    def test_cpu_count_fallback(self):
        with patch.dict(os.environ, {WORKERS_ENV: ""}), patch("os.cpu_count", return_value=5):
            self.assertEqual(RunConfig().resolve_workers(), 5)

    def test_invalid_environment(self):
        for raw in ("muchos", "0"):
            with patch.dict(os.environ, {WORKERS_ENV: raw}):
                with self.assertRaises(ConfigError):
                    RunConfig().resolve_workers()


if __name__ == "__main__":
    unittest.main()
