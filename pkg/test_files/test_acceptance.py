"""
Pruebas largas a escala de escritorio (malla 8×8, T = 2) y una a escala completa.

Solo se ejecutan con ACIDFRONT_SLOW=1.
"""

import os
import time
import unittest

import numpy as np

from core.fem import assemble_mass, transfer
from core.mesh import make_uniform_mesh
from core.workers import WorkerPool
from problems.adjoint import ObservedSeries
from problems.forward import ModelParams, SolverConfig, StateField, hypocellular_gap, solve_direct
from problems.forward.flows import diffusion_step, reaction_step
from problems.inverse import EstimationProblem, gradient_check, minimize, recovery_experiment, synthetic_data

SLOW = os.getenv("ACIDFRONT_SLOW") == "1"


@unittest.skipUnless(SLOW, "ACIDFRONT_SLOW=1 para las pruebas largas")
class TestRecovery(unittest.TestCase):
    def test_noiseless_random_starts(self):
        for index, true_delta1 in enumerate((4.0, 12.5, 16.0)):
            summary = recovery_experiment(
                true_delta1, 0.0, 5, seed=100 + index, config=SolverConfig.desk(), gtol_floor=0.0
            )
            self.assertEqual(summary.failures, 0)
            for estimate in summary.estimates:
                self.assertLess(abs(estimate - true_delta1) / true_delta1, 0.01, msg=f"δ̂₁={true_delta1}")
            self.assertLessEqual(summary.std, 1e-3)

    def test_noisy_fixed_start_completes(self):
        # con D₂ = 4e-5 el mínimo de J̃ con ruido no está cerca de δ̂₁ (ver DESIGN.md)
        for index, sigma in enumerate((0.1, 0.15, 0.2)):
            summary = recovery_experiment(
                12.5, sigma, 10, seed=200 + index, config=SolverConfig.desk(), start=8.0, gtol_floor=0.0
            )
            self.assertEqual(summary.failures, 0)
            self.assertEqual(len(summary.estimates), 10)
            self.assertTrue(all(0.0 <= e <= 20.0 for e in summary.estimates))

    def test_estimates_improve_with_discretization(self):
        truth = 12.5
        reference = solve_direct(ModelParams(delta1=truth), SolverConfig.desk().with_changes(tau=0.025, coarse_n=16))

        def error(tau, coarse_n):
            config = SolverConfig.desk().with_changes(tau=tau, coarse_n=coarse_n)
            mesh = make_uniform_mesh(coarse_n)
            stride = int(round(tau / reference.tau))
            values = np.stack(
                [transfer(level, reference.coarse_mesh, mesh) for level in reference.series("u3")[::stride]]
            )
            problem = EstimationProblem(
                data=ObservedSeries(mesh, tau, values),
                fixed_params=ModelParams(),
                config=config,
                delta1_init=8.0,
                gtol_floor=0.0,
            )
            return abs(minimize(problem).delta1_star - truth) / truth

        self.assertLess(error(0.05, 16), error(0.1, 8))


@unittest.skipUnless(SLOW, "ACIDFRONT_SLOW=1 para las pruebas largas")
class TestGradientConsistency(unittest.TestCase):
    def _errors(self, tau):
        config = SolverConfig.desk().with_changes(tau=tau)
        data = synthetic_data(12.5, ModelParams(), config)
        errors = []
        for delta1 in (2.0, 8.0, 14.0):
            problem = EstimationProblem(data=data, fixed_params=ModelParams(), config=config, delta1_init=delta1)
            errors.append(gradient_check(problem, delta1, h=1e-3).rel_error)
        return np.array(errors)

    def test_adjoint_converges_to_finite_differences(self):
        coarse = self._errors(0.1)
        fine = self._errors(0.05)
        # error de primer orden en τ del esquema adjunto; valores medidos en DESIGN.md
        self.assertTrue(np.all(coarse <= 0.06), msg=str(coarse))
        self.assertTrue(np.all(coarse / fine >= 1.5), msg=str(coarse / fine))


@unittest.skipUnless(SLOW, "ACIDFRONT_SLOW=1 para las pruebas largas")
class TestForwardScheme(unittest.TestCase):
    def test_pure_diffusion_conserves_acid(self):
        mesh = make_uniform_mesh(8)
        rng = np.random.default_rng(31)
        state = StateField(mesh, *rng.random((3, mesh.n_nodes)))
        M = assemble_mass(mesh)
        ones = np.ones(mesh.n_nodes)
        start = float(ones @ M @ state.u3)
        params = ModelParams(delta3=0.0)
        for _ in range(100):
            state = diffusion_step(state, params, 0.1, cg_tol=1e-12)
        self.assertLess(abs(float(ones @ M @ state.u3) - start), 1e-8)

    def test_splitting_self_convergence(self):
        base = SolverConfig.desk().with_changes(T_final=1.0)
        finals = {
            tau: solve_direct(ModelParams(), base.with_changes(tau=tau)).states[-1].stack()
            for tau in (0.1, 0.05, 0.0125)
        }
        reference = finals[0.0125]
        coarse = np.abs(finals[0.1] - reference).max()
        fine = np.abs(finals[0.05] - reference).max()
        self.assertGreaterEqual(coarse / fine, 1.8)

    def test_reaction_speedup(self):
        if (os.cpu_count() or 1) < 4:
            self.skipTest("hacen falta 4 núcleos")
        mesh = make_uniform_mesh(100)
        rng = np.random.default_rng(32)
        state = StateField(mesh, *rng.random((3, mesh.n_nodes)))
        params = ModelParams()

        started = time.perf_counter()
        serial = reaction_step(state, params, 0.1)
        serial_seconds = time.perf_counter() - started

        with WorkerPool(4) as pool:
            reaction_step(state, params, 0.1, pool=pool)
            started = time.perf_counter()
            parallel = reaction_step(state, params, 0.1, pool=pool)
            parallel_seconds = time.perf_counter() - started

        np.testing.assert_array_equal(serial.stack(), parallel.stack())
        self.assertGreaterEqual(serial_seconds / parallel_seconds, 1.4)

    def test_acid_damage_at_full_scale(self):
        config = SolverConfig.full()
        final = solve_direct(ModelParams(), config).states[-1]
        control = solve_direct(ModelParams(delta1=0.0), config).states[-1]
        report = hypocellular_gap(final, control=control)
        untouched = hypocellular_gap(control)

        self.assertGreater(untouched.host_area, 0.0)
        self.assertLess(report.host_area, untouched.host_area)
        self.assertLessEqual(report.separating_area, report.gap_area)
        if report.has_gap:
            self.assertGreater(report.host_area, 0.0)
            self.assertGreater(report.tumor_area, 0.0)


if __name__ == "__main__":
    unittest.main()
