import unittest

import numpy as np

from core.errors import StepSizeUnderflowError
from core.mesh import make_uniform_mesh
from core.workers import WorkerPool
from problems.forward import ModelParams, StateField
from problems.forward.flows import reaction_step
from problems.forward.flows.reaction import integrate_nodes, reaction_rhs


def uniform_state(mesh, u1, u2, u3, time=0.0):
    n = mesh.n_nodes
    return StateField(mesh, np.full(n, u1), np.full(n, u2), np.full(n, u3), time)


class TestReactionRhs(unittest.TestCase):
    def test_terms(self):
        y = np.array([[0.5, 0.25, 0.2]])
        f = reaction_rhs(y, delta1=2.0, rho2=3.0, delta3=4.0)
        np.testing.assert_allclose(f, [[0.25 - 0.2, 3.0 * 0.25 * 0.75, 4.0 * 0.05]])


class TestReactionStep(unittest.TestCase):
    def setUp(self):
        self.mesh = make_uniform_mesh(2)

    def test_zero_is_fixed_point(self):
        state = uniform_state(self.mesh, 0.0, 0.0, 0.0)
        out = reaction_step(state, ModelParams(), 0.1)
        np.testing.assert_array_equal(out.stack(), state.stack())
        self.assertAlmostEqual(out.time, 0.1)

    def test_healthy_tissue_is_fixed_point(self):
        state = uniform_state(self.mesh, 1.0, 0.0, 0.0)
        out = reaction_step(state, ModelParams(delta1=17.0), 0.1)
        np.testing.assert_array_equal(out.stack(), state.stack())

    def test_logistic_tumor_step(self):
        state = uniform_state(self.mesh, 0.0, 0.5, 0.0)
        out = reaction_step(state, ModelParams(rho2=1.0), 0.1)
        expected = np.exp(0.1) / (1.0 + np.exp(0.1))
        np.testing.assert_allclose(out.u2, expected, atol=1e-6)
        self.assertAlmostEqual(expected, 0.5249792, places=7)

    def test_mesh_unchanged(self):
        state = uniform_state(self.mesh, 0.3, 0.2, 0.1)
        self.assertIs(reaction_step(state, ModelParams(), 0.1).mesh, self.mesh)

    def test_rejects_non_positive_dt(self):
        with self.assertRaises(ValueError):
            reaction_step(uniform_state(self.mesh, 0.0, 0.0, 0.0), ModelParams(), 0.0)


class TestIntegrateNodes(unittest.TestCase):
    def test_closed_forms_on_unit_interval(self):
        # nodo 0: logística de u₁; nodo 1: relajación de u₃ hacia u₂ = 1 (punto fijo de u₂)
        y0 = np.array([[0.5, 0.0, 0.0], [1.0, 1.0, 0.2]])
        y = integrate_nodes(y0, delta1=0.0, rho2=1.0, delta3=2.0, dt=1.0, abs_tol=1e-8, rel_tol=1e-6)
        self.assertLess(abs(y[0, 0] - np.e / (1.0 + np.e)), 1e-6)
        self.assertLess(abs(y[1, 2] - (1.0 - 0.8 * np.exp(-2.0))), 1e-6)

    def test_invariant_region(self):
        rng = np.random.default_rng(8)
        y0 = rng.random((200, 3))
        for delta1, rho2, delta3 in [(0.0, 1.0, 1.0), (12.5, 1.0, 1.0), (20.0, 3.0, 0.5)]:
            y = integrate_nodes(y0, delta1, rho2, delta3, dt=1.0, abs_tol=1e-8, rel_tol=1e-6)
            self.assertGreaterEqual(y[:, :2].min(), -1e-8)
            self.assertLessEqual(y[:, :2].max(), 1.0 + 1e-8)
            self.assertGreaterEqual(y[:, 2].min(), -1e-8)

    def test_nodes_are_independent(self):
        rng = np.random.default_rng(9)
        y0 = rng.random((30, 3))
        whole = integrate_nodes(y0, 12.5, 1.0, 1.0, 0.1, 1e-8, 1e-6)
        parts = np.concatenate(
            [integrate_nodes(y0[:7], 12.5, 1.0, 1.0, 0.1, 1e-8, 1e-6), integrate_nodes(y0[7:], 12.5, 1.0, 1.0, 0.1, 1e-8, 1e-6)]
        )
        np.testing.assert_array_equal(whole, parts)

    def test_underflow_names_global_node(self):
        y0 = np.array([[0.5, 0.5, 0.5], [np.nan, 0.5, 0.5]])
        with self.assertRaises(StepSizeUnderflowError) as ctx:
            integrate_nodes(y0, 1.0, 1.0, 1.0, 0.1, 1e-8, 1e-6, offset=10)
        self.assertEqual(ctx.exception.node, 11)


class TestReactionWorkers(unittest.TestCase):
    def test_bit_identical_across_worker_counts(self):
        mesh = make_uniform_mesh(6)
        rng = np.random.default_rng(10)
        state = StateField(mesh, rng.random(mesh.n_nodes), rng.random(mesh.n_nodes), rng.random(mesh.n_nodes))
        params = ModelParams(delta1=12.5)
        serial = reaction_step(state, params, 0.1)
        with WorkerPool(3, min_parallel_items=1) as pool:
            parallel = reaction_step(state, params, 0.1, pool=pool)
        np.testing.assert_array_equal(serial.stack(), parallel.stack())


if __name__ == "__main__":
    unittest.main()
