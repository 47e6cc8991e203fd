import unittest

import numpy as np

from core.mesh import make_uniform_mesh
from problems.forward import ModelParams, StateField
from problems.forward.flows import estimate_error


def state_from(mesh, u1, u2, u3):
    n = mesh.n_nodes
    as_array = lambda v: np.full(n, float(v)) if np.isscalar(v) else np.asarray(v, dtype=float)
    return StateField(mesh, as_array(u1), as_array(u2), as_array(u3))


class TestEstimator(unittest.TestCase):
    def test_steady_equilibrium_has_no_error(self):
        mesh = make_uniform_mesh(4)
        state = state_from(mesh, 1.0, 0.0, 0.0)
        indicators = estimate_error(mesh, state, state, 0.1, ModelParams())
        self.assertLess(indicators.eta_omega, 1e-12)

    def test_global_is_root_of_element_sum(self):
        mesh = make_uniform_mesh(4)
        rng = np.random.default_rng(13)
        new = state_from(mesh, *rng.random((3, mesh.n_nodes)))
        old = state_from(mesh, *rng.random((3, mesh.n_nodes)))
        indicators = estimate_error(mesh, new, old, 0.1, ModelParams(D2=0.01))
        self.assertAlmostEqual(indicators.eta_omega**2, float(np.sum(indicators.per_element**2)), delta=1e-10)
        self.assertTrue(np.all(indicators.per_element >= 0))
        self.assertTrue(np.all(indicators.per_edge >= 0))
        self.assertEqual(indicators.per_element.shape, (mesh.n_triangles,))
        self.assertEqual(indicators.per_edge.shape, (mesh.n_edges,))

    def test_affine_acid_has_no_interior_jumps(self):
        mesh = make_uniform_mesh(4)
        x, y = mesh.nodes.T
        state = state_from(mesh, 0.7, 0.2, 0.1 + 0.5 * x - 0.3 * y)
        indicators = estimate_error(mesh, state, state, 0.1, ModelParams())
        interior = ~mesh.boundary_flags
        np.testing.assert_allclose(indicators.per_edge[interior], 0.0, atol=1e-10)
        self.assertTrue(np.any(indicators.per_edge[mesh.boundary_flags] > 0))

    def test_first_order_decay_under_refinement(self):
        values = []
        for n in (4, 8):
            mesh = make_uniform_mesh(n)
            x, y = mesh.nodes.T
            state = state_from(mesh, 1.0, 0.0, np.cos(np.pi * x) * np.cos(np.pi * y))
            values.append(estimate_error(mesh, state, state, 0.1, ModelParams()).eta_omega)
        ratio = values[0] / values[1]
        self.assertGreaterEqual(ratio, 1.5)
        self.assertLessEqual(ratio, 2.5)


if __name__ == "__main__":
    unittest.main()
