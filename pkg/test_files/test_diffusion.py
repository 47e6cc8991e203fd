import unittest

import numpy as np

from core.fem import assemble_mass
from core.mesh import make_uniform_mesh
from problems.forward import ModelParams, StateField
from problems.forward.flows import diffusion_step
from problems.forward.flows.diffusion import tumor_diffusivity


class TestDiffusionStep(unittest.TestCase):
    def setUp(self):
        self.mesh = make_uniform_mesh(4)
        rng = np.random.default_rng(12)
        n = self.mesh.n_nodes
        self.state = StateField(self.mesh, 0.5 * rng.random(n), rng.random(n), rng.random(n))

    def test_u1_does_not_diffuse(self):
        out = diffusion_step(self.state, ModelParams(D2=0.1), 0.1)
        np.testing.assert_array_equal(out.u1, self.state.u1)

    def test_constant_u2_is_unchanged(self):
        n = self.mesh.n_nodes
        state = StateField(self.mesh, self.state.u1, np.full(n, 0.3), self.state.u3)
        out = diffusion_step(state, ModelParams(D2=0.1), 0.1)
        np.testing.assert_allclose(out.u2, 0.3, atol=1e-12)

    def test_zero_tumor_diffusivity(self):
        out = diffusion_step(self.state, ModelParams(D2=0.0), 0.1)
        np.testing.assert_allclose(out.u2, self.state.u2, atol=1e-12)

    def test_acid_mass_is_conserved(self):
        M = assemble_mass(self.mesh)
        ones = np.ones(self.mesh.n_nodes)
        out = diffusion_step(self.state, ModelParams(), 0.1, cg_tol=1e-12)
        self.assertAlmostEqual(float(ones @ M @ out.u3), float(ones @ M @ self.state.u3), places=11)

    def test_diffusion_smooths(self):
        out = diffusion_step(self.state, ModelParams(), 0.1)
        self.assertLess(np.ptp(out.u3), np.ptp(self.state.u3))

    def test_diffusivity_is_clamped(self):
        w = tumor_diffusivity(np.array([0.0, 1.0, 1.5]), ModelParams(D2=2.0))
        np.testing.assert_array_equal(w, [2.0, 0.0, 0.0])


if __name__ == "__main__":
    unittest.main()
