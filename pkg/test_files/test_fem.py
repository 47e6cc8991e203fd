import tempfile
import unittest
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from core.errors import DataError, LinearSolverError, PointLocationError
from core.fem import (
    NodalField,
    assemble_gradient_coupling,
    assemble_mass,
    assemble_nodal_mass,
    assemble_stiffness,
    element_gradients,
    locate,
    read_field,
    solve_spd,
    transfer,
    write_field,
)
from core.mesh import Mesh, make_uniform_mesh, rgb_refine


class TestAssembly(unittest.TestCase):
    def setUp(self):
        self.mesh = make_uniform_mesh(4)

    def test_mass_total_is_area(self):
        M = assemble_mass(self.mesh)
        self.assertAlmostEqual(float(M.sum()), 1.0, places=12)
        self.assertLess(abs(M - M.T).max(), 1e-12)
        self.assertGreaterEqual(M.min(), 0.0)

    def test_single_triangle_element_matrix(self):
        mesh = Mesh.from_arrays(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), np.array([[0, 1, 2]]))
        M = assemble_mass(mesh).toarray()
        expected = (0.5 / 12.0) * np.array([[2, 1, 1], [1, 2, 1], [1, 1, 2]])
        np.testing.assert_allclose(M, expected, atol=1e-15)

    def test_mass_row_sums_are_lumped_areas(self):
        mesh = make_uniform_mesh(2)
        M = assemble_mass(mesh)
        lumped = np.zeros(mesh.n_nodes)
        for tri, area in zip(mesh.triangles, mesh.areas):
            lumped[tri] += area / 3.0
        np.testing.assert_allclose(M @ np.ones(mesh.n_nodes), lumped, atol=1e-15)

    def test_mass_is_positive_definite(self):
        M = assemble_mass(self.mesh).toarray()
        self.assertGreater(np.linalg.eigvalsh(M).min(), 0.0)

    def test_nodal_mass_with_unit_coefficient_is_mass(self):
        np.testing.assert_allclose(
            assemble_nodal_mass(self.mesh, 1.0).toarray(), assemble_mass(self.mesh).toarray(), atol=1e-15
        )

    def test_nodal_mass_integrates_coefficient(self):
        x = self.mesh.nodes[:, 0]
        W = assemble_nodal_mass(self.mesh, x)
        ones = np.ones(self.mesh.n_nodes)
        # ∫ x dx = 1/2
        self.assertAlmostEqual(float(ones @ W @ ones), 0.5, places=12)

    def test_nodal_mass_scales_rows(self):
        rng = np.random.default_rng(4)
        c, v = rng.standard_normal((2, self.mesh.n_nodes))
        W = assemble_nodal_mass(self.mesh, c)
        np.testing.assert_allclose(W @ v, c * (assemble_mass(self.mesh) @ v), rtol=0.0, atol=1e-14)

    def test_stiffness_zero_coefficient(self):
        K = assemble_stiffness(self.mesh, 0.0)
        self.assertEqual(abs(K).max(), 0.0)

    def test_stiffness_row_sums_vanish(self):
        rng = np.random.default_rng(0)
        K = assemble_stiffness(self.mesh, rng.random(self.mesh.n_nodes))
        np.testing.assert_allclose(K @ np.ones(self.mesh.n_nodes), 0.0, atol=1e-12)
        self.assertLess(abs(K - K.T).max(), 1e-12)

    def test_stiffness_energy_of_x(self):
        K = assemble_stiffness(self.mesh, 1.0)
        v = self.mesh.nodes[:, 0]
        self.assertAlmostEqual(float(v @ K @ v), 1.0, places=12)

    def test_stiffness_kernel_is_constants(self):
        rng = np.random.default_rng(1)
        K = assemble_stiffness(self.mesh, 0.1 + rng.random(self.mesh.n_nodes)).toarray()
        eig = np.linalg.eigvalsh(K)
        self.assertGreater(eig.min(), -1e-12)
        self.assertEqual(int(np.sum(eig < 1e-10)), 1)

    def test_negative_coefficient_is_clamped(self):
        K = assemble_stiffness(self.mesh, -1.0)
        self.assertEqual(abs(K).max(), 0.0)

    def test_gradient_coupling_constant_direction(self):
        direction = np.tile([1.0, 0.0], (self.mesh.n_triangles, 1))
        C = assemble_gradient_coupling(self.mesh, direction)
        ones = np.ones(self.mesh.n_nodes)
        x = self.mesh.nodes[:, 0]
        # ∫ 1·∂x(x) = 1 ; ∫ ∂x(1) = 0
        self.assertAlmostEqual(float(ones @ C @ x), 1.0, places=12)
        np.testing.assert_allclose(C @ ones, 0.0, atol=1e-12)

    def test_element_gradients_of_affine_field(self):
        values = 2.0 * self.mesh.nodes[:, 0] - 3.0 * self.mesh.nodes[:, 1] + 1.0
        g = element_gradients(self.mesh, values)
        np.testing.assert_allclose(g, np.tile([2.0, -3.0], (self.mesh.n_triangles, 1)), atol=1e-12)


class TestSolveSpd(unittest.TestCase):
    def test_mass_system(self):
        mesh = make_uniform_mesh(4)
        M = assemble_mass(mesh)
        b = np.random.default_rng(2).random(mesh.n_nodes)
        x = solve_spd(M, b, 1e-12)
        self.assertLessEqual(np.linalg.norm(M @ x - b), 1e-12 * np.linalg.norm(b))

    def test_neumann_constants_invariant(self):
        mesh = make_uniform_mesh(4)
        M = assemble_mass(mesh)
        A = M + 0.1 * assemble_stiffness(mesh, 1.0)
        x = solve_spd(A, M @ np.ones(mesh.n_nodes), 1e-12)
        np.testing.assert_allclose(x, 1.0, atol=1e-10)

    def test_poisson_with_mass_residual_is_orthogonal(self):
        mesh = rgb_refine(make_uniform_mesh(4), [0, 5, 11])
        x, y = mesh.nodes.T
        M = assemble_mass(mesh)
        A = M + assemble_stiffness(mesh, 1.0)
        b = M @ (np.cos(np.pi * x) * np.cos(np.pi * y))
        u = solve_spd(A, b, 1e-12)
        residual = b - A @ u
        # a(u, v) = (f, v) para toda v de P1: basta con la base nodal y una v cualquiera
        self.assertLessEqual(np.abs(residual).max(), 1e-12 * np.linalg.norm(b))
        v = np.random.default_rng(5).standard_normal(mesh.n_nodes)
        self.assertLessEqual(abs(v @ residual), 1e-12 * np.linalg.norm(b) * np.linalg.norm(v))

    def test_random_spd_against_dense(self):
        rng = np.random.default_rng(4)
        B = rng.standard_normal((20, 20))
        A = B @ B.T + 20.0 * np.eye(20)
        b = rng.standard_normal(20)
        x = solve_spd(sp.csr_matrix(A), b, 1e-12)
        np.testing.assert_allclose(x, np.linalg.solve(A, b), atol=1e-8)

    def test_zero_rhs(self):
        A = sp.identity(5, format="csr")
        np.testing.assert_array_equal(solve_spd(A, np.zeros(5)), np.zeros(5))

    def test_non_spd_diagonal_is_reported(self):
        A = sp.diags([1.0, -1.0]).tocsr()
        with self.assertRaises(LinearSolverError) as ctx:
            solve_spd(A, np.ones(2), system="prueba")
        self.assertIn("prueba", str(ctx.exception))

    def test_accepts_nodal_field(self):
        mesh = make_uniform_mesh(2)
        M = assemble_mass(mesh)
        field = NodalField.on(mesh, M @ np.ones(mesh.n_nodes))
        np.testing.assert_allclose(solve_spd(M, field, 1e-12), 1.0, atol=1e-10)


class TestTransfer(unittest.TestCase):
    def test_same_mesh_is_bit_exact(self):
        mesh = make_uniform_mesh(3)
        values = np.random.default_rng(5).random(mesh.n_nodes)
        out = transfer(values, mesh, mesh)
        np.testing.assert_array_equal(out, values)
        self.assertIsNot(out, values)

    def test_affine_fields_are_exact(self):
        source = make_uniform_mesh(3)
        target = rgb_refine(make_uniform_mesh(5), [0, 4, 9, 20])
        f = lambda p: 0.3 + 1.7 * p[:, 0] - 0.4 * p[:, 1]
        out = transfer(f(source.nodes), source, target)
        np.testing.assert_allclose(out, f(target.nodes), atol=1e-12)

    def test_refine_then_back_keeps_shared_nodes(self):
        coarse = make_uniform_mesh(3)
        fine = rgb_refine(coarse, [1, 2, 10])
        values = np.random.default_rng(6).random(coarse.n_nodes)
        there = transfer(values, coarse, fine)
        back = transfer(there, fine, coarse)
        np.testing.assert_array_equal(back, values)
        np.testing.assert_array_equal(there[: coarse.n_nodes], values)

    def test_locate_outside_domain(self):
        mesh = make_uniform_mesh(2)
        with self.assertRaises(PointLocationError):
            locate(mesh, np.array([1.5, 0.5]))

    def test_locate_returns_barycentric(self):
        mesh = make_uniform_mesh(2)
        point = np.array([0.3, 0.6])
        tri, bary = locate(mesh, point, start=0)
        self.assertAlmostEqual(float(bary.sum()), 1.0, places=12)
        self.assertGreaterEqual(bary.min(), -1e-10)
        np.testing.assert_allclose(bary @ mesh.nodes[mesh.triangles[tri]], point, atol=1e-12)


class TestFieldIO(unittest.TestCase):
    def test_round_trip(self):
        values = np.random.default_rng(7).standard_normal(13)
        with tempfile.TemporaryDirectory() as tmp:
            path = write_field(Path(tmp) / "u.field", values)
            self.assertTrue(path.read_text(encoding="utf-8").startswith("field 13\n"))
            np.testing.assert_array_equal(read_field(path, expected_nodes=13), values)

    def test_node_count_mismatch(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_field(Path(tmp) / "u.field", np.zeros(4))
            with self.assertRaises(DataError):
                read_field(path, expected_nodes=5)

    def test_nodal_field_checks_mesh(self):
        a, b = make_uniform_mesh(2), make_uniform_mesh(3)
        field = NodalField.on(a, np.zeros(a.n_nodes))
        with self.assertRaises(DataError):
            field.check(b)
        with self.assertRaises(DataError):
            NodalField.on(b, np.zeros(a.n_nodes))


if __name__ == "__main__":
    unittest.main()
