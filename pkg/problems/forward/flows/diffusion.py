"""
Paso de difusión semi-implícito (Euler implícito con coeficiente congelado).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from core.fem import assemble_mass, assemble_stiffness, solve_spd
from core.mesh import Mesh
from problems.forward.data_models import ModelParams, StateField


@lru_cache(maxsize=8)
def mesh_operators(mesh: Mesh) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Masa M y rigidez unitaria K₁ de una malla (se reutilizan entre pasos)."""
    return assemble_mass(mesh), assemble_stiffness(mesh, 1.0)


def tumor_diffusivity(u1: np.ndarray, params: ModelParams) -> np.ndarray:
    """max(D₂(1 − u₁), 0) nodal."""
    return np.maximum(params.D2 * (1.0 - u1), 0.0)


def diffusion_step(
    state: StateField,
    params: ModelParams,
    tau: float,
    cg_tol: float = 1e-10,
    maxiter_factor: int = 10,
) -> StateField:
    """
    u₁ no difunde. u₂ resuelve (M + τK_w)u₂ⁿ = M·u₂ con w = max(D₂(1−u₁), 0) tomado
    del u₁ posterior a la reacción; u₃ resuelve (M + τK₁)u₃ⁿ = M·u₃.
    """
    mesh = state.mesh
    M, K1 = mesh_operators(mesh)

    Kw = assemble_stiffness(mesh, tumor_diffusivity(state.u1, params))
    u2 = solve_spd(M + tau * Kw, M @ state.u2, cg_tol, system="difusión u2", maxiter_factor=maxiter_factor, x0=state.u2)
    u3 = solve_spd(M + tau * K1, M @ state.u3, cg_tol, system="difusión u3", maxiter_factor=maxiter_factor, x0=state.u3)
    return StateField(mesh, state.u1.copy(), u2, u3, state.time)
