"""
Paso de Euler implícito hacia atrás del sistema adjunto acoplado.

Para n = N..1 se resuelve

    (M_blk + τ·K_ℋ) λ^{n−1} = M_blk λⁿ − w_{n−1}·[0; 0; M(u₃ − û₃)^{n−1}]

con los coeficientes del estado directo congelados en t_{n−1} y w el peso
trapezoidal de ese nivel. Bloques de K_ℋ (fila = ecuación, columna = incógnita):

    (1,1)  diag(−(1 − 2u₁) + δ₁u₃)·M            (1,2)  −D₂ ∫ η₁ ∇u₂·∇λ₂
    (2,2)  −ρ₂·diag(1 − 2u₂)·M + K_w           (2,3)  −δ₃ M
    (3,1)  δ₁·diag(u₁)·M                       (3,3)  δ₃ M + K₁

Los bloques de reacción son diag(c)·M, coherentes con la reacción nodal del problema directo.
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import gmres

from core.base_config import LinearSolverConfig
from core.errors import LinearSolverError
from core.fem import assemble_gradient_coupling, assemble_nodal_mass, assemble_stiffness, element_gradients
from core.mesh import Mesh
from problems.forward.data_models import ModelParams, StateField
from problems.forward.flows.diffusion import mesh_operators, tumor_diffusivity

logger = logging.getLogger("acidfront.adjoint")


def adjoint_operator(mesh: Mesh, state: StateField, params: ModelParams) -> sp.csr_matrix:
    """K_ℋ por bloques (3·nodos × 3·nodos)."""
    M, K1 = mesh_operators(mesh)
    u1, u2, u3 = state.u1, state.u2, state.u3

    a11 = assemble_nodal_mass(mesh, -(1.0 - 2.0 * u1) + params.delta1 * u3)
    a12 = -params.D2 * assemble_gradient_coupling(mesh, element_gradients(mesh, u2))
    a22 = -params.rho2 * assemble_nodal_mass(mesh, 1.0 - 2.0 * u2) + assemble_stiffness(
        mesh, tumor_diffusivity(u1, params)
    )
    a23 = -params.delta3 * M
    a31 = params.delta1 * assemble_nodal_mass(mesh, u1)
    a33 = params.delta3 * M + K1
    return sp.bmat([[a11, a12, None], [None, a22, a23], [a31, None, a33]], format="csr")


def assemble_adjoint_system(
    mesh: Mesh,
    lambda_next: np.ndarray,
    state: StateField,
    data_u3: np.ndarray,
    params: ModelParams,
    tau: float,
    weight: Optional[float] = None,
) -> tuple[sp.csr_matrix, np.ndarray]:
    """
    Matriz y lado derecho del paso adjunto. `lambda_next` tiene forma (3, nodos);
    `weight` es el peso de la fuente de desajuste (τ si no se indica).
    """
    M, _ = mesh_operators(mesh)
    weight = tau if weight is None else weight
    mass_blk = sp.block_diag([M, M, M], format="csr")
    A = (mass_blk + tau * adjoint_operator(mesh, state, params)).tocsr()

    misfit = np.zeros((3, mesh.n_nodes))
    misfit[2] = M @ (state.u3 - data_u3)
    rhs = mass_blk @ np.asarray(lambda_next, dtype=float).ravel() - weight * misfit.ravel()
    return A, rhs


def solve_block(
    A: sp.csr_matrix,
    rhs: np.ndarray,
    linear: Optional[LinearSolverConfig] = None,
    time_level: Optional[int] = None,
) -> np.ndarray:
    """GMRES con precondicionador diagonal sobre el sistema no simétrico."""
    linear = linear or LinearSolverConfig()
    bnorm = float(np.linalg.norm(rhs))
    if bnorm == 0.0:
        return np.zeros_like(rhs)

    diag = A.diagonal()
    inv_diag = np.where(diag != 0.0, 1.0 / np.where(diag != 0.0, diag, 1.0), 1.0)
    precond = sp.diags(inv_diag)
    restart = min(linear.adjoint_restart, A.shape[0])

    x = None
    for _ in range(3):
        x, info = gmres(
            A,
            rhs,
            x0=x,
            rtol=linear.adjoint_rtol,
            atol=0.0,
            restart=restart,
            maxiter=linear.cg_maxiter_factor * max(1, A.shape[0] // restart),
            M=precond,
        )
        if info < 0:
            raise LinearSolverError("adjunto", f"entrada ilegal (info={info})", time_level)
        residual = float(np.linalg.norm(rhs - A @ x))
        # holgura sobre rtol: GMRES mide el residuo precondicionado
        if residual <= 100.0 * linear.adjoint_rtol * bnorm:
            return x
    raise LinearSolverError("adjunto", f"residuo relativo {residual / bnorm:.2e}", time_level)


def adjoint_step(
    lambda_next: np.ndarray,
    forward_state: StateField,
    data_u3: np.ndarray,
    params: ModelParams,
    tau: float,
    weight: Optional[float] = None,
    linear: Optional[LinearSolverConfig] = None,
    time_level: Optional[int] = None,
) -> np.ndarray:
    """Devuelve λ^{n−1} con forma (3, nodos)."""
    mesh = forward_state.mesh
    A, rhs = assemble_adjoint_system(mesh, lambda_next, forward_state, data_u3, params, tau, weight)
    return solve_block(A, rhs, linear, time_level).reshape(3, mesh.n_nodes)
