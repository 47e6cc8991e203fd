"""
Estimador residual a posteriori:

    η(T)² = H_T²‖R_T(uⁿ)‖²_{L²(T)} + Σ_{S⊂∂T} H_S‖J_S(uⁿ)‖²_{L²(S)}

R_T es el residuo de la ecuación discreta en el interior del elemento y J_S el salto
del flujo difusivo normal a través de la arista (en la frontera, el propio flujo
normal, cuyo valor objetivo es cero).
"""

from __future__ import annotations

import numpy as np

from core.fem import element_gradients
from core.mesh import LOCAL_EDGES, Mesh
from problems.forward.data_models import ErrorIndicators, ModelParams, StateField
from problems.forward.flows.diffusion import tumor_diffusivity


def _midpoint_values(mesh: Mesh, values: np.ndarray) -> np.ndarray:
    """Valores del interpolante P1 en los puntos medios de las aristas locales, forma (T, 3)."""
    v = values[mesh.triangles]
    return 0.5 * (v[:, LOCAL_EDGES[:, 0]] + v[:, LOCAL_EDGES[:, 1]])


def _element_residual_sq(mesh: Mesh, new: StateField, old: StateField, tau: float, params: ModelParams) -> np.ndarray:
    """‖R_T‖²_{L²(T)} con la regla de puntos medios (exacta para cuadráticas)."""
    w = tumor_diffusivity(new.u1, params)
    # Dentro de T: div(w∇u₂) = ∇w·∇u₂ porque Δu₂ = 0 para P1
    a2 = np.einsum("td,td->t", element_gradients(mesh, w), element_gradients(mesh, new.u2))

    m = {name: _midpoint_values(mesh, getattr(new, name)) for name in ("u1", "u2", "u3")}
    rate = {name: _midpoint_values(mesh, (getattr(new, name) - getattr(old, name)) / tau) for name in ("u1", "u2", "u3")}

    r1 = rate["u1"] - (m["u1"] * (1.0 - m["u1"]) - params.delta1 * m["u1"] * m["u3"])
    r2 = rate["u2"] - a2[:, None] - params.rho2 * m["u2"] * (1.0 - m["u2"])
    r3 = rate["u3"] - params.delta3 * (m["u2"] - m["u3"])

    return (mesh.areas / 3.0) * np.sum(r1**2 + r2**2 + r3**2, axis=1)


def _edge_jump_sq(mesh: Mesh, new: StateField, params: ModelParams) -> np.ndarray:
    """J_S² por arista (u₂ y u₃ sumados); el salto es constante a lo largo de S."""
    normals = mesh.edge_normals()
    w = tumor_diffusivity(new.u1, params)
    w_edge = 0.5 * (w[mesh.edges[:, 0]] + w[mesh.edges[:, 1]])

    g2 = element_gradients(mesh, new.u2)
    g3 = element_gradients(mesh, new.u3)
    first, second = mesh.edge_triangles[:, 0], mesh.edge_triangles[:, 1]
    interior = second >= 0
    other = np.where(interior, second, first)

    def normal_jump(g: np.ndarray) -> np.ndarray:
        flux = np.einsum("ed,ed->e", g[first], normals)
        return flux - np.where(interior, np.einsum("ed,ed->e", g[other], normals), 0.0)

    j2 = w_edge * normal_jump(g2)
    j3 = normal_jump(g3)
    return j2**2 + j3**2


def estimate_error(
    mesh: Mesh,
    state_new: StateField,
    state_old_on_mesh: StateField,
    tau: float,
    params: ModelParams,
) -> ErrorIndicators:
    h_t = mesh.diameters
    h_s = mesh.edge_lengths

    element = h_t**2 * _element_residual_sq(mesh, state_new, state_old_on_mesh, tau, params)
    # H_S‖J_S‖²_{L²(S)} = H_S²·J_S²
    edge_term = h_s**2 * _edge_jump_sq(mesh, state_new, params)

    per_element_sq = element + np.sum(edge_term[mesh.triangle_edges], axis=1)
    per_element = np.sqrt(per_element_sq)
    return ErrorIndicators(
        per_element=per_element,
        per_edge=np.sqrt(edge_term),
        eta_omega=float(np.sqrt(np.sum(per_element**2))),
    )
