"""
Elementos finitos P1 sobre triángulos: ensamblado de matrices, solver PCG y
transferencia de campos entre mallas.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import cg
from scipy.spatial import cKDTree

from core.errors import DataError, LinearSolverError, PointLocationError
from core.mesh import Mesh

logger = logging.getLogger("acidfront.fem")

DEFAULT_CG_TOL = 1e-10
LOCATION_TOL = 1e-10

_MASS_TEMPLATE = np.array([[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]]) / 12.0


@dataclass(frozen=True)
class NodalField:
    """Un valor real por nodo de la malla referenciada."""

    values: np.ndarray
    mesh_id: str

    @classmethod
    def on(cls, mesh: Mesh, values: np.ndarray) -> "NodalField":
        values = np.asarray(values, dtype=float)
        if values.shape != (mesh.n_nodes,):
            raise DataError(f"El campo tiene {values.size} valores y la malla {mesh.n_nodes} nodos")
        return cls(values=values, mesh_id=mesh.mesh_id)

    def check(self, mesh: Mesh) -> np.ndarray:
        if self.mesh_id != mesh.mesh_id or self.values.shape != (mesh.n_nodes,):
            raise DataError("El campo no vive en la malla indicada")
        return self.values


def _values(field: Union[NodalField, np.ndarray, float], mesh: Mesh) -> np.ndarray:
    if isinstance(field, NodalField):
        return field.check(mesh)
    arr = np.asarray(field, dtype=float)
    if arr.ndim == 0:
        return np.full(mesh.n_nodes, float(arr))
    if arr.shape != (mesh.n_nodes,):
        raise DataError(f"El campo tiene {arr.size} valores y la malla {mesh.n_nodes} nodos")
    return arr


def _scatter(mesh: Mesh, local: np.ndarray) -> sp.csr_matrix:
    """Suma las matrices elementales (T, 3, 3) en orden fijo de triángulos."""
    tri = mesh.triangles
    rows = np.broadcast_to(tri[:, :, None], local.shape).ravel()
    cols = np.broadcast_to(tri[:, None, :], local.shape).ravel()
    n = mesh.n_nodes
    return sp.coo_matrix((local.ravel(), (rows, cols)), shape=(n, n)).tocsr()


def assemble_mass(mesh: Mesh) -> sp.csr_matrix:
    """Matriz de masa consistente P1."""
    local = mesh.areas[:, None, None] * _MASS_TEMPLATE[None, :, :]
    return _scatter(mesh, local)


def assemble_nodal_mass(mesh: Mesh, coeff) -> sp.csr_matrix:
    """
    diag(c)·M: la fila i de la masa escalada por el valor nodal c_i. Es la linealización
    de una reacción que se integra nodo a nodo.
    """
    return (sp.diags(_values(coeff, mesh)) @ assemble_mass(mesh)).tocsr()


def assemble_stiffness(mesh: Mesh, coeff) -> sp.csr_matrix:
    """
    K_ij = Σ_T c̄_T ∫_T ∇φ_i·∇φ_j, con c̄_T la media de los tres valores nodales del
    coeficiente, recortado a 0 por debajo. Condiciones Neumann naturales: K·𝟙 = 0.
    """
    c = np.maximum(_values(coeff, mesh), 0.0)
    cbar = c[mesh.triangles].mean(axis=1)
    g = mesh.gradients
    local = (cbar * mesh.areas)[:, None, None] * np.einsum("tid,tjd->tij", g, g)
    return _scatter(mesh, local)


def assemble_gradient_coupling(mesh: Mesh, direction: np.ndarray) -> sp.csr_matrix:
    """C_ij = ∫ φ_i (b_T·∇φ_j) con un vector b_T constante por triángulo, forma (T, 2)."""
    direction = np.asarray(direction, dtype=float)
    flux = np.einsum("td,tjd->tj", direction, mesh.gradients)
    local = np.broadcast_to((mesh.areas / 3.0)[:, None, None] * flux[:, None, :], (mesh.n_triangles, 3, 3))
    return _scatter(mesh, np.ascontiguousarray(local))


def element_gradients(mesh: Mesh, values: np.ndarray) -> np.ndarray:
    """Gradiente constante por triángulo de un campo P1, forma (T, 2)."""
    return np.einsum("tid,ti->td", mesh.gradients, np.asarray(values)[mesh.triangles])


def solve_spd(
    A: sp.spmatrix,
    b: Union[NodalField, np.ndarray],
    tol: float = DEFAULT_CG_TOL,
    *,
    system: str = "spd",
    maxiter_factor: int = 10,
    x0: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Gradiente conjugado con precondicionador diagonal hasta ‖Ax − b‖ ≤ tol·‖b‖.
    Se permite una reanudación desde la última iteración si el residuo real
    (no el recursivo) queda por encima de la tolerancia.
    """
    if tol <= 0:
        raise ValueError("La tolerancia de CG debe ser positiva")
    rhs = b.values if isinstance(b, NodalField) else np.asarray(b, dtype=float)
    n = rhs.size
    bnorm = float(np.linalg.norm(rhs))
    if bnorm == 0.0:
        return np.zeros(n)

    diag = A.diagonal()
    if np.any(diag <= 0.0):
        raise LinearSolverError(system, "diagonal no positiva; la matriz no es SPD")
    precond = sp.diags(1.0 / diag)

    x = None if x0 is None else np.array(x0, dtype=float)
    for _ in range(3):
        x, info = cg(A, rhs, x0=x, rtol=tol, atol=0.0, maxiter=maxiter_factor * n, M=precond)
        if info < 0:
            raise LinearSolverError(system, f"entrada ilegal o ruptura (info={info})")
        residual = float(np.linalg.norm(rhs - A @ x))
        if residual <= tol * bnorm:
            return x
        if info > 0:
            raise LinearSolverError(system, f"sin convergencia tras {info} iteraciones (residuo {residual / bnorm:.2e})")
    raise LinearSolverError(system, f"residuo real {residual / bnorm:.2e} por encima de {tol:.1e}")


def _neighbor(mesh: Mesh, tri: int, local_edge: int) -> int:
    owners = mesh.edge_triangles[mesh.triangle_edges[tri, local_edge]]
    return int(owners[1] if owners[0] == tri else owners[0])


def _barycentric(mesh: Mesh, tri: int, point: np.ndarray) -> np.ndarray:
    origin = mesh.nodes[mesh.triangles[tri, 0]]
    return np.array([1.0, 0.0, 0.0]) + mesh.gradients[tri] @ (point - origin)


def locate(mesh: Mesh, point: np.ndarray, start: int = 0) -> tuple[int, np.ndarray]:
    """
    Triángulo que contiene `point` y sus coordenadas baricéntricas: recorrido por
    vecinos desde `start`; si el recorrido sale de la malla, búsqueda exhaustiva.
    """
    tri = start
    for _ in range(mesh.n_triangles):
        bary = _barycentric(mesh, tri, point)
        worst = int(np.argmin(bary))
        if bary[worst] >= -LOCATION_TOL:
            return tri, bary
        nxt = _neighbor(mesh, tri, (worst + 1) % 3)
        if nxt < 0:
            break
        tri = nxt

    origin = mesh.nodes[mesh.triangles[:, 0]]
    bary_all = np.einsum("tid,td->ti", mesh.gradients, point[None, :] - origin)
    bary_all[:, 0] += 1.0
    score = bary_all.min(axis=1)
    best = int(np.argmax(score))
    if score[best] < -LOCATION_TOL:
        raise PointLocationError((float(point[0]), float(point[1])), float(score[best]))
    return best, bary_all[best]


def transfer(field: Union[NodalField, np.ndarray], source: Mesh, target: Mesh) -> np.ndarray:
    """Evalúa el interpolante P1 de `field` (en `source`) en todos los nodos de `target`."""
    values = _values(field, source)
    if source is target or source.mesh_id == target.mesh_id:
        return values.copy()

    distance, nearest = cKDTree(source.nodes).query(target.nodes)
    out = np.empty(target.n_nodes)
    coincident = distance == 0.0
    out[coincident] = values[nearest[coincident]]

    pending = np.flatnonzero(~coincident)
    if pending.size:
        node_to_tri = np.empty(source.n_nodes, dtype=np.int64)
        node_to_tri[source.triangles.ravel()] = np.repeat(np.arange(source.n_triangles), 3)
        for k in pending:
            tri, bary = locate(source, target.nodes[k], start=int(node_to_tri[nearest[k]]))
            out[k] = float(bary @ values[source.triangles[tri]])
        logger.debug(f"Transferencia: {pending.size} nodos interpolados, {coincident.sum()} coincidentes")
    return out


def write_field(path: Path, values: Union[NodalField, np.ndarray]) -> Path:
    """Formato texto: cabecera `field N` y un valor por línea con 17 cifras significativas."""
    arr = values.values if isinstance(values, NodalField) else np.asarray(values, dtype=float)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = "\n".join(f"{v:.17g}" for v in arr)
    path.write_text(f"field {arr.size}\n{body}\n", encoding="utf-8")
    return path


def read_field(path: Path, expected_nodes: Optional[int] = None) -> np.ndarray:
    path = Path(path)
    if not path.exists():
        raise DataError(f"No existe el fichero de campo: {path}")
    lines = path.read_text(encoding="utf-8").split()
    if len(lines) < 2 or lines[0] != "field":
        raise DataError(f"Cabecera de campo inválida en {path}")
    try:
        count = int(lines[1])
        values = np.array([float(v) for v in lines[2:]], dtype=float)
    except ValueError as e:
        raise DataError(f"Contenido de campo inválido en {path}: {e}") from e
    if values.size != count:
        raise DataError(f"{path}: la cabecera anuncia {count} valores y hay {values.size}")
    if expected_nodes is not None and count != expected_nodes:
        raise DataError(f"{path}: {count} valores para una malla de {expected_nodes} nodos")
    return values
