"""
Detección de la banda hipocelular entre el tumor y el tejido sano.

Una banda cuenta cuando sus nodos (u₁ y u₂ por debajo del umbral) forman una
componente conexa que toca a la vez el tumor (u₂ > umbral) y el tejido sano
(u₁ > umbral). Con un estado de control (mismo instante, δ₁ = 0) solo cuentan los
nodos que no están ya en la banda del control.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from core.errors import DataError
from problems.forward.data_models import StateField

GAP_THRESHOLD = 0.64


@dataclass(frozen=True)
class GapReport:
    threshold: float
    gap_area: float
    tumor_area: float
    host_area: float
    gap_nodes: int
    separating_area: float
    separating_nodes: int

    @property
    def has_gap(self) -> bool:
        return self.separating_nodes > 0


def lumped_areas(state: StateField) -> np.ndarray:
    mesh = state.mesh
    return np.bincount(mesh.triangles.ravel(), weights=np.repeat(mesh.areas / 3.0, 3), minlength=mesh.n_nodes)


def _below(state: StateField, threshold: float) -> np.ndarray:
    return (state.u1 < threshold) & (state.u2 < threshold)


def separating_band(state: StateField, band: np.ndarray, threshold: float) -> np.ndarray:
    """Nodos de `band` cuya componente conexa (por aristas) es vecina del tumor y del sano."""
    mesh = state.mesh
    n = mesh.n_nodes
    if not band.any():
        return np.zeros(n, dtype=bool)

    a, b = mesh.edges.T
    inside = band[a] & band[b]
    graph = sp.coo_matrix((np.ones(int(inside.sum())), (a[inside], b[inside])), shape=(n, n))
    _, labels = connected_components(graph, directed=False)

    tumor = state.u2 > threshold
    host = state.u1 > threshold
    touches_tumor = np.zeros(labels.max() + 1, dtype=bool)
    touches_host = np.zeros(labels.max() + 1, dtype=bool)
    for src, dst in ((a, b), (b, a)):
        edge = band[src]
        touches_tumor[labels[src[edge & tumor[dst]]]] = True
        touches_host[labels[src[edge & host[dst]]]] = True
    return band & touches_tumor[labels] & touches_host[labels]


def hypocellular_gap(
    state: StateField,
    threshold: float = GAP_THRESHOLD,
    control: Optional[StateField] = None,
) -> GapReport:
    """
    Áreas (masa lumpeada) de la banda, del tumor y del tejido sano, y de la parte de la
    banda que separa tumor y sano. `control` excluye la banda que ya existe sin ácido.
    """
    lumped = lumped_areas(state)
    band = _below(state, threshold)
    if control is not None:
        if control.mesh.mesh_id != state.mesh.mesh_id:
            raise DataError("El estado de control no está en la misma malla")
        band &= ~_below(control, threshold)
    separating = separating_band(state, band, threshold)
    return GapReport(
        threshold=threshold,
        gap_area=float(lumped[band].sum()),
        tumor_area=float(lumped[state.u2 > threshold].sum()),
        host_area=float(lumped[state.u1 > threshold].sum()),
        gap_nodes=int(band.sum()),
        separating_area=float(lumped[separating].sum()),
        separating_nodes=int(separating.sum()),
    )
