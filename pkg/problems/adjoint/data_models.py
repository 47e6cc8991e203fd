"""
Modelos de datos del problema adjunto.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from core.errors import DataError, GridMismatchError
from core.fem import read_field, write_field
from core.mesh import Mesh, read_mesh, write_mesh
from problems.forward.data_models import Trajectory
from problems.forward.storage import MANIFEST_FILE, MESH_FILE, field_path, read_manifest

GRID_TOL = 1e-12


@dataclass(frozen=True)
class ObservedSeries:
    """Datos û₃ sobre la malla gruesa en los niveles t₀..t_N."""

    mesh: Mesh
    tau: float
    values: np.ndarray  # (N+1, nodos)

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.shape[1] != self.mesh.n_nodes:
            raise DataError(f"Los datos tienen forma {self.values.shape}; la malla tiene {self.mesh.n_nodes} nodos")

    @classmethod
    def from_trajectory(cls, trajectory: Trajectory) -> "ObservedSeries":
        return cls(trajectory.coarse_mesh, trajectory.tau, trajectory.series("u3"))

    @classmethod
    def load(cls, run_dir: Path) -> "ObservedSeries":
        """Lee û₃ de un directorio escrito por `dump_trajectory` o por `save`."""
        run_dir = Path(run_dir)
        if not run_dir.is_dir():
            raise DataError(f"No existe el directorio de datos: {run_dir}")
        manifest = read_manifest(run_dir)
        mesh = read_mesh(run_dir / MESH_FILE)
        values = np.stack(
            [read_field(field_path(run_dir, "u3", n), mesh.n_nodes) for n in range(int(manifest["levels"]))]
        )
        return cls(mesh, float(manifest["tau"]), values)

    def save(self, run_dir: Path) -> Path:
        run_dir = Path(run_dir)
        write_mesh(self.mesh, run_dir / MESH_FILE)
        for n, level in enumerate(self.values):
            write_field(field_path(run_dir, "u3", n), level)
        manifest = {"tau": self.tau, "levels": self.n_levels, "T_final": self.T_final, "fields": ["u3"]}
        (run_dir / MANIFEST_FILE).write_text(json.dumps(manifest, indent=2), encoding="utf-8")
        return run_dir

    @property
    def n_levels(self) -> int:
        return len(self.values)

    @property
    def T_final(self) -> float:
        return (self.n_levels - 1) * self.tau

    def check_grid(self, mesh: Mesh, n_levels: int, tau: float) -> None:
        same_mesh = (
            self.mesh.n_nodes == mesh.n_nodes
            and self.mesh.n_triangles == mesh.n_triangles
            and np.allclose(self.mesh.nodes, mesh.nodes, rtol=0.0, atol=GRID_TOL)
            and np.array_equal(self.mesh.triangles, mesh.triangles)
        )
        if not same_mesh:
            raise GridMismatchError(
                f"Los datos viven en una malla de {self.mesh.n_nodes} nodos distinta de la malla gruesa "
                f"({mesh.n_nodes} nodos)"
            )
        if self.n_levels != n_levels or abs(self.tau - tau) > GRID_TOL:
            raise GridMismatchError(
                f"Rejilla temporal incompatible: datos {self.n_levels} niveles con τ={self.tau}, "
                f"se esperaban {n_levels} niveles con τ={tau}"
            )

    def check_compatible(self, trajectory: Trajectory) -> None:
        self.check_grid(trajectory.coarse_mesh, len(trajectory.states), trajectory.tau)


@dataclass(frozen=True)
class AdjointTrajectory:
    """λ = (λ₁, λ₂, λ₃) en la malla gruesa; el último nivel es idénticamente cero."""

    coarse_mesh: Mesh
    times: np.ndarray
    lambdas: np.ndarray  # (N+1, 3, nodos)

    @property
    def lambda1(self) -> np.ndarray:
        return self.lambdas[:, 0, :]

    @property
    def lambda2(self) -> np.ndarray:
        return self.lambdas[:, 1, :]

    @property
    def lambda3(self) -> np.ndarray:
        return self.lambdas[:, 2, :]
