"""
Volcado y lectura de trayectorias.

Estructura de un directorio de ejecución:

    mesh.txt                    malla gruesa
    fields/u1_0000.field ...    un fichero por nivel temporal y campo
    manifest.json               τ, T, parámetros, perfil y refinamientos por paso (sin tiempos de reloj)
    summary.csv                 t, mínimos/máximos de cada campo, η(Ω), refinamientos
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from core.errors import DataError
from core.fem import read_field, write_field
from core.mesh import read_mesh, write_mesh
from problems.forward.data_models import (
    FIELD_NAMES,
    InitialProfile,
    ModelParams,
    StateField,
    StepReport,
    Trajectory,
)

logger = logging.getLogger("acidfront.forward")

MESH_FILE = "mesh.txt"
MANIFEST_FILE = "manifest.json"
SUMMARY_FILE = "summary.csv"
FIELDS_DIR = "fields"
CSV_FLOAT_FORMAT = "%.17g"


def field_path(run_dir: Path, name: str, level: int) -> Path:
    return Path(run_dir) / FIELDS_DIR / f"{name}_{level:04d}.field"


def summary_frame(trajectory: Trajectory) -> pd.DataFrame:
    rows: list[dict[str, Any]] = []
    for n, state in enumerate(trajectory.states):
        row: dict[str, Any] = {"t": state.time}
        for name, values in state.fields().items():
            row[f"{name}_min"] = float(values.min())
            row[f"{name}_max"] = float(values.max())
        report = trajectory.reports[n - 1] if n > 0 and n - 1 < len(trajectory.reports) else None
        row["eta_omega"] = report.eta_omega if report else np.nan
        row["refines"] = report.refines if report else 0
        rows.append(row)
    return pd.DataFrame(rows)


def dump_trajectory(trajectory: Trajectory, run_dir: Path, extra: dict[str, Any] | None = None) -> Path:
    run_dir = Path(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    write_mesh(trajectory.coarse_mesh, run_dir / MESH_FILE)
    for n, state in enumerate(trajectory.states):
        for name, values in state.fields().items():
            write_field(field_path(run_dir, name, n), values)

    manifest = {
        "tau": trajectory.tau,
        "T_final": trajectory.T_final,
        "levels": len(trajectory.states),
        "params": trajectory.params.as_dict(),
        "profile": trajectory.profile.to_text(),
        "coarse_nodes": trajectory.coarse_mesh.n_nodes,
        "refines_per_step": [r.refines for r in trajectory.reports],
        "steps": [
            {
                "t": r.t,
                "refines": r.refines,
                "eta_omega": r.eta_omega,
                "nodes": r.nodes,
                "warning": r.warning,
            }
            for r in trajectory.reports
        ],
    }
    if extra:
        manifest.update(extra)
    (run_dir / MANIFEST_FILE).write_text(json.dumps(manifest, indent=2, ensure_ascii=False), encoding="utf-8")
    summary_frame(trajectory).to_csv(run_dir / SUMMARY_FILE, index=False, float_format=CSV_FLOAT_FORMAT)
    logger.info(f"Trayectoria volcada en {run_dir} ({len(trajectory.states)} niveles)")
    return run_dir


def read_manifest(run_dir: Path) -> dict[str, Any]:
    path = Path(run_dir) / MANIFEST_FILE
    if not path.exists():
        raise DataError(f"No existe {MANIFEST_FILE} en {run_dir}")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise DataError(f"{path} no es JSON válido: {e}") from e


def load_trajectory(run_dir: Path) -> Trajectory:
    """Lee lo que escribe `dump_trajectory` (los tiempos se reconstruyen como n·τ)."""
    run_dir = Path(run_dir)
    if not run_dir.is_dir():
        raise DataError(f"No existe el directorio de datos: {run_dir}")
    manifest = read_manifest(run_dir)
    mesh = read_mesh(run_dir / MESH_FILE)
    tau = float(manifest["tau"])
    states = []
    for n in range(int(manifest["levels"])):
        fields = {name: read_field(field_path(run_dir, name, n), mesh.n_nodes) for name in FIELD_NAMES}
        states.append(StateField(mesh, fields["u1"], fields["u2"], fields["u3"], n * tau))
    reports = [
        StepReport(
            t=float(s["t"]),
            refines=int(s["refines"]),
            eta_omega=float(s["eta_omega"]),
            nodes=int(s["nodes"]),
            warning=s.get("warning"),
        )
        for s in manifest.get("steps", [])
    ]
    return Trajectory(
        coarse_mesh=mesh,
        tau=tau,
        states=states,
        params=ModelParams(**manifest["params"]),
        profile=InitialProfile.parse(manifest["profile"]),
        reports=reports,
    )
