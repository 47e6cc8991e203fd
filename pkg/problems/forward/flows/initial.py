"""
Condiciones iniciales sobre la malla gruesa.
"""

from __future__ import annotations

import logging

import numpy as np

from core.errors import DataError
from core.fem import read_field
from core.mesh import Mesh
from problems.forward.data_models import FIELD_NAMES, InitialProfile, ProfileKind, StateField

logger = logging.getLogger("acidfront.forward")


def initial_condition(mesh: Mesh, profile: InitialProfile) -> StateField:
    if profile.kind is ProfileKind.GAUSSIAN_SEED:
        d2 = np.sum((mesh.nodes - np.asarray(profile.center)) ** 2, axis=1)
        u2 = np.exp(-d2 / profile.width2)
        return StateField(mesh, 1.0 - u2, u2, u2.copy(), 0.0)

    if profile.kind is ProfileKind.UNIFORM:
        u1, u2, u3 = (np.full(mesh.n_nodes, v) for v in profile.values)
        return StateField(mesh, u1, u2, u3, 0.0)

    if profile.path is None or not profile.path.is_dir():
        raise DataError(f"El perfil file(...) apunta a un directorio inexistente: {profile.path}")
    fields = {name: read_field(profile.path / f"{name}.field", expected_nodes=mesh.n_nodes) for name in FIELD_NAMES}
    logger.info(f"Condición inicial leída de {profile.path}")
    return StateField(mesh, fields["u1"], fields["u2"], fields["u3"], 0.0)
