"""
Paso de reacción: integra en cada nodo, de forma independiente,

    du₁/dt = u₁(1 − u₁) − δ₁u₁u₃
    du₂/dt = ρ₂u₂(1 − u₂)
    du₃/dt = δ₃(u₂ − u₃)

con Dormand-Prince 5(4) y paso adaptativo propio de cada nodo.
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from core.errors import StepSizeUnderflowError
from core.workers import WorkerPool
from problems.forward.data_models import ModelParams, StateField

logger = logging.getLogger("acidfront.forward")

# Tabla de Butcher de DOPRI5; la última fila son los pesos de orden 5
_A = (
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
# Diferencia entre los pesos de orden 5 y 4 (incluye la etapa FSAL)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

SAFETY = 0.9
FAC_MIN = 0.2
FAC_MAX = 5.0
# Paso mínimo relativo a dt antes de declarar colapso
H_MIN_FACTOR = 1e-14


def reaction_rhs(y: np.ndarray, delta1: float, rho2: float, delta3: float) -> np.ndarray:
    u1, u2, u3 = y[:, 0], y[:, 1], y[:, 2]
    return np.stack(
        [u1 * (1.0 - u1) - delta1 * u1 * u3, rho2 * u2 * (1.0 - u2), delta3 * (u2 - u3)],
        axis=1,
    )


def integrate_nodes(
    y0: np.ndarray,
    delta1: float,
    rho2: float,
    delta3: float,
    dt: float,
    abs_tol: float,
    rel_tol: float,
    offset: int = 0,
) -> np.ndarray:
    """
    Integra el bloque de nodos `y0` (forma (n, 3)) sobre [0, dt]. `offset` es el índice
    global del primer nodo, solo para los mensajes de error.

    Cada fila evoluciona con su propio tiempo y paso; el resultado de un nodo no depende
    del resto del bloque.
    """
    y = np.array(y0, dtype=float)
    n = len(y)
    t = np.zeros(n)
    h = np.full(n, dt)
    active = np.arange(n)
    h_min = H_MIN_FACTOR * dt

    def f(state):
        return reaction_rhs(state, delta1, rho2, delta3)

    while active.size:
        ya = y[active]
        ta = t[active]
        remaining = dt - ta
        ha = np.minimum(h[active], remaining)
        last = ha >= remaining

        k = [f(ya)]
        for row in _A[:-1]:
            incr = sum(c * kj for c, kj in zip(row, k) if c != 0.0)
            k.append(f(ya + ha[:, None] * incr))
        y_new = ya + ha[:, None] * sum(c * kj for c, kj in zip(_A[-1], k) if c != 0.0)
        k.append(f(y_new))
        err_vec = ha[:, None] * sum(c * kj for c, kj in zip(_E, k) if c != 0.0)

        scale = abs_tol + rel_tol * np.maximum(np.abs(ya), np.abs(y_new))
        err = np.sqrt(np.mean((err_vec / scale) ** 2, axis=1))
        accept = err <= 1.0

        with np.errstate(divide="ignore", invalid="ignore"):
            fac = np.where(err > 0.0, SAFETY * err**-0.2, FAC_MAX)
        # Error no finito: se trata como rechazo con la máxima reducción
        fac = np.clip(np.where(np.isfinite(err), fac, FAC_MIN), FAC_MIN, FAC_MAX)

        idx = active[accept]
        y[idx] = y_new[accept]
        t[idx] = np.where(last[accept], dt, ta[accept] + ha[accept])
        h[active] = ha * fac

        rejected = active[~accept]
        if rejected.size and np.any(h[rejected] < h_min):
            bad = int(rejected[np.argmax(h[rejected] < h_min)])
            raise StepSizeUnderflowError(offset + bad, float(h[bad]))

        finished = np.zeros(active.size, dtype=bool)
        finished[accept] = last[accept]
        active = active[~finished]
    return y


def _integrate_chunk(y0, offset, delta1, rho2, delta3, dt, abs_tol, rel_tol):
    return integrate_nodes(y0, delta1, rho2, delta3, dt, abs_tol, rel_tol, offset=int(offset[0]))


def reaction_step(
    state: StateField,
    params: ModelParams,
    dt: float,
    abs_tol: float = 1e-8,
    rel_tol: float = 1e-6,
    pool: Optional[WorkerPool] = None,
) -> StateField:
    """Avanza la reacción nodo a nodo de t a t + dt; la malla no cambia."""
    if not dt > 0:
        raise ValueError(f"dt debe ser > 0 (recibido {dt})")
    y0 = state.stack()
    offsets = np.arange(len(y0))
    args = (params.delta1, params.rho2, params.delta3, dt, abs_tol, rel_tol)
    if pool is None:
        y = integrate_nodes(y0, *args)
    else:
        y = np.concatenate(pool.map_chunks(_integrate_chunk, (y0, offsets), *args), axis=0)
    return StateField.from_stack(state.mesh, y, state.time + dt)
