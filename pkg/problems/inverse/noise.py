"""
Ruido gaussiano reproducible.

Generador: numpy.random.Generator sobre Philox (4×64 bits, basado en contador),
con semillas derivadas por SeedSequence. La secuencia es la misma en cualquier
plataforma para una semilla dada.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from core.errors import ConfigError
from problems.adjoint.data_models import ObservedSeries

BIT_GENERATOR = "Philox"


def make_rng(seed) -> np.random.Generator:
    """`seed` puede ser un entero o un SeedSequence."""
    return np.random.Generator(np.random.Philox(seed))


def spawn_seeds(base_seed: int, n: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(base_seed).spawn(n)


def add_noise(data: ObservedSeries, sigma: float, seed) -> ObservedSeries:
    """Suma N(0, σ²) i.i.d. a cada valor nodal de cada nivel temporal."""
    if not sigma >= 0:
        raise ConfigError(f"σ debe ser >= 0 (recibido {sigma})")
    if sigma == 0:
        return replace(data, values=data.values.copy())
    noise = make_rng(seed).standard_normal(data.values.shape)
    return replace(data, values=data.values + sigma * noise)


def draw_starts(bounds: tuple[float, float], n: int, seed) -> np.ndarray:
    """Puntos iniciales uniformes en U_ad."""
    lo, hi = bounds
    return make_rng(seed).uniform(lo, hi, size=n)


def derive_seed(base_seed: int, index: int) -> int:
    """Semilla entera independiente para la celda `index` de un experimento."""
    return int(np.random.SeedSequence([base_seed, index]).generate_state(1, dtype=np.uint64)[0])
