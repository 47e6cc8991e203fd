"""
Pool de procesos para el trabajo paralelo por nodos y por ejecuciones independientes.

Los bloques son contiguos y los resultados se concatenan en orden, así que la salida
no depende del número de workers.
"""

from __future__ import annotations

import concurrent.futures
import logging
from typing import Any, Callable, Optional, Sequence

import numpy as np

logger = logging.getLogger("acidfront.workers")

# Por debajo de este número de elementos no compensa repartir
MIN_PARALLEL_ITEMS = 4096


class WorkerPool:
    """
    Envoltorio de ProcessPoolExecutor con reparto en bloques contiguos.

    Con workers=1 todo se ejecuta en el proceso actual sin crear el pool.
    """

    def __init__(self, workers: int = 1, min_parallel_items: int = MIN_PARALLEL_ITEMS):
        if workers < 1:
            raise ValueError(f"workers debe ser >= 1 (recibido {workers})")
        self.workers = workers
        self.min_parallel_items = min_parallel_items
        self._executor: Optional[concurrent.futures.ProcessPoolExecutor] = None

    def __enter__(self) -> "WorkerPool":
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        self.close()

    def _get_executor(self) -> concurrent.futures.ProcessPoolExecutor:
        if self._executor is None:
            logger.debug(f"Arrancando pool de {self.workers} procesos")
            self._executor = concurrent.futures.ProcessPoolExecutor(max_workers=self.workers)
        return self._executor

    def close(self) -> None:
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None

    def map_chunks(self, fn: Callable[..., Any], arrays: Sequence[np.ndarray], *args: Any) -> list[Any]:
        """
        Llama a `fn(*bloques, *args)` sobre bloques contiguos de las filas de `arrays`
        y devuelve la lista de resultados en el orden de los bloques.
        """
        n = len(arrays[0])
        if self.workers == 1 or n < self.min_parallel_items:
            return [fn(*arrays, *args)]

        bounds = np.linspace(0, n, self.workers + 1).astype(np.int64)
        executor = self._get_executor()
        futures = [
            executor.submit(fn, *(a[lo:hi] for a in arrays), *args)
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        return [f.result() for f in futures]

    def map(self, fn: Callable[[Any], Any], items: Sequence[Any]) -> list[concurrent.futures.Future]:
        """
        Lanza `fn(item)` por elemento. Devuelve futuros ya resueltos o pendientes en el
        orden de `items`; quien llama decide cómo tratar las excepciones de cada uno.
        """
        if self.workers == 1 or len(items) <= 1:
            done = []
            for item in items:
                future: concurrent.futures.Future = concurrent.futures.Future()
                try:
                    future.set_result(fn(item))
                except Exception as e:
                    future.set_exception(e)
                done.append(future)
            return done
        executor = self._get_executor()
        return [executor.submit(fn, item) for item in items]
