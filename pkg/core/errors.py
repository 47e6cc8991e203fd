"""
Errores específicos del solver y de los comandos para controlar el flujo.

La CLI traduce cada familia a un código de salida: ConfigError/DataError -> 1,
NumericalError -> 2. Los errores con contexto se reconstruyen con pickle, así que
cruzan intactos el pool de procesos.
"""

from __future__ import annotations

from typing import Optional


class AcidFrontError(Exception):
    """Raíz de todos los errores propios del proyecto."""


class ConfigError(AcidFrontError, ValueError):
    """Configuración inválida o uso incorrecto de la CLI."""


class DataError(AcidFrontError, ValueError):
    """Ficheros de entrada ausentes, mal formados o con un número de nodos incorrecto."""


class GridMismatchError(DataError):
    """Los datos no viven en la malla gruesa o en la rejilla temporal configuradas."""


class NumericalError(AcidFrontError, RuntimeError):
    """Fallo numérico (solver lineal, integrador, localización de puntos...)."""


class LinearSolverError(NumericalError):
    """
    El método de Krylov no alcanzó la tolerancia dentro del límite de iteraciones.
    Indica qué sistema falló y, si aplica, en qué nivel temporal.
    """

    def __init__(self, system: str, detail: str = "", time_level: Optional[int] = None):
        self.system = system
        self.detail = detail
        self.time_level = time_level
        where = f" (nivel temporal {time_level})" if time_level is not None else ""
        super().__init__(f"El sistema '{system}' no convergió{where}: {detail}".rstrip(": "))

    def __reduce__(self):
        return type(self), (self.system, self.detail, self.time_level)


class StepSizeUnderflowError(NumericalError):
    """El paso adaptativo de RK45 colapsó en un nodo."""

    def __init__(self, node: int, step: float):
        self.node = node
        self.step = step
        super().__init__(f"Paso de RK45 demasiado pequeño ({step:.3e}) en el nodo {node}")

    def __reduce__(self):
        return type(self), (self.node, self.step)


class PointLocationError(NumericalError):
    """Un nodo destino cae fuera de todos los triángulos de la malla origen."""

    def __init__(self, point: tuple[float, float], distance: float):
        self.point = point
        self.distance = distance
        super().__init__(
            f"El punto ({point[0]:.17g}, {point[1]:.17g}) no pertenece a la malla origen "
            f"(coordenada baricéntrica mínima {distance:.3e})"
        )

    def __reduce__(self):
        return type(self), (self.point, self.distance)


class EvaluationError(NumericalError):
    """Falló la evaluación de J̃ (problema directo o adjunto) para un δ₁ concreto."""

    def __init__(self, delta1: float, cause: Exception):
        self.delta1 = delta1
        self.cause = cause
        super().__init__(f"Evaluación fallida en δ₁ = {delta1:.17g}: {cause}")

    def __reduce__(self):
        return type(self), (self.delta1, self.cause)
