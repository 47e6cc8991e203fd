"""
Triangulaciones conformes del cuadrado unidad: construcción, consultas geométricas,
marcado bulk y refinamiento rojo-verde-azul (RGB).

Convención: cada triángulo se guarda en sentido antihorario y su primera arista local
(t[0], t[1]) es la arista de refinamiento. Al construir la malla uniforme se elige la
arista más larga; los hijos heredan la arista según las reglas RGB.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Union

import numpy as np

from core.errors import ConfigError, DataError

# Arista local i de (a, b, c): 0 -> (a, b), 1 -> (b, c), 2 -> (c, a)
LOCAL_EDGES = np.array([[0, 1], [1, 2], [2, 0]])

GEOMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Mesh:
    """
    Triangulación conforme e inmutable de [0,1]².

    Una vez construida puede compartirse sin copia entre workers (solo lectura).
    """

    nodes: np.ndarray  # (N, 2)
    triangles: np.ndarray  # (T, 3)
    edges: np.ndarray  # (E, 2), índices ordenados
    edge_triangles: np.ndarray  # (E, 2), -1 si la arista es de frontera
    triangle_edges: np.ndarray  # (T, 3), índice global de cada arista local
    boundary_flags: np.ndarray  # (E,)
    mesh_id: str

    @classmethod
    def from_arrays(cls, nodes: np.ndarray, triangles: np.ndarray) -> "Mesh":
        """Construye la topología de aristas a partir de nodos y triángulos (sin reordenar)."""
        nodes = np.ascontiguousarray(nodes, dtype=float)
        triangles = np.ascontiguousarray(triangles, dtype=np.int64)
        if nodes.ndim != 2 or nodes.shape[1] != 2:
            raise DataError(f"Los nodos deben tener forma (N, 2), no {nodes.shape}")
        if triangles.ndim != 2 or triangles.shape[1] != 3:
            raise DataError(f"Los triángulos deben tener forma (T, 3), no {triangles.shape}")
        if triangles.size and (triangles.min() < 0 or triangles.max() >= len(nodes)):
            raise DataError("Hay triángulos que referencian nodos inexistentes")

        n_tri = len(triangles)
        pairs = np.sort(triangles[:, LOCAL_EDGES].reshape(-1, 2), axis=1)
        edges, inverse = np.unique(pairs, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)

        counts = np.bincount(inverse, minlength=len(edges))
        if counts.size and counts.max() > 2:
            raise DataError("Malla no conforme: una arista compartida por más de 2 triángulos")

        owners = np.repeat(np.arange(n_tri), 3)
        order = np.argsort(inverse, kind="stable")
        sorted_edges = inverse[order]
        sorted_owners = owners[order]
        first = np.ones(len(order), dtype=bool)
        first[1:] = sorted_edges[1:] != sorted_edges[:-1]

        edge_triangles = np.full((len(edges), 2), -1, dtype=np.int64)
        edge_triangles[sorted_edges[first], 0] = sorted_owners[first]
        edge_triangles[sorted_edges[~first], 1] = sorted_owners[~first]

        digest = hashlib.sha1(nodes.tobytes() + triangles.tobytes()).hexdigest()[:16]
        return cls(
            nodes=nodes,
            triangles=triangles,
            edges=edges.astype(np.int64),
            edge_triangles=edge_triangles,
            triangle_edges=inverse.reshape(n_tri, 3).astype(np.int64),
            boundary_flags=edge_triangles[:, 1] < 0,
            mesh_id=digest,
        )

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def refinement_edge(self) -> np.ndarray:
        return self.triangle_edges[:, 0]

    @cached_property
    def signed_areas(self) -> np.ndarray:
        p = self.nodes[self.triangles]
        d1 = p[:, 1] - p[:, 0]
        d2 = p[:, 2] - p[:, 0]
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])

    @property
    def areas(self) -> np.ndarray:
        return self.signed_areas

    @cached_property
    def edge_lengths(self) -> np.ndarray:
        d = self.nodes[self.edges[:, 1]] - self.nodes[self.edges[:, 0]]
        return np.hypot(d[:, 0], d[:, 1])

    @cached_property
    def diameters(self) -> np.ndarray:
        """H_T: la arista más larga de cada triángulo."""
        return self.edge_lengths[self.triangle_edges].max(axis=1)

    @cached_property
    def gradients(self) -> np.ndarray:
        """Gradientes (constantes) de las funciones base P1 en cada triángulo, forma (T, 3, 2)."""
        p = self.nodes[self.triangles]
        d1 = p[:, 1] - p[:, 0]
        d2 = p[:, 2] - p[:, 0]
        det = (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])[:, None]
        g1 = np.stack([d2[:, 1], -d2[:, 0]], axis=1) / det
        g2 = np.stack([-d1[:, 1], d1[:, 0]], axis=1) / det
        return np.stack([-(g1 + g2), g1, g2], axis=1)

    def edge_normals(self) -> np.ndarray:
        """Normal unitaria de cada arista, orientada hacia fuera de su primer triángulo adyacente."""
        a = self.nodes[self.edges[:, 0]]
        b = self.nodes[self.edges[:, 1]]
        d = b - a
        normals = np.stack([d[:, 1], -d[:, 0]], axis=1) / self.edge_lengths[:, None]
        owner = self.edge_triangles[:, 0]
        centroid = self.nodes[self.triangles[owner]].mean(axis=1)
        inward = np.einsum("ij,ij->i", normals, centroid - 0.5 * (a + b)) > 0
        normals[inward] *= -1.0
        return normals

    def validate(self) -> None:
        """Comprueba los invariantes de la malla; lanza DataError si alguno falla."""
        if self.n_triangles == 0:
            raise DataError("La malla no tiene triángulos")
        lo, hi = self.nodes.min(), self.nodes.max()
        if lo < -GEOMETRY_TOL or hi > 1.0 + GEOMETRY_TOL:
            raise DataError("Hay nodos fuera de [0,1]²")
        if np.any(self.signed_areas <= 0.0):
            bad = int(np.flatnonzero(self.signed_areas <= 0.0)[0])
            raise DataError(f"El triángulo {bad} no tiene área positiva (orientación horaria o degenerado)")
        back = self.edge_triangles[self.triangle_edges] == np.arange(self.n_triangles)[:, None, None]
        if not back.any(axis=2).all():
            raise DataError("Aristas y triángulos no son mutuamente consistentes")
        # Una arista con un solo vecino que no está sobre ∂Ω delata un nodo colgante
        b = self.edges[self.boundary_flags]
        pa, pb = self.nodes[b[:, 0]], self.nodes[b[:, 1]]
        on_side = np.zeros(len(b), dtype=bool)
        for axis in (0, 1):
            for value in (0.0, 1.0):
                on_side |= (np.abs(pa[:, axis] - value) < GEOMETRY_TOL) & (np.abs(pb[:, axis] - value) < GEOMETRY_TOL)
        if not on_side.all():
            raise DataError("Malla no conforme: arista interior con un único triángulo (nodo colgante)")


def _longest_edge_first(nodes: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    p = nodes[triangles]
    lengths = np.stack(
        [np.sum((p[:, (k + 1) % 3] - p[:, k]) ** 2, axis=1) for k in range(3)],
        axis=1,
    )
    k = np.argmax(lengths, axis=1)
    roll = (k[:, None] + np.arange(3)[None, :]) % 3
    return np.take_along_axis(triangles, roll, axis=1)


def make_uniform_mesh(n: int) -> Mesh:
    """
    Malla uniforme n×n de [0,1]²; cada cuadrado se parte por la diagonal
    inferior-izquierda -> superior-derecha. 2n² triángulos y (n+1)² nodos.
    """
    if int(n) != n or n < 1:
        raise ConfigError(f"La resolución de la malla debe ser un entero >= 1 (recibido {n})")
    n = int(n)
    coords = np.arange(n + 1) / n
    xx, yy = np.meshgrid(coords, coords)
    nodes = np.stack([xx.ravel(), yy.ravel()], axis=1)

    j, i = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    v00 = (j * (n + 1) + i).ravel()
    v10 = v00 + 1
    v01 = v00 + (n + 1)
    v11 = v01 + 1
    lower = np.stack([v00, v10, v11], axis=1)
    upper = np.stack([v00, v11, v01], axis=1)
    triangles = np.stack([lower, upper], axis=1).reshape(-1, 3)
    return Mesh.from_arrays(nodes, _longest_edge_first(nodes, triangles))


def bulk_mark(indicators, theta: float) -> np.ndarray:
    """
    Marcado bulk (Dörfler) por elementos.

    Devuelve, en orden ascendente, el conjunto mínimo de triángulos (voraz por η(T)²
    descendente, empates por índice ascendente) cuya suma de η² alcanza θ·η(Ω)².
    `indicators` puede ser un ErrorIndicators o directamente el vector η(T).
    """
    if not 0.0 <= theta <= 1.0:
        raise ConfigError(f"θ debe estar en [0, 1] (recibido {theta})")
    eta = np.asarray(getattr(indicators, "per_element", indicators), dtype=float)
    eta2 = eta**2
    if theta == 0.0 or eta2.size == 0 or not np.any(eta2 > 0.0):
        return np.empty(0, dtype=np.int64)
    if theta == 1.0:
        return np.flatnonzero(eta2 > 0.0)

    order = np.lexsort((np.arange(eta2.size), -eta2))
    cumulative = np.cumsum(eta2[order])
    target = theta * cumulative[-1]
    k = int(np.searchsorted(cumulative, target, side="left")) + 1
    return np.sort(order[:k])


def rgb_refine(mesh: Mesh, marked: Union[Iterable[int], np.ndarray]) -> Mesh:
    """
    Refinamiento rojo-verde-azul: los triángulos marcados se dividen en 4 (rojo) y el
    cierre marca la arista de refinamiento de todo triángulo con alguna arista marcada,
    de modo que los vecinos reciben bisecciones verdes (2 hijos) o azules (3 hijos).
    """
    if not isinstance(marked, np.ndarray):
        marked = list(marked)
    marked = np.unique(np.asarray(marked, dtype=np.int64))
    if marked.size == 0:
        return mesh
    if marked.min() < 0 or marked.max() >= mesh.n_triangles:
        raise ConfigError("Hay índices de triángulo marcados fuera de rango")

    te = mesh.triangle_edges
    edge_marked = np.zeros(mesh.n_edges, dtype=bool)
    edge_marked[te[marked].ravel()] = True
    while True:
        flags = edge_marked[te]
        closure = flags.any(axis=1) & ~flags[:, 0]
        if not closure.any():
            break
        edge_marked[te[closure, 0]] = True

    split = np.flatnonzero(edge_marked)
    midpoint_of = np.full(mesh.n_edges, -1, dtype=np.int64)
    midpoint_of[split] = mesh.n_nodes + np.arange(split.size)
    midpoints = 0.5 * (mesh.nodes[mesh.edges[split, 0]] + mesh.nodes[mesh.edges[split, 1]])
    nodes = np.vstack([mesh.nodes, midpoints])

    flags = edge_marked[te]
    mids = midpoint_of[te]
    a, b, c = mesh.triangles.T
    m1, m2, m3 = mids.T

    children = np.full((mesh.n_triangles, 4, 3), -1, dtype=np.int64)
    count = np.ones(mesh.n_triangles, dtype=np.int64)
    children[:, 0] = mesh.triangles

    green = flags[:, 0] & ~flags[:, 1] & ~flags[:, 2]
    blue_12 = flags[:, 0] & flags[:, 1] & ~flags[:, 2]
    blue_13 = flags[:, 0] & ~flags[:, 1] & flags[:, 2]
    red = flags.all(axis=1)

    def put(mask, *kids):
        for slot, kid in enumerate(kids):
            children[mask, slot] = np.stack([k[mask] for k in kid], axis=1)
        count[mask] = len(kids)

    put(green, (c, a, m1), (b, c, m1))
    put(blue_12, (c, a, m1), (m1, b, m2), (c, m1, m2))
    put(blue_13, (m1, c, m3), (a, m1, m3), (b, c, m1))
    put(red, (a, m1, m3), (m1, b, m2), (m3, m2, c), (m2, m3, m1))

    keep = np.arange(4)[None, :] < count[:, None]
    return Mesh.from_arrays(nodes, children[keep])


def write_mesh(mesh: Mesh, path: Path) -> Path:
    """Formato texto: cabecera `nodes N triangles T`, nodos `x y` (17 cifras) y triángulos."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"nodes {mesh.n_nodes} triangles {mesh.n_triangles}"]
    lines += [f"{x:.17g} {y:.17g}" for x, y in mesh.nodes]
    lines += [f"{i} {j} {k}" for i, j, k in mesh.triangles]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_mesh(path: Path) -> Mesh:
    path = Path(path)
    if not path.exists():
        raise DataError(f"No existe el fichero de malla: {path}")
    lines = path.read_text(encoding="utf-8").split("\n")
    header = lines[0].split()
    if len(header) != 4 or header[0] != "nodes" or header[2] != "triangles":
        raise DataError(f"Cabecera de malla inválida en {path}: '{lines[0]}'")
    try:
        n_nodes, n_tri = int(header[1]), int(header[3])
        nodes = np.array([[float(v) for v in line.split()] for line in lines[1 : 1 + n_nodes]], dtype=float)
        triangles = np.array(
            [[int(v) for v in line.split()] for line in lines[1 + n_nodes : 1 + n_nodes + n_tri]],
            dtype=np.int64,
        )
    except ValueError as e:
        raise DataError(f"Contenido de malla inválido en {path}: {e}") from e
    if nodes.shape != (n_nodes, 2) or triangles.shape != (n_tri, 3):
        raise DataError(f"El fichero {path} no coincide con su cabecera")
    mesh = Mesh.from_arrays(nodes, triangles)
    mesh.validate()
    return mesh
