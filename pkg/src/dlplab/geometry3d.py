"""Open-book polyhedra and extruded strip panels.

The open book with ``n`` pages and opening angle ``theta`` has top vertices
y^1..y^{3n} on the plane x3 = 0 and bottom vertices z^1..z^{3n} on x3 = -1.
Side face k is the planar quadrilateral with corners y^k, y^{k+1}, z^{k+1},
z^k (indices mod 3n); faces 3j-2, 3j-1, 3j are the front, end and back of
page j.  The top face is n thin triangles meeting at the origin and the
bottom face is the polygon z^1..z^{3n}.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .errors import InvalidParameterError
from .geometry2d import Segment2D, sawtooth

__all__ = ["Face3D", "OpenBook", "StripPanel", "open_book", "pages",
           "strip_panels", "book_parameters", "star_certificate",
           "book_to_obj", "book_vertices_csv", "polygon_normal"]


def polygon_normal(verts: np.ndarray) -> np.ndarray:
    """Unit right-hand-rule normal of a planar polygon (Newell's method)."""
    v = np.asarray(verts, dtype=float)
    w = np.roll(v, -1, axis=0)
    n = np.array([
        np.sum((v[:, 1] - w[:, 1]) * (v[:, 2] + w[:, 2])),
        np.sum((v[:, 2] - w[:, 2]) * (v[:, 0] + w[:, 0])),
        np.sum((v[:, 0] - w[:, 0]) * (v[:, 1] + w[:, 1])),
    ])
    nn = np.linalg.norm(n)
    if nn == 0:
        return n
    return n / nn


@dataclass(frozen=True)
class Face3D:
    """Planar polygon with unit normal given by the right-hand rule."""

    vertices: tuple
    n: tuple
    label: str = ""

    @classmethod
    def from_vertices(cls, verts, label: str = "") -> "Face3D":
        v = np.asarray(verts, dtype=float)
        return cls(tuple(map(tuple, v)), tuple(polygon_normal(v)), label)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.vertices, dtype=float)

    @property
    def normal(self) -> np.ndarray:
        return np.array(self.n, dtype=float)

    @property
    def area(self) -> float:
        v = self.array
        w = np.roll(v, -1, axis=0)
        return 0.5 * float(np.linalg.norm(np.cross(v, w).sum(axis=0)))

    @property
    def centroid(self) -> np.ndarray:
        return self.array.mean(axis=0)

    def planarity_residual(self) -> float:
        """Largest distance of a vertex to the least-squares plane."""
        v = self.array
        c = v.mean(axis=0)
        _, s, vt = np.linalg.svd(v - c)
        return float(np.max(np.abs((v - c) @ vt[-1])))

    def is_convex(self) -> bool:
        v = self.array
        e = np.roll(v, -1, axis=0) - v
        turn = np.cross(e, np.roll(e, -1, axis=0)) @ self.normal
        return bool(np.all(turn >= -1e-14 * np.max(np.abs(v)) ** 2))

    def bilinear(self, u, v):
        """Bilinear map of the unit square onto a quadrilateral face.

        Returns points (k, 3) and area elements (k,).
        """
        p = self.array
        if len(p) != 4:
            raise InvalidParameterError("bilinear map needs a quadrilateral")
        u = np.asarray(u, dtype=float)[:, None]
        v = np.asarray(v, dtype=float)[:, None]
        x = (1 - u) * (1 - v) * p[0] + u * (1 - v) * p[1] + u * v * p[2] + (1 - u) * v * p[3]
        xu = (1 - v) * (p[1] - p[0]) + v * (p[2] - p[3])
        xv = (1 - u) * (p[3] - p[0]) + u * (p[2] - p[1])
        jac = np.linalg.norm(np.cross(xu, xv), axis=1)
        return x, jac

    def scaled(self, kappa: float) -> "Face3D":
        return Face3D(tuple(map(tuple, kappa * self.array)), self.n, self.label)

    def sample_points(self, k: int = 6) -> np.ndarray:
        """Interior barycentric grid on the fan triangles (k=6: 10 per triangle)."""
        v = self.array
        bary = [(i, j, k - i - j) for i in range(1, k) for j in range(1, k - i)]
        bary = np.array(bary, dtype=float) / k
        out = []
        for t in range(1, len(v) - 1):
            tri = np.array([v[0], v[t], v[t + 1]])
            if np.linalg.norm(np.cross(tri[1] - tri[0], tri[2] - tri[0])) == 0:
                continue
            out.append(bary @ tri)
        return np.vstack(out)


@dataclass(frozen=True)
class OpenBook:
    theta: float
    n_pages: int
    theta_n: float
    eta: float
    r1: float
    r2: float
    top_vertices: np.ndarray = field(repr=False)
    bottom_vertices: np.ndarray = field(repr=False)
    faces: tuple = field(repr=False)
    star_center: np.ndarray = field(repr=False)
    star_gamma: float = 0.0

    def side_face(self, k: int) -> Face3D:
        """Side face Gamma_k, 1 <= k <= 3n."""
        return self.faces[k - 1]

    @property
    def top(self) -> Face3D:
        return self.faces[-2]

    @property
    def bottom(self) -> Face3D:
        return self.faces[-1]


def book_parameters(theta: float, n: int) -> Tuple[float, float, float, float]:
    """(theta_n, eta, r1, r2) for opening angle theta and n pages."""
    theta_n = theta / (2 * n - 1)
    eta = theta * theta_n / (4 * np.pi)
    r1 = np.cos(theta_n / 2 + eta) / np.cos(theta_n / 2)
    r2 = np.sin(eta) / np.sin(theta_n / 2)
    return theta_n, eta, r1, r2


def _unit(phi: float, z: float = 0.0, r: float = 1.0) -> np.ndarray:
    return np.array([r * np.cos(phi), r * np.sin(phi), z])


def star_certificate(faces: Sequence[Face3D], x0: np.ndarray) -> float:
    """Minimum of (x - x0).n(x) over interior sample points of all faces."""
    g = np.inf
    for f in faces:
        pts = f.sample_points()
        g = min(g, float(np.min((pts - x0) @ f.normal)))
    return g


def open_book(theta: float, n_pages: int) -> OpenBook:
    """Open-book polyhedron with ``n_pages`` pages and opening angle ``theta``."""
    if not (0.0 < theta <= np.pi):
        raise InvalidParameterError(f"theta must lie in (0, pi], got {theta!r}")
    if int(n_pages) != n_pages or n_pages < 2:
        raise InvalidParameterError(f"n_pages must be an integer >= 2, got {n_pages!r}")
    n = int(n_pages)
    tn, eta, r1, r2 = book_parameters(theta, n)

    y = np.zeros((3 * n, 3))
    z = np.zeros((3 * n, 3))
    for j in range(1, n + 1):
        y[3 * j - 2] = _unit((2 * j - 2) * tn)
        y[3 * j - 1] = _unit((2 * j - 1) * tn)
    z[0] = (0.0, 0.0, -1.0)
    z[1] = (r1, 0.0, -1.0)
    for j in range(1, n):
        z[3 * j - 1] = _unit((2 * j - 1) * tn + eta, -1.0)
    for j in range(2, n + 1):
        z[3 * j - 3] = _unit((2 * j - 2.5) * tn, -1.0, r2)
        z[3 * j - 2] = _unit((2 * j - 2) * tn - eta, -1.0)
    z[3 * n - 1] = _unit(theta, -1.0, r1)

    faces: List[Face3D] = []
    for k in range(3 * n):
        k1 = (k + 1) % (3 * n)
        faces.append(Face3D.from_vertices([y[k1], y[k], z[k], z[k1]], f"Gamma_{k + 1}"))
    top = []
    for j in range(n):
        top.extend([y[3 * j], y[3 * j + 1], y[3 * j + 2]])
    faces.append(Face3D(tuple(map(tuple, top)), (0.0, 0.0, 1.0), "Gamma_0"))
    faces.append(Face3D(tuple(map(tuple, z[::-1])), (0.0, 0.0, -1.0), "Gamma_-1"))

    # star centre near the spine on the bisector of the book; start from
    # eps = 0.01 and halve until the sampled certificate is positive
    eps, gamma, x0 = 0.01, -np.inf, None
    for _ in range(60):
        rho = np.sqrt(2.0) * eps
        x0 = np.array([rho * np.cos(theta / 2), rho * np.sin(theta / 2), eps - 1.0])
        gamma = star_certificate(faces, x0)
        if gamma > 0:
            break
        eps *= 0.5
    if not gamma > 0:
        raise InvalidParameterError(
            f"star-shapedness certificate failed (min (x-x0).n = {gamma:g})")
    return OpenBook(float(theta), n, tn, eta, r1, r2, y, z, tuple(faces), x0, gamma)


def pages(book: OpenBook) -> List[Face3D]:
    """Page faces in order: front of page j is entry 2j-1, back is 2j."""
    out = []
    for j in range(1, book.n_pages + 1):
        front = book.side_face(3 * j - 2)
        back = book.side_face(3 * j)
        out.append(Face3D(front.vertices, front.n, f"page_{2 * j - 1}"))
        out.append(Face3D(back.vertices, back.n, f"page_{2 * j}"))
    return out


@dataclass(frozen=True)
class StripPanel:
    """Extrusion (-a, a) x base of a sawtooth segment along the new first axis."""

    base: Segment2D
    a: float

    @property
    def area(self) -> float:
        return 2.0 * self.a * self.base.length

    @property
    def normal(self) -> np.ndarray:
        return np.array([0.0, *self.base.n])

    def face(self) -> Face3D:
        (p, q), (r, s) = self.base.a, self.base.b
        corners = np.array([[-self.a, p, q], [self.a, p, q], [self.a, r, s], [-self.a, r, s]])
        if polygon_normal(corners) @ self.normal < 0:
            corners = corners[::-1]
        return Face3D(tuple(map(tuple, corners)), tuple(self.normal),
                      f"strip_{self.base.index}")


def strip_panels(M: float, a: float, count: int) -> List[StripPanel]:
    """Strip panels over sawtooth segments Gamma_1..Gamma_count."""
    if not (M > 0 and a > 0):
        raise InvalidParameterError("M and a must be positive")
    if count < 1:
        raise InvalidParameterError("count must be >= 1")
    return [StripPanel(seg, float(a)) for seg in sawtooth(M, 1, count)]


def book_vertices_csv(book: OpenBook) -> str:
    buf = io.StringIO()
    buf.write("kind,index,x1,x2,x3\n")
    for name, arr in (("y", book.top_vertices), ("z", book.bottom_vertices)):
        for k, p in enumerate(arr, start=1):
            buf.write(f"{name},{k},{p[0]!r},{p[1]!r},{p[2]!r}\n")
    return buf.getvalue()


def book_to_obj(book: OpenBook) -> str:
    """Wavefront OBJ text. The top face is written as its n triangles."""
    verts: List[tuple] = []
    index = {}

    def vid(p):
        key = tuple(np.round(p, 15))
        if key not in index:
            verts.append(p)
            index[key] = len(verts)
        return index[key]

    lines = []
    for f in book.faces[:-2]:
        lines.append("f " + " ".join(str(vid(p)) for p in f.array))
    top = book.top.array
    for j in range(book.n_pages):
        lines.append("f " + " ".join(str(vid(p)) for p in top[3 * j:3 * j + 3]))
    lines.append("f " + " ".join(str(vid(p)) for p in book.bottom.array))
    head = [f"# open book theta={book.theta!r} n={book.n_pages}"]
    head += [f"v {p[0]!r} {p[1]!r} {p[2]!r}" for p in verts]
    return "\n".join(head + lines) + "\n"
