"""Solid-angle lower bound for the weighted essential norm on the open book.

On every page face the region {(x1 - 1/2)^2 + (x3 + 1/2)^2 < 1/64} is an
ellipse in the page plane. From a point x on one such region the other
regions subtend solid angles Omega_m(x); the bound is

    min over sampled x in region j, all j, of  sum_{m != j} Omega_m(x) / (4 pi).
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from . import kernels
from .errors import InvalidParameterError
from .geometry3d import Face3D, OpenBook, open_book, pages

__all__ = ["PageDiscFamily", "page_discs", "page_sum_minimum", "weighted_lower_bound",
           "WeightedBound", "weighted_csv"]

CENTER = (0.5, -0.5)
RADIUS = 0.125
RIM_MARGIN = 1e-3


def _plane_lift(face: Face3D, x1, x3):
    """Points of the face plane with the given first and third coordinates."""
    n = face.normal
    if abs(n[1]) < 1e-8:
        raise InvalidParameterError(f"{face.label}: plane is parallel to the x2 axis")
    p0 = face.array[0]
    x2 = p0[1] - (n[0] * (x1 - p0[0]) + n[2] * (x3 - p0[2])) / n[1]
    return np.column_stack([x1, x2, x3])


def _inside_face(face: Face3D, pts, tol: float = 1e-12) -> np.ndarray:
    """Vertexwise point-in-convex-face test."""
    v = face.array
    n = face.normal
    e = np.roll(v, -1, axis=0) - v
    inward = np.cross(n, e)
    rel = pts[:, None, :] - v[None, :, :]
    return np.all(np.einsum("kij,ij->ki", rel, inward) >= -tol, axis=1)


@dataclass(frozen=True)
class PageDiscFamily:
    """Inscribed P-gons of the page ellipses, one per page face."""

    book: OpenBook = field(repr=False)
    P: int
    faces: tuple = field(repr=False)
    polygons: tuple = field(repr=False)

    def __len__(self) -> int:
        return len(self.polygons)

    def sample_points(self, j: int, G: int) -> np.ndarray:
        """G x G polar grid on region j, radii up to (1 - 1e-3) of the rim."""
        rho = RADIUS * (1 - RIM_MARGIN) * np.arange(1, G + 1) / G
        phi = 2 * np.pi * np.arange(G) / G
        R, F = np.meshgrid(rho, phi, indexing="ij")
        x1 = CENTER[0] + (R * np.cos(F)).ravel()
        x3 = CENTER[1] + (R * np.sin(F)).ravel()
        return _plane_lift(self.faces[j], x1, x3)


def page_discs(book: OpenBook, P: int = 360) -> PageDiscFamily:
    if P < 180:
        raise InvalidParameterError("P must be >= 180")
    faces = pages(book)
    phi = 2 * np.pi * np.arange(P) / P
    x1 = CENTER[0] + RADIUS * np.cos(phi)
    x3 = CENTER[1] + RADIUS * np.sin(phi)
    polys = []
    for f in faces:
        poly = _plane_lift(f, x1, x3)
        if not np.all(_inside_face(f, poly)):
            raise InvalidParameterError(f"disc polygon leaves {f.label}")
        polys.append(poly)
    return PageDiscFamily(book, int(P), tuple(faces), tuple(polys))


def page_sum_minimum(polygons: Sequence[np.ndarray], samples: Sequence[np.ndarray]) -> float:
    """min over j and samples[j] of sum_{m != j} |Omega_m| / (4 pi).

    With a single polygon the sum is empty and the result is 0.
    """
    best = np.inf
    for j, pts in enumerate(samples):
        total = np.zeros(len(pts))
        for m, poly in enumerate(polygons):
            if m != j:
                total += np.abs(kernels.solid_angles_batch(poly, pts))
        best = min(best, float(np.min(total)) / (4 * np.pi))
    return best


@dataclass(frozen=True)
class WeightedBound:
    theta: float
    n: int
    P: int
    G: int
    lower_bound: float

    @property
    def limit(self) -> float:
        return (2 * self.n - 1) / 4


def weighted_lower_bound(theta: float, n: int, P: int = 360, G: int = 20) -> WeightedBound:
    """Sampled minimum of the solid-angle functional over the page regions."""
    if G < 10:
        raise InvalidParameterError("G must be >= 10")
    fam = page_discs(open_book(theta, n), P)
    samples = [fam.sample_points(j, G) for j in range(len(fam))]
    return WeightedBound(float(theta), int(n), int(P), int(G),
                         page_sum_minimum(fam.polygons, samples))


def weighted_csv(rows: Sequence[WeightedBound]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta", "n", "P", "G", "lower_bound", "limit"])
    for r in rows:
        w.writerow([repr(r.theta), r.n, r.P, r.G, repr(r.lower_bound), repr(r.limit)])
    return buf.getvalue()
