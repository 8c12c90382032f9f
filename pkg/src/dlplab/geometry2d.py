"""Two-dimensional counterexample curves.

All curves are graphs of Lipschitz functions built from straight segments.
Every segment carries its unit normal explicitly, oriented so that the
second component is positive (the normal points "up", away from the
domain below the graph).
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .errors import InvalidParameterError

__all__ = [
    "Segment2D",
    "Polyline",
    "make_segment",
    "sawtooth",
    "gamma_beta",
    "omega2d_profile",
    "polyline_to_csv",
]


@dataclass(frozen=True)
class Segment2D:
    """Oriented segment from ``a`` to ``b`` with unit normal ``n``."""

    a: tuple
    b: tuple
    n: tuple
    index: int = 0

    @property
    def start(self) -> np.ndarray:
        return np.array(self.a, dtype=float)

    @property
    def end(self) -> np.ndarray:
        return np.array(self.b, dtype=float)

    @property
    def normal(self) -> np.ndarray:
        return np.array(self.n, dtype=float)

    @property
    def length(self) -> float:
        return float(np.hypot(self.b[0] - self.a[0], self.b[1] - self.a[1]))

    @property
    def slope(self) -> float:
        """Slope dx2/dx1 of the segment (inf for vertical segments)."""
        dx = self.b[0] - self.a[0]
        dy = self.b[1] - self.a[1]
        return np.inf if dx == 0 else dy / dx

    def point(self, s):
        """Points a + s (b - a) for parameter(s) s in [0, 1]."""
        s = np.asarray(s, dtype=float)[..., None]
        return self.start + s * (self.end - self.start)

    def scaled(self, kappa: float) -> "Segment2D":
        """Copy dilated by ``kappa`` about the origin (normal unchanged)."""
        a = (kappa * self.a[0], kappa * self.a[1])
        b = (kappa * self.b[0], kappa * self.b[1])
        return Segment2D(a, b, self.n, self.index)


@dataclass(frozen=True)
class Polyline:
    segments: tuple
    closed: bool = False

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def __getitem__(self, k):
        return self.segments[k]

    def by_index(self, m: int) -> Segment2D:
        for seg in self.segments:
            if seg.index == m:
                return seg
        raise KeyError(m)

    def scaled(self, kappa: float) -> "Polyline":
        return Polyline(tuple(s.scaled(kappa) for s in self.segments), self.closed)

    def vertices(self) -> np.ndarray:
        pts = [self.segments[0].a] + [s.b for s in self.segments]
        return np.array(pts, dtype=float)


def make_segment(a: Sequence[float], b: Sequence[float], index: int = 0) -> Segment2D:
    """Segment a -> b whose unit normal has positive second component.

    For a vertical segment the normal is taken with positive first component.
    """
    a = (float(a[0]), float(a[1]))
    b = (float(b[0]), float(b[1]))
    dx, dy = b[0] - a[0], b[1] - a[1]
    length = np.hypot(dx, dy)
    if length == 0.0:
        raise InvalidParameterError("segment endpoints coincide")
    nx, ny = -dy / length, dx / length
    if ny < 0 or (ny == 0 and nx < 0):
        nx, ny = -nx, -ny
    return Segment2D(a, b, (nx, ny), index)


def _check_positive(name: str, value: float) -> None:
    if not np.isfinite(value) or value <= 0:
        raise InvalidParameterError(f"{name} must be positive, got {value!r}")


def _check_beta(beta: float) -> None:
    if not (0.0 < beta < 1.0):
        raise InvalidParameterError(f"beta must lie in (0, 1), got {beta!r}")


def sawtooth(M: float, m_lo: int, m_hi: int) -> Polyline:
    """Segments Gamma_m, m_lo <= m <= m_hi, of the sawtooth graph of slope M.

    Odd m joins ((1-m)/M, 0) to (-m/M, 1); even m joins ((1-m)/M, 1) to
    (-m/M, 0). Consecutive indices therefore run leftwards along the graph.
    """
    _check_positive("M", M)
    if m_lo > m_hi:
        raise InvalidParameterError("m_lo must not exceed m_hi")
    segs = []
    for m in range(int(m_lo), int(m_hi) + 1):
        top0 = 0.0 if m % 2 else 1.0
        a = ((1 - m) / M, top0)
        b = (-m / M, 1.0 - top0)
        segs.append(make_segment(a, b, m))
    return Polyline(tuple(segs))


def gamma_beta(beta: float, depth: int) -> Polyline:
    """Segments Gamma_1..Gamma_{2 depth} of the self-similar curve.

    Tooth k = 1, 2, ... occupies [beta^k, beta^{k-1}]: Gamma_{2k-1} joins
    (beta^{k-1}, 0) to the peak (beta^{k-1}(1+beta)/2, beta^{k-1}(1+beta)/2)
    and Gamma_{2k} joins that peak to (beta^k, 0), so the segments form one
    connected graph and Gamma_{m+2} = beta Gamma_m.
    """
    _check_beta(beta)
    if depth < 1:
        raise InvalidParameterError("depth must be >= 1")
    segs = []
    for k in range(1, int(depth) + 1):
        s = beta ** (k - 1)
        peak = (s * (1 + beta) / 2, s * (1 + beta) / 2)
        segs.append(make_segment((s, 0.0), peak, 2 * k - 1))
        segs.append(make_segment(peak, (beta ** k, 0.0), 2 * k))
    return Polyline(tuple(segs))


def block_heights(M: float, beta: float, j_max: int) -> np.ndarray:
    """Peak heights gamma_j = M (beta^{j-1} - beta^j) / (2j), j = 1..j_max."""
    j = np.arange(1, j_max + 1, dtype=float)
    return M * (beta ** (j - 1) - beta ** j) / (2 * j)


def omega2d_profile(M: float, beta: float, j_max: int) -> Polyline:
    """Profile of the two-dimensional domain built from scaled sawtooth blocks.

    Block j occupies [beta^j, beta^{j-1}] and is the first 2j sawtooth
    segments of slope M, scaled by gamma_j and translated to (beta^{j-1}, 0).
    Segments are indexed consecutively from 1, moving towards the origin.
    """
    _check_positive("M", M)
    _check_beta(beta)
    if j_max < 1:
        raise InvalidParameterError("j_max must be >= 1")
    gam = block_heights(M, beta, j_max)
    segs: List[Segment2D] = []
    idx = 1
    for j in range(1, j_max + 1):
        x0 = beta ** (j - 1)
        for s in sawtooth(M, 1, 2 * j):
            a = (x0 + gam[j - 1] * s.a[0], gam[j - 1] * s.a[1])
            b = (x0 + gam[j - 1] * s.b[0], gam[j - 1] * s.b[1])
            if j > 1 and s.index == 1:
                # snap onto the previous block's end so vertices match exactly
                a = segs[-1].b
            segs.append(make_segment(a, b, idx))
            idx += 1
    return Polyline(tuple(segs))


def polyline_to_csv(poly: Polyline, header: Sequence[str] = ()) -> str:
    """CSV text with one row per segment: index, ax, ay, bx, by, nx, ny."""
    buf = io.StringIO()
    for line in header:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "ax", "ay", "bx", "by", "nx", "ny"])
    for s in poly:
        w.writerow([s.index, *(repr(float(v)) for v in (*s.a, *s.b, *s.n))])
    return buf.getvalue()
