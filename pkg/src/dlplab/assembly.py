"""Galerkin matrices of the double-layer operator for piecewise-constant
orthonormal bases psi_m = |Gamma_m|^{-1/2} 1_{Gamma_m}.

For every geometry in this package the matrix factorises as
D_N = B_N * d (entrywise), with B_N the sign matrix of ``b_matrix`` and
d_{jm} >= 0 an average of the angle (2-d) or solid angle (3-d) subtended
by panel m over panel j.  The ``signed_matrix_*`` routines assemble D_N
from the signed kernel instead, which gives an independent check of the
sign pattern.
"""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from . import kernels
from .errors import InvalidParameterError
from .geometry2d import Segment2D, gamma_beta, sawtooth
from .geometry3d import Face3D, OpenBook, pages
from .quadrature import QuadRule, adaptive_1d, adaptive_square, graded_breakpoints

__all__ = [
    "GalerkinMatrix", "b_matrix", "thread_count",
    "pair_coefficient_2d", "d_matrix_2d", "signed_matrix_2d",
    "d_coeffs_gammabeta", "galerkin_gammabeta", "a_beta", "a_beta_crossing",
    "sawtooth_coeffs", "galerkin_sawtooth",
    "d_coeffs_strip", "galerkin_strip",
    "pair_coefficient_3d", "d_matrix_3d", "signed_matrix_3d", "galerkin_openbook",
    "TOL_2D", "TOL_3D", "RULE_2D", "RULE_3D",
]

TOL_2D = 1e-8
TOL_3D = 1e-6
RULE_2D = QuadRule(order=8, grading=0.15, levels=8)
RULE_3D = QuadRule(order=8, grading=0.15, levels=4, max_panels=200000)


def thread_count() -> int:
    """Worker threads for entry-level parallelism (env DLPLAB_THREADS, default 1)."""
    try:
        return max(1, int(os.environ.get("DLPLAB_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn: Callable, items: Sequence) -> List:
    nt = thread_count()
    if nt == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=nt) as ex:
        return list(ex.map(fn, items))


@dataclass(frozen=True)
class GalerkinMatrix:
    entries: np.ndarray
    geometry_tag: str = "Custom"
    params: Dict = field(default_factory=dict)
    quad_report: float = 0.0

    @property
    def N(self) -> int:
        return self.entries.shape[0]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# geometry_tag={self.geometry_tag}\n")
        for k, v in self.params.items():
            buf.write(f"# {k}={v}\n")
        buf.write(f"# quad_report={self.quad_report!r}\n")
        w = csv.writer(buf, lineterminator="\n")
        for row in self.entries:
            w.writerow([repr(float(v)) for v in row])
        return buf.getvalue()


def b_matrix(N: int) -> GalerkinMatrix:
    """Sign matrix (B_N)_{jm} = (-1)^{m+1} sign(m - j), indices from 1."""
    if N < 1:
        raise InvalidParameterError("N must be >= 1")
    j = np.arange(1, N + 1)[:, None]
    m = np.arange(1, N + 1)[None, :]
    B = np.where(m % 2 == 1, 1, -1) * np.sign(m - j)
    return GalerkinMatrix(B.astype(float), "Custom", {"N": N, "kind": "B"}, 0.0)


# ---------------------------------------------------------------- 2-d panels

def _shared_ends(seg_j: Segment2D, seg_m: Segment2D) -> Tuple[bool, bool]:
    scale = max(seg_j.length, seg_m.length)
    ends = (seg_m.start, seg_m.end)

    def touches(p):
        return any(np.linalg.norm(p - q) <= 1e-12 * scale for q in ends)

    return touches(seg_j.start), touches(seg_j.end)


def pair_coefficient_2d(seg_j: Segment2D, seg_m: Segment2D, tol: float = TOL_2D,
                        rule: QuadRule = RULE_2D, signed: bool = False) -> Tuple[float, float]:
    """(1 / (2 pi sqrt(|G_j||G_m|))) * integral over G_j of the angle of G_m.

    With ``signed`` the angle carries the sign of (x - a_m).n_m, so the
    value is the Galerkin entry of the signed kernel. Returns (value, err).
    """
    if seg_j is seg_m or (seg_j.a == seg_m.a and seg_j.b == seg_m.b):
        return 0.0, 0.0
    lj, lm = seg_j.length, seg_m.length
    c = math.sqrt(lj / lm) / (2 * math.pi)
    a, b, nm = seg_m.start, seg_m.end, seg_m.normal
    p0, dp = seg_j.start, seg_j.end - seg_j.start

    def f(s):
        x = p0 + s[:, None] * dp
        val = kernels._impl.angles_batch(a[0], a[1], b[0], b[1], x)
        if signed:
            val = val * np.sign((x - a) @ nm)
        return c * val

    lo, hi = _shared_ends(seg_j, seg_m)
    bp = graded_breakpoints(rule, lo, hi)
    return adaptive_1d(f, bp, tol, rule)


def _matrix_2d(segs: Sequence[Segment2D], tol, rule, signed):
    N = len(segs)
    pairs = [(j, m) for j in range(N) for m in range(N) if j != m]
    res = _pmap(lambda jm: pair_coefficient_2d(segs[jm[0]], segs[jm[1]], tol, rule, signed), pairs)
    out = np.zeros((N, N))
    err = 0.0
    for (j, m), (v, e) in zip(pairs, res):
        out[j, m] = v
        err = max(err, e)
    return out, err


def d_matrix_2d(segs: Sequence[Segment2D], tol: float = TOL_2D,
                rule: QuadRule = RULE_2D) -> Tuple[np.ndarray, float]:
    """Unsigned coefficients d_{jm} for all pairs; returns (d, max error)."""
    return _matrix_2d(segs, tol, rule, False)


def signed_matrix_2d(segs: Sequence[Segment2D], tol: float = TOL_2D,
                     rule: QuadRule = RULE_2D) -> Tuple[np.ndarray, float]:
    """Galerkin matrix assembled from the signed kernel; returns (D, max error)."""
    return _matrix_2d(segs, tol, rule, True)


def _gb_segments(beta, N, scale):
    segs = list(gamma_beta(beta, (N + 1) // 2))[:N]
    return [s.scaled(scale) for s in segs] if scale != 1.0 else segs


def d_coeffs_gammabeta(beta: float, N: int, tol: float = TOL_2D, scale: float = 1.0,
                       rule: QuadRule = RULE_2D, return_error: bool = False):
    """Coefficients d_{jm}, 1 <= j, m <= N, for the self-similar curve."""
    if N < 2:
        raise InvalidParameterError("N must be >= 2")
    d, err = d_matrix_2d(_gb_segments(beta, N, scale), tol, rule)
    return (d, err) if return_error else d


def galerkin_gammabeta(beta: float, N: int, tol: float = TOL_2D, scale: float = 1.0,
                       rule: QuadRule = RULE_2D) -> GalerkinMatrix:
    d, err = d_coeffs_gammabeta(beta, N, tol, scale, rule, return_error=True)
    return GalerkinMatrix(b_matrix(N).entries * d, "GammaBeta",
                          {"beta": beta, "N": N, "tol": tol, "scale": scale}, err)


def a_beta(beta: float, tol: float = TOL_2D) -> float:
    """(1/2) sqrt((d12 + d21)^2 + (d23 + d32)^2) on the first three segments."""
    from .matrixanalysis import a_of_beta
    return a_of_beta(d_coeffs_gammabeta(beta, 3, tol))


def a_beta_crossing(level: float = 0.5, lo: float = 0.5, hi: float = 0.999,
                    xtol: float = 1e-6, tol: float = TOL_2D) -> float:
    """Bisection for a_beta(beta) = level on [lo, hi]."""
    from scipy.optimize import bisect
    f = lambda b: a_beta(b, tol) - level
    if f(lo) * f(hi) > 0:
        raise InvalidParameterError("level is not bracketed by [lo, hi]")
    return float(bisect(f, lo, hi, xtol=xtol))


def sawtooth_coeffs(M: float, L: int, tol: float = TOL_2D, scale: float = 1.0,
                    rule: QuadRule = RULE_2D, return_error: bool = False):
    """Sawtooth coefficients d'_0 = 0, d'_1, ..., d'_L.

    d'_l is the mean over Gamma_l of the angle subtended by Gamma_0,
    divided by 2 pi.
    """
    if L < 0:
        raise InvalidParameterError("L must be >= 0")
    segs = [s.scaled(scale) for s in sawtooth(M, 0, L)]
    res = _pmap(lambda l: pair_coefficient_2d(segs[l], segs[0], tol, rule), list(range(1, L + 1)))
    d = np.zeros(L + 1)
    err = 0.0
    for l, (v, e) in enumerate(res, start=1):
        d[l] = v
        err = max(err, e)
    return (d, err) if return_error else d


def galerkin_sawtooth(M: float, N: int, tol: float = TOL_2D, scale: float = 1.0,
                      rule: QuadRule = RULE_2D, full: bool = False) -> GalerkinMatrix:
    """D_N on sawtooth segments Gamma_1..Gamma_N.

    By default the coefficients d'_{|j-m|} are computed once per diagonal;
    ``full=True`` integrates every pair (used to test the Toeplitz structure).
    """
    if N < 1:
        raise InvalidParameterError("N must be >= 1")
    if full:
        segs = [s.scaled(scale) for s in sawtooth(M, 1, N)]
        d, err = d_matrix_2d(segs, tol, rule)
    else:
        dl, err = sawtooth_coeffs(M, N - 1, tol, scale, rule, return_error=True)
        idx = np.abs(np.arange(N)[:, None] - np.arange(N)[None, :])
        d = dl[idx]
    return GalerkinMatrix(b_matrix(N).entries * d, "Sawtooth",
                          {"M": M, "N": N, "tol": tol, "scale": scale, "full": full}, err)


# ------------------------------------------------------------ strip panels

def _strip_correction(seg_l: Segment2D, seg_0: Segment2D, a: float, tol: float,
                      rule: QuadRule) -> Tuple[float, float]:
    ll, l0 = seg_l.length, seg_0.length
    x0, dx = seg_l.start, seg_l.end - seg_l.start
    y0, dy = seg_0.start, seg_0.end - seg_0.start
    n0 = seg_0.normal
    c = l0 / (2 * math.pi)
    four_a2 = 4.0 * a * a

    def f(u, v):
        x = x0 + u[:, None] * dx
        y = y0 + v[:, None] * dy
        r = x - y
        r2 = np.einsum("ki,ki->k", r, r)
        h = np.abs(r @ n0)
        return c * h / (four_a2 * (1.0 + np.sqrt(1.0 + r2 / four_a2)))

    bp = np.linspace(0.0, 1.0, rule.panels + 1)
    return adaptive_square(f, bp, bp, tol, rule)


def d_coeffs_strip(M: float, a: float, L: int, tol: float = TOL_2D,
                   rule: QuadRule = RULE_2D, return_error: bool = False):
    """Strip coefficients d'_{0,a} = 0, d'_{1,a}, ..., d'_{L,a}.

    Computed as d'_l plus the smooth correction from the factor
    sqrt(1 + |x-y|^2 / (4 a^2)) - 1, integrated by tensor quadrature.
    """
    if not (M > 0 and a > 0):
        raise InvalidParameterError("M and a must be positive")
    base, err = sawtooth_coeffs(M, L, tol, 1.0, rule, return_error=True)
    segs = list(sawtooth(M, 0, L))
    res = _pmap(lambda l: _strip_correction(segs[l], segs[0], a, tol, rule), list(range(1, L + 1)))
    d = base.copy()
    for l, (v, e) in enumerate(res, start=1):
        d[l] += v
        err = max(err, e)
    return (d, err) if return_error else d


def galerkin_strip(M: float, a: float, N: int, tol: float = TOL_2D,
                   rule: QuadRule = RULE_2D) -> GalerkinMatrix:
    dl, err = d_coeffs_strip(M, a, N - 1, tol, rule, return_error=True)
    idx = np.abs(np.arange(N)[:, None] - np.arange(N)[None, :])
    return GalerkinMatrix(b_matrix(N).entries * dl[idx], "Strip",
                          {"M": M, "a": a, "N": N, "tol": tol}, err)


# ------------------------------------------------------------- 3-d panels

def pair_coefficient_3d(face_j: Face3D, face_m: Face3D, tol: float = TOL_3D,
                        rule: QuadRule = RULE_3D, signed: bool = False) -> Tuple[float, float]:
    """(1 / (4 pi sqrt(|G_j||G_m|))) * integral over G_j of the solid angle of G_m.

    Face j must be a quadrilateral (bilinear parameterisation); face m may
    be any planar polygon. Returns (value, err).
    """
    if face_j.vertices == face_m.vertices:
        return 0.0, 0.0
    c = 1.0 / (4 * math.pi * math.sqrt(face_j.area * face_m.area))
    verts = np.ascontiguousarray(face_m.array)
    cm, nm = face_m.centroid, face_m.normal

    def f(u, v):
        x, jac = face_j.bilinear(u, v)
        om = np.abs(kernels._impl.polygon_solid_angles_batch(verts, x))
        if signed:
            om = om * np.sign((x - cm) @ nm)
        return c * om * jac

    bp = graded_breakpoints(rule, True, True)
    return adaptive_square(f, bp, bp, tol, rule)


def _matrix_3d(faces, tol, rule, signed):
    N = len(faces)
    pairs = [(j, m) for j in range(N) for m in range(N) if j != m]
    res = _pmap(lambda jm: pair_coefficient_3d(faces[jm[0]], faces[jm[1]], tol, rule, signed), pairs)
    out = np.zeros((N, N))
    err = 0.0
    for (j, m), (v, e) in zip(pairs, res):
        out[j, m] = v
        err = max(err, e)
    return out, err


def d_matrix_3d(faces: Sequence[Face3D], tol: float = TOL_3D,
                rule: QuadRule = RULE_3D) -> Tuple[np.ndarray, float]:
    return _matrix_3d(faces, tol, rule, False)


def signed_matrix_3d(faces: Sequence[Face3D], tol: float = TOL_3D,
                     rule: QuadRule = RULE_3D) -> Tuple[np.ndarray, float]:
    return _matrix_3d(faces, tol, rule, True)


def galerkin_openbook(book: OpenBook, tol: float = TOL_3D, scale: float = 1.0,
                      rule: QuadRule = RULE_3D, N: int = None) -> GalerkinMatrix:
    """D_N on the first N = 2n - 1 pages of the open book."""
    N = 2 * book.n_pages - 1 if N is None else N
    faces = pages(book)[:N]
    if scale != 1.0:
        faces = [f.scaled(scale) for f in faces]
    d, err = d_matrix_3d(faces, tol, rule)
    return GalerkinMatrix(b_matrix(N).entries * d, "OpenBook",
                          {"theta": book.theta, "n": book.n_pages, "N": N, "tol": tol,
                           "scale": scale}, err)
