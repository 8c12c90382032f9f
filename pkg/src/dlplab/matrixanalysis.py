"""Numerical ranges, numerical abscissae, norms and the sign matrix spectra.

The numerical range W(A) is approximated from inside by the convex hull
of boundary points v*Av, where v is a top eigenvector of the Hermitian
part e^{i t}A + e^{-i t}A* over a grid of directions t, and from outside
by the intersection of the supporting half-planes
Re(e^{i t} z) <= w_r(e^{i t} A).
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .errors import ConvergenceFailure, InvalidParameterError

__all__ = [
    "hermitian_part", "eigs_hermitian", "jacobi_eigh", "numerical_abscissa",
    "matrix_2norm", "numerical_radius", "char_poly", "spec_bn",
    "NumericalRangeApprox", "numerical_range", "convex_hull",
    "disc_inclusion_radius", "real_section", "a_of_beta",
]


def hermitian_part(A, theta: float = 0.0) -> np.ndarray:
    """(e^{i theta} A + e^{-i theta} A*) / 2, Hermitian by construction."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidParameterError("square matrix required")
    if np.isrealobj(A) and theta == 0.0:
        return 0.5 * (A + A.T)
    R = np.exp(1j * theta) * A
    return 0.5 * (R + R.conj().T)


def _check_hermitian(H):
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise InvalidParameterError("square matrix required")
    scale = max(1.0, float(np.max(np.abs(H)))) if H.size else 1.0
    if np.max(np.abs(H - H.conj().T), initial=0.0) > 1e-12 * scale:
        raise InvalidParameterError("matrix is not Hermitian")
    return H


def jacobi_eigh(H, tol: float = 1e-12, max_sweeps: int = 100) -> Tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigensolver.

    Complex Hermitian input is handled through the real symmetric embedding
    [[Re H, -Im H], [Im H, Re H]], whose spectrum is that of H doubled.
    Sweeps run in row-major pair order until the off-diagonal Frobenius
    norm drops below ``tol`` times the matrix norm.
    """
    H = _check_hermitian(H)
    n = H.shape[0]
    cplx = np.iscomplexobj(H) and np.any(H.imag != 0)
    if cplx:
        S = np.block([[H.real, -H.imag], [H.imag, H.real]]).astype(float)
    else:
        S = np.array(H.real, dtype=float)
    m = S.shape[0]
    V = np.eye(m)
    ref = max(np.linalg.norm(S), 1e-300)
    for _ in range(max_sweeps):
        off = np.linalg.norm(S - np.diag(np.diag(S)))
        if off <= tol * ref:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = S[p, q]
                if abs(apq) < 1e-300:
                    continue
                tau = (S[q, q] - S[p, p]) / (2.0 * apq)
                t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau)) if tau != 0 else 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                Sp, Sq = S[:, p].copy(), S[:, q].copy()
                S[:, p] = c * Sp - s * Sq
                S[:, q] = s * Sp + c * Sq
                Sp, Sq = S[p, :].copy(), S[q, :].copy()
                S[p, :] = c * Sp - s * Sq
                S[q, :] = s * Sp + c * Sq
                Vp, Vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * Vp - s * Vq
                V[:, q] = s * Vp + c * Vq
    else:
        raise ConvergenceFailure("Jacobi sweeps did not converge")
    lam = np.diag(S).copy()
    order = np.argsort(lam, kind="stable")
    lam, V = lam[order], V[:, order]
    if not cplx:
        return lam, V.astype(H.dtype) if np.iscomplexobj(H) else V
    # each eigenvalue of H appears twice; recover n orthonormal complex vectors
    W = V[:n] + 1j * V[n:]
    vals, vecs = [], []
    k = 0
    gap = 1e-9 * max(1.0, np.max(np.abs(lam)))
    while k < m:
        e = k + 1
        while e < m and lam[e] - lam[e - 1] <= gap:
            e += 1
        block = W[:, k:e]
        u, s, _ = np.linalg.svd(block, full_matrices=False)
        r = (e - k) // 2
        vals.extend([lam[k:e].mean()] * r)
        vecs.append(u[:, :r])
        k = e
    return np.array(vals), np.hstack(vecs)


def eigs_hermitian(H, method: str = "lapack") -> Tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors of a Hermitian matrix.

    ``method="lapack"`` uses numpy's eigh; ``method="jacobi"`` uses the
    cyclic Jacobi solver above (slower, independent implementation).
    """
    H = _check_hermitian(H)
    if method == "jacobi":
        return jacobi_eigh(H)
    if method != "lapack":
        raise InvalidParameterError(f"unknown method {method!r}")
    return np.linalg.eigh(H)


def numerical_abscissa(A, theta: float = 0.0) -> float:
    """w_r(e^{i theta} A): largest eigenvalue of the Hermitian part."""
    return float(np.linalg.eigvalsh(hermitian_part(A, theta))[-1])


def matrix_2norm(A) -> float:
    A = np.asarray(A)
    lam = np.linalg.eigvalsh(A.conj().T @ A)
    return float(np.sqrt(max(lam[-1], 0.0)))


def numerical_radius(A, K: int = 720) -> float:
    """max over the angle grid of w_r(e^{i t} A) (a lower bound for w(A))."""
    return float(np.max(_abscissae(np.asarray(A), _angles(K))[0]))


# ----------------------------------------------------------- sign matrices

def _poly_mul(p: List[int], q: List[int]) -> List[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def char_poly(A) -> List[int]:
    """Exact characteristic polynomial det(lambda I - A) of an integer matrix.

    Faddeev-LeVerrier in Python integers; coefficients highest degree first.
    """
    A = [[int(round(v)) for v in row] for row in np.asarray(A)]
    n = len(A)
    Mk = [[0] * n for _ in range(n)]
    coeffs = [1]
    c = 1
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        Mk = [[sum(A[i][t] * Mk[t][j] for t in range(n)) + (c if i == j else 0)
               for j in range(n)] for i in range(n)]
        AM = [[sum(A[i][t] * Mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        tr = sum(AM[i][i] for i in range(n))
        if tr % k:
            raise ArithmeticError("non-integer Faddeev-LeVerrier step")
        c = -tr // k
        coeffs.append(c)
    return coeffs


def spec_bn(N: int) -> Tuple[float, ...]:
    """Distinct eigenvalues of B_N: (-1, 1) for even N, (-1, 0, 1) for odd N.

    The characteristic polynomials of B_1..B_N are computed exactly and
    checked against det(lambda I - B_N) = (lambda^2 - 1) det(lambda I - B_{N-2})
    with det(lambda I - B_1) = lambda and det(lambda I - B_2) = lambda^2 - 1,
    so the returned eigenvalues are exact.
    """
    from .assembly import b_matrix

    if N < 1:
        raise InvalidParameterError("N must be >= 1")
    polys = {1: [1, 0], 2: [1, 0, -1]}
    for k in range(1, N + 1):
        p = char_poly(b_matrix(k).entries)
        expected = polys[k] if k <= 2 else _poly_mul([1, 0, -1], polys[k - 2])
        if p != expected:
            raise ArithmeticError(f"characteristic polynomial of B_{k} violates the recursion")
        polys[k] = p
    return (-1.0, 1.0) if N % 2 == 0 else (-1.0, 0.0, 1.0)


# --------------------------------------------------------- numerical range

def _angles(K: int) -> np.ndarray:
    return 2 * np.pi * np.arange(K) / K


def _abscissae(A: np.ndarray, thetas: np.ndarray, chunk: int = None):
    """Top eigenpairs of the Hermitian parts for all angles (batched eigh)."""
    n = A.shape[0]
    Ac = A.astype(complex)
    if chunk is None:
        chunk = max(1, int(2e7 // max(n * n, 1)))
    lam = np.empty(len(thetas))
    vec = np.empty((len(thetas), n), dtype=complex)
    for k0 in range(0, len(thetas), chunk):
        t = thetas[k0:k0 + chunk]
        R = np.exp(1j * t)[:, None, None] * Ac[None]
        H = 0.5 * (R + np.conj(np.swapaxes(R, 1, 2)))
        w, v = np.linalg.eigh(H)
        lam[k0:k0 + chunk] = w[:, -1]
        vec[k0:k0 + chunk] = v[:, :, -1]
    return lam, vec


def convex_hull(points: Sequence[complex], dedupe: float = 1e-12) -> np.ndarray:
    """Counter-clockwise convex hull (monotone chain) of complex points."""
    pts = np.asarray(points, dtype=complex)
    xy = sorted(set((round(p.real / dedupe) * dedupe, round(p.imag / dedupe) * dedupe)
                    for p in pts)) if dedupe > 0 else sorted((p.real, p.imag) for p in pts)
    if len(xy) <= 2:
        return np.array([complex(*p) for p in xy])

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in xy:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(xy):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return np.array([complex(*p) for p in hull])


@dataclass(frozen=True)
class NumericalRangeApprox:
    angles: np.ndarray
    abscissae: np.ndarray
    boundary_points: np.ndarray
    vectors: np.ndarray = field(repr=False)
    inner_hull: np.ndarray = field(repr=False)

    def outer_contains(self, z, slack: float = 1e-10) -> np.ndarray:
        """True where Re(e^{i t} z) <= w_r(e^{i t} A) + slack for every angle."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        lhs = np.real(np.exp(1j * self.angles)[None, :] * z[:, None])
        return np.all(lhs <= self.abscissae[None, :] + slack, axis=1)

    def inner_contains(self, z, slack: float = 0.0) -> np.ndarray:
        """True where z lies in the inner hull (edges count as inside)."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        h = self.inner_hull
        if len(h) == 1:
            return np.abs(z - h[0]) <= slack
        if len(h) == 2:
            e = h[1] - h[0]
            u = ((z - h[0]) * np.conj(e)) / abs(e) ** 2
            tol = max(slack, 1e-14) / abs(e)
            return (np.abs(u.imag) <= tol) & (u.real >= -tol) & (u.real <= 1 + tol)
        e = np.roll(h, -1) - h
        rel = z[:, None] - h[None, :]
        cr = e.real[None, :] * rel.imag - e.imag[None, :] * rel.real
        return np.all(cr >= -slack * np.abs(e)[None, :], axis=1)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["theta", "abscissa", "re", "im"])
        for t, a, p in zip(self.angles, self.abscissae, self.boundary_points):
            w.writerow([repr(float(t)), repr(float(a)), repr(float(p.real)), repr(float(p.imag))])
        return buf.getvalue()


def numerical_range(A, K: int = 720) -> NumericalRangeApprox:
    """Inner and outer approximations of W(A) from K equally spaced directions."""
    if K < 8:
        raise InvalidParameterError("K must be >= 8")
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidParameterError("square matrix required")
    th = _angles(K)
    lam, vec = _abscissae(A, th)
    Av = vec @ A.T.astype(complex)
    bp = np.einsum("ki,ki->k", vec.conj(), Av)
    return NumericalRangeApprox(th, lam, bp, vec, convex_hull(bp))


def disc_inclusion_radius(nr: NumericalRangeApprox) -> float:
    """Radius of the largest origin-centred disc inside the inner hull."""
    h = nr.inner_hull
    if len(h) < 3 or not nr.inner_contains(0.0)[0]:
        return 0.0
    e = np.roll(h, -1) - h
    dist = np.abs(e.real * h.imag - e.imag * h.real) / np.abs(e)
    return float(np.min(dist))


def real_section(nr: NumericalRangeApprox) -> Tuple[float, float]:
    """Intersection of the inner hull with the real axis, as (lo, hi)."""
    h = nr.inner_hull
    xs = []
    for p, q in zip(h, np.roll(h, -1)):
        if p.imag == 0:
            xs.append(p.real)
        if (p.imag < 0 < q.imag) or (q.imag < 0 < p.imag):
            s = p.imag / (p.imag - q.imag)
            xs.append(p.real + s * (q.real - p.real))
    if not xs:
        return (np.nan, np.nan)
    return (min(xs), max(xs))


def a_of_beta(d) -> float:
    """(1/2) sqrt((d12 + d21)^2 + (d23 + d32)^2) from a coefficient matrix."""
    d = np.asarray(d, dtype=float)
    if d.shape[0] < 3 or d.shape[1] < 3:
        raise InvalidParameterError("need at least a 3x3 coefficient matrix")
    return 0.5 * float(np.hypot(d[0, 1] + d[1, 0], d[1, 2] + d[2, 1]))
