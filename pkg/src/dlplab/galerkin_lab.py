"""Finite-dimensional Galerkin laboratory.

Solves projected systems Q* A Q c = Q* g, measures discrete inf-sup
(stability) constants, and builds the sandwiched subspace sequences
H*_N  in  H_N = H*_N + W_N  in  H*_{M_N}
where W_N is spanned by shifted copies of a vector with (A psi, psi) = 0.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidParameterError, NonUniquenessError, NotRepresentableError
from .matrixanalysis import hermitian_part, numerical_range

__all__ = [
    "SubspaceSequence", "StabilityReport", "galerkin_solve", "stability_constant",
    "coercivity_constant", "rayleigh_target_vector", "coordinate_sequence",
    "stability_report", "adversarial_sequence", "AdversarialResult",
]

_ORTH_TOL = 1e-12


@dataclass(frozen=True)
class SubspaceSequence:
    """Orthonormal bases Q_1, Q_2, ... of increasing subspaces of C^D."""

    ambient_dim: int
    bases: tuple
    sandwich: Optional[tuple] = None

    def __len__(self) -> int:
        return len(self.bases)

    def __getitem__(self, k) -> np.ndarray:
        return self.bases[k]

    def orthonormality_error(self) -> float:
        return max(float(np.max(np.abs(Q.conj().T @ Q - np.eye(Q.shape[1]))))
                   for Q in self.bases)

    def is_prefix_nested(self) -> bool:
        """Each basis starts with the columns of the previous one."""
        return all(np.array_equal(b[:, :a.shape[1]], a)
                   for a, b in zip(self.bases, self.bases[1:]))

    def is_span_nested(self, tol: float = 1e-10) -> bool:
        return all(_outside(b, a) <= tol for a, b in zip(self.bases, self.bases[1:]))


def _outside(Q: np.ndarray, X: np.ndarray) -> float:
    """Largest norm of a column of X after projecting out span(Q)."""
    if X.shape[1] == 0:
        return 0.0
    R = X - Q @ (Q.conj().T @ X)
    return float(np.max(np.linalg.norm(R, axis=0)))


def coordinate_sequence(D: int, dims: Sequence[int]) -> SubspaceSequence:
    """Nested coordinate subspaces span{e_1, ..., e_k} for k in dims."""
    dims = list(dims)
    if any(b <= a for a, b in zip(dims, dims[1:])) or dims[0] < 1 or dims[-1] > D:
        raise InvalidParameterError("dims must increase within 1..D")
    I = np.eye(D)
    return SubspaceSequence(D, tuple(I[:, :k].copy() for k in dims))


def galerkin_solve(A, Q, g) -> np.ndarray:
    """phi_N = Q c with (Q* A Q) c = Q* g."""
    A = np.asarray(A)
    Q = np.asarray(Q)
    g = np.asarray(g)
    P = Q.conj().T @ A @ Q
    sv = np.linalg.svd(P, compute_uv=False)
    if sv[-1] <= 1e-14 * max(sv[0], np.linalg.norm(A, 2)):
        raise NonUniquenessError("projected matrix is numerically singular")
    rhs = Q.conj().T @ g
    c = np.linalg.solve(P, rhs)
    if np.linalg.norm(P @ c - rhs) > 1e-10 * max(np.linalg.norm(g), 1e-300):
        raise NonUniquenessError("projected system residual too large")
    return Q @ c


def stability_constant(A, Q) -> float:
    """Smallest singular value of Q* A Q (= min over unit phi in span Q of ||P A phi||)."""
    Q = np.asarray(Q)
    return float(np.linalg.svd(Q.conj().T @ np.asarray(A) @ Q, compute_uv=False)[-1])


def coercivity_constant(A, K: int = 720) -> float:
    """max over angles of lambda_min(Re(e^{i t} A)).

    A lower bound for inf |(A phi, phi)| over unit phi; positive iff the
    angle grid certifies coercivity.
    """
    th = 2 * np.pi * np.arange(K) / K
    return float(max(np.linalg.eigvalsh(hermitian_part(A, t))[0] for t in th))


def _combine(A, x1, x2, p1, p2, z):
    """Unit vector in span{x1, x2} with Rayleigh quotient z on segment [p1, p2].

    Along x1 + t e^{i phi} x2 the numerator x*(A - z)x is a quadratic in t;
    phi is fixed so that its cross term is parallel to p2 - p1, and the
    positive root of the resulting real quadratic is taken.
    """
    d = p2 - p1
    if abs(d) == 0:
        return x1
    d = d / abs(d)
    s1, s2 = abs(z - p1), abs(p2 - z)
    if s1 == 0:
        return x1
    if s2 == 0:
        return x2
    Az1 = A @ x1 - z * x1
    Az2 = A @ x2 - z * x2
    al = np.vdot(x1, Az2) / d
    be = np.vdot(x2, Az1) / d
    w = al - np.conj(be)
    phi = -np.angle(w) if abs(w) > 0 else 0.0
    r = float(np.real(np.exp(1j * phi) * al + np.exp(-1j * phi) * be))
    t = (-r + np.sqrt(r * r + 4 * s1 * s2)) / (2 * s2)
    x = x1 + t * np.exp(1j * phi) * x2
    return x / np.linalg.norm(x)


def rayleigh_target_vector(A, z: complex, tol: float = 1e-10, K: int = 360) -> np.ndarray:
    """Unit psi with |psi* A psi - z| <= tol for z inside the inner hull.

    p1 is the first boundary point (in angle order) at distance >= 1e-6
    from z; the ray from p1 through z leaves the boundary polygon on the
    edge [p_a, p_{a+1}] at q. A vector for q is formed from the eigenvectors
    of p_a, p_{a+1}, and psi from the vectors for p1 and q.
    """
    A = np.asarray(A).astype(complex)
    z = complex(z)
    nr = numerical_range(A, K)
    P, V = nr.boundary_points, nr.vectors
    scale = max(1.0, float(np.max(np.abs(P))))
    dist = np.abs(P - z)
    k0 = int(np.argmin(dist))
    if dist[k0] <= tol:
        return V[k0] / np.linalg.norm(V[k0])
    if not nr.inner_contains(z, slack=-1e-12)[0]:
        raise NotRepresentableError(f"{z} is not inside the numerical range approximation")
    h = nr.inner_hull
    if len(h) < 3:
        # segment (e.g. Hermitian A): combine the two endpoint vectors
        ia, ib = (int(np.argmin(np.abs(P - p))) for p in (h[0], h[-1]))
        psi = _combine(A, V[ia], V[ib], P[ia], P[ib], z)
        if abs(np.vdot(psi, A @ psi) - z) > tol:
            raise NotRepresentableError(f"{z} is off the degenerate numerical range")
        return psi
    margin = 1e-6 * scale
    i1 = int(np.nonzero(dist >= margin)[0][0])
    p1 = P[i1]
    # exit point of the ray p1 + s (z - p1), s > 1, through the boundary polygon
    dz = z - p1
    best = None
    for a in range(len(P)):
        b = (a + 1) % len(P)
        e = P[b] - P[a]
        den = dz.real * e.imag - dz.imag * e.real
        if den == 0:
            continue
        w = P[a] - p1
        s = (w.real * e.imag - w.imag * e.real) / den
        lam = (w.real * dz.imag - w.imag * dz.real) / den
        if s > 1.0 and -1e-12 <= lam <= 1 + 1e-12 and (best is None or s > best[0]):
            best = (s, a, b, min(max(lam, 0.0), 1.0))
    if best is None:
        raise NotRepresentableError("no boundary edge found beyond the target")
    s, a, b, lam = best
    q = P[a] + lam * (P[b] - P[a])
    w = _combine(A, V[a], V[b], P[a], P[b], q)
    q = np.vdot(w, A @ w)
    psi = _combine(A, V[i1], w, p1, q, z)
    err = abs(np.vdot(psi, A @ psi) - z)
    if err > tol:
        raise NotRepresentableError(f"Rayleigh target missed by {err:g}")
    return psi


@dataclass(frozen=True)
class StabilityReport:
    N: np.ndarray
    dim: np.ndarray
    c: np.ndarray
    err: np.ndarray
    best_err: np.ndarray
    M_N: np.ndarray

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["N", "dim", "c_N", "err", "best_err", "M_N"])
        for row in zip(self.N, self.dim, self.c, self.err, self.best_err, self.M_N):
            w.writerow([int(row[0]), int(row[1])] + [repr(float(v)) for v in row[2:5]] + [int(row[5])])
        return buf.getvalue()


def stability_report(A, seq: SubspaceSequence, phi=None, seed: int = 0) -> StabilityReport:
    """c_N, Galerkin error and best-approximation error per subspace.

    The exact solution ``phi`` defaults to a seeded random unit vector and
    the right-hand side is g = A phi. Unsolvable projections report nan.
    """
    A = np.asarray(A)
    if phi is None:
        phi = np.random.default_rng(seed).standard_normal(seq.ambient_dim)
        phi = phi / np.linalg.norm(phi)
    g = A @ phi
    rows = []
    for k, Q in enumerate(seq.bases):
        c = stability_constant(A, Q)
        best = float(np.linalg.norm(phi - Q @ (Q.conj().T @ phi)))
        try:
            err = float(np.linalg.norm(phi - galerkin_solve(A, Q, g)))
        except NonUniquenessError:
            err = np.nan
        mn = seq.sandwich[k] if seq.sandwich is not None else -1
        rows.append((k + 1, Q.shape[1], c, err, best, mn))
    cols = list(zip(*rows))
    return StabilityReport(*(np.array(c) for c in cols))


@dataclass(frozen=True)
class AdversarialResult:
    sequence: SubspaceSequence
    report: StabilityReport
    base_report: StabilityReport
    phis: np.ndarray = field(repr=False)
    rayleigh: np.ndarray = field(default=None)
    band_start: int = 0

    def sandwich_ok(self, base: SubspaceSequence, tol: float = 0.0) -> bool:
        """base_N is a prefix of H_N and H_N lies in span(base_{M_N})."""
        for k, Q in enumerate(self.sequence.bases):
            B = base[k]
            if not np.array_equal(Q[:, :B.shape[1]], B.astype(Q.dtype)):
                return False
            mn = self.sequence.sandwich[k]
            if mn < 1 or _outside(base[mn - 1], Q) > tol:
                return False
        return True


def adversarial_sequence(A, base: SubspaceSequence, band_width: int, shift: int,
                         count: int, band_start: Optional[int] = None, K: int = 360,
                         seed: int = 0) -> AdversarialResult:
    """Sandwiched sequence H_N = H*_N + span{phi_1..phi_N}, N = 1..count.

    psi solves (A psi, psi) = 0 on the principal block A[s:s+w, s:s+w];
    phi_m is psi moved to start at s + (m-1) shift. With a Toeplitz-signed
    A and even shift every phi_m has the same Rayleigh quotient.
    """
    A = np.asarray(A)
    D = A.shape[0]
    if shift % 2 or shift < band_width:
        raise InvalidParameterError("shift must be even and at least band_width")
    if count < 1 or count > len(base):
        raise InvalidParameterError("count must lie in 1..len(base)")
    span = band_width + (count - 1) * shift
    if span > D:
        raise InvalidParameterError("shifted bands do not fit in the ambient space")
    s0 = (D - span) // 2 if band_start is None else band_start
    s0 -= s0 % 2
    blk = A[s0:s0 + band_width, s0:s0 + band_width]
    psi = rayleigh_target_vector(blk, 0.0, K=K)
    phis = np.zeros((D, count), dtype=complex)
    for m in range(count):
        phis[s0 + m * shift:s0 + m * shift + band_width, m] = psi
    rq = np.array([np.vdot(phis[:, m], A @ phis[:, m]) for m in range(count)])

    bases, sand = [], []
    for N in range(1, count + 1):
        Q = base[N - 1].astype(complex)
        for m in range(N):
            v = phis[:, m].copy()
            for _ in range(2):
                v -= Q @ (Q.conj().T @ v)
            nv = np.linalg.norm(v)
            if nv > 1e-10:
                Q = np.hstack([Q, (v / nv)[:, None]])
        bases.append(Q)
        mn = next((k + 1 for k in range(len(base)) if _outside(base[k], Q) <= _ORTH_TOL), -1)
        sand.append(mn)
    seq = SubspaceSequence(D, tuple(bases), tuple(sand))
    rep = stability_report(A, seq, seed=seed)
    base_only = SubspaceSequence(D, tuple(base.bases[:count]))
    base_rep = stability_report(A, base_only, seed=seed)
    return AdversarialResult(seq, rep, base_rep, phis, rq, s0)
