"""Symbols of the sawtooth Toeplitz operators.

With d'_m the sawtooth coefficients, the symbols are

    e(t)       = -2i sum_m d'_m sin(m t)
    h_theta(t) = -i  sum_m (1 - e^{-2i theta} (-1)^m) d'_m sin(m t).

Since d'_m = M / (2 pi m) + O(m^-2), both are evaluated as a closed-form
sawtooth-wave leading term (from sum sin(mt)/m = sign(t)(pi - |t|)/2 and
sum (-1)^m sin(mt)/m = -t/2) plus an absolutely convergent residual series.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .assembly import TOL_2D, galerkin_sawtooth, sawtooth_coeffs
from .errors import InvalidParameterError
from .matrixanalysis import matrix_2norm

__all__ = ["SymbolSeries", "symbol_series", "symbol_e", "symbol_h", "symbol_e_direct",
           "symbol_h_direct", "SupNorm", "sup_norm", "min_theta_h_norm",
           "finite_section_norms", "symbol_curve_table", "symbol_curve_csv"]


@dataclass(frozen=True)
class SymbolSeries:
    """Coefficients d'_1..d'_L (``coeffs[l-1] = d'_l``) of slope parameter M.

    The first ``n_exact`` come from quadrature; the rest follow the model
    M / (2 pi l) + tail_c / l^2.
    """

    M: float
    coeffs: np.ndarray
    n_exact: int
    tail_c: float
    quad_error: float = 0.0

    @property
    def L(self) -> int:
        return len(self.coeffs)

    def extended(self, L: int) -> np.ndarray:
        """Coefficient array of length L, continuing the tail model."""
        if L <= self.L:
            return self.coeffs[:L]
        l = np.arange(self.L + 1, L + 1, dtype=float)
        tail = self.M / (2 * np.pi * l) + self.tail_c / l ** 2
        return np.concatenate([self.coeffs, tail])


def symbol_series(M: float, L: int = 2000, n_exact: int = 50, fit_range=(30, 50),
                  tol: float = TOL_2D) -> SymbolSeries:
    """Coefficients for the symbols; d'_l for l > n_exact from the fitted tail."""
    if M <= 0:
        raise InvalidParameterError("M must be positive")
    lo, hi = fit_range
    if not (1 <= lo <= hi <= n_exact <= L):
        raise InvalidParameterError("need 1 <= fit_lo <= fit_hi <= n_exact <= L")
    d, err = sawtooth_coeffs(M, n_exact, tol, return_error=True)
    l = np.arange(lo, hi + 1, dtype=float)
    resid = d[lo:hi + 1] - M / (2 * np.pi * l)
    # least squares for resid ~ c / l^2
    c = float(np.sum(resid / l ** 2) / np.sum(1.0 / l ** 4))
    base = SymbolSeries(float(M), d[1:].copy(), n_exact, c, err)
    return SymbolSeries(float(M), base.extended(L), n_exact, c, err)


def _residual_sum(r: np.ndarray, t: np.ndarray, chunk: int = 512) -> np.ndarray:
    """sum_m r_m sin(m t) for each t."""
    m = np.arange(1, len(r) + 1, dtype=float)
    out = np.empty(len(t))
    for k0 in range(0, len(t), chunk):
        out[k0:k0 + chunk] = np.sin(np.outer(t[k0:k0 + chunk], m)) @ r
    return out


def _saw(t):
    """sign(t) (pi - |t|) = 2 sum sin(mt)/m on [-pi, pi]."""
    return np.sign(t) * (np.pi - np.abs(t))


def _leading_free(series: SymbolSeries) -> np.ndarray:
    m = np.arange(1, series.L + 1, dtype=float)
    return series.coeffs - series.M / (2 * np.pi * m)


def symbol_e(series: SymbolSeries, t):
    """e(t) for |t| <= pi (scalar or array)."""
    ta = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(np.abs(ta) > np.pi + 1e-15):
        raise InvalidParameterError("t must satisfy |t| <= pi")
    M = series.M
    val = -1j * M * _saw(ta) / (2 * np.pi) - 2j * _residual_sum(_leading_free(series), ta)
    return complex(val[0]) if np.ndim(t) == 0 else val


def symbol_h(series: SymbolSeries, theta: float, t):
    """h_theta(t) for |t| <= pi (scalar or array)."""
    ta = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(np.abs(ta) > np.pi + 1e-15):
        raise InvalidParameterError("t must satisfy |t| <= pi")
    M = series.M
    rot = np.exp(-2j * theta)
    r = _leading_free(series)
    sign_m = np.where(np.arange(1, series.L + 1) % 2 == 0, 1.0, -1.0)
    lead = -1j * M * (_saw(ta) + rot * ta) / (4 * np.pi)
    res = -1j * (_residual_sum(r, ta) - rot * _residual_sum(sign_m * r, ta))
    val = lead + res
    return complex(val[0]) if np.ndim(t) == 0 else val


def symbol_e_direct(series: SymbolSeries, t, L: int):
    """Plain partial sum -2i sum_{m<=L} d'_m sin(mt), no closed-form split."""
    ta = np.atleast_1d(np.asarray(t, dtype=float))
    val = -2j * _residual_sum(series.extended(L), ta)
    return complex(val[0]) if np.ndim(t) == 0 else val


def symbol_h_direct(series: SymbolSeries, theta: float, t, L: int):
    ta = np.atleast_1d(np.asarray(t, dtype=float))
    d = series.extended(L)
    sign_m = np.where(np.arange(1, L + 1) % 2 == 0, 1.0, -1.0)
    val = -1j * (_residual_sum(d, ta) - np.exp(-2j * theta) * _residual_sum(sign_m * d, ta))
    return complex(val[0]) if np.ndim(t) == 0 else val


@dataclass(frozen=True)
class SupNorm:
    """Sup-norm of |symbol|.

    ``value`` is the maximum of the refined grid value and the one-sided
    limits at the jump t = 0; ``grid_value`` is the raw grid maximum and
    ``refinement_delta`` what the local refinement added to it.
    """

    value: float
    t_star: float
    grid_value: float
    refinement_delta: float
    jump_value: float


def _refine(f, t, vals, h, jump) -> SupNorm:
    k = int(np.argmax(vals))
    g = float(vals[k])
    lo, hi = max(t[k] - h, 1e-300), min(t[k] + h, np.pi)
    res = minimize_scalar(lambda s: -f(s), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-10})
    refined = max(g, float(-res.fun))
    t_star = float(res.x) if -res.fun > g else float(t[k])
    if jump >= refined:
        t_star = 0.0
    return SupNorm(max(refined, jump), t_star, g, refined - g, jump)


def _half_grid(grid: int):
    # |symbol| is even in t, so the half grid (0, pi) suffices
    h = np.pi / grid
    return (np.arange(grid) + 0.5) * h, h


def sup_norm(series: SymbolSeries, kind: str = "e", theta: float = 0.0,
             grid: int = 8192) -> SupNorm:
    """Sup over (-pi, pi) of |e| (kind "e") or |h_theta| (kind "h")."""
    if grid < 1024:
        raise InvalidParameterError("grid must be >= 1024")
    if kind == "e":
        f = lambda t: np.abs(symbol_e(series, t))
        jump = series.M / 2
    elif kind == "h":
        f = lambda t: np.abs(symbol_h(series, theta, t))
        jump = series.M / 4
    else:
        raise InvalidParameterError("kind must be 'e' or 'h'")
    t, h = _half_grid(grid)
    return _refine(f, t, f(t), h, jump)


def min_theta_h_norm(series: SymbolSeries, n_theta: int = 36, grid: int = 8192):
    """(min over theta in [0, pi) of ||h_theta||_inf, minimising theta).

    ||h_theta|| has period pi in theta. The theta-independent residual sums
    are computed once on the grid.
    """
    if grid < 1024:
        raise InvalidParameterError("grid must be >= 1024")
    M = series.M
    t, h = _half_grid(grid)
    r = _leading_free(series)
    sign_m = np.where(np.arange(1, series.L + 1) % 2 == 0, 1.0, -1.0)
    s1, s2 = _residual_sum(r, t), _residual_sum(sign_m * r, t)
    thetas = np.pi * np.arange(n_theta) / n_theta
    best = (np.inf, 0.0)
    for th in thetas:
        rot = np.exp(-2j * th)
        vals = np.abs(-1j * M * (_saw(t) + rot * t) / (4 * np.pi) - 1j * (s1 - rot * s2))
        sn = _refine(lambda s: np.abs(symbol_h(series, th, s)), t, vals, h, M / 4)
        if sn.value < best[0]:
            best = (sn.value, float(th))
    return best


def finite_section_norms(M: float, N_list: Sequence[int], tol: float = TOL_2D):
    """||D_N||_2 for the sawtooth Galerkin matrices, N in increasing N_list."""
    N_list = list(N_list)
    if any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise InvalidParameterError("N_list must be strictly increasing")
    D = galerkin_sawtooth(M, N_list[-1], tol).entries
    return [matrix_2norm(D[:N, :N]) for N in N_list]


def symbol_curve_table(series: SymbolSeries, n_t: int = 200, n_theta: int = 36) -> np.ndarray:
    """Rows (t/pi, 2|e|/M, 4 min_theta |h|/M, 4 max_theta |h|/M) for t in (0, pi]."""
    M = series.M
    t = np.pi * np.arange(1, n_t + 1) / n_t
    e = 2 * np.abs(symbol_e(series, t)) / M
    thetas = np.pi * np.arange(n_theta) / n_theta
    H = np.array([4 * np.abs(symbol_h(series, th, np.minimum(t, np.pi))) / M for th in thetas])
    return np.column_stack([t / np.pi, e, H.min(axis=0), H.max(axis=0)])


def symbol_curve_csv(series: SymbolSeries, n_t: int = 200, n_theta: int = 36) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t_over_pi", "two_abs_e_over_M", "four_min_abs_h_over_M", "four_max_abs_h_over_M"])
    for row in symbol_curve_table(series, n_t, n_theta):
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()
