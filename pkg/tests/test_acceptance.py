"""Acceptance criteria, one test per criterion.

Each test prints a single ``PASS`` or ``FAIL`` line with the measured
values, then asserts the criterion at its stated tolerance.
"""
import time

import numpy as np
import pytest
from scipy.integrate import dblquad, quad

from dlplab import kernels
from dlplab.assembly import (TOL_2D, TOL_3D, a_beta, a_beta_crossing, b_matrix, d_coeffs_strip,
                             galerkin_gammabeta, galerkin_openbook, galerkin_sawtooth,
                             sawtooth_coeffs)
from dlplab.galerkin_lab import (adversarial_sequence, coercivity_constant, coordinate_sequence,
                                 galerkin_solve)
from dlplab.geometry2d import make_segment
from dlplab.geometry3d import open_book
from dlplab.matrixanalysis import (disc_inclusion_radius, matrix_2norm, numerical_abscissa,
                                   numerical_range, spec_bn)
from dlplab.toeplitz import min_theta_h_norm, sup_norm, symbol_series
from dlplab.weighted import weighted_lower_bound


def _report(capsys, n, checks, t0, limit):
    """Print one PASS/FAIL line for criterion n and assert every check."""
    elapsed = time.perf_counter() - t0
    checks = dict(checks)
    checks[f"runtime {elapsed:.2f}s < {limit}s"] = (elapsed < limit, "")
    ok = all(v[0] for v in checks.values())
    detail = "; ".join(f"{k}: {'ok' if v[0] else 'NO'}{' ' + v[1] if v[1] else ''}"
                       for k, v in checks.items())
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
    failed = [k for k, v in checks.items() if not v[0]]
    assert not failed, f"criterion {n} failed: {failed}"


def test_criterion_1_sign_matrices(capsys):
    t0 = time.perf_counter()
    spec_ok, ev_err = True, 0.0
    for N in range(2, 13):
        exact = np.array([-1.0, 1.0] if N % 2 == 0 else [-1.0, 0.0, 1.0])
        spec_ok &= np.array_equal(np.array(spec_bn(N)), exact)
        ev = np.linalg.eigvals(b_matrix(N).entries)
        ev_err = max(ev_err, float(np.max(np.min(np.abs(ev[:, None] - exact[None]), axis=1))))
    w3 = numerical_abscissa(b_matrix(3).entries)
    B7 = b_matrix(7).entries
    th = 2 * np.pi * np.arange(720) / 720
    w7 = min(numerical_abscissa(B7, t) for t in th)
    _report(capsys, 1, {
        "spec(B_N) exact, N=2..12": (spec_ok, ""),
        "eigenvalue error <= 1e-10": (ev_err <= 1e-10, f"{ev_err:.1e}"),
        "w_r(B_3) = sqrt2": (abs(w3 - np.sqrt(2)) <= 1e-10, f"{w3:.12f}"),
        "min w_r(e^it B_7) >= sqrt3 - 1e-6": (w7 >= np.sqrt(3) - 1e-6, f"{w7:.6f}"),
    }, t0, 1.0)


def test_criterion_2_a_beta(capsys):
    t0 = time.perf_counter()
    betas = list(np.round(np.arange(0.5, 0.951, 0.05), 2)) + [0.99, 0.999]
    a = np.array([a_beta(b) for b in betas])
    star = a_beta_crossing(0.5)
    _report(capsys, 2, {
        "a(0.999) in [0.70, 0.7071]": (0.70 <= a[-1] <= 0.7071, f"{a[-1]:.5f}"),
        "crossing beta* = 0.7903 +- 0.005": (abs(star - 0.7903) <= 0.005, f"{star:.4f}"),
    }, t0, 30.0)


def test_criterion_3_sawtooth_limits(capsys):
    t0 = time.perf_counter()
    d1_50 = sawtooth_coeffs(50.0, 1)[1]
    checks = {"|2 d'_1 - 1| <= 0.05 at M=50": (abs(2 * d1_50 - 1) <= 0.05, f"{abs(2 * d1_50 - 1):.4f}")}
    for M in (1.0, 2.0, 4.0):
        d = sawtooth_coeffs(M, 50)
        l = np.arange(30, 51)
        r = d[30:51] * 2 * np.pi * l / M
        checks[f"M={M:g} d'_l 2 pi l/M in [0.9, 1.1]"] = (
            bool(np.all((r >= 0.9) & (r <= 1.1))), f"[{r.min():.4f}, {r.max():.4f}]")
        nrm = matrix_2norm(galerkin_sawtooth(M, 200).entries)
        e = sup_norm(symbol_series(M), "e").value
        checks[f"M={M:g} ||D_200|| >= M/2 - 0.05"] = (nrm >= M / 2 - 0.05, f"{nrm:.4f}")
        checks[f"M={M:g} ||D_200|| <= ||e|| + 1e-6"] = (nrm <= e + 1e-6, f"{e:.4f}")
    _report(capsys, 3, checks, t0, 120.0)


def test_criterion_4_symbols(capsys):
    t0 = time.perf_counter()
    checks = {}
    for M in (1.0, 2.0, 4.0):
        s = sup_norm(symbol_series(M), "e").value * 2 / M
        checks[f"M={M:g} sup 2|e|/M in [1.0, 1.02]"] = (1.0 <= s <= 1.02, f"{s:.5f}")
    h, _ = min_theta_h_norm(symbol_series(2.0))
    checks["M=2 min_theta ||h|| in [0.5, 0.52]"] = (0.5 <= h <= 0.52, f"{h:.5f}")
    _report(capsys, 4, checks, t0, 60.0)


def test_criterion_5_strip(capsys):
    t0 = time.perf_counter()
    M = 1.0
    base = sawtooth_coeffs(M, 5)
    slack = np.inf
    for a in (1.0, 2.0, 4.0):
        d = d_coeffs_strip(M, a, 5)
        for l in range(1, 6):
            up = np.sqrt(1 + (1 + (1 + l) ** 2 / M ** 2) / (4 * a * a)) * base[l]
            slack = min(slack, d[l] - base[l], up - d[l])
        if a == 4.0:
            rel = float(np.max(np.abs(d[1:] - base[1:]) / base[1:]))
    _report(capsys, 5, {
        "envelope slack >= -1e-6": (slack >= -1e-6, f"{slack:.2e}"),
        "|d'_(l,4) - d'_l| <= 0.02 d'_l": (rel <= 0.02, f"{rel:.4f}"),
    }, t0, 60.0)


def test_criterion_6_open_book(capsys):
    t0 = time.perf_counter()
    b = open_book(np.pi / 2, 4)
    plan = max(f.planarity_residual() for f in b.faces)
    G = galerkin_openbook(open_book(0.02, 3))
    off = ~np.eye(G.N, dtype=bool)
    dev = float(np.max(np.abs(2 * np.abs(G.entries[off]) - 1)))
    rad = disc_inclusion_radius(numerical_range(2 * G.entries, 720))
    _report(capsys, 6, {
        "planarity <= 1e-12": (plan <= 1e-12, f"{plan:.1e}"),
        "r1 = 0.99645 +- 5e-5": (abs(b.r1 - 0.99645) <= 5e-5, f"{b.r1:.6f}"),
        "r2 = 0.2505 +- 5e-4": (abs(b.r2 - 0.2505) <= 5e-4, f"{b.r2:.6f}"),
        "max |2 d_jm - 1| <= 0.1": (dev <= 0.1, f"{dev:.4f}"),
        "disc radius of 2D_5 >= sqrt2 - 0.15": (rad >= np.sqrt(2) - 0.15, f"{rad:.4f}"),
    }, t0, 300.0)


def test_criterion_7_weighted(capsys):
    t0 = time.perf_counter()
    wb = weighted_lower_bound(0.01, 2)
    _report(capsys, 7, {
        "bound in [0.71, 0.76]": (0.71 <= wb.lower_bound <= 0.76,
                                  f"{wb.lower_bound:.5f} (limit {wb.limit})"),
    }, t0, 120.0)


def test_criterion_8_galerkin_lab(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    R = rng.standard_normal((50, 50))
    A = np.eye(50) + 0.4 * R / np.linalg.norm(R, 2)
    alpha = coercivity_constant(A)
    Q, _ = np.linalg.qr(rng.standard_normal((50, 15)))
    bound = matrix_2norm(A) / alpha
    violations = 0
    for _ in range(20):
        phi = rng.standard_normal(50)
        err = np.linalg.norm(phi - galerkin_solve(A, Q, A @ phi))
        best = np.linalg.norm(phi - Q @ (Q.T @ phi))
        violations += err > bound * best * (1 + 1e-12)

    S = 0.5 * np.eye(200) + galerkin_sawtooth(4.0, 200).entries
    base = coordinate_sequence(200, range(10, 201, 10))
    res = adversarial_sequence(S, base, band_width=40, shift=40, count=4, band_start=20)
    c_final = float(res.report.c[-1])
    rq = float(np.max(np.abs(res.rayleigh)))
    _report(capsys, 8, {
        "Cea violations = 0": (violations == 0, f"{violations} (alpha {alpha:.3f})"),
        "final c_N <= 0.1": (c_final <= 0.1, f"{c_final:.2e}"),
        "|(A phi_m, phi_m)| <= 1e-3": (rq <= 1e-3, f"{rq:.1e}"),
        "sandwich exact": (res.sandwich_ok(base), f"M_N {res.report.M_N.tolist()}"),
    }, t0, 120.0)


def _angle_oracle(a, b, x):
    a, b, x = map(np.asarray, (a, b, x))
    e = b - a
    n = np.array([e[1], -e[0]]) / np.linalg.norm(e)
    f = lambda s: kernels.dlp_kernel(x, a + s * e, n, 2)
    return 2 * np.pi * abs(quad(f, 0, 1, epsabs=1e-13, epsrel=1e-13)[0]) * np.linalg.norm(e)


def _solid_oracle(v, x):
    e1, e2 = v[1] - v[0], v[2] - v[0]
    cr = np.cross(e1, e2)
    n, jac = cr / np.linalg.norm(cr), np.linalg.norm(cr)
    f = lambda t, s: kernels.dlp_kernel(x, v[0] + s * e1 + t * e2, n, 3) * jac
    return 4 * np.pi * abs(dblquad(f, 0, 1, 0, lambda s: 1 - s, epsabs=1e-12, epsrel=1e-12)[0])


def test_criterion_9_cross_validation(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    ang_err = sol_err = 0.0
    for _ in range(10):
        a, b = rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2)
        x = rng.uniform(-2, 2, 2) + np.array([0.0, 1.5])
        ang_err = max(ang_err, abs(kernels.angle_subtended(make_segment(a, b), x) - _angle_oracle(a, b, x)))
        v = rng.uniform(-1, 1, (3, 3))
        y = v.mean(axis=0) + 1.5 * rng.standard_normal(3)
        sol_err = max(sol_err, abs(kernels.solid_angle_triangle(*v, y) - _solid_oracle(v, y)))
    scale_err = 0.0
    book = open_book(0.5, 2)
    for kappa in (0.1, 10.0):
        scale_err = max(
            scale_err,
            np.max(np.abs(galerkin_gammabeta(0.8, 5, scale=kappa).entries
                          - galerkin_gammabeta(0.8, 5).entries)) / TOL_2D,
            np.max(np.abs(galerkin_sawtooth(3.0, 6, scale=kappa).entries
                          - galerkin_sawtooth(3.0, 6).entries)) / TOL_2D,
            np.max(np.abs(galerkin_openbook(book, scale=kappa).entries
                          - galerkin_openbook(book).entries)) / TOL_3D)
    spread = 0.0
    for M in (1.0, 2.0, 4.0):
        d = galerkin_sawtooth(M, 12, full=True).entries
        spread = max(spread, max(np.ptp(np.abs(np.diagonal(d, k))) for k in range(1, 12)))
    _report(capsys, 9, {
        "angle vs kernel quadrature <= 1e-8": (ang_err <= 1e-8, f"{ang_err:.1e}"),
        "solid angle vs kernel quadrature <= 1e-6": (sol_err <= 1e-6, f"{sol_err:.1e}"),
        "scale invariance within 2 tol": (scale_err <= 2.0, f"{scale_err:.2f} tol"),
        "Toeplitz spread <= 2 tol": (spread <= 2 * TOL_2D, f"{spread:.1e}"),
    }, t0, 300.0)
