import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from dlplab.assembly import b_matrix
from dlplab.errors import InvalidParameterError
from dlplab.matrixanalysis import (a_of_beta, char_poly, convex_hull, disc_inclusion_radius,
                                   eigs_hermitian, hermitian_part, jacobi_eigh, matrix_2norm,
                                   numerical_abscissa, numerical_radius, numerical_range,
                                   real_section, spec_bn)

B3 = b_matrix(3).entries
mats = st.integers(2, 7).flatmap(lambda n: arrays(np.float64, (n, n), elements=st.floats(-3, 3)))


def test_hermitian_part_examples():
    S = np.array([[1.0, 2.0], [2.0, -1.0]])
    assert np.array_equal(hermitian_part(S, 0.0), S)
    assert np.array_equal(hermitian_part(B3, 0.0), [[0, -1, 0], [-1, 0, 1], [0, 1, 0]])
    A = np.array([[1.0, 2.0], [0.5, 3.0]])
    assert np.allclose(hermitian_part(A, np.pi), -hermitian_part(A, 0.0), atol=1e-15)


@given(mats, st.floats(0, 2 * np.pi))
def test_hermitian_part_is_hermitian(A, t):
    H = hermitian_part(A, t)
    assert np.array_equal(H, H.conj().T)


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eigs_examples(method):
    w, _ = eigs_hermitian(hermitian_part(B3), method)
    assert np.allclose(w, [-np.sqrt(2), 0, np.sqrt(2)], atol=1e-12)
    assert np.allclose(eigs_hermitian(np.eye(4), method)[0], 1.0)
    assert np.allclose(eigs_hermitian(np.diag([3.0, 1.0, 2.0]), method)[0], [1, 2, 3])


@given(st.integers(1, 9), st.integers(0, 2 ** 31 - 1), st.booleans())
def test_jacobi_residuals(n, seed, cplx):
    r = np.random.default_rng(seed)
    A = r.standard_normal((n, n)) + (1j * r.standard_normal((n, n)) if cplx else 0)
    H = 0.5 * (A + A.conj().T)
    w, V = jacobi_eigh(H)
    nrm = max(np.linalg.norm(H, 2), 1e-300)
    assert np.all(np.diff(w) >= 0)
    assert np.max(np.linalg.norm(H @ V - V * w, axis=0)) <= 1e-10 * nrm
    assert np.allclose(V.conj().T @ V, np.eye(n), atol=1e-10)
    assert np.allclose(w, np.linalg.eigvalsh(H), atol=1e-10 * nrm)


def test_non_hermitian_rejected():
    with pytest.raises(InvalidParameterError):
        eigs_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(InvalidParameterError):
        jacobi_eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_bn_spectra_exact():
    for N in range(2, 13):
        spec = spec_bn(N)
        assert spec == ((-1.0, 1.0) if N % 2 == 0 else (-1.0, 0.0, 1.0))
        p = np.poly1d(char_poly(b_matrix(N).entries))
        assert all(p(lam) == 0 for lam in spec)
        assert p.order == N


def test_bn_abscissae():
    assert numerical_abscissa(B3) == pytest.approx(np.sqrt(2), abs=1e-14)
    for N in (3, 5, 7, 9):
        B = b_matrix(N).entries
        th = 2 * np.pi * np.arange(360) / 360
        w = [numerical_abscissa(B, t) for t in th]
        assert min(w) >= np.sqrt((N - 1) / 2) - 1e-12
        assert numerical_abscissa(B) >= np.sqrt((N + 1) / 2) - 1e-12
    for N in range(2, 12):
        assert matrix_2norm(b_matrix(N).entries) <= N - 1 + 1e-12


def test_numerical_range_examples():
    nr = numerical_range(np.diag([0.0, 1.0]), 720)
    assert np.allclose(nr.boundary_points.imag, 0, atol=1e-14)
    assert nr.boundary_points.real.min() == pytest.approx(0, abs=1e-14)
    assert nr.boundary_points.real.max() == pytest.approx(1, abs=1e-14)
    nr = numerical_range(np.array([[0.0, 1.0], [0.0, 0.0]]), 720)
    assert np.allclose(np.abs(nr.boundary_points), 0.5, atol=1e-12)
    assert disc_inclusion_radius(nr) == pytest.approx(0.5, abs=1e-3)
    lo, hi = real_section(numerical_range(B3, 720))
    assert lo == pytest.approx(-np.sqrt(2), abs=1e-6)
    assert hi == pytest.approx(np.sqrt(2), abs=1e-6)


def test_disc_radius_examples():
    sq = np.array([[1.0, 0.0], [0.0, 1.0]])
    nr = numerical_range(np.diag([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j]), 720)
    assert disc_inclusion_radius(nr) == pytest.approx(1.0, abs=1e-12)
    assert disc_inclusion_radius(numerical_range(sq + 3, 64)) == 0.0
    assert disc_inclusion_radius(numerical_range(b_matrix(7).entries, 720)) >= np.sqrt(3) - 1e-3


@given(mats, st.integers(0, 2 ** 31 - 1))
def test_numerical_range_properties(A, seed):
    nr = numerical_range(A, 64)
    # boundary points are Rayleigh quotients and support the abscissae
    assert np.max(np.abs(np.real(np.exp(1j * nr.angles) * nr.boundary_points) - nr.abscissae)) \
        <= 1e-10 * max(1, np.abs(A).max())
    assert np.all(nr.outer_contains(nr.inner_hull, slack=1e-10))
    r = np.random.default_rng(seed)
    X = r.standard_normal((A.shape[0], 1000)) + 1j * r.standard_normal((A.shape[0], 1000))
    X /= np.linalg.norm(X, axis=0)
    rq = np.einsum("ik,ij,jk->k", X.conj(), A, X)
    assert np.all(nr.outer_contains(rq, slack=1e-10 * max(1, np.abs(A).max())))
    # real matrices: symmetric about the real axis
    assert np.all(nr.outer_contains(np.conj(nr.inner_hull), slack=1e-10 * max(1, np.abs(A).max())))
    # compressions lie inside
    k = max(1, A.shape[0] - 1)
    sub = numerical_range(A[:k, :k], 64)
    assert np.all(nr.outer_contains(sub.boundary_points, slack=1e-10 * max(1, np.abs(A).max())))
    w = numerical_radius(A, 720)
    n2 = matrix_2norm(A)
    assert w <= n2 + 1e-10
    assert w >= n2 / 2 * np.cos(np.pi / 720) - 1e-10


def test_convex_hull_square():
    pts = [0, 1, 1 + 1j, 1j, 0.5 + 0.5j, 1 + 1j + 1e-14]
    h = convex_hull(pts)
    assert len(h) == 4


def test_a_of_beta_examples():
    half = np.full((3, 3), 0.5) - 0.5 * np.eye(3)
    assert a_of_beta(half) == pytest.approx(np.sqrt(2) / 2)
    assert a_of_beta(np.zeros((3, 3))) == 0.0
    with pytest.raises(InvalidParameterError):
        a_of_beta(np.zeros((2, 2)))


def test_csv_export():
    text = numerical_range(B3, 16).to_csv().splitlines()
    assert text[0] == "theta,abscissa,re,im" and len(text) == 17
