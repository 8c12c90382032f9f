import numpy as np
import pytest
from hypothesis import given, strategies as st

from dlplab.errors import InvalidParameterError
from dlplab.geometry2d import (gamma_beta, make_segment, omega2d_profile, polyline_to_csv,
                               sawtooth)

slopes = st.floats(0.1, 20.0)
betas = st.floats(0.05, 0.95)


def test_sawtooth_first_segments():
    p = sawtooth(1.0, 0, 1)
    g0, g1 = p.by_index(0), p.by_index(1)
    assert {tuple(g0.start), tuple(g0.end)} == {(1.0, 1.0), (0.0, 0.0)}
    assert {tuple(g1.start), tuple(g1.end)} == {(0.0, 0.0), (-1.0, 1.0)}


def test_sawtooth_lengths():
    assert sawtooth(2.0, 0, 0)[0].length == pytest.approx(np.sqrt(1.25), abs=1e-15)
    assert np.allclose([s.length for s in sawtooth(1.0, 0, 3)], np.sqrt(2), atol=1e-15)


@given(slopes, st.integers(-6, 6))
def test_sawtooth_invariants(M, lo):
    p = sawtooth(M, lo, lo + 5)
    for s in p:
        assert abs(np.linalg.norm(s.normal) - 1) <= 1e-14
        assert abs(s.normal @ (s.end - s.start)) <= 1e-14 * max(1, s.length)
        assert s.normal[1] > 0
        assert abs(abs(s.slope) - M) <= 1e-12 * M
    for a, b in zip(p, p.segments[1:]):
        assert np.linalg.norm(a.end - b.start) <= 1e-14
    # index shift by 2 is translation by (-2/M, 0)
    s0, s2 = p.by_index(lo), p.by_index(lo + 2)
    assert np.allclose(s2.start - s0.start, (-2 / M, 0), atol=1e-13)
    assert np.allclose(s2.end - s0.end, (-2 / M, 0), atol=1e-13)


def test_sawtooth_rejects_bad_slope():
    with pytest.raises(InvalidParameterError):
        sawtooth(0.0, 0, 1)
    with pytest.raises(InvalidParameterError):
        sawtooth(-1.0, 0, 1)


def test_gamma_beta_examples():
    g1 = gamma_beta(0.8, 1).by_index(1)
    assert {tuple(np.round(g1.start, 15)), tuple(np.round(g1.end, 15))} == {(1.0, 0.0), (0.9, 0.9)}
    g2 = gamma_beta(0.5, 2).by_index(2)
    assert any(np.allclose(p, (0.5, 0.0), atol=1e-15) for p in (g2.start, g2.end))


@given(betas, st.integers(2, 6))
def test_gamma_beta_self_similar(beta, depth):
    p = gamma_beta(beta, depth)
    assert len(p) == 2 * depth
    k = (1 + beta) / (1 - beta)
    for s in p:
        assert abs(abs(s.slope) - k) <= 1e-12 * k
        assert s.normal[1] > 0
    for m in range(1, 2 * (depth - 1) + 1):
        a, b = p.by_index(m), p.by_index(m + 2)
        assert np.allclose(b.start, beta * a.start, atol=1e-13)
        assert np.allclose(b.end, beta * a.end, atol=1e-13)


@pytest.mark.parametrize("beta", [0.0, 1.0, -0.2, 1.5])
def test_gamma_beta_rejects(beta):
    with pytest.raises(InvalidParameterError):
        gamma_beta(beta, 2)


def test_profile_first_block():
    p = omega2d_profile(1.0, 0.6, 1)
    v = p.vertices()
    assert v[:, 0].min() == pytest.approx(0.6, abs=1e-15)
    assert v[:, 0].max() == pytest.approx(1.0, abs=1e-15)
    assert v[:, 1].max() == pytest.approx(0.2, abs=1e-15)


def test_profile_third_block_height():
    p = omega2d_profile(1.0, 0.6, 3)
    v = p.vertices()
    blk = v[(v[:, 0] <= 0.36 + 1e-15) & (v[:, 0] >= 0.216 - 1e-15)]
    assert blk[:, 1].max() == pytest.approx(0.024, abs=1e-15)


@given(st.floats(0.5, 8.0), betas, st.integers(1, 5))
def test_profile_zero_at_block_ends_and_slopes(M, beta, j):
    p = omega2d_profile(M, beta, j)
    v = p.vertices()
    for k in range(j + 1):
        hit = np.isclose(v[:, 0], beta ** k, atol=1e-14, rtol=0)
        assert hit.any() and np.all(np.abs(v[hit, 1]) <= 1e-14)
    for s in p:
        d = s.end - s.start
        if abs(d[1]) > 0:
            assert abs(abs(d[1] / d[0]) - M) <= 1e-9 * M


def test_make_segment_normal_up():
    s = make_segment((1.0, 0.0), (0.0, 1.0))
    assert s.normal[1] > 0
    with pytest.raises(InvalidParameterError):
        make_segment((0.0, 0.0), (0.0, 0.0))


def test_csv_columns():
    text = polyline_to_csv(sawtooth(1.0, 0, 2))
    lines = text.strip().splitlines()
    assert lines[0].split(",")[:7] == ["index", "ax", "ay", "bx", "by", "nx", "ny"]
    assert len([l for l in lines if not l.startswith("#")]) == 4
