import numpy as np
import pytest

from dlplab import kernels
from dlplab.errors import InvalidParameterError
from dlplab.geometry3d import open_book
from dlplab.weighted import (CENTER, RADIUS, page_discs, page_sum_minimum, weighted_csv,
                             weighted_lower_bound)


@pytest.fixture(scope="module")
def fam():
    return page_discs(open_book(0.01, 2), 360)


def test_polygons_on_pages(fam):
    assert len(fam) == 4
    for f, poly in zip(fam.faces, fam.polygons):
        assert np.max(np.abs((poly - f.array[0]) @ f.normal)) < 1e-12
        r = np.hypot(poly[:, 0] - CENTER[0], poly[:, 2] - CENTER[1])
        assert np.allclose(r, RADIUS)


def test_samples_inside(fam):
    pts = fam.sample_points(1, 20)
    assert pts.shape == (400, 3)
    r = np.hypot(pts[:, 0] - CENTER[0], pts[:, 2] - CENTER[1])
    assert np.max(r) < RADIUS


def test_pair_solid_angles_in_range(fam):
    for j in range(len(fam)):
        pts = fam.sample_points(j, 10)
        for m, poly in enumerate(fam.polygons):
            if m != j:
                w = np.abs(kernels.solid_angles_batch(poly, pts))
                assert np.all((w >= 0) & (w <= 2 * np.pi))


def test_single_page_is_zero(fam):
    assert page_sum_minimum(fam.polygons[:1], [fam.sample_points(0, 10)]) == 0.0


def test_value_and_limit():
    wb = weighted_lower_bound(0.01, 2)
    assert 0.71 <= wb.lower_bound <= 0.76
    assert wb.limit == 0.75


def test_monotone_in_theta():
    vals = [weighted_lower_bound(t, 2).lower_bound for t in (0.04, 0.02, 0.01)]
    assert all(b >= a - 1e-3 for a, b in zip(vals, vals[1:]))


def test_polygon_refinement():
    a = weighted_lower_bound(0.01, 2, P=360).lower_bound
    b = weighted_lower_bound(0.01, 2, P=720).lower_bound
    assert abs(b - a) <= 0.005 * a


def test_three_pairs_approach_limit():
    wb = weighted_lower_bound(0.01, 3)
    assert wb.lower_bound == pytest.approx(wb.limit, rel=0.03)


def test_rejects():
    with pytest.raises(InvalidParameterError):
        weighted_lower_bound(0.01, 2, P=100)
    with pytest.raises(InvalidParameterError):
        weighted_lower_bound(0.01, 2, G=5)
    with pytest.raises(InvalidParameterError):
        weighted_lower_bound(1.0, 3)


def test_csv():
    lines = weighted_csv([weighted_lower_bound(0.01, 2)]).splitlines()
    assert lines[0] == "theta,n,P,G,lower_bound,limit"
    assert lines[1].startswith("0.01,2,360,20,")
