"""Double-layer kernel, subtended angles and solid angles.

The batch routines come from the compiled extension when it is built and
fall back to numpy otherwise; ``BACKEND`` records which one is active.
Setting the environment variable ``DLPLAB_PURE_PYTHON=1`` forces the
fallback.
"""
from __future__ import annotations

import os

import numpy as np

from .errors import SingularityError

if os.environ.get("DLPLAB_PURE_PYTHON"):
    from . import _kernels_py as _impl
    BACKEND = "python"
else:
    try:
        from . import _kernels_ext as _impl
        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        from . import _kernels_py as _impl
        BACKEND = "python"

from . import _kernels_py as python_backend  # noqa: E402

__all__ = [
    "BACKEND",
    "dlp_kernel",
    "angle_subtended",
    "signed_angle",
    "angles_batch",
    "solid_angle_triangle",
    "solid_angle_polygon",
    "signed_solid_angle_polygon",
    "solid_angles_batch",
    "SINGULAR_RTOL",
]

SINGULAR_RTOL = 1e-12


def dlp_kernel(x, y, ny, dim: int = 2):
    """(x - y).n(y) / (c_d |x - y|^d) with c_2 = 2 pi and c_3 = 4 pi.

    Broadcasts over leading axes of ``x``, ``y`` and ``ny``.
    """
    if dim not in (2, 3):
        raise ValueError("dim must be 2 or 3")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ny = np.asarray(ny, dtype=float)
    r = x - y
    r2 = np.sum(r * r, axis=-1)
    if np.any(r2 == 0.0):
        raise SingularityError("kernel evaluated at coincident points")
    c = 2 * np.pi if dim == 2 else 4 * np.pi
    val = np.sum(r * ny, axis=-1) / (c * r2 ** (dim / 2))
    return float(val) if val.ndim == 0 else val


def _as_points(x, dim):
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    return np.atleast_2d(x).reshape(-1, dim), single


def _segment_distance(a, b, pts):
    d = b - a
    s = np.clip(((pts - a) @ d) / (d @ d), 0.0, 1.0)
    return np.linalg.norm(pts - (a + s[:, None] * d), axis=1)


def angles_batch(seg, pts, check: bool = True) -> np.ndarray:
    """Unsigned angle subtended by ``seg`` at each row of ``pts``."""
    pts = np.ascontiguousarray(pts, dtype=float).reshape(-1, 2)
    a, b = seg.start, seg.end
    if check:
        dist = _segment_distance(a, b, pts)
        if np.any(dist < SINGULAR_RTOL * seg.length):
            raise SingularityError("point lies on the segment")
    return _impl.angles_batch(a[0], a[1], b[0], b[1], pts)


def angle_subtended(seg, x):
    """Angle in [0, pi] subtended by segment ``seg`` at point(s) ``x``."""
    pts, single = _as_points(x, 2)
    out = angles_batch(seg, pts)
    return float(out[0]) if single else out


def signed_angle(seg, x):
    """Subtended angle carrying the side sign of (x - a).n.

    Equals 2 pi times the integral of ``dlp_kernel`` over the segment.
    """
    pts, single = _as_points(x, 2)
    side = np.sign((pts - seg.start) @ seg.normal)
    out = side * angles_batch(seg, pts)
    return float(out[0]) if single else out


def _polygon_geometry(verts):
    verts = np.asarray(verts, dtype=float)
    c = verts.mean(axis=0)
    # Newell normal, robust for any planar polygon
    nxt = np.roll(verts, -1, axis=0)
    nrm = np.array([
        np.sum((verts[:, 1] - nxt[:, 1]) * (verts[:, 2] + nxt[:, 2])),
        np.sum((verts[:, 2] - nxt[:, 2]) * (verts[:, 0] + nxt[:, 0])),
        np.sum((verts[:, 0] - nxt[:, 0]) * (verts[:, 1] + nxt[:, 1])),
    ])
    diam = np.max(np.linalg.norm(verts - c, axis=1)) * 2
    return c, nrm, diam


def solid_angles_batch(verts, pts, check: bool = True) -> np.ndarray:
    """Signed solid angle of a planar polygon at each row of ``pts``.

    The sign is positive on the side of the right-hand-rule normal of the
    vertex order, so the result equals 4 pi times the integral of
    ``dlp_kernel`` (dim 3) over the polygon with that normal.
    """
    verts = np.ascontiguousarray(verts, dtype=float)
    pts = np.ascontiguousarray(pts, dtype=float).reshape(-1, 3)
    out = _impl.polygon_solid_angles_batch(verts, pts)
    if check:
        c, nrm, diam = _polygon_geometry(verts)
        nn = np.linalg.norm(nrm)
        if nn > 0 and diam > 0:
            h = np.abs((pts - c) @ (nrm / nn))
            bad = (h <= SINGULAR_RTOL * diam) & (np.abs(out) >= 0.5 * np.pi)
            if np.any(bad):
                raise SingularityError("point lies on the polygon")
    return out


def _vertices(face):
    return np.asarray(getattr(face, "vertices", face), dtype=float)


def solid_angle_triangle(v0, v1, v2, x):
    """Solid angle in [0, 2 pi) subtended by a triangle at point(s) ``x``."""
    pts, single = _as_points(x, 3)
    out = np.abs(solid_angles_batch(np.array([v0, v1, v2], dtype=float), pts))
    return float(out[0]) if single else out


def solid_angle_polygon(face, x):
    """Unsigned solid angle of a planar polygon (``Face3D`` or vertex array)."""
    pts, single = _as_points(x, 3)
    out = np.abs(solid_angles_batch(_vertices(face), pts))
    return float(out[0]) if single else out


def signed_solid_angle_polygon(face, x):
    pts, single = _as_points(x, 3)
    out = solid_angles_batch(_vertices(face), pts)
    return float(out[0]) if single else out
