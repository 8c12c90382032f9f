"""Pure numpy implementation of the batch angle kernels.

Mirrors the compiled module ``_kernels_ext`` function for function; used
when the extension is unavailable or ``DLPLAB_PURE_PYTHON`` is set.
"""
import numpy as np

_CHUNK = 4096


def angles_batch(ax, ay, bx, by, pts):
    """Unsigned angle subtended at each row of ``pts`` by segment a-b."""
    pts = np.ascontiguousarray(pts, dtype=float)
    ux = ax - pts[:, 0]
    uy = ay - pts[:, 1]
    vx = bx - pts[:, 0]
    vy = by - pts[:, 1]
    return np.abs(np.arctan2(ux * vy - uy * vx, ux * vx + uy * vy))


def polygon_solid_angles_batch(verts, pts):
    """Signed solid angle of a planar polygon at each row of ``pts``.

    Fan triangulation from vertex 0, Van Oosterom-Strandberg formula per
    triangle. Positive on the side of the right-hand-rule normal.
    """
    verts = np.ascontiguousarray(verts, dtype=float)
    pts = np.ascontiguousarray(pts, dtype=float)
    out = np.empty(len(pts))
    for k0 in range(0, len(pts), _CHUNK):
        p = pts[k0:k0 + _CHUNK]
        R = verts[None, :, :] - p[:, None, :]
        r = np.sqrt(np.einsum("kpi,kpi->kp", R, R))
        R0, Ri, Rj = R[:, :1], R[:, 1:-1], R[:, 2:]
        r0, ri, rj = r[:, :1], r[:, 1:-1], r[:, 2:]
        det = np.einsum("kpi,kpi->kp", np.broadcast_to(R0, Ri.shape), np.cross(Ri, Rj))
        den = (r0 * ri * rj
               + np.einsum("kpi,kpi->kp", np.broadcast_to(R0, Ri.shape), Ri) * rj
               + np.einsum("kpi,kpi->kp", np.broadcast_to(R0, Rj.shape), Rj) * ri
               + np.einsum("kpi,kpi->kp", Ri, Rj) * r0)
        out[k0:k0 + _CHUNK] = -2.0 * np.arctan2(det, den).sum(axis=1)
    return out
